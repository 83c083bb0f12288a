"""Command-line entry point: ``snow3g-lab {keystream,encrypt,decrypt,selftest,bench}``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from typing import BinaryIO, Dict, List, Optional

from .bench import SEED_ENV, BenchConfig, run_bench, seed_from_env
from .cipher import KeyMaterial, Snow3G, words_to_bytes
from .gf import BackendKind, MulBackend
from .lfsr import DEFAULT_WINDOW, Layout
from .report import compare_orderings, emit_report, load_published_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

CHUNK_BYTES = 1 << 16

log = logging.getLogger("snow3g_lab")


class UsageError(Exception):
    pass


def _layout(text: str) -> Layout:
    try:
        return Layout.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _backend(text: str) -> BackendKind:
    try:
        return BackendKind.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _count(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _key_material(args) -> KeyMaterial:
    try:
        return KeyMaterial.from_hex(args.key, args.iv)
    except ValueError as e:
        raise UsageError(str(e))


def _core(args) -> Snow3G:
    km = _key_material(args)
    core = Snow3G(args.layout, MulBackend.from_kind(args.backend), window=args.window)
    return core.initialize(km)


def _open_out(path: Optional[str]) -> BinaryIO:
    if path is None or path == "-":
        return sys.stdout.buffer
    return open(path, "wb")


def cmd_keystream(args) -> int:
    core = _core(args)
    words = core.generate_keystream(args.nwords)
    if args.format == "hex":
        data = "".join(f"{w:08X}\n" for w in words).encode("ascii")
    else:
        data = words_to_bytes(words)
    out = _open_out(args.output)
    try:
        out.write(data)
        out.flush()
    finally:
        if out is not sys.stdout.buffer:
            out.close()
    return EXIT_OK


def cmd_encrypt(args) -> int:
    core = _core(args)
    src = sys.stdin.buffer if args.input in (None, "-") else open(args.input, "rb")
    try:
        out = _open_out(args.output)
        try:
            while True:
                chunk = src.read(CHUNK_BYTES)
                if not chunk:
                    break
                out.write(core.xor_stream(chunk))
            out.flush()
        finally:
            if out is not sys.stdout.buffer:
                out.close()
    finally:
        if src is not sys.stdin.buffer:
            src.close()
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    result = run_selftest()
    for line in result.lines():
        print(line)
    print("selftest passed" if result.passed else "selftest FAILED")
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _convert(field: str, value):
    """Coerce one config value to the type of the BenchConfig field."""
    try:
        if field in ("layouts", "backends"):
            items = value if isinstance(value, list) else [v for v in str(value).replace(",", " ").split()]
            parse = Layout.parse if field == "layouts" else BackendKind.parse
            return tuple(parse(str(v)) for v in items)
        if field in ("circular_modulo_variant", "sbox_tables"):
            if isinstance(value, bool):
                return value
            return _BOOL[str(value).strip().lower()]
        if field == "output_format":
            return str(value).strip()
        if isinstance(value, int):
            return value
        return int(str(value).strip(), 0)
    except (KeyError, ValueError, TypeError) as e:
        raise UsageError(f"bench config field {field!r}: invalid value {value!r} ({e})") from None


def read_bench_config(path: str) -> Dict[str, object]:
    names = {f.name for f in dataclasses.fields(BenchConfig)}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"{path}: invalid JSON ({e})") from None
        if not isinstance(raw, dict):
            raise UsageError(f"{path}: expected a JSON object")
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    values = {}
    for key, value in raw.items():
        if key not in names:
            raise UsageError(f"bench config field {key!r}: unknown field")
        values[key] = _convert(key, value)
    return values


def build_bench_config(args) -> BenchConfig:
    values: Dict[str, object] = {}
    if args.config:
        values.update(read_bench_config(args.config))
    if os.environ.get(SEED_ENV, "").strip():
        try:
            values["seed"] = seed_from_env()
        except ValueError:
            raise UsageError(f"{SEED_ENV}: not an integer") from None
    overrides = {
        "bytes_per_run": args.bytes,
        "runs": args.runs,
        "layouts": tuple(args.layouts) if args.layouts else None,
        "backends": tuple(args.backends) if args.backends else None,
        "sliding_window_B": args.window,
        "seed": args.seed,
        "output_format": args.format,
        "clean_runs": args.clean_runs,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.no_modulo_variant:
        values["circular_modulo_variant"] = False
    cfg = BenchConfig(**values)
    try:
        cfg.validate()
    except ValueError as e:
        raise UsageError(f"invalid bench config: {e}") from None
    return cfg


def cmd_bench(args) -> int:
    if args.replay_published:
        report = load_published_report()
        fmt = args.format or "markdown"
    else:
        cfg = build_bench_config(args)
        fmt = cfg.output_format
        report = run_bench(cfg)
    payload = emit_report(report, fmt)
    to_stdout = args.output in (None, "-")
    summary = sys.stderr if to_stdout else sys.stdout
    out = _open_out(args.output)
    try:
        out.write(payload)
        out.flush()
    finally:
        if not to_stdout:
            out.close()

    if not args.no_figures and (args.figures or not to_stdout):
        from .plotting import render_figures

        stem = args.figures or os.path.splitext(args.output)[0]
        for path in render_figures(report, stem):
            print(f"figure: {path}", file=summary)

    verdicts = compare_orderings(report, skip_missing=True)
    print("published ordering claims:", file=summary)
    for v in verdicts:
        print("  " + v.line(), file=summary)
    if len(verdicts) < 5:
        print(f"  ({5 - len(verdicts)} claim(s) skipped: configurations not benchmarked)", file=summary)
    for conf in report.configs:
        for w in conf.warnings:
            print(f"warning: {conf.config_id}: {w}", file=summary)
    if args.strict and not all(v.passed for v in verdicts):
        return EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snow3g-lab", description="SNOW 3G keystream workbench")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def cipher_options(p):
        p.add_argument("--key", required=True, help="128-bit key, 32 hex characters")
        p.add_argument("--iv", required=True, help="128-bit IV, 32 hex characters")
        p.add_argument("--layout", type=_layout, default=Layout.SLIDING_WINDOW,
                       help="LFSR layout: traditional, hardcode, circular, sliding, unrolled")
        p.add_argument("--backend", type=_backend, default=BackendKind.TABLE,
                       help="alpha multiplication: table or recursive")
        p.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="sliding window buffer words")

    p = sub.add_parser("keystream", help="print keystream words")
    cipher_options(p)
    p.add_argument("-n", "--nwords", type=_count, default=2)
    p.add_argument("--format", choices=("hex", "raw"), default="hex")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_keystream)

    for name in ("encrypt", "decrypt"):
        p = sub.add_parser(name, help=f"{name} a file (XOR with the keystream)")
        cipher_options(p)
        p.add_argument("-i", "--input", help="input file (default stdin)")
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("selftest", help="known-answer and equivalence checks")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="instrumented benchmark and ordering checks")
    p.add_argument("--config", help="key = value file, or .json")
    p.add_argument("--bytes", type=_count, help="keystream bytes per run")
    p.add_argument("--runs", type=_count)
    p.add_argument("--clean-runs", type=_count, help="uninstrumented runs per configuration")
    p.add_argument("--layouts", type=_layout, nargs="+")
    p.add_argument("--backends", type=_backend, nargs="+")
    p.add_argument("--window", type=_count, help="sliding window buffer words")
    p.add_argument("--no-modulo-variant", action="store_true",
                   help="skip the general-modulo circular buffer configuration")
    p.add_argument("--seed", type=_count)
    p.add_argument("--format", choices=("csv", "json", "markdown"))
    p.add_argument("-o", "--output", help="report file (default stdout)")
    p.add_argument("--figures", help="path stem for PNG figures (default: next to --output)")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--replay-published", action="store_true",
                   help="report the published timings instead of measuring")
    p.add_argument("--strict", action="store_true", help="exit 1 if an ordering claim fails")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as e:
        print(f"snow3g-lab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        where = f" {e.filename}" if getattr(e, "filename", None) else ""
        print(f"snow3g-lab: I/O error:{where}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

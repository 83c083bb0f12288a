"""Serialization of benchmark reports and the published-ordering checks."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable, List

from .bench import BenchReport, ConfigResult

CSV_COLUMNS = ("config_id", "layout", "backend", "function", "total_ms", "percent", "inclusive_ms")
FORMATS = ("csv", "json", "markdown")


def emit_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for conf in report.configs:
        for t in conf.timings:
            writer.writerow([
                conf.config_id, conf.layout, conf.backend, t.function,
                f"{t.total_ms:.4f}", f"{t.percent:.2f}", f"{t.inclusive_ms:.4f}",
            ])
    return buf.getvalue()


def emit_json(report: BenchReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def _ms(value: float) -> str:
    return f"{value:.1f}"


def emit_markdown(report: BenchReport) -> str:
    out = []
    for conf in report.configs:
        title = f"{conf.config_id}" + (f" ({conf.group})" if conf.group else "")
        out.append(f"### {title}")
        out.append("")
        out.append("| Function | Time(ms) | % |")
        out.append("|---|---:|---:|")
        for t in sorted(conf.timings, key=lambda t: -t.total_ms):
            if t.total_ms or t.calls:
                out.append(f"| {t.function} | {_ms(t.total_ms)} | {t.percent:.2f} |")
        out.append(f"| **Total Time** | {_ms(conf.total_ms)} | |")
        if conf.wall_ms is not None:
            out.append(f"| *uninstrumented* | {_ms(conf.wall_ms)} | |")
        out.append("")
    return "\n".join(out)


def emit_report(report: BenchReport, fmt: str = "csv") -> bytes:
    emitters = {"csv": emit_csv, "json": emit_json, "markdown": emit_markdown}
    try:
        emitter = emitters[fmt]
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}") from None
    return emitter(report).encode("utf-8")


def parse_report(data: bytes) -> BenchReport:
    """Inverse of ``emit_report(report, "json")``."""
    return BenchReport.from_json(data.decode("utf-8"))


def load_published_report() -> BenchReport:
    text = resources.files("snow3g_lab").joinpath("data/published_tables.json").read_text()
    return BenchReport.from_json(text)


class MissingConfiguration(LookupError):
    pass


@dataclass
class Verdict:
    claim: str
    observed: str
    passed: bool

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.claim}  [{self.observed}]"


def config_total(conf: ConfigResult) -> float:
    """Time used for ordering claims; prefers the uninstrumented wall clock."""
    return conf.wall_ms if conf.wall_ms is not None else conf.total_ms


def _lookup(report: BenchReport, config_id: str, group: str) -> ConfigResult:
    try:
        return report.get(config_id, group)
    except KeyError:
        raise MissingConfiguration(f"report has no configuration {config_id!r}") from None


def _faster(label: str, fast: ConfigResult, slow: ConfigResult) -> Verdict:
    a, b = config_total(fast), config_total(slow)
    ratio = a / b if b else float("inf")
    return Verdict(
        label,
        f"{fast.config_id} {a:.1f} ms vs {slow.config_id} {b:.1f} ms, ratio {ratio:.3f}",
        a < b,
    )


def _all_faster(label: str, fast: ConfigResult, others: List[ConfigResult]) -> Verdict:
    parts = [_faster(label, fast, o) for o in others]
    return Verdict(label, "; ".join(p.observed for p in parts), all(p.passed for p in parts))


def _claims() -> List[Callable[[BenchReport], Verdict]]:
    def table_beats_recursive(r):
        return _faster(
            "(a) table multiplication beats recursive multiplication",
            _lookup(r, "hardcode/table", "functions"),
            _lookup(r, "hardcode/recursive", "functions"),
        )

    def sliding_beats_rest(r):
        return _all_faster(
            "(b) sliding window beats traditional, hardcode and loop unrolling",
            _lookup(r, "sliding/table", "layouts"),
            [_lookup(r, cid, "layouts") for cid in ("traditional/table", "hardcode/table", "unrolled/table")],
        )

    def hardcode_beats_traditional(r):
        return _faster(
            "(c) hardcode beats traditional",
            _lookup(r, "hardcode/table", "layouts"),
            _lookup(r, "traditional/table", "layouts"),
        )

    def modulo_circular_slowest(r):
        slow = _lookup(r, "circular-mod/table", "layouts")
        others = [
            _lookup(r, cid, "layouts")
            for cid in ("traditional/table", "hardcode/table", "sliding/table", "unrolled/table")
        ]
        parts = [_faster("", o, slow) for o in others]
        return Verdict(
            "(d) general-modulo circular buffer is the slowest layout",
            "; ".join(p.observed for p in parts),
            all(p.passed for p in parts),
        )

    def sliding_profile_beats_hardcode(r):
        return _faster(
            "(e) table + sliding window beats table + hardcode overall",
            _lookup(r, "sliding/table", "functions"),
            _lookup(r, "hardcode/table", "functions"),
        )

    return [
        table_beats_recursive,
        sliding_beats_rest,
        hardcode_beats_traditional,
        modulo_circular_slowest,
        sliding_profile_beats_hardcode,
    ]


def compare_orderings(report: BenchReport, *, skip_missing: bool = False) -> List[Verdict]:
    """Check the published relative-performance claims against ``report``.

    A claim whose configurations are absent raises :class:`MissingConfiguration`
    unless ``skip_missing`` is set, in which case it is left out.
    """
    verdicts = []
    for claim in _claims():
        try:
            verdicts.append(claim(report))
        except MissingConfiguration:
            if not skip_missing:
                raise
    return verdicts

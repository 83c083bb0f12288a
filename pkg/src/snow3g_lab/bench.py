"""Instrumented keystream benchmarks.

Hot functions are wrapped with timers that charge each call's elapsed time
to its own name (inclusive) and subtract it from the caller's self time
(exclusive).  The outermost bucket is ``main``, so the self times of one run
add up to that run's wall-clock total.

Bucket meaning:

``Generator``      backend/table construction plus key/IV initialization
``main``           the driver loop: keystream byte packing and digesting
the rest           the function of the same name, self time only
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import platform
import random
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cipher import KeyMaterial, Snow3G, words_to_bytes
from .gf import BackendKind, MulBackend
from .lfsr import DEFAULT_WINDOW, MIN_WINDOW, Layout

log = logging.getLogger(__name__)

FUNCTIONS = (
    "MULxPow",
    "MULalpha",
    "DIValpha",
    "ClockLFSRKeyStreamMode",
    "ClockFSM",
    "S1",
    "S2",
    "GenerateKeystream",
    "Generator",
    "main",
)

CHUNK_WORDS = 4096
SEED_ENV = "SNOW3G_LAB_SEED"
DEFAULT_SEED = 0x5EED_3A65_2013

_now = time.perf_counter_ns


class Profiler:
    """Accumulates inclusive and exclusive nanoseconds per wrapped name."""

    def __init__(self):
        # name -> [inclusive_ns, exclusive_ns, calls]
        self.acc: Dict[str, List[int]] = {}
        self._stack = [0]

    def wrap(self, name: str, fn: Callable) -> Callable:
        acc = self.acc.setdefault(name, [0, 0, 0])
        stack = self._stack
        push = stack.append
        pop = stack.pop
        now = _now

        def timed(*args):
            push(0)
            t0 = now()
            result = fn(*args)
            dt = now() - t0
            excl = dt - pop()
            stack[-1] += dt
            acc[0] += dt
            acc[1] += excl
            acc[2] += 1
            return result

        timed.__wrapped__ = fn
        return timed

    def inclusive(self, name: str) -> int:
        return self.acc.get(name, (0, 0, 0))[0]

    def exclusive(self, name: str) -> int:
        return self.acc.get(name, (0, 0, 0))[1]

    def calls(self, name: str) -> int:
        return self.acc.get(name, (0, 0, 0))[2]


def timer_granularity_ns(samples: int = 2000) -> int:
    """Smallest observed nonzero step of the benchmark clock."""
    best = None
    for _ in range(samples):
        t0 = _now()
        t1 = _now()
        while t1 == t0:
            t1 = _now()
        step = t1 - t0
        if best is None or step < best:
            best = step
    return best


@dataclass(frozen=True)
class Configuration:
    layout: Layout
    backend: BackendKind
    general_modulo: bool = False

    @property
    def config_id(self) -> str:
        name = self.layout.value + ("-mod" if self.general_modulo else "")
        return f"{name}/{self.backend.value}"


@dataclass
class BenchConfig:
    bytes_per_run: int = 10**7
    runs: int = 10
    layouts: Tuple[Layout, ...] = tuple(Layout)
    backends: Tuple[BackendKind, ...] = tuple(BackendKind)
    circular_modulo_variant: bool = True
    sliding_window_B: int = DEFAULT_WINDOW
    sbox_tables: bool = False
    seed: int = DEFAULT_SEED
    output_format: str = "csv"
    clean_runs: int = 1

    def validate(self) -> None:
        if self.bytes_per_run < 4:
            raise ValueError("bytes_per_run must be at least 4")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.clean_runs < 0:
            raise ValueError("clean_runs must be non-negative")
        if self.sliding_window_B < MIN_WINDOW:
            raise ValueError(f"sliding_window_B must be at least {MIN_WINDOW}")
        if not self.layouts:
            raise ValueError("layouts must not be empty")
        if not self.backends:
            raise ValueError("backends must not be empty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.output_format not in ("csv", "json", "markdown"):
            raise ValueError("output_format must be csv, json or markdown")

    def configurations(self) -> List[Configuration]:
        out = []
        for backend in self.backends:
            for layout in self.layouts:
                out.append(Configuration(layout, backend))
                if layout is Layout.CIRCULAR_BUFFER and self.circular_modulo_variant:
                    out.append(Configuration(layout, backend, general_modulo=True))
        return out

    def key_material(self) -> KeyMaterial:
        rng = random.Random(self.seed)
        return KeyMaterial.from_bytes(rng.randbytes(16), rng.randbytes(16))


@dataclass
class FunctionTiming:
    function: str
    total_ms: float
    percent: float
    inclusive_ms: float = 0.0
    calls: float = 0.0


@dataclass
class ConfigResult:
    config_id: str
    layout: str
    backend: str
    timings: List[FunctionTiming]
    total_ms: float
    wall_ms: Optional[float] = None
    runs: int = 0
    bytes_per_run: int = 0
    group: str = ""
    keystream_sha256: str = ""
    warnings: List[str] = field(default_factory=list)

    def timing(self, function: str) -> FunctionTiming:
        for t in self.timings:
            if t.function == function:
                return t
        raise KeyError(function)


@dataclass
class BenchReport:
    configs: List[ConfigResult] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)

    def get(self, config_id: str, group: Optional[str] = None) -> ConfigResult:
        hits = [c for c in self.configs if c.config_id == config_id]
        if len(hits) > 1 and group is not None:
            hits = [c for c in hits if c.group == group] or hits
        if not hits:
            raise KeyError(config_id)
        return hits[0]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BenchReport":
        configs = []
        for c in data.get("configs", []):
            c = dict(c)
            c["timings"] = [FunctionTiming(**t) for t in c["timings"]]
            configs.append(ConfigResult(**c))
        return cls(configs, dict(data.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls.from_dict(json.loads(text))


def _one_run(cfg: BenchConfig, conf: Configuration, km: KeyMaterial, prof: Optional[Profiler]) -> str:
    wrap = prof.wrap if prof is not None else None

    def build() -> Snow3G:
        backend = MulBackend.from_kind(conf.backend)
        core = Snow3G(
            conf.layout,
            backend,
            window=cfg.sliding_window_B,
            general_modulo=conf.general_modulo,
            sbox_tables=cfg.sbox_tables,
            wrap=wrap,
        )
        return core.initialize(km)

    def drive() -> str:
        core = (wrap("Generator", build) if wrap else build)()
        generate = wrap("GenerateKeystream", core.generate_keystream) if wrap else core.generate_keystream
        digest = hashlib.sha256()
        remaining = cfg.bytes_per_run
        while remaining > 0:
            nwords = min(CHUNK_WORDS, -(-remaining // 4))
            chunk = words_to_bytes(generate(nwords))[:remaining]
            digest.update(chunk)
            remaining -= len(chunk)
        return digest.hexdigest()

    return (wrap("main", drive) if wrap else drive)()


def keystream_digest(cfg: BenchConfig, conf: Configuration) -> str:
    """SHA-256 of the benchmark keystream without any instrumentation."""
    return _one_run(cfg, conf, cfg.key_material(), None)


def run_configuration(cfg: BenchConfig, conf: Configuration, granularity_ns: int) -> ConfigResult:
    km = cfg.key_material()
    excl: Dict[str, int] = defaultdict(int)
    incl: Dict[str, int] = defaultdict(int)
    calls: Dict[str, int] = defaultdict(int)
    digests = set()
    for run in range(cfg.runs):
        prof = Profiler()
        digests.add(_one_run(cfg, conf, km, prof))
        for name in prof.acc:
            incl[name] += prof.inclusive(name)
            excl[name] += prof.exclusive(name)
            calls[name] += prof.calls(name)
        log.debug("%s run %d: %.1f ms", conf.config_id, run + 1, prof.inclusive("main") / 1e6)

    wall_ms = None
    if cfg.clean_runs:
        elapsed = 0
        for _ in range(cfg.clean_runs):
            t0 = _now()
            digests.add(_one_run(cfg, conf, km, None))
            elapsed += _now() - t0
        wall_ms = elapsed / cfg.clean_runs / 1e6
    if len(digests) != 1:
        raise RuntimeError(f"{conf.config_id}: keystream differs between runs")

    runs = cfg.runs
    total_ms = incl["main"] / runs / 1e6
    timings = []
    warnings = []
    for name in FUNCTIONS:
        self_ms = excl.get(name, 0) / runs / 1e6
        timings.append(FunctionTiming(
            function=name,
            total_ms=self_ms,
            percent=100.0 * self_ms / total_ms if total_ms > 0 else 0.0,
            inclusive_ms=incl.get(name, 0) / runs / 1e6,
            calls=calls.get(name, 0) / runs,
        ))
        if calls.get(name) and excl[name] < 100 * granularity_ns:
            warnings.append(
                f"{name}: accumulated {excl[name]} ns is below 100x timer granularity ({granularity_ns} ns)"
            )
    for w in warnings:
        log.warning("%s: %s", conf.config_id, w)
    return ConfigResult(
        config_id=conf.config_id,
        layout=conf.layout.value,
        backend=conf.backend.value,
        timings=timings,
        total_ms=total_ms,
        wall_ms=wall_ms,
        runs=runs,
        bytes_per_run=cfg.bytes_per_run,
        keystream_sha256=digests.pop(),
        warnings=warnings,
    )


def host_description() -> str:
    return f"{platform.python_implementation()} {platform.python_version()} on {platform.machine()} {platform.system()}"


def run_bench(cfg: BenchConfig, configurations: Optional[Sequence[Configuration]] = None) -> BenchReport:
    """Benchmark each configuration in turn (never interleaved)."""
    cfg.validate()
    granularity = timer_granularity_ns()
    info = time.get_clock_info("perf_counter")
    report = BenchReport(metadata={
        "host": host_description(),
        "timer": "time.perf_counter_ns",
        "timer_resolution_ns": info.resolution * 1e9,
        "timer_granularity_ns": granularity,
        "runs": cfg.runs,
        "bytes_per_run": cfg.bytes_per_run,
        "seed": cfg.seed,
        "sliding_window_B": cfg.sliding_window_B,
        "sbox_tables": cfg.sbox_tables,
        "clean_runs": cfg.clean_runs,
        "total_ms": "mean wall-clock time of one instrumented run (inclusive time of main)",
        "wall_ms": "mean wall-clock time of one uninstrumented run",
        "function total_ms": "mean self time per run, excluding wrapped callees",
        "function inclusive_ms": "mean time per run including wrapped callees",
    })
    for conf in configurations if configurations is not None else cfg.configurations():
        log.info("benchmarking %s", conf.config_id)
        report.configs.append(run_configuration(cfg, conf, granularity))
    return report


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    value = os.environ.get(SEED_ENV)
    if value is None or not value.strip():
        return default
    return int(value, 0)

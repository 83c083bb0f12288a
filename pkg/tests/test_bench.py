import hashlib

import pytest

from snow3g_lab.bench import (
    FUNCTIONS,
    BenchConfig,
    Configuration,
    Profiler,
    keystream_digest,
    run_bench,
    run_configuration,
    seed_from_env,
    timer_granularity_ns,
)
from snow3g_lab.cipher import Snow3G
from snow3g_lab.gf import BackendKind, MulBackend
from snow3g_lab.lfsr import Layout

SLIDING_TABLE = Configuration(Layout.SLIDING_WINDOW, BackendKind.TABLE)


def test_profiler_self_time_excludes_children():
    prof = Profiler()

    def leaf():
        return sum(range(2000))

    wrapped_leaf = prof.wrap("leaf", leaf)

    def parent():
        wrapped_leaf()
        wrapped_leaf()
        return 1

    assert prof.wrap("parent", parent)() == 1
    assert prof.calls("leaf") == 2
    assert prof.inclusive("parent") >= prof.inclusive("leaf")
    assert prof.exclusive("parent") == prof.inclusive("parent") - prof.inclusive("leaf")
    assert prof.exclusive("leaf") == prof.inclusive("leaf")


def test_tiny_run_sanity():
    cfg = BenchConfig(bytes_per_run=4, runs=1, clean_runs=0)
    report = run_bench(cfg, [SLIDING_TABLE])
    (conf,) = report.configs
    assert [t.function for t in conf.timings] == list(FUNCTIONS)
    assert all(t.total_ms >= 0 and t.inclusive_ms >= 0 for t in conf.timings)
    assert conf.timing("GenerateKeystream").calls == 1
    assert conf.timing("main").calls == 1
    assert conf.timing("MULxPow").calls == 0
    # four bytes is far too little work to time reliably
    assert conf.warnings


def test_recursive_backend_profiles_multiplication():
    cfg = BenchConfig(bytes_per_run=16, runs=1, clean_runs=0)
    conf = run_configuration(cfg, Configuration(Layout.HARDCODE, BackendKind.RECURSIVE), 1)
    # 32 init clocks + 1 transition clock + 4 keystream words
    assert conf.timing("MULalpha").calls == 37
    assert conf.timing("DIValpha").calls == 37
    assert conf.timing("MULxPow").calls == 37 * 8
    assert conf.timing("MULxPow").total_ms > 0


def test_percentages_and_aggregation():
    cfg = BenchConfig(bytes_per_run=20000, runs=2, clean_runs=1)
    conf = run_bench(cfg, [SLIDING_TABLE]).configs[0]
    self_sum = sum(t.total_ms for t in conf.timings)
    assert self_sum == pytest.approx(conf.total_ms, abs=0.01)
    assert sum(t.percent for t in conf.timings) <= 100.5
    assert conf.timing("main").inclusive_ms == pytest.approx(conf.total_ms)
    assert conf.wall_ms is not None and conf.wall_ms > 0


def test_instrumentation_is_neutral():
    cfg = BenchConfig(bytes_per_run=4096 + 6, runs=1, clean_runs=1)
    km = cfg.key_material()
    direct = Snow3G(Layout.HARDCODE, MulBackend.recursive()).initialize(km).keystream_bytes(cfg.bytes_per_run)
    conf = Configuration(Layout.HARDCODE, BackendKind.RECURSIVE)
    result = run_configuration(cfg, conf, 1)
    assert result.keystream_sha256 == hashlib.sha256(direct).hexdigest()
    assert keystream_digest(cfg, conf) == result.keystream_sha256


@pytest.mark.slow
def test_workload_scales():
    def best(nbytes):
        cfg = BenchConfig(bytes_per_run=nbytes, runs=2, clean_runs=0)
        return min(
            run_configuration(cfg, SLIDING_TABLE, 1).timing("GenerateKeystream").inclusive_ms
            for _ in range(3)
        )

    assert best(200_000) >= 1.5 * best(100_000)


def test_default_matrix():
    cfg = BenchConfig()
    ids = [c.config_id for c in cfg.configurations()]
    assert cfg.bytes_per_run == 10**7 and cfg.runs == 10
    for layout in Layout:
        for backend in BackendKind:
            assert f"{layout.value}/{backend.value}" in ids
    assert "circular-mod/table" in ids
    assert len(ids) == 12


@pytest.mark.parametrize("field, value", [
    ("bytes_per_run", 3),
    ("runs", 0),
    ("clean_runs", -1),
    ("sliding_window_B", 31),
    ("layouts", ()),
    ("seed", -1),
    ("output_format", "xml"),
])
def test_config_validation(field, value):
    with pytest.raises(ValueError, match=field.split("_B")[0]):
        BenchConfig(**{field: value}).validate()


def test_key_material_follows_seed():
    assert BenchConfig(seed=1).key_material() == BenchConfig(seed=1).key_material()
    assert BenchConfig(seed=1).key_material() != BenchConfig(seed=2).key_material()


def test_seed_from_env(monkeypatch):
    monkeypatch.delenv("SNOW3G_LAB_SEED", raising=False)
    assert seed_from_env(5) == 5
    monkeypatch.setenv("SNOW3G_LAB_SEED", "0x10")
    assert seed_from_env(5) == 16


def test_timer_granularity_positive():
    assert timer_granularity_ns(50) > 0

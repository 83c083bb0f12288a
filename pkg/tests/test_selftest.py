from snow3g_lab.fsm import SQ
from snow3g_lab.gf import AlphaTables, build_tables
from snow3g_lab.selftest import run_selftest


def test_pristine_build_passes():
    report = run_selftest()
    assert report.passed
    assert sum(1 for c in report.checks if c.name.startswith("kat ")) >= 10


def test_corrupted_sq_breaks_only_known_answers():
    bad = bytearray(SQ)
    bad[0] ^= 0x01
    report = run_selftest(sq=bytes(bad))
    assert not report.passed
    by_name = {c.name: c for c in report.checks}
    assert by_name["gf-backend-equivalence"].passed
    kats = [c for c in report.checks if c.name.startswith("kat ")]
    assert kats and not any(c.passed for c in kats)
    assert "expected" in kats[0].detail and "got" in kats[0].detail


def test_corrupted_table_breaks_equivalence():
    good = build_tables()
    mul = list(good.mul_table)
    mul[0x37] ^= 0x100
    report = run_selftest(tables=AlphaTables(tuple(mul), good.div_table))
    by_name = {c.name: c for c in report.checks}
    assert not by_name["gf-backend-equivalence"].passed
    assert "MULalpha[0x37]" in by_name["gf-backend-equivalence"].detail
    assert by_name["kat traditional/recursive"].passed


def test_lines_format():
    lines = run_selftest().lines()
    assert all(line.startswith("PASS ") for line in lines)

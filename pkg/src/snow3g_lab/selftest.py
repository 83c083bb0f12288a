"""Known-answer and cross-backend checks run by ``snow3g-lab selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from . import fsm
from .cipher import Snow3G, configurations, load_kat
from .lfsr import Layout
from .gf import (
    DIV_ALPHA_EXPONENTS,
    MUL_ALPHA_EXPONENTS,
    AlphaTables,
    BackendKind,
    MulBackend,
    mulxpow_recursive,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


@dataclass
class SelfTestReport:
    checks: List[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]


def _recursive_column(c: int, exponents) -> int:
    word = 0
    for e in exponents:
        word = (word << 8) | mulxpow_recursive(c, e, 0xA9)
    return word


def check_backend_equivalence(tables: AlphaTables) -> Check:
    for name, table, exps in (
        ("MULalpha", tables.mul_table, MUL_ALPHA_EXPONENTS),
        ("DIValpha", tables.div_table, DIV_ALPHA_EXPONENTS),
    ):
        for c in range(256):
            expected = _recursive_column(c, exps)
            if table[c] != expected:
                return Check(
                    "gf-backend-equivalence", False,
                    f"{name}[0x{c:02X}] table=0x{table[c]:08X} recursive=0x{expected:08X}",
                )
    if tables.nbytes != 2048:
        return Check("gf-backend-equivalence", False, f"table payload is {tables.nbytes} bytes")
    return Check("gf-backend-equivalence", True, "512 entries, 2048 bytes")


def check_sboxes(sq: bytes) -> List[Check]:
    generated = fsm.aes_sbox()
    sr_ok = generated == fsm.SR
    return [
        Check("sbox-sr-generated", sr_ok, "" if sr_ok else "embedded SR differs from generated AES S-box"),
        Check("sbox-sq-permutation", sorted(sq) == list(range(256))),
    ]


def run_selftest(tables: Optional[AlphaTables] = None, sq: Optional[bytes] = None) -> SelfTestReport:
    """Run every check; ``tables`` and ``sq`` exist for fault injection."""
    if tables is None:
        tables = MulBackend.table().tables
    if sq is None:
        sq = fsm.SQ
    checks = [check_backend_equivalence(tables)]
    checks.extend(check_sboxes(sq))
    vectors = load_kat()
    variants = [(layout, kind, False) for layout, kind in configurations()]
    variants += [(Layout.CIRCULAR_BUFFER, kind, True) for kind in BackendKind]
    for layout, kind, general_modulo in variants:
        backend = MulBackend(kind, tables) if kind is BackendKind.TABLE else MulBackend.recursive()
        name = f"kat {layout.value}{'-mod' if general_modulo else ''}/{kind.value}"
        failure = None
        for n, vec in enumerate(vectors, 1):
            core = Snow3G(layout, backend, sq=sq, general_modulo=general_modulo)
            core.initialize(vec.key_material)
            got = core.generate_keystream(len(vec.keystream))
            for offset, (want, have) in enumerate(zip(vec.keystream, got), 1):
                if want != have:
                    failure = f"set {n} z{offset} expected {want:08X} got {have:08X}"
                    break
            if failure:
                break
        checks.append(Check(name, failure is None, failure or f"{len(vectors)} sets"))
    return SelfTestReport(checks)

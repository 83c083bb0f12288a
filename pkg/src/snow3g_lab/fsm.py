"""Nonlinear part of the generator: registers R1-R3 and the S1/S2 boxes.

Both boxes substitute each byte of the input word and then mix the four
bytes with the AES MixColumn circulant (2, 1, 1, 3).  S1 uses the AES S-box
and reduction byte 0x1B; S2 uses SQ and reduction byte 0x69.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Tuple

from .gf import WORD_MASK

S1_POLY = 0x1B
S2_POLY = 0x69

SR = bytes.fromhex(
    "637C777BF26B6FC53001672BFED7AB76"
    "CA82C97DFA5947F0ADD4A2AF9CA472C0"
    "B7FD9326363FF7CC34A5E5F171D83115"
    "04C723C31896059A071280E2EB27B275"
    "09832C1A1B6E5AA0523BD6B329E32F84"
    "53D100ED20FCB15B6ACBBE394A4C58CF"
    "D0EFAAFB434D338545F9027F503C9FA8"
    "51A3408F929D38F5BCB6DA2110FFF3D2"
    "CD0C13EC5F974417C4A77E3D645D1973"
    "60814FDC222A908846EEB814DE5E0BDB"
    "E0323A0A4906245CC2D3AC629195E479"
    "E7C8376D8DD54EA96C56F4EA657AAE08"
    "BA78252E1CA6B4C6E8DD741F4BBD8B8A"
    "703EB5664803F60E613557B986C11D9E"
    "E1F8981169D98E949B1E87E9CE5528DF"
    "8CA1890DBFE6426841992D0FB054BB16"
)

SQ = bytes.fromhex(
    "25247367D7AE5C30A4EE6ECB7DB582DB"
    "E48E48494F5D6A787088E85F5E8465E2"
    "D8E9CCED402F112857D2ACE34A151BB9"
    "B28085A62E024729074B0EC151AA89D4"
    "CA0146B3EFDD447BC27FBEC39F204C64"
    "83A2684213B441CDBAC6BB6D4D7121F4"
    "8DB0E593FE8FE6CF43453122373696FA"
    "BC0F08521D551AC54E23697A92FF5B5A"
    "EB9A1CA9D17E0DFC508AB662F50AF8DC"
    "033C0C39F1B8F33DF2D597668132A000"
    "06CEF6EAB717F78C79D6A7BF8B3F1F53"
    "6375352C60FD27D394A57CA105582DBD"
    "D9C7AF6B540BE03804C89DE714B1879C"
    "DF6FF9DA2AC459167491AB266176342B"
    "AD99FB72EC3312DE983BC09B3E18103A"
    "56E177C91E9E95A39019A86C09D0F086"
)


def make_box(table: bytes, c: int) -> Callable[[int], int]:
    """Build a word S-box from a byte table and a MixColumn reduction byte."""

    def box(w: int) -> int:
        s0 = table[w >> 24]
        s1 = table[(w >> 16) & 0xFF]
        s2 = table[(w >> 8) & 0xFF]
        s3 = table[w & 0xFF]
        x0 = ((s0 << 1) & 0xFF) ^ c if s0 & 0x80 else s0 << 1
        x1 = ((s1 << 1) & 0xFF) ^ c if s1 & 0x80 else s1 << 1
        x2 = ((s2 << 1) & 0xFF) ^ c if s2 & 0x80 else s2 << 1
        x3 = ((s3 << 1) & 0xFF) ^ c if s3 & 0x80 else s3 << 1
        return (
            ((x0 ^ s1 ^ s2 ^ x3 ^ s3) << 24)
            | ((x0 ^ s0 ^ x1 ^ s2 ^ s3) << 16)
            | ((s0 ^ x1 ^ s1 ^ x2 ^ s3) << 8)
            | (s0 ^ s1 ^ x2 ^ s2 ^ x3)
        )

    return box


def make_table_box(table: bytes, c: int) -> Callable[[int], int]:
    """Same map as :func:`make_box`, evaluated through four 256-word tables."""
    # column j of the circulant, scaled by the substituted byte at position j
    t0, t1, t2, t3 = ([0] * 256 for _ in range(4))
    for b in range(256):
        v = table[b]
        x = ((v << 1) & 0xFF) ^ c if v & 0x80 else v << 1
        t0[b] = (x << 24) | ((x ^ v) << 16) | (v << 8) | v
        t1[b] = (v << 24) | (x << 16) | ((x ^ v) << 8) | v
        t2[b] = (v << 24) | (v << 16) | (x << 8) | (x ^ v)
        t3[b] = ((x ^ v) << 24) | (v << 16) | (v << 8) | x
    t0, t1, t2, t3 = map(tuple, (t0, t1, t2, t3))

    def box(w: int) -> int:
        return t0[w >> 24] ^ t1[(w >> 16) & 0xFF] ^ t2[(w >> 8) & 0xFF] ^ t3[w & 0xFF]

    return box


s1_box = make_box(SR, S1_POLY)
s2_box = make_box(SQ, S2_POLY)


class FsmRegisters(NamedTuple):
    r1: int = 0
    r2: int = 0
    r3: int = 0


def clock_fsm(regs: FsmRegisters, s15: int, s5: int) -> Tuple[FsmRegisters, int]:
    """Pure form of :meth:`Fsm.clock`: returns the new registers and F."""
    r1, r2, r3 = regs
    f = ((s15 + r1) & WORD_MASK) ^ r2
    r = (r2 + (r3 ^ s5)) & WORD_MASK
    return FsmRegisters(r, s1_box(r1), s2_box(r2)), f


class Fsm:
    """Mutable FSM used by the generator.

    ``s1`` and ``s2`` are instance attributes so callers can substitute
    table-driven or instrumented boxes.
    """

    def __init__(self, sr: bytes = None, sq: bytes = None, *, tabled: bool = False):
        sr = SR if sr is None else sr
        sq = SQ if sq is None else sq
        build = make_table_box if tabled else make_box
        self.s1 = build(sr, S1_POLY)
        self.s2 = build(sq, S2_POLY)
        self.r1 = self.r2 = self.r3 = 0

    @property
    def registers(self) -> FsmRegisters:
        return FsmRegisters(self.r1, self.r2, self.r3)

    def clock(self, s15: int, s5: int) -> int:
        r1 = self.r1
        r2 = self.r2
        f = ((s15 + r1) & WORD_MASK) ^ r2
        r = (r2 + (self.r3 ^ s5)) & WORD_MASK
        self.r3 = self.s2(r2)
        self.r2 = self.s1(r1)
        self.r1 = r
        return f


def aes_sbox() -> bytes:
    """Regenerate the AES S-box: inverse modulo 0x11B, then the affine map."""
    log = [0] * 256
    exp = [0] * 510
    x = 1
    for i in range(255):
        exp[i] = exp[i + 255] = x
        log[x] = i
        x ^= ((x << 1) & 0xFF) ^ S1_POLY if x & 0x80 else x << 1  # x *= 3
    out = bytearray(256)
    for a in range(256):
        b = exp[255 - log[a]] if a else 0
        s = b
        for k in range(1, 5):
            s ^= ((b << k) | (b >> (8 - k))) & 0xFF
        out[a] = s ^ 0x63
    return bytes(out)

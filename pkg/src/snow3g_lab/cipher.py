"""Key/IV setup, keystream generation and XOR encryption."""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .fsm import Fsm
from .gf import WORD_MASK, BackendKind, MulBackend
from .lfsr import DEFAULT_WINDOW, Layout, Lfsr, make_lfsr

ONES = WORD_MASK
INIT_CLOCKS = 32


def parse_hex128(text: str, what: str = "value") -> bytes:
    cleaned = "".join(text.split())
    if len(cleaned) != 32:
        raise ValueError(f"{what} must be exactly 32 hex characters, got {len(cleaned)}")
    try:
        return bytes.fromhex(cleaned)
    except ValueError:
        raise ValueError(f"{what} is not valid hex: {text!r}") from None


@dataclass(frozen=True)
class KeyMaterial:
    """128-bit key and IV as four big-endian words each (k0 comes first)."""

    key: Tuple[int, int, int, int]
    iv: Tuple[int, int, int, int]

    def __post_init__(self):
        for name, words in (("key", self.key), ("iv", self.iv)):
            if len(words) != 4 or any(not 0 <= w <= WORD_MASK for w in words):
                raise ValueError(f"{name} must be four 32-bit words")

    @classmethod
    def from_bytes(cls, key: bytes, iv: bytes) -> "KeyMaterial":
        if len(key) != 16 or len(iv) != 16:
            raise ValueError("key and iv must be 16 bytes each")
        return cls(struct.unpack(">4I", key), struct.unpack(">4I", iv))

    @classmethod
    def from_hex(cls, key: str, iv: str) -> "KeyMaterial":
        return cls.from_bytes(parse_hex128(key, "key"), parse_hex128(iv, "iv"))

    def lfsr_fill(self) -> List[int]:
        k0, k1, k2, k3 = self.key
        iv0, iv1, iv2, iv3 = self.iv
        return [
            k0 ^ ONES, k1 ^ ONES, k2 ^ ONES, k3 ^ ONES,
            k0, k1, k2, k3,
            k0 ^ ONES, k1 ^ ONES ^ iv3, k2 ^ ONES ^ iv2, k3 ^ ONES,
            k0 ^ iv1, k1, k2, k3 ^ iv0,
        ]


Wrap = Callable[[str, Callable], Callable]


class Snow3G:
    """One keystream generator instance.

    The LFSR layout and multiplication backend are fixed at construction.
    ``wrap`` (used by the benchmark harness) receives each hot function
    with its profile name and returns the callable to use in its place.
    Instances are not thread-safe.
    """

    def __init__(
        self,
        layout: Layout = Layout.SLIDING_WINDOW,
        backend: Optional[MulBackend] = None,
        *,
        window: int = DEFAULT_WINDOW,
        general_modulo: bool = False,
        sbox_tables: bool = False,
        sq: Optional[bytes] = None,
        wrap: Optional[Wrap] = None,
    ):
        if backend is None:
            backend = MulBackend.table()
        if wrap is not None:
            backend = backend.instrumented(wrap)
        self.layout = layout
        self.backend = backend
        self.lfsr: Lfsr = make_lfsr(layout, backend, window=window, general_modulo=general_modulo)
        self.fsm = Fsm(sq=sq, tabled=sbox_tables)
        self._clock_fsm = self.fsm.clock
        self._clock_lfsr = self.lfsr.clock
        if wrap is not None:
            self.fsm.s1 = wrap("S1", self.fsm.s1)
            self.fsm.s2 = wrap("S2", self.fsm.s2)
            self._clock_fsm = wrap("ClockFSM", self.fsm.clock)
            self._clock_lfsr = wrap("ClockLFSRKeyStreamMode", self.lfsr.clock)
        self.ready = False
        self.words_emitted = 0

    def initialize(self, km: KeyMaterial) -> "Snow3G":
        lfsr = self.lfsr
        lfsr.load(km.lfsr_fill())
        fsm = self.fsm
        fsm.r1 = fsm.r2 = fsm.r3 = 0
        for _ in range(INIT_CLOCKS):
            f = self._clock_fsm(lfsr.stage(15), lfsr.stage(5))
            lfsr.clock(f)
        # one more FSM clock whose output is dropped, then enter keystream mode
        self._clock_fsm(lfsr.stage(15), lfsr.stage(5))
        self._clock_lfsr()
        self.ready = True
        self.words_emitted = 0
        return self

    def generate_keystream(self, n: int) -> List[int]:
        if not self.ready:
            raise RuntimeError("generator used before initialize()")
        if n < 0:
            raise ValueError("word count must be non-negative")
        stage = self.lfsr.stage
        clock_fsm = self._clock_fsm
        clock_lfsr = self._clock_lfsr
        out = []
        append = out.append
        for _ in range(n):
            f = clock_fsm(stage(15), stage(5))
            append(f ^ stage(0))
            clock_lfsr()
        self.words_emitted += n
        return out

    def keystream_bytes(self, nbytes: int) -> bytes:
        nwords = -(-nbytes // 4)
        return words_to_bytes(self.generate_keystream(nwords))[:nbytes]

    def xor_stream(self, data: bytes) -> bytes:
        """XOR ``data`` with the next keystream bytes.

        Keystream left over in the final word is discarded, so chunked
        callers should pass multiples of four bytes until the last chunk.
        """
        if not data:
            return b""
        ks = self.keystream_bytes(len(data))
        n = len(data)
        return (int.from_bytes(data, "big") ^ int.from_bytes(ks, "big")).to_bytes(n, "big")

    def state(self) -> Tuple[List[int], Tuple[int, int, int]]:
        return self.lfsr.stages(), tuple(self.fsm.registers)


def initialize(
    km: KeyMaterial,
    layout: Layout = Layout.SLIDING_WINDOW,
    backend: Optional[MulBackend] = None,
    **options,
) -> Snow3G:
    return Snow3G(layout, backend, **options).initialize(km)


def words_to_bytes(words: Sequence[int]) -> bytes:
    return struct.pack(f">{len(words)}I", *words)


def xor_chunks(core: Snow3G, chunks: Iterable[bytes]) -> Iterator[bytes]:
    for chunk in chunks:
        yield core.xor_stream(chunk)


@dataclass(frozen=True)
class KnownAnswer:
    key: str
    iv: str
    keystream: Tuple[int, ...]

    @property
    def key_material(self) -> KeyMaterial:
        return KeyMaterial.from_hex(self.key, self.iv)


def parse_kat(text: str) -> List[KnownAnswer]:
    """Parse the vector format: key, iv, then keystream words, per line."""
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 3:
            raise ValueError(f"line {lineno}: expected key, iv and at least one keystream word")
        key, iv, *words = fields
        parse_hex128(key, f"line {lineno} key")
        parse_hex128(iv, f"line {lineno} iv")
        if any(len(w) != 8 for w in words):
            raise ValueError(f"line {lineno}: keystream words must be 8 hex characters")
        records.append(KnownAnswer(key.upper(), iv.upper(), tuple(int(w, 16) for w in words)))
    return records


def load_kat() -> List[KnownAnswer]:
    text = resources.files("snow3g_lab").joinpath("data/etsi_kat.txt").read_text()
    return parse_kat(text)


def configurations() -> Iterator[Tuple[Layout, BackendKind]]:
    return itertools.product(Layout, BackendKind)

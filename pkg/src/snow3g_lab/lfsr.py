"""The 16-stage LFSR over GF(2^32) and its software shift layouts.

Every layout clocks the same recurrence

    s[t+16] = alpha * s[t]  ^  s[t+2]  ^  alpha^-1 * s[t+11]

and differs only in how the sixteen live words are stored and moved.  All
layouts expose the logical stages through :meth:`Lfsr.stage`.
"""

from __future__ import annotations

import enum
from typing import Callable, Iterable, List, Sequence

from .gf import WORD_MASK, MulBackend

NUM_STAGES = 16
DEFAULT_WINDOW = 1024
MIN_WINDOW = 32


class Layout(enum.Enum):
    TRADITIONAL = "traditional"
    HARDCODE = "hardcode"
    CIRCULAR_BUFFER = "circular"
    SLIDING_WINDOW = "sliding"
    LOOP_UNROLLING = "unrolled"

    @classmethod
    def parse(cls, text: str) -> "Layout":
        key = text.strip().lower().replace("-", "").replace("_", "")
        for layout in cls:
            if key in (layout.value, layout.name.lower().replace("_", "")):
                return layout
        names = ", ".join(l.value for l in cls)
        raise ValueError(f"unknown layout {text!r} (expected one of: {names})")

    @property
    def title(self) -> str:
        return _TITLES[self]


_TITLES = {
    Layout.TRADITIONAL: "Traditional",
    Layout.HARDCODE: "HardCode",
    Layout.CIRCULAR_BUFFER: "Circular Buffers",
    Layout.SLIDING_WINDOW: "Sliding Windows",
    Layout.LOOP_UNROLLING: "Loop Unrolling",
}


def make_feedback(backend: MulBackend) -> Callable[[int, int, int], int]:
    mul = backend.mul_alpha_byte
    div = backend.div_alpha_byte

    def feedback_word(s0: int, s2: int, s11: int) -> int:
        return (
            ((s0 << 8) & 0xFFFFFF00) ^ mul(s0 >> 24) ^ s2
            ^ (s11 >> 8) ^ div(s11 & 0xFF)
        )

    return feedback_word


def feedback(s0: int, s2: int, s11: int, backend: MulBackend) -> int:
    """New stage 15 computed from the three taps."""
    return make_feedback(backend)(s0, s2, s11)


class Lfsr:
    """Base class; subclasses supply storage, ``clock`` and ``stage``.

    ``clock(f)`` shifts by one position and feeds ``feedback ^ f`` into stage
    15; ``f`` is the FSM output during initialization and 0 afterwards.
    """

    layout: Layout

    def __init__(self, backend: MulBackend, fill: Sequence[int] = (0,) * NUM_STAGES):
        if len(fill) != NUM_STAGES:
            raise ValueError(f"LFSR fill needs {NUM_STAGES} words, got {len(fill)}")
        self.backend = backend
        self._feedback = make_feedback(backend)
        self.load([w & WORD_MASK for w in fill])

    def load(self, fill: List[int]) -> None:
        raise NotImplementedError

    def clock(self, f: int = 0) -> None:
        raise NotImplementedError

    def stage(self, i: int) -> int:
        raise NotImplementedError

    def stages(self) -> List[int]:
        return [self.stage(i) for i in range(NUM_STAGES)]

    def __repr__(self):
        body = " ".join(f"{w:08X}" for w in self.stages())
        return f"<{type(self).__name__} {body}>"


class TraditionalLfsr(Lfsr):
    layout = Layout.TRADITIONAL

    def load(self, fill):
        self.s = list(fill)

    def clock(self, f=0):
        s = self.s
        v = self._feedback(s[0], s[2], s[11]) ^ f
        for i in range(15):
            s[i] = s[i + 1]
        s[15] = v

    def stage(self, i):
        return self.s[i]


class HardcodeLfsr(Lfsr):
    """Fully spelled-out shift: compute the feedback, then 15 moves."""

    layout = Layout.HARDCODE

    def load(self, fill):
        self.s = list(fill)

    def clock(self, f=0):
        s = self.s
        v = self._feedback(s[0], s[2], s[11]) ^ f
        s[0] = s[1]
        s[1] = s[2]
        s[2] = s[3]
        s[3] = s[4]
        s[4] = s[5]
        s[5] = s[6]
        s[6] = s[7]
        s[7] = s[8]
        s[8] = s[9]
        s[9] = s[10]
        s[10] = s[11]
        s[11] = s[12]
        s[12] = s[13]
        s[13] = s[14]
        s[14] = s[15]
        s[15] = v

    def stage(self, i):
        return self.s[i]


class CircularBufferLfsr(Lfsr):
    """Fixed 16-slot ring; logical stage i lives at ``(head + i) & 15``.

    The feedback overwrites the slot of the outgoing stage 0 and the head
    advances, so nothing moves.
    """

    layout = Layout.CIRCULAR_BUFFER
    general_modulo = False

    def load(self, fill):
        self.s = list(fill)
        self.head = 0

    def clock(self, f=0):
        s = self.s
        h = self.head
        s[h] = self._feedback(s[h], s[(h + 2) & 15], s[(h + 11) & 15]) ^ f
        self.head = (h + 1) & 15

    def stage(self, i):
        return self.s[(self.head + i) & 15]


class ModuloCircularBufferLfsr(CircularBufferLfsr):
    """Ring indexed with a general ``%`` on a stored size instead of a mask."""

    general_modulo = True

    def load(self, fill):
        super().load(fill)
        self.size = len(fill)

    def clock(self, f=0):
        s = self.s
        h = self.head
        n = self.size
        s[h] = self._feedback(s[h], s[(h + 2) % n], s[(h + 11) % n]) ^ f
        self.head = (h + 1) % n

    def stage(self, i):
        return self.s[(self.head + i) % self.size]


class SlidingWindowLfsr(Lfsr):
    """Oversized buffer with a moving 16-word window at offset ``p``.

    Each clock appends the feedback after the window and slides ``p`` by one.
    When the window reaches the end of the buffer the 15 surviving words are
    copied back to the front.
    """

    layout = Layout.SLIDING_WINDOW

    def __init__(self, backend, fill=(0,) * NUM_STAGES, window: int = DEFAULT_WINDOW):
        if window < MIN_WINDOW:
            raise ValueError(f"sliding window buffer must hold at least {MIN_WINDOW} words")
        self.window = window
        self.relocations = 0
        super().__init__(backend, fill)

    def load(self, fill):
        self.buf = list(fill) + [0] * (self.window - NUM_STAGES)
        self.p = 0

    def clock(self, f=0):
        buf = self.buf
        p = self.p
        v = self._feedback(buf[p], buf[p + 2], buf[p + 11]) ^ f
        if p + 16 < self.window:
            buf[p + 16] = v
            self.p = p + 1
        else:
            buf[0:15] = buf[p + 1:p + 16]
            buf[15] = v
            self.p = 0
            self.relocations += 1

    def stage(self, i):
        return self.buf[self.p + i]


def _unrolled_phase(k: int, feedback_word):
    # slot indices are fixed per phase, like a hand-unrolled body
    a, b, c = k, (k + 2) & 15, (k + 11) & 15

    def step(s, f):
        s[a] = feedback_word(s[a], s[b], s[c]) ^ f

    return step


class LoopUnrolledLfsr(Lfsr):
    """In-place ring with one specialized step per phase.

    Sixteen consecutive clocks form one unrolled macro-step, after which the
    physical array is in natural order again.
    """

    layout = Layout.LOOP_UNROLLING

    def load(self, fill):
        self.s = list(fill)
        self.phase = 0
        self._steps = [_unrolled_phase(k, self._feedback) for k in range(NUM_STAGES)]

    def clock(self, f=0):
        k = self.phase
        self._steps[k](self.s, f)
        self.phase = (k + 1) & 15

    def clock_macro(self) -> None:
        """Sixteen keystream-mode clocks; only valid at phase 0."""
        if self.phase:
            raise RuntimeError("macro step must start at phase 0")
        s = self.s
        for step in self._steps:
            step(s, 0)

    def stage(self, i):
        return self.s[(self.phase + i) & 15]


_CLASSES = {
    Layout.TRADITIONAL: TraditionalLfsr,
    Layout.HARDCODE: HardcodeLfsr,
    Layout.CIRCULAR_BUFFER: CircularBufferLfsr,
    Layout.SLIDING_WINDOW: SlidingWindowLfsr,
    Layout.LOOP_UNROLLING: LoopUnrolledLfsr,
}


def make_lfsr(
    layout: Layout,
    backend: MulBackend,
    fill: Iterable[int] = (0,) * NUM_STAGES,
    *,
    window: int = DEFAULT_WINDOW,
    general_modulo: bool = False,
) -> Lfsr:
    fill = list(fill)
    if layout is Layout.SLIDING_WINDOW:
        return SlidingWindowLfsr(backend, fill, window=window)
    if layout is Layout.CIRCULAR_BUFFER and general_modulo:
        return ModuloCircularBufferLfsr(backend, fill)
    return _CLASSES[layout](backend, fill)


def clock_keystream_mode(state: Lfsr) -> Lfsr:
    state.clock()
    return state


def clock_init_mode(state: Lfsr, f: int) -> Lfsr:
    state.clock(f & WORD_MASK)
    return state

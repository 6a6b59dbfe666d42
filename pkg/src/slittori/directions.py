"""Lazily extensible direction specifications.

A :class:`DirectionSpec` is a continued-fraction digit stream
``[0; a1, a2, ...]`` produced in blocks of eight digits, together with
the surface parameter the stream was built for, the expected surface
point at each block boundary (a checkpoint every ``k_n = 8 n`` digits),
and bounds on the checkpoint heights.  Builders supply the blocks; the
verifier replays them.  Digits, checkpoints and convergents are cached
append-only, so re-verifying a longer horizon never changes earlier
records.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exact import ExactScalar, scalar
from .intervals import RatInterval
from .torus import TorusPoint
from .words import Convergents

PERIOD = 8


class DigitStreamExhaustedError(RuntimeError):
    """A finite digit source cannot supply the requested digit."""


@dataclass(frozen=True)
class BlockRecord:
    """One emitted period: eight digits and the expected endpoint."""

    index: int  # n >= 1
    digits: tuple[int, ...]
    endpoint: TorusPoint
    meta: dict

    def __post_init__(self):
        if len(self.digits) != PERIOD:
            raise ValueError(f"block must have {PERIOD} digits")
        if any(d < 1 for d in self.digits):
            raise ValueError("block digits must be positive")


class DirectionSpec:
    """Digit stream with checkpoints, backed by a block producer.

    ``block_source`` is an iterator of :class:`BlockRecord`; a finite
    iterator yields a finite (truncated) spec, which is enough for
    fault-injection tests but will raise
    :class:`DigitStreamExhaustedError` when a verifier asks beyond it.
    """

    def __init__(
        self,
        z0: TorusPoint,
        y_bounds: tuple[ExactScalar, ExactScalar],
        provenance: dict,
        block_source: Iterator[BlockRecord],
    ):
        lo, hi = scalar(y_bounds[0]), scalar(y_bounds[1])
        if not (ExactScalar(0) < lo <= hi < ExactScalar(1, 0, 2)):
            raise ValueError("y bounds must satisfy 0 < a <= b < 1/2")
        self.z0 = z0
        self.y_bounds = (lo, hi)
        self.provenance = provenance
        self._source = block_source
        self._blocks: list[BlockRecord] = []
        self._digits: list[int] = []
        self._conv = Convergents()

    period = PERIOD

    # -- stream management --------------------------------------------

    def _pull_block(self) -> None:
        try:
            rec = next(self._source)
        except StopIteration:
            raise DigitStreamExhaustedError(
                f"digit stream ends after {len(self._digits)} digits"
            ) from None
        if rec.index != len(self._blocks) + 1:
            raise RuntimeError("block source out of order")
        self._blocks.append(rec)
        self._digits.extend(rec.digits)
        self._conv.extend(rec.digits)

    def ensure_digits(self, k: int) -> None:
        while len(self._digits) < k:
            self._pull_block()

    def digit(self, i: int) -> int:
        """1-based digit a_i."""
        if i < 1:
            raise IndexError("digits are 1-based")
        self.ensure_digits(i)
        return self._digits[i - 1]

    def digits_prefix(self, k: int) -> tuple[int, ...]:
        self.ensure_digits(k)
        return tuple(self._digits[:k])

    def block(self, n: int) -> BlockRecord:
        if n < 1:
            raise IndexError("blocks are 1-based")
        while len(self._blocks) < n:
            self._pull_block()
        return self._blocks[n - 1]

    def checkpoint_index(self, n: int) -> int:
        return PERIOD * n

    def checkpoint_point(self, n: int) -> TorusPoint:
        return self.block(n).endpoint

    @property
    def cached_digits(self) -> tuple[int, ...]:
        return tuple(self._digits)

    @property
    def cached_blocks(self) -> int:
        return len(self._blocks)

    # -- numerics ------------------------------------------------------

    def convergents(self, k: int) -> Convergents:
        """The shared convergent table, filled through index k."""
        self.ensure_digits(k)
        return self._conv

    def alpha_enclosure(self, bits: int = 256, min_digits: int = 0) -> RatInterval:
        """Rational interval around the stream's value, width <= 2**-bits
        when the stream can supply enough digits.

        A finite stream that runs out early still yields its best
        enclosure (consecutive convergents of every cached digit), as
        long as it covers ``min_digits``; downstream certified
        comparisons decide whether that is conclusive.
        """
        target = Fraction(1, 1 << bits)
        k = max(2, min_digits)
        while True:
            try:
                self.ensure_digits(k)
            except DigitStreamExhaustedError:
                k = len(self._digits)
                if k < max(2, min_digits):
                    raise
                return RatInterval(*self._conv.bracket(k))
            lo, hi = self._conv.bracket(k)
            if hi - lo <= target:
                return RatInterval(lo, hi)
            k += PERIOD

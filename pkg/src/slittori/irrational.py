"""Block search for quadratic-irrational barrier lengths.

Starting from a point z = (x, y) with irrational height y in (0, 1/2),
one period of the direction stream is a word

    (h+)^a  h-  h+  (h-)^b  h+  h-  (h+)^c  (h-)^d

whose exponents are found by four exact window searches:

  a: smallest admissible index >= a_min whose running sign count is
     positive and which lands x - a y just right of -1/2 (margin
     eps1 < min(y, 1/2 - y)/2);
  b: after one h- and one h+ step, smallest index with running count
     exceeding the a-stage count and height just below 1/2 (margin
     eps2 < min(|x3|, 1/2 - |x3|)/2);
  c: smallest index whose running count cancels the accumulated
     shear exponent (b' - a');
  d: the d_index-th index landing the height inside the target
     interval J.  The freedom in d is what makes distinct digit
     streams for the same parameter.

Every window membership test is an exact comparison in the quadratic
field, so no density or precision argument is needed.  A candidate
block is accepted only if the direct trace certificate passes: the
traced endpoint height lies in J and the traced homology action is a
power of h- up to sign.  On certificate failure the search widens
monotonically through further admissible candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .directions import BlockRecord, DirectionSpec
from .exact import ExactScalar, mod_half_open, scalar
from .torus import ActionTrace, TorusPoint, in_region_S, trace_word
from .words import GenWord

DEFAULT_J = (Fraction(1, 6), Fraction(1, 3))
DEFAULT_A_MIN = 6
DEFAULT_BUDGET = 10**6


class SearchBudgetExceededError(RuntimeError):
    """The window search ran out of generator applications."""


class DerivationError(RuntimeError):
    """An intermediate invariant of the block derivation failed."""


@dataclass(frozen=True)
class IrrationalBlockParams:
    a: int
    b: int
    c: int
    d: int
    trace: ActionTrace
    z_out: TorusPoint
    eps1: ExactScalar
    eps2: ExactScalar

    @property
    def digits(self) -> tuple[int, ...]:
        return (self.a, 1, 1, self.b, 1, 1, self.c, self.d)

    def word(self) -> GenWord:
        return GenWord.from_digits(self.digits)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise SearchBudgetExceededError(
                f"budget of {self.limit} generator applications exhausted"
            )


def _require_irrational(value: ExactScalar, what: str) -> None:
    if value.is_rational:
        raise DerivationError(f"{what} is rational; window search cannot proceed")


def _a_candidates(z: TorusPoint, a_min: int, budget: _Budget) -> Iterator[tuple[int, int, ExactScalar]]:
    """Yield (a, a', x1) with the stage-a window and sign conditions."""
    x, y = z.x, z.y
    half = Fraction(1, 2)
    window = min(y, ExactScalar(1, 0, 2) - y) * Fraction(1, 2)
    cur = x
    m = 0
    j = 0
    while True:
        j += 1
        budget.spend()
        cur = mod_half_open(cur - y)
        m += 1 if in_region_S(TorusPoint(cur, y)) else -1
        if j < a_min or m <= 0:
            continue
        eps1 = cur + half
        if ExactScalar(0) < eps1 < window:
            yield (j, m, cur)


def _b_candidates(z3: TorusPoint, a_prime: int, budget: _Budget) -> Iterator[tuple[int, int, ExactScalar]]:
    """Yield (b, b', y4) with the stage-b window and count conditions."""
    x3, y3 = z3.x, z3.y
    half = Fraction(1, 2)
    ax3 = abs(x3)
    window = min(ax3, ExactScalar(1, 0, 2) - ax3) * Fraction(1, 2)
    cur = y3
    m = 0
    j = 0
    while True:
        j += 1
        budget.spend()
        cur = mod_half_open(cur - x3)
        m += 1 if in_region_S(TorusPoint(x3, cur)) else -1
        if m <= a_prime:
            continue
        eps2 = half - cur
        if ExactScalar(0) < eps2 < window:
            yield (j, m, cur)


def _c_candidates(z6: TorusPoint, target: int, budget: _Budget) -> Iterator[tuple[int, ExactScalar]]:
    """Yield (c, x7) where the running h+ count at z6 reaches ``target``."""
    x6, y6 = z6.x, z6.y
    cur = x6
    m = 0
    j = 0
    while True:
        j += 1
        budget.spend()
        cur = mod_half_open(cur - y6)
        m += 1 if in_region_S(TorusPoint(cur, y6)) else -1
        if m == target:
            yield (j, cur)


def _d_candidates(z7: TorusPoint, J, budget: _Budget) -> Iterator[tuple[int, ExactScalar]]:
    """Yield (d, y') with the endpoint height inside J."""
    x7, y7 = z7.x, z7.y
    lo, hi = J
    cur = y7
    j = 0
    while True:
        j += 1
        budget.spend()
        cur = mod_half_open(cur - x7)
        if lo <= cur <= hi:
            yield (j, cur)


def find_block(
    z: TorusPoint,
    J: tuple = DEFAULT_J,
    a_min: int = DEFAULT_A_MIN,
    d_index: int = 1,
    budget: int = DEFAULT_BUDGET,
    max_widenings: int = 8,
) -> IrrationalBlockParams:
    """Search one certified block starting at z.

    ``d_index`` selects the d_index-th admissible value of d instead of
    the smallest; everything else is searched smallest-first, widening
    monotonically if (contrary to the derivation) a candidate fails the
    final trace certificate.
    """
    J = (scalar(J[0]), scalar(J[1]))
    if not (ExactScalar(0) < J[0] <= J[1] < ExactScalar(1, 0, 2)):
        raise ValueError("target interval must sit inside (0, 1/2)")
    if d_index < 1:
        raise ValueError("d_index is 1-based")
    y = z.y
    _require_irrational(y, "height y")
    if not (ExactScalar(0) < y < ExactScalar(1, 0, 2)):
        raise ValueError(f"height {y} outside (0, 1/2)")
    bud = _Budget(budget)
    widenings = 0
    d_tries_per_a = 3

    for a, a_prime, x1 in _a_candidates(z, a_min, bud):
        z1 = TorusPoint(x1, y)
        eps1 = x1 + Fraction(1, 2)
        # two single steps with the derivation's region cross-checks
        z2 = TorusPoint(z1.x, mod_half_open(z1.y - z1.x))
        if in_region_S(z2):
            raise DerivationError("z2 unexpectedly in S")
        z3 = TorusPoint(mod_half_open(z2.x - z2.y), z2.y)
        if not in_region_S(z3):
            raise DerivationError("z3 unexpectedly outside S")
        if z3.x.sign() >= 0:
            raise DerivationError("x3 should be negative")
        _require_irrational(z3.x, "x3")

        b, b_prime, y4 = next(_b_candidates(z3, a_prime, bud))
        z4 = TorusPoint(z3.x, y4)
        eps2 = ExactScalar(1, 0, 2) - y4
        z5 = TorusPoint(mod_half_open(z4.x - z4.y), z4.y)
        if in_region_S(z5):
            raise DerivationError("z5 unexpectedly in S")
        z6 = TorusPoint(z5.x, mod_half_open(z5.y - z5.x))
        if not in_region_S(z6):
            raise DerivationError("z6 unexpectedly outside S")
        _require_irrational(z6.y, "y6")

        c, x7 = next(_c_candidates(z6, b_prime - a_prime, bud))
        z7 = TorusPoint(x7, z6.y)
        _require_irrational(z7.x, "x7")

        seen_d = 0
        tried_here = 0
        for d, y_out in _d_candidates(z7, J, bud):
            seen_d += 1
            if seen_d < d_index:
                continue
            word = GenWord.from_digits((a, 1, 1, b, 1, 1, c, d))
            tr = trace_word(z, word, record_points=False)
            z_out = TorusPoint(z7.x, y_out)
            certified = (
                tr.final == z_out
                and J[0] <= tr.final.y <= J[1]
                and tr.action.fixes_beta
            )
            if certified:
                return IrrationalBlockParams(
                    a=a, b=b, c=c, d=d,
                    trace=tr, z_out=tr.final,
                    eps1=eps1, eps2=eps2,
                )
            # Widen monotonically: a few more admissible d values, then
            # re-derive from the next admissible a.
            widenings += 1
            tried_here += 1
            if widenings >= max_widenings:
                raise SearchBudgetExceededError(
                    f"no certified block within {max_widenings} widenings"
                )
            if tried_here >= d_tries_per_a:
                break
    raise SearchBudgetExceededError("candidate generators exhausted")


class DChoiceRule:
    """Which admissible d to take in each block: default, constant, or list."""

    def __init__(self, kind: str = "default", params: Sequence[int] = ()):  # noqa: D401
        if kind not in ("default", "const", "list"):
            raise ValueError(f"unknown d-choice rule {kind!r}")
        self.kind = kind
        self.params = tuple(int(v) for v in params)
        if kind == "const" and (len(self.params) != 1 or self.params[0] < 1):
            raise ValueError("const d-choice needs one positive index")
        if kind == "list" and any(v < 1 for v in self.params):
            raise ValueError("d-choice indices are 1-based positives")

    def index(self, n: int) -> int:
        if self.kind == "default":
            return 1
        if self.kind == "const":
            return self.params[0]
        if n <= len(self.params):
            return self.params[n - 1]
        return 1  # list exhausted: fall back to the smallest admissible d

    def as_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "DChoiceRule":
        return cls(d["kind"], d.get("params", ()))


def _irrational_blocks(
    z0: TorusPoint, choices: DChoiceRule, a_min: int, budget: int
) -> Iterator[BlockRecord]:
    z = z0
    n = 1
    while True:
        blk = find_block(z, DEFAULT_J, a_min=a_min, d_index=choices.index(n), budget=budget)
        yield BlockRecord(
            index=n,
            digits=blk.digits,
            endpoint=blk.z_out,
            meta={
                "a": blk.a, "b": blk.b, "c": blk.c, "d": blk.d,
                "d_index": choices.index(n),
            },
        )
        z = blk.z_out
        n += 1


def direction_stream_irrational(
    lam: ExactScalar,
    d_choices: DChoiceRule | None = None,
    a_min: int = DEFAULT_A_MIN,
    budget: int = DEFAULT_BUDGET,
) -> DirectionSpec:
    """Digit stream [0; a1,1,1,b1,1,1,c1,d1, a2, ...] for z0 = (0, lambda).

    ``lam`` must be a quadratic irrational in (0, 1/2); rational values
    belong to the rational builder and are rejected.
    """
    lam = scalar(lam)
    if lam.is_rational:
        raise ValueError("rational barrier length: use the rational builder")
    if not (ExactScalar(0) < lam < ExactScalar(1, 0, 2)):
        raise ValueError("barrier length ratio must lie in (0, 1/2)")
    choices = d_choices or DChoiceRule()
    z0 = TorusPoint(ExactScalar(0), lam)
    provenance = {
        "type": "irrational",
        "lambda": list(lam.as_tuple()),
        "d_choices": choices.as_dict(),
        "a_min": a_min,
    }
    return DirectionSpec(
        z0=z0,
        y_bounds=DEFAULT_J,
        provenance=provenance,
        block_source=_irrational_blocks(z0, choices, a_min, budget),
    )

"""The shear action on the punctured torus and its homology bookkeeping.

Points live on ``[-1/2, 1/2)^2`` minus the four half-integer points
(0,0), (-1/2,-1/2), (-1/2,0), (0,-1/2).  Applying the inverse of a
generator moves a point by

    h+ : (x, y) -> (x - y mod 1, y)       h- : (x, y) -> (x, y - x mod 1)

and each elementary step contributes the generator itself to the
homology action when the *post-step* point z satisfies

    S = { -1/2 <= x + y < 1/2 }   (literal coordinates, no reduction)

and the generator's inverse otherwise.  Tracing a word g = g1 g2 ... gN
through its elementary steps therefore computes both the orbit
z, g1^-1 z, g2^-1 g1^-1 z, ... and the induced map g_*(g^-1 z) on the
rank-2 anti-invariant homology, as an ordered product of per-step
factors.  The action is only defined up to a global sign, which
:class:`HomologyAction` canonicalizes away.

Two engines implement the same stepping rule: an integer-lattice loop
for rational points (all coordinates share one denominator, so the
orbit is pure integer arithmetic) and a generic loop over
:class:`~slittori.exact.ExactScalar` for quadratic-irrational points.
They are cross-checked against each other in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact import ExactScalar, mod_half_open, scalar
from .words import GEN_MATRIX, IDENTITY, THETA, GenWord, IntMat2

_HALF = Fraction(1, 2)

EXCLUDED_POINTS = (
    (Fraction(0), Fraction(0)),
    (Fraction(-1, 2), Fraction(-1, 2)),
    (Fraction(-1, 2), Fraction(0)),
    (Fraction(0), Fraction(-1, 2)),
)


class ExcludedPointError(ValueError):
    """The point is one of the four punctures removed from the torus."""


@dataclass(frozen=True)
class TorusPoint:
    x: ExactScalar
    y: ExactScalar

    def __post_init__(self):
        for c in (self.x, self.y):
            if not (ExactScalar(-1, 0, 2) <= c < ExactScalar(1, 0, 2)):
                raise ValueError(f"coordinate {c} outside [-1/2, 1/2)")
        if self.x.is_rational and self.y.is_rational:
            pair = (self.x.as_fraction(), self.y.as_fraction())
            if pair in EXCLUDED_POINTS:
                raise ExcludedPointError(f"{pair} is a puncture")

    @classmethod
    def of(cls, x, y) -> "TorusPoint":
        """Build from any scalar-likes, reducing mod 1 into [-1/2, 1/2)."""
        return cls(mod_half_open(scalar(x)), mod_half_open(scalar(y)))

    @property
    def is_rational(self) -> bool:
        return self.x.is_rational and self.y.is_rational

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return (self.x.as_fraction(), self.y.as_fraction())

    def __str__(self):
        return f"({self.x}, {self.y})"


def in_region_S(z: TorusPoint) -> bool:
    """-1/2 <= x + y < 1/2 on the literal canonical coordinates."""
    s = z.x + z.y
    return ExactScalar(-1, 0, 2) <= s < ExactScalar(1, 0, 2)


def in_region_E(z: TorusPoint) -> bool:
    """x > -1/2 and y > -1/2."""
    m = ExactScalar(-1, 0, 2)
    return z.x > m and z.y > m


def apply_generator_inverse(z: TorusPoint, gen: str, n: int = 1) -> TorusPoint:
    """(h+)^-n or (h-)^-n applied to z."""
    if n < 1:
        raise ValueError("n must be positive")
    if gen == "h+":
        return TorusPoint(mod_half_open(z.x - n * z.y), z.y)
    if gen == "h-":
        return TorusPoint(z.x, mod_half_open(z.y - n * z.x))
    raise ValueError(f"unknown generator {gen!r}")


def generator_homology_factor(z_after: TorusPoint, gen: str) -> IntMat2:
    """The per-step homology factor, evaluated at the post-step point."""
    m = GEN_MATRIX[gen]
    return m if in_region_S(z_after) else m.inverse()


class HomologyAction:
    """An element of PGL(2,Z): a 2x2 integer matrix up to global sign.

    The stored representative has its first nonzero entry positive.
    """

    __slots__ = ("m",)

    def __init__(self, m: IntMat2):
        if abs(m.det()) != 1:
            raise ValueError(f"homology action must have det +-1, got {m.det()}")
        for e in m.entries():
            if e != 0:
                if e < 0:
                    m = -m
                break
        object.__setattr__(self, "m", m)

    def __setattr__(self, *a):
        raise AttributeError("HomologyAction is immutable")

    def __eq__(self, other):
        return isinstance(other, HomologyAction) and self.m == other.m

    def __hash__(self):
        return hash(self.m.entries())

    def __mul__(self, other: "HomologyAction") -> "HomologyAction":
        return HomologyAction(self.m * other.m)

    @property
    def is_identity(self) -> bool:
        return self.m == IDENTITY

    @property
    def fixes_beta(self) -> bool:
        """True when the action is +-(h-)^k, i.e. maps beta to +-beta."""
        m = self.m
        return m.b == 0 and m.a == 1 and m.d == 1

    @property
    def h_minus_exponent(self) -> int | None:
        return self.m.c if self.fixes_beta else None

    def __str__(self):
        return f"+-{self.m}"

    def __repr__(self):
        return f"HomologyAction({self.m!r})"


@dataclass(frozen=True)
class ActionTrace:
    start: TorusPoint
    word: GenWord
    points: tuple[TorusPoint, ...]
    final: TorusPoint
    action: HomologyAction


def _wrap(t: int, half: int, full: int) -> int:
    return (t + half) % full - half


def _trace_rational_core(ix, iy, full, word, collect):
    half = full // 2
    a, b, c, d = 1, 0, 0, 1
    pts = [] if collect else None
    for gen, exp in word.syllables:
        if gen == "h+":
            for _ in range(exp):
                ix = (ix - iy + half) % full - half
                if -half <= ix + iy < half:
                    b, d = a + b, c + d  # right-multiply by h+
                else:
                    b, d = b - a, d - c  # ... by (h+)^-1
                if collect:
                    pts.append((ix, iy))
        else:
            for _ in range(exp):
                iy = (iy - ix + half) % full - half
                if -half <= ix + iy < half:
                    a, c = a + b, c + d  # right-multiply by h-
                else:
                    a, c = a - b, c - d  # ... by (h-)^-1
                if collect:
                    pts.append((ix, iy))
    return ix, iy, (a, b, c, d), pts


def _trace_quadratic_core(x, y, word, collect):
    a, b, c, d = 1, 0, 0, 1
    pts = [] if collect else None
    lo, hi = ExactScalar(-1, 0, 2), ExactScalar(1, 0, 2)
    for gen, exp in word.syllables:
        if gen == "h+":
            for _ in range(exp):
                x = mod_half_open(x - y)
                if lo <= x + y < hi:
                    b, d = a + b, c + d
                else:
                    b, d = b - a, d - c
                if collect:
                    pts.append((x, y))
        else:
            for _ in range(exp):
                y = mod_half_open(y - x)
                if lo <= x + y < hi:
                    a, c = a + b, c + d
                else:
                    a, c = a - b, c - d
                if collect:
                    pts.append((x, y))
    return x, y, (a, b, c, d), pts


def trace_word(z: TorusPoint, word: GenWord, record_points: bool = True) -> ActionTrace:
    """Trace a word through elementary inverse steps from ``z``.

    The returned trace ends at ``word^-1 z`` and carries the homology
    action of ``word`` evaluated there, as the ordered product of
    per-step factors at the post-step points.
    """
    if z.is_rational:
        fx, fy = z.as_fractions()
        full = lcm(fx.denominator, fy.denominator, 2)
        ix = fx.numerator * (full // fx.denominator)
        iy = fy.numerator * (full // fy.denominator)
        ix, iy, mat, pts = _trace_rational_core(ix, iy, full, word, record_points)
        final = TorusPoint.of(Fraction(ix, full), Fraction(iy, full))
        points = tuple(
            TorusPoint.of(Fraction(px, full), Fraction(py, full)) for px, py in (pts or ())
        )
    else:
        x, y, mat, pts = _trace_quadratic_core(z.x, z.y, word, record_points)
        final = TorusPoint(x, y)
        points = tuple(TorusPoint(px, py) for px, py in (pts or ()))
    action = HomologyAction(IntMat2(*mat))
    return ActionTrace(start=z, word=word, points=points, final=final, action=action)


def m_sequence(z: TorusPoint, gen: str, n_max: int) -> list[int]:
    """m_1, ..., m_{n_max}: running sum of +-1 per step, +1 when the
    post-step point lies in S."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    out = []
    m = 0
    cur = z
    for _ in range(n_max):
        cur = apply_generator_inverse(cur, gen)
        m += 1 if in_region_S(cur) else -1
        out.append(m)
    return out


def involution_theta(z: TorusPoint) -> TorusPoint:
    return TorusPoint(z.y, z.x)


def involution_theta_action() -> HomologyAction:
    return HomologyAction(THETA)


def involution_minus_id(z: TorusPoint) -> TorusPoint:
    return TorusPoint(mod_half_open(-z.x), mod_half_open(-z.y))

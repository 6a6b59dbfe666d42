"""Exact scalars in a real quadratic field.

An :class:`ExactScalar` represents ``(u + v*sqrt(D)) / w`` with integer
``u, v``, positive integer ``w`` and squarefree ``D >= 0``.  With ``v = 0``
this is an ordinary rational, so the class covers every coordinate the
rest of the package needs: torus coordinates, slit lengths, window
endpoints and the epsilon margins of the block searches.  All
comparisons, signs and floors are computed exactly -- there is no
floating point anywhere on this path.

Scalars with different radicands can be combined only when at least one
of them is rational; anything else raises :class:`FieldMismatchError`.
Values are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class FieldMismatchError(ValueError):
    """Raised when combining irrationals from different quadratic fields."""


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(d0, f)`` with ``d = f*f*d0`` and ``d0`` squarefree."""
    if d < 0:
        raise ValueError("radicand must be non-negative")
    d0, f = d, 1
    p = 2
    while p * p <= d0:
        while d0 % (p * p) == 0:
            d0 //= p * p
            f *= p
        p += 1 if p == 2 else 2
    return d0, f


def _gcd3(a: int, b: int, c: int) -> int:
    from math import gcd

    return gcd(gcd(abs(a), abs(b)), abs(c))


class ExactScalar:
    __slots__ = ("u", "v", "w", "D")

    def __init__(self, u, v: int = 0, w: int = 1, D: int = 0):
        if isinstance(u, ExactScalar) and v == 0 and w == 1 and D == 0:
            u, v, w, D = u.u, u.v, u.w, u.D
        elif isinstance(u, Fraction) and v == 0 and w == 1 and D == 0:
            u, v, w, D = u.numerator, 0, u.denominator, 0
        u, v, w, D = int(u), int(v), int(w), int(D)
        if w == 0:
            raise ZeroDivisionError("denominator w must be nonzero")
        if w < 0:
            u, v, w = -u, -v, -w
        if v != 0:
            D, f = _squarefree_split(D)
            v *= f
        if v == 0 or D == 0:
            v, D = 0, 0
        if D == 1:  # sqrt(1) folds into the rational part
            u, v, D = u + v, 0, 0
        g = _gcd3(u, v, w)
        if g > 1:
            u, v, w = u // g, v // g, w // g
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "D", D)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("ExactScalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_fraction(cls, q) -> "ExactScalar":
        q = Fraction(q)
        return cls(q.numerator, 0, q.denominator, 0)

    @classmethod
    def sqrt(cls, D: int) -> "ExactScalar":
        return cls(0, 1, 1, D)

    # -- queries ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    @property
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def as_fraction(self) -> Fraction:
        if self.v != 0:
            raise ValueError(f"{self!r} is irrational")
        return Fraction(self.u, self.w)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.u, self.v, self.w, self.D)

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}."""
        u, v, D = self.u, self.v, self.D
        if v == 0:
            return (u > 0) - (u < 0)
        if u == 0:
            return 1 if v > 0 else -1
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        # opposite signs: compare u^2 against v^2 D (equality impossible
        # for squarefree D >= 2, kept for safety)
        uu, vv = u * u, v * v * D
        if u > 0:
            return 1 if uu > vv else (-1 if uu < vv else 0)
        return 1 if vv > uu else (-1 if vv < uu else 0)

    # -- coercion -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, int):
            return ExactScalar(other)
        if isinstance(other, Fraction):
            return ExactScalar.from_fraction(other)
        return None

    def _join_D(self, other: "ExactScalar") -> int:
        if self.v == 0:
            return other.D
        if other.v == 0:
            return self.D
        if self.D != other.D:
            raise FieldMismatchError(
                f"cannot combine sqrt({self.D}) with sqrt({other.D})"
            )
        return self.D

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = self._join_D(o)
        return ExactScalar(
            self.u * o.w + o.u * self.w,
            self.v * o.w + o.v * self.w,
            self.w * o.w,
            D,
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.u, -self.v, self.w, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = self._join_D(o)
        return ExactScalar(
            self.u * o.u + self.v * o.v * D,
            self.u * o.v + self.v * o.u,
            self.w * o.w,
            D,
        )

    __rmul__ = __mul__

    def _inverse(self) -> "ExactScalar":
        if self.is_zero:
            raise ZeroDivisionError("division by zero ExactScalar")
        # w / (u + v sqrt(D)) = w (u - v sqrt(D)) / (u^2 - v^2 D)
        n = self.u * self.u - self.v * self.v * self.D
        return ExactScalar(self.w * self.u, -self.w * self.v, n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._join_D(o)
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self._inverse()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.as_tuple() == o.as_tuple()

    def __hash__(self):
        if self.v == 0:
            return hash(Fraction(self.u, self.w))
        return hash(self.as_tuple())

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) >= 0

    # -- rounding -----------------------------------------------------

    def __floor__(self) -> int:
        if self.v == 0:
            return self.u // self.w
        s = isqrt(self.v * self.v * self.D)  # floor |v| sqrt(D)
        if self.v > 0:
            n = (self.u + s) // self.w
        else:
            n = (self.u - s - 1) // self.w
        # correct the integer estimate with exact comparisons
        while self._cmp(ExactScalar(n)) < 0:
            n -= 1
        while self._cmp(ExactScalar(n + 1)) >= 0:
            n += 1
        return n

    def enclosure(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value, width <= 2**(1-bits)."""
        if self.v == 0:
            q = Fraction(self.u, self.w)
            return (q, q)
        scale = 1 << bits
        s = isqrt(self.v * self.v * self.D * scale * scale)
        lo = Fraction(self.u * scale + s, self.w * scale)
        hi = Fraction(self.u * scale + s + 1, self.w * scale)
        if self.v < 0:
            lo, hi = Fraction(self.u * scale - s - 1, self.w * scale), Fraction(
                self.u * scale - s, self.w * scale
            )
        return (lo, hi)

    def __float__(self) -> float:
        lo, hi = self.enclosure(80)
        return float((lo + hi) / 2)

    # -- display ------------------------------------------------------

    def __repr__(self):
        return f"ExactScalar({self.u}, {self.v}, {self.w}, {self.D})"

    def __str__(self):
        if self.v == 0:
            return str(Fraction(self.u, self.w))
        core = f"{self.u}+{self.v}*sqrt({self.D})" if self.v >= 0 else f"{self.u}{self.v}*sqrt({self.D})"
        if self.w == 1:
            return f"({core})"
        return f"({core})/{self.w}"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
HALF = ExactScalar(1, 0, 2)
MINUS_HALF = ExactScalar(-1, 0, 2)


def scalar(value) -> ExactScalar:
    """Coerce int / Fraction / ExactScalar to ExactScalar."""
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, int):
        return ExactScalar(value)
    if isinstance(value, Fraction):
        return ExactScalar.from_fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to ExactScalar")


def parse_scalar(text: str) -> ExactScalar:
    """Parse ``p/q`` or ``u:v:w:D`` (meaning ``(u+v*sqrt(D))/w``)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"expected u:v:w:D, got {text!r}")
        u, v, w, D = (int(p) for p in parts)
        return ExactScalar(u, v, w, D)
    return ExactScalar.from_fraction(Fraction(text))


def mod_half_open(x) -> ExactScalar:
    """Unique representative of ``x`` mod 1 in ``[-1/2, 1/2)``."""
    x = scalar(x)
    n = (x + HALF).__floor__()
    if n == 0:
        return x
    return x - ExactScalar(n)

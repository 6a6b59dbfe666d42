"""Direction blocks and fixing words for rational surface parameters.

For a parameter ``z = (r/2q, s/2q)`` with ``|r|, |s| < q``, ``s != 0``
coprime to ``q``, the seven-digit block

    odd case  (s or r odd):   (2q+b, 1, 1, 2q+a+b, 1, 1, a)
    even case (s, r even):    (2q+a, b-1, b+1, 2q+2a, b-1, b+1, a)

spells an alternating h+-leading word g_z that fixes both the surface
M(z) and, up to sign, the homology class beta.  The exponents a, b are
the unique solutions of small congruences; we find them by brute scan,
which doubles as an existence/uniqueness check.  Certification never
trusts the construction: the word is traced step by step and the
certificate records whether the endpoint returns to z and the traced
action is +-identity.

For the barrier picture itself z = (0, lambda) with lambda = p/2q, the
odd case reduces to a = q, b = q-1, i.e. the block
(3q-1, 1, 1, 4q-1, 1, 1, q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .directions import BlockRecord, DigitStreamExhaustedError, DirectionSpec
from .torus import TorusPoint, trace_word
from .words import GenWord


@dataclass(frozen=True)
class RationalParam:
    """z = (r/2q, s/2q) with |r|, |s| < q, s nonzero and coprime to q."""

    r: int
    s: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        if not (abs(self.r) < self.q and abs(self.s) < self.q):
            raise ValueError("need |r| < q and |s| < q")
        if self.s == 0:
            raise ValueError("s must be nonzero")
        if gcd(self.s, self.q) != 1:
            raise ValueError("s must be coprime with q")

    @classmethod
    def from_barrier_length(cls, lam: Fraction) -> "RationalParam":
        """The billiard case z = (0, lambda) for lambda = p/2q in (0, 1/2)."""
        lam = Fraction(lam)
        if not 0 < lam < Fraction(1, 2):
            raise ValueError("barrier length ratio must lie in (0, 1/2)")
        n, d = lam.numerator, lam.denominator
        if d % 2 == 0:
            p, q = n, d // 2
        else:
            p, q = 2 * n, d
        return cls(0, p, q)

    @property
    def parity_case(self) -> str:
        return "odd" if (self.r % 2 or self.s % 2) else "even"

    def point(self) -> TorusPoint:
        return TorusPoint.of(Fraction(self.r, 2 * self.q), Fraction(self.s, 2 * self.q))

    def reduced(self) -> "RationalParam":
        """The sign-normalized parameter with s > 0 (via the point -z)."""
        if self.s > 0:
            return self
        return RationalParam(-self.r, -self.s, self.q)


@dataclass(frozen=True)
class CongruencePair:
    """Block exponents.

    Odd case: single pair (a, b); ``a2`` is None.
    Even case: ``b = |s|`` plus two shear exponents, ``a`` entering as
    the rightmost syllable (a s = q-1-r mod 2q) and ``a2`` inside
    (a2 s = q-1+r mod 2q); they coincide exactly when r = 0, which is
    the only case the single-exponent textbook form covers.
    """

    a: int
    b: int
    parity_case: str
    a2: int | None = None


class CongruenceError(RuntimeError):
    """No (or no unique) solution in range; impossible for valid input."""


def solve_congruences(param: RationalParam) -> CongruencePair:
    """Brute-scan the defining congruences for the block exponents.

    Odd case:  0 < a, b <= 2q,  r + a s = -q (mod 2q),  b s + s - q = r (mod 2q).
    Even case: b = |s|,  a s = q-1-r (mod 2q),  a2 s = q-1+r (mod 2q).

    The scan doubles as an existence/multiplicity check.  The solution
    is unique except when s is even (then gcd(s, 2q) = 2 gives exactly
    two solutions in range); the smallest is taken, and any other
    multiplicity than gcd(s, 2q) is an internal error.
    """
    param = param.reduced()
    r, s, q = param.r, param.s, param.q
    mod = 2 * q
    expected = gcd(abs(s), mod)
    if param.parity_case == "odd":
        sols_a = [a for a in range(1, mod + 1) if (r + a * s + q) % mod == 0]
        sols_b = [b for b in range(1, mod + 1) if (b * s + s - q - r) % mod == 0]
        if len(sols_a) != expected or len(sols_b) != expected:
            raise CongruenceError(
                f"odd-case congruences for {param} gave {sols_a}, {sols_b}"
            )
        return CongruencePair(sols_a[0], sols_b[0], "odd")
    sols_a = [a for a in range(1, mod + 1) if (a * s - (q - 1 - r)) % mod == 0]
    sols_a2 = [a for a in range(1, mod + 1) if (a * s - (q - 1 + r)) % mod == 0]
    if len(sols_a) != expected or len(sols_a2) != expected:
        raise CongruenceError(
            f"even-case congruences for {param} gave {sols_a}, {sols_a2}"
        )
    return CongruencePair(sols_a[0], abs(s), "even", sols_a2[0])


@dataclass(frozen=True)
class Block:
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != 7:
            raise ValueError("block must have 7 digits")
        if any(d < 1 for d in self.digits):
            raise ValueError("block digits must be positive")


def block_for(param: RationalParam) -> Block:
    param = param.reduced()
    pair = solve_congruences(param)
    q, a, b = param.q, pair.a, pair.b
    if pair.parity_case == "odd":
        return Block((2 * q + b, 1, 1, 2 * q + a + b, 1, 1, a))
    a2 = pair.a2
    return Block((2 * q + a2, b - 1, b + 1, 2 * q + a + a2, b - 1, b + 1, a))


def fixing_word(param: RationalParam) -> GenWord:
    """The alternating 7-syllable word with the block digits as exponents."""
    return GenWord.from_digits(block_for(param).digits)


@dataclass(frozen=True)
class FixingCertificate:
    fixes_point: bool
    action_is_identity: bool
    h_minus_period: int

    @property
    def ok(self) -> bool:
        return self.fixes_point and self.action_is_identity


def certify_fixing(param: RationalParam) -> FixingCertificate:
    """Trace the fixing word at z and report what it actually does.

    Never raises on failure; a failing certificate is the caller's
    acceptance gate.  The h- period is 1 when r = 0 (the height is then
    invariant under every power) and 2q otherwise; the returned period
    is itself re-verified by a trace.
    """
    z = param.point()
    word = fixing_word(param)
    tr = trace_word(z, word, record_points=False)
    period = 1 if param.r == 0 else 2 * param.q
    tr_h = trace_word(z, GenWord.power("h-", period), record_points=False)
    period_ok = tr_h.final == z and tr_h.action.fixes_beta
    return FixingCertificate(
        fixes_point=(tr.final == z) and period_ok,
        action_is_identity=tr.action.is_identity,
        h_minus_period=period,
    )


class NkRuleError(ValueError):
    """A free digit violates the 2q-multiple constraint."""


@dataclass(frozen=True)
class NkRule:
    """Rule for the free digits n_k: constant, arithmetic (b*k + c), or list."""

    kind: str  # "const" | "arith" | "list"
    params: tuple[int, ...]

    def value(self, k: int) -> int:
        if self.kind == "const":
            return self.params[0]
        if self.kind == "arith":
            b, c = self.params
            return b * k + c
        if self.kind == "list":
            if k > len(self.params):
                raise DigitStreamExhaustedError(
                    f"n_k list has only {len(self.params)} entries"
                )
            return self.params[k - 1]
        raise ValueError(f"unknown n_k rule {self.kind!r}")

    def validate(self) -> None:
        if self.kind == "const":
            if len(self.params) != 1 or self.params[0] < 1:
                raise ValueError("const rule needs one positive value")
        elif self.kind == "arith":
            if len(self.params) != 2:
                raise ValueError("arith rule needs (b, c)")
            b, c = self.params
            if b < 1 or c < 0 or b + c < 1:
                raise ValueError("arith rule must produce positive values")
        elif self.kind == "list":
            if not self.params or any(v < 1 for v in self.params):
                raise ValueError("list rule needs positive values")
        else:
            raise ValueError(f"unknown n_k rule {self.kind!r}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "NkRule":
        return cls(d["kind"], tuple(int(v) for v in d["params"]))



def _rational_blocks(param: RationalParam, nk: NkRule) -> Iterator[BlockRecord]:
    block = block_for(param).digits
    z = param.point()
    modulus = 1 if param.r == 0 else 2 * param.q
    k = 1
    while True:
        n_k = nk.value(k)
        if n_k < 1:
            raise NkRuleError(f"n_{k} = {n_k} is not positive")
        if n_k % modulus != 0:
            raise NkRuleError(
                f"n_{k} = {n_k} must be a positive multiple of {modulus} (r != 0)"
            )
        yield BlockRecord(
            index=k,
            digits=block + (n_k,),
            endpoint=z,
            meta={"n_k": n_k},
        )
        k += 1


def direction_stream(param: RationalParam, nk: NkRule) -> DirectionSpec:
    """Assemble the lazily repeating digit stream [0; B(z), n_1, B(z), n_2, ...].

    Construction fails closed: the fixing certificate is re-run here and
    a failure aborts the stream (downstream hypothesis checks would be
    meaningless without it).  For s < 0 the parameter is reduced to -z
    first and all checkpoints refer to the reduced surface point.
    """
    nk.validate()
    reduced = param.reduced()
    cert = certify_fixing(reduced)
    if not cert.ok:
        raise RuntimeError(f"fixing certificate failed for {reduced}: {cert}")
    # eager constraint check for closed-form rules
    modulus = 1 if reduced.r == 0 else 2 * reduced.q
    if modulus > 1:
        if nk.kind == "const" and nk.params[0] % modulus != 0:
            raise NkRuleError(f"constant n_k = {nk.params[0]} not a multiple of {modulus}")
        if nk.kind == "list" and any(v % modulus != 0 for v in nk.params):
            raise NkRuleError(f"n_k list contains a non-multiple of {modulus}")
    y = Fraction(reduced.s, 2 * reduced.q)
    provenance = {
        "type": "rational",
        "r": param.r,
        "s": param.s,
        "q": param.q,
        "reduced": reduced != param,
        "nk_rule": nk.as_dict(),
    }
    return DirectionSpec(
        z0=reduced.point(),
        y_bounds=(y, y),
        provenance=provenance,
        block_source=_rational_blocks(reduced, nk),
    )

import random
from fractions import Fraction
from math import floor

import mpmath
import pytest

from slittori.exact import ExactScalar, FieldMismatchError, mod_half_open, parse_scalar


def mp_value(s: ExactScalar):
    mpmath.mp.dps = 100
    return (mpmath.mpf(s.u) + mpmath.mpf(s.v) * mpmath.sqrt(s.D)) / s.w


def test_half_plus_half_sqrt2():
    a = ExactScalar(1, 0, 2)
    b = ExactScalar(0, 1, 2, 2)
    c = a + b
    assert c == ExactScalar(1, 1, 2, 2)
    assert c.sign() == 1


def test_sign_one_minus_sqrt2_negative():
    assert (ExactScalar(1) - ExactScalar.sqrt(2)).sign() == -1


def test_floor_sqrt2():
    assert floor(ExactScalar.sqrt(2)) == 1


def test_mod_half_open_examples():
    assert mod_half_open(Fraction(-3, 4)) == ExactScalar(1, 0, 4)
    assert mod_half_open(Fraction(1, 2)) == ExactScalar(-1, 0, 2)
    assert mod_half_open(ExactScalar.sqrt(2)) == ExactScalar(-1, 1, 1, 2)


def test_mod_half_open_properties():
    rng = random.Random(7)
    for _ in range(300):
        x = ExactScalar(rng.randint(-40, 40), rng.randint(-6, 6), rng.randint(1, 9), 5)
        m = mod_half_open(x)
        assert ExactScalar(-1, 0, 2) <= m < ExactScalar(1, 0, 2)
        diff = x - m
        assert diff.is_rational and diff.as_fraction().denominator == 1


def test_normalization():
    assert ExactScalar(2, 0, 4).as_tuple() == (1, 0, 2, 0)
    assert ExactScalar(0, 1, 1, 8).as_tuple() == (0, 2, 1, 2)  # sqrt(8) = 2 sqrt(2)
    assert ExactScalar(3, 2, 1, 1).as_tuple() == (5, 0, 1, 0)  # sqrt(1) folds
    assert ExactScalar(1, 1, -2, 2).as_tuple() == (-1, -1, 2, 2)
    assert ExactScalar(0, 5, 10, 0).as_tuple() == (0, 0, 1, 0)  # D=0 forces v=0


def test_round_trip_add_sub():
    rng = random.Random(11)
    for _ in range(500):
        a = ExactScalar(rng.randint(-30, 30), rng.randint(-9, 9), rng.randint(1, 12), 3)
        b = ExactScalar(rng.randint(-30, 30), rng.randint(-9, 9), rng.randint(1, 12), 3)
        assert (a + b) - b == a
        if not b.is_zero:
            assert (a / b) * b == a


def test_order_against_mpmath():
    rng = random.Random(13)
    for _ in range(400):
        D = rng.choice([2, 3, 5, 7])
        a = ExactScalar(rng.randint(-50, 50), rng.randint(-9, 9), rng.randint(1, 15), D)
        b = ExactScalar(rng.randint(-50, 50), rng.randint(-9, 9), rng.randint(1, 15), D)
        if a == b:
            assert abs(mp_value(a) - mp_value(b)) < mpmath.mpf(10) ** -80
            continue
        assert (a < b) == (mp_value(a) < mp_value(b))


def test_floor_against_mpmath():
    rng = random.Random(17)
    for _ in range(400):
        D = rng.choice([2, 3, 5])
        a = ExactScalar(rng.randint(-200, 200), rng.randint(-30, 30), rng.randint(1, 9), D)
        assert floor(a) == int(mpmath.floor(mp_value(a)))


def test_mixed_field_rejected():
    with pytest.raises(FieldMismatchError):
        ExactScalar.sqrt(2) + ExactScalar.sqrt(3)
    # rational operand is fine with any D
    assert ExactScalar.sqrt(2) + ExactScalar(1) == ExactScalar(1, 1, 1, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ExactScalar(1) / ExactScalar(0)


def test_enclosure_width_and_containment():
    x = ExactScalar(3, -2, 7, 5)
    lo, hi = x.enclosure(80)
    assert hi - lo <= Fraction(1, 2**79)
    v = mp_value(x)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= v <= mpmath.mpf(hi.numerator) / hi.denominator


def test_parse_scalar():
    assert parse_scalar("3/4") == ExactScalar(3, 0, 4)
    assert parse_scalar("0:1:4:2") == ExactScalar(0, 1, 4, 2)
    with pytest.raises(ValueError):
        parse_scalar("1:2:3")


def test_comparisons_with_fraction_and_int():
    s = ExactScalar.sqrt(2)
    assert s > 1
    assert s < Fraction(3, 2)
    assert Fraction(3, 2) > s  # reflected
    assert s >= ExactScalar(0, 1, 1, 2)


def test_hash_consistent_with_eq():
    assert hash(ExactScalar(2, 0, 4)) == hash(Fraction(1, 2))
    assert len({ExactScalar(1, 1, 2, 2), ExactScalar(1, 1, 2, 2)}) == 1

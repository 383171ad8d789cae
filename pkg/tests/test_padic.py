import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hcpadic.padic import (
    Ball,
    DomainError,
    HenselError,
    Kind,
    PadicError,
    PadicNumber,
    PrecisionError,
    exp_p,
    from_rational,
    hensel_lift,
    in_Ep,
    is_quadratic_residue,
    is_unit,
    log_p,
    parse_rational,
    sqrt,
    sqrt_branch,
    tonelli_shanks,
    valuation,
)

PRIMES = [2, 3, 5, 7, 13]


def q(x, p, prec=64):
    x = Fraction(x)
    return from_rational(x.numerator, x.denominator, p, prec)


def fraction_mod(x: Fraction, p: int, e: int) -> int:
    """x mod p**e for x in Z_(p), via integer inverse."""
    return x.numerator * pow(x.denominator, -1, p**e) % p**e


# -- construction and norm ----------------------------------------------------


def test_from_rational_power_of_p():
    x = from_rational(8, 1, 2, 8)
    assert (x.val, x.unit, x.kind) == (3, 1, Kind.NONZERO)


def test_from_rational_capped_unit():
    x = from_rational(91, 16, 5, 4)
    assert x.val == 0 and x.prec == 4
    assert x.unit == 91 * pow(16, -1, 625) % 625


def test_from_rational_zero_and_bad_denominator():
    assert from_rational(0, 7, 5, 4).kind is Kind.EXACT_ZERO
    with pytest.raises(ZeroDivisionError):
        from_rational(1, 0, 5, 4)


def test_norms():
    assert q(8, 2).norm() == Fraction(1, 8)
    assert q(Fraction(9, 25), 5).norm() == 25
    assert PadicNumber.exact_zero(5).norm() == 0
    bound, is_bound = PadicNumber.zero_to(5, 10).norm_bound()
    assert bound == Fraction(1, 5**10) and is_bound


def test_digits_canonical():
    x = q(Fraction(91, 16), 5, 6)
    d = x.digits()
    assert len(d) == 6 and d[0] > 0 and all(0 <= v < 5 for v in d)
    assert sum(v * 5**j for j, v in enumerate(d)) == fraction_mod(Fraction(91, 16), 5, 6)


def test_parse_rational():
    assert parse_rational(" -24/1 ") == -24
    assert parse_rational("91/16") == Fraction(91, 16)
    assert parse_rational("7") == 7


# -- arithmetic and precision -----------------------------------------------


def test_add_identity_and_strong_triangle():
    x = q(Fraction(2, 3), 5)
    assert (x + PadicNumber.exact_zero(5)).same_as(x)
    a, b = q(5, 5), q(25, 5)
    assert (a - b).norm() == Fraction(1, 5)


def test_reciprocal_pair():
    prod = from_rational(-3, 2, 5, 8) * from_rational(-2, 3, 5, 8)
    assert prod == 1
    assert prod.prec == 8


def test_mul_precision_is_min():
    x = q(Fraction(1, 3), 7, 10)
    y = q(Fraction(2, 3), 7, 20)
    assert (x * y).prec == 10
    assert (x / y).prec == 10


def test_cancellation_lowers_precision():
    x = q(Fraction(1, 3), 5, 10)
    y = x + 5**4
    d = y - x
    assert d.val == 4 and d.abs_prec == 10


def test_full_cancellation_is_zero_to_precision():
    x = q(Fraction(1, 3), 5, 10)
    d = x - x
    assert d.kind is Kind.ZERO_TO_PRECISION and d.abs_prec == 10
    exact = q(7, 5) - q(7, 5)
    assert exact.kind is Kind.EXACT_ZERO


def test_division_by_zero_like():
    with pytest.raises(ZeroDivisionError):
        q(1, 5) / PadicNumber.exact_zero(5)
    with pytest.raises(ZeroDivisionError):
        q(1, 5) / PadicNumber.zero_to(5, 3)


def test_prime_mismatch():
    with pytest.raises(PadicError):
        q(1, 5) + q(1, 7)


def test_equality_is_zero_to_precision_and_unhashable():
    x = q(Fraction(1, 3), 5, 10)
    assert x == x.truncate(5)
    assert not x.same_as(x.truncate(5))
    with pytest.raises(TypeError):
        hash(x)


def test_exact_values_stay_exact():
    x = q(12, 5) * q(Fraction(3, 25), 5) - 1
    assert x.exact
    assert x.to_fraction() == Fraction(36, 25) - 1


def test_negative_powers():
    x = q(Fraction(2, 3), 7)
    assert x**-2 * x**2 == 1


def test_json_round_trip():
    for x in (q(Fraction(91, 16), 5), q(8, 2), PadicNumber.exact_zero(3), PadicNumber.zero_to(7, 5)):
        y = PadicNumber.from_json(x.to_json())
        assert y.same_as(x)


# -- hypothesis properties --------------------------------------------------

prime = st.sampled_from(PRIMES)
small_int = st.integers(min_value=-10**6, max_value=10**6)


def p_free_fraction(p):
    """Rationals whose denominator is prime to p, so they are p-adic integers."""
    return st.builds(
        lambda n, d: Fraction(n, d * p + 1 if d * p + 1 != 0 else 1),
        small_int,
        st.integers(min_value=0, max_value=1000),
    )


@given(prime, st.data())
def test_field_operations_match_rationals(p, data):
    a = data.draw(p_free_fraction(p))
    b = data.draw(p_free_fraction(p))
    assume(a != 0 and b != 0)
    N = 30
    x, y = q(a, p, N), q(b, p, N)
    for got, want in ((x + y, a + b), (x - y, a - b), (x * y, a * b), (x / y, a / b)):
        if want == 0:
            assert got.is_zero()
            continue
        ref = q(want, p, N)
        assert got == ref


@given(prime, st.data())
def test_norm_is_multiplicative_and_ultrametric(p, data):
    a = data.draw(st.fractions().filter(lambda f: f != 0 and abs(f.denominator) < 10**6))
    b = data.draw(st.fractions().filter(lambda f: f != 0 and abs(f.denominator) < 10**6))
    x, y = q(a, p), q(b, p)
    assert (x * y).norm() == x.norm() * y.norm()
    s = x + y
    if not s.is_zero():
        assert s.norm() <= max(x.norm(), y.norm())
        if x.norm() != y.norm():
            assert s.norm() == max(x.norm(), y.norm())


@given(prime, st.fractions().filter(lambda f: f != 0 and abs(f.denominator) < 10**9))
def test_digit_round_trip(p, a):
    N = 20
    x = q(a, p, N)
    total = sum(d * p**j for j, d in enumerate(x.digits()))
    expected = fraction_mod(a / Fraction(p) ** x.val, p, N)
    assert total % p**N == expected


@settings(max_examples=60)
@given(prime, st.data())
def test_precision_soundness_at_double_precision(p, data):
    """Working at 2N and truncating to N gives the N-digit answer exactly."""
    a = data.draw(p_free_fraction(p).filter(lambda f: f != 0))
    b = data.draw(p_free_fraction(p).filter(lambda f: f != 0))
    assume(a + b != 0)
    N = 16
    ops = [lambda u, v: u * v, lambda u, v: u / v, lambda u, v: u + v, lambda u, v: u - v]
    lo = [q(a + Fraction(1, 3 * p + 1), p, N), q(b + Fraction(2, 5 * p + 1), p, N)]
    hi = [q(a + Fraction(1, 3 * p + 1), p, 2 * N), q(b + Fraction(2, 5 * p + 1), p, 2 * N)]
    for op in ops:
        small, big = op(*lo), op(*hi)
        if small.is_zero():
            continue
        assert big.truncate(small.prec).same_as(small)


# -- square roots -------------------------------------------------------------


def test_sqrt_examples():
    r = sqrt(q(4, 5))
    assert r is not None and {r[0].to_fraction(), r[1].to_fraction()} == {2, -2}
    assert sqrt(q(2, 5)) is None
    assert sqrt(q(17, 2)) is not None
    r = sqrt(q(6, 5))
    assert any(x.residue(3) == 16 for x in r)


def test_sqrt_odd_valuation_and_zero():
    assert sqrt(q(5, 5)) is None
    z = PadicNumber.exact_zero(5)
    assert sqrt(z)[0].kind is Kind.EXACT_ZERO
    with pytest.raises(PrecisionError):
        sqrt(PadicNumber.zero_to(5, 4))


def test_sqrt_two_adic_loses_one_digit():
    a = q(Fraction(17, 9), 2, 20)
    roots = sqrt(a)
    assert roots is not None and roots[0].prec == 19
    assert (roots[0] * roots[0] - a).is_zero()


@pytest.mark.parametrize("p", PRIMES)
def test_sqrt_matches_brute_force_small_units(p):
    e = 5 if p == 2 else 3
    mod = p**e
    squares = {y * y % mod for y in range(mod) if y % p}
    for u in range(1, mod):
        if u % p == 0:
            continue
        a = q(u, p)
        roots = sqrt(a)
        assert (roots is not None) == (u in squares), u
        if roots:
            assert (roots[0] * roots[0] - a).is_zero()


def test_sqrt_branch_by_residue():
    r = sqrt_branch(q(Fraction(91, 16), 5), 1)
    assert r.residue() == 1
    with pytest.raises(DomainError):
        sqrt_branch(q(4, 5), 1)


def test_quadratic_residues_and_tonelli():
    assert is_quadratic_residue(4, 5)
    assert not is_quadratic_residue(2, 5)
    assert all(is_quadratic_residue(1, p) for p in (3, 5, 7, 13))
    with pytest.raises(ValueError):
        is_quadratic_residue(10, 5)
    for p in (13, 17, 41):
        for a in range(1, p):
            r = tonelli_shanks(a, p)
            assert (r is not None) == is_quadratic_residue(a, p)
            if r is not None:
                assert r * r % p == a


# -- Hensel -----------------------------------------------------------------------


def test_hensel_examples():
    root = hensel_lift([-6, 0, 1], 1, p=5)
    assert root.residue(2) == 16
    assert (root * root - 6).is_zero()
    lam = q(1, 5)
    exact = hensel_lift([-lam, -2 * lam, -lam, 4], 1, p=5)
    assert exact.same_as(PadicNumber.one(5)) and exact.exact
    with pytest.raises(HenselError):
        hensel_lift([-2, 0, 1], 1, p=5)


def test_hensel_strengthened_condition_two_adic():
    # t^2 = 17: F'(1) = 2 has valuation 1, F(1) = -16 has valuation 4 > 2
    root = hensel_lift([-17, 0, 1], 1, p=2, prec=40)
    assert (root * root - 17).is_zero()
    assert root.abs_prec >= 38


def test_hensel_precision_follows_coefficients():
    c = q(Fraction(-6, 11), 5, 20)
    root = hensel_lift([c, 0, 1], 1, p=5)
    assert root.prec == 20
    assert (root * root + c).is_zero()


# -- log / exp ---------------------------------------------------------------------


def test_log_exp_examples():
    assert log_p(PadicNumber.one(5)).kind is Kind.EXACT_ZERO
    assert exp_p(PadicNumber.exact_zero(5)).same_as(PadicNumber.one(5))
    assert log_p(exp_p(q(5, 5))) == 5
    x = q(25, 5)
    assert exp_p(log_p(1 + x)) == 1 + x


def test_log_exp_domains():
    with pytest.raises(DomainError):
        log_p(q(2, 5))
    with pytest.raises(DomainError):
        exp_p(q(2, 2))
    with pytest.raises(DomainError):
        exp_p(q(1, 5))


def test_exp_norm_identity_p3():
    rng = random.Random(3)
    for _ in range(20):
        x = PadicNumber(3, 2, rng.choice([1, 2]) + 3 * rng.randrange(3**30), 40)
        assert (exp_p(x) - 1).norm() == x.norm()


def test_log_is_additive():
    p = 7
    a, b = q(1 + 7 * Fraction(2, 3), p), q(1 + 49 * Fraction(5, 2), p)
    assert log_p(a * b) == log_p(a) + log_p(b)


# -- sets ------------------------------------------------------------------------------


def test_in_Ep():
    assert all(in_Ep(PadicNumber.one(p)) for p in PRIMES)
    assert in_Ep(q(-24, 5))
    assert not in_Ep(q(2, 5))
    assert not in_Ep(q(3, 2))
    assert in_Ep(q(5, 2))
    with pytest.raises(PrecisionError):
        in_Ep(PadicNumber.zero_to(5, 0))


def test_units_have_norm_one():
    assert is_unit(q(Fraction(2, 3), 5))
    assert not is_unit(q(5, 5))
    assert not is_unit(q(Fraction(1, 5), 5))


def test_ball_membership():
    b = Ball(q(1, 5), Fraction(1, 5))
    assert b.contains(q(26, 5))
    assert not b.contains(q(6, 5))
    exp_ball = Ball(PadicNumber.exact_zero(2))
    assert exp_ball.contains(q(4, 2)) and not exp_ball.contains(q(2, 2))


def test_valuation_helper():
    assert valuation(200, 5) == 2
    assert valuation(-96, 2) == 5
    assert math.isinf(PadicNumber.exact_zero(3).valuation)

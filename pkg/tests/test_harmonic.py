import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagverify import numkernel as nk
from lagverify.errors import DomainError, RangeError
from lagverify.harmonic import (
    bernoulli,
    h_prime_enclosure,
    harmonic_enclosure,
    harmonic_exact,
    harmonic_real,
    trigamma,
    trigamma_enclosure,
)
from lagverify.numkernel import Order

from oracles import bernoulli_at, harmonic_fraction, to_fraction


def contains_mp(enc, value) -> bool:
    v = to_fraction(value)
    return to_fraction(enc.lo) <= v <= to_fraction(enc.hi)


def test_exact_examples():
    assert harmonic_exact(1) == 1
    assert harmonic_exact(2) == Fraction(3, 2)
    assert harmonic_exact(4) == Fraction(25, 12)


@pytest.mark.parametrize("n", [1, 7, 100, 511, 512, 513, 1500, 3000])
def test_exact_matches_naive_sum(n):
    assert harmonic_exact(n) == harmonic_fraction(n)


@given(st.integers(1, 5000))
def test_exact_telescoping(n):
    assert harmonic_exact(n + 1) - harmonic_exact(n) == Fraction(1, n + 1)


def test_exact_lowest_terms():
    h = harmonic_exact(1000)
    assert math.gcd(h.numerator, h.denominator) == 1


@pytest.mark.parametrize("n", [0, -3, 10**6 + 1])
def test_exact_range(n):
    with pytest.raises(RangeError):
        harmonic_exact(n)


def test_bernoulli_against_independent_algorithm():
    for m in range(0, 60):
        if m == 1:
            continue
        assert bernoulli(m) == bernoulli_at(m), m


def test_enclosure_of_one_is_a_point():
    e = harmonic_enclosure(1, 64)
    assert e.lo == e.hi == 1


def test_enclosure_domain():
    with pytest.raises(DomainError):
        harmonic_enclosure(0, 64)


@given(st.integers(1, 100000), st.sampled_from([53, 64, 128]))
@settings(max_examples=60, deadline=None)
def test_enclosure_contains_exact(n, prec):
    assert harmonic_enclosure(n, prec).contains(harmonic_exact(n))


@pytest.mark.parametrize("n", [1, 2, 3, 10, 55, 1000, 99999, 100000, 100001])
@pytest.mark.parametrize("prec", [64, 256])
def test_crossover_paths_intersect(n, prec):
    a = harmonic_enclosure(n, prec, method="exact")
    b = harmonic_enclosure(n, prec, method="asymptotic")
    assert a.intersects(b)
    assert b.contains(harmonic_exact(n))


def test_huge_n_against_mpmath():
    n = 10**18
    e = harmonic_enclosure(n, 128)
    assert to_fraction(e.width) <= Fraction(1, 2**40)
    with mpmath.workprec(512):
        assert contains_mp(e, mpmath.harmonic(n))


@pytest.mark.parametrize("n", [10**30, 10**300, 10**3000])
def test_astronomical_n(n):
    e = harmonic_enclosure(n, 256)
    with mpmath.workprec(1024):
        assert contains_mp(e, mpmath.harmonic(n))


@given(st.floats(1.0, 1e9), st.sampled_from([64, 128]))
@settings(max_examples=80, deadline=None)
def test_harmonic_real_against_mpmath(x, prec):
    e = harmonic_real(nk.point(Fraction(x), prec), prec)
    with mpmath.workprec(4 * prec):
        assert contains_mp(e, mpmath.harmonic(mpmath.mpf(x)))


@given(st.floats(0.0, 1e8), st.sampled_from([64, 128]))
@settings(max_examples=80, deadline=None)
def test_h_prime_against_mpmath(x, prec):
    e = h_prime_enclosure(nk.point(Fraction(x), prec), prec)
    with mpmath.workprec(4 * prec):
        assert contains_mp(e, mpmath.psi(1, mpmath.mpf(x) + 1))


def test_trigamma_at_one_contains_zeta2():
    e = trigamma_enclosure(nk.point(1, 64), K=10**4)
    with mpmath.workprec(256):
        assert contains_mp(e, mpmath.pi**2 / 6)
    # the certified tail bound is 1/K - 1/(K+1) wide, about 1e-8
    assert to_fraction(e.width) < Fraction(1, 10**7)


def test_trigamma_at_two():
    e = trigamma_enclosure(nk.point(2, 64), K=10**4)
    with mpmath.workprec(256):
        assert contains_mp(e, mpmath.pi**2 / 6 - 1)


def test_trigamma_integral_tail_needs_y_at_least_one():
    with pytest.raises(DomainError):
        trigamma_enclosure(nk.point(Fraction(1, 2), 64), K=10)


@pytest.mark.parametrize("y", [Fraction(1), Fraction(5, 2), Fraction(40)])
def test_trigamma_sandwich(y):
    prev = trigamma_enclosure(nk.point(y, 128), K=1)
    for K in range(2, 60):
        cur = trigamma_enclosure(nk.point(y, 128), K=K)
        assert prev.contains(cur), K
        prev = cur


def test_h_prime_examples():
    with mpmath.workprec(256):
        assert contains_mp(h_prime_enclosure(nk.point(0, 128)), mpmath.pi**2 / 6)
        assert contains_mp(h_prime_enclosure(nk.point(1, 128)), mpmath.pi**2 / 6 - 1)


def test_both_trigamma_routes_agree():
    for y in (1, 2, 7, 1000):
        a = trigamma_enclosure(nk.point(y, 64), K=5000)
        b = trigamma(nk.point(y, 64))
        assert a.intersects(b)


LEMMA_GRID = [math.exp(math.log(1e9) * i / 199) for i in range(200)]


@pytest.mark.parametrize("prec", [128])
def test_lemma_bounds_on_grid(prec):
    for x in LEMMA_GRID:
        xe = nk.point(Fraction(x), prec)
        h = harmonic_real(xe, prec)
        assert nk.compare(h, nk.log(xe + 1)) is Order.GREATER, x
        assert nk.compare(h_prime_enclosure(xe, prec), 1 / (xe + 1)) is Order.GREATER, x
        ub = 1 + nk.log(xe) - h
        if x == 1.0:
            assert ub.contains(0)
        else:
            assert ub.lo > 0, x

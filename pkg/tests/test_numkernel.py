from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from lagverify import numkernel as nk
from lagverify.errors import DomainError
from lagverify.numkernel import Enclosure, Order

from oracles import Skip, eval_mpmath, gamma_oracle, rationals, to_fraction, trees


def iv(lo, hi, prec=53):
    return Enclosure(gmpy2.mpfr(lo, prec), gmpy2.mpfr(hi, prec), prec)


def eval_enclosure(tree, prec):
    kind = tree[0]
    if kind == "leaf":
        return nk.point(tree[1], prec)
    try:
        if kind in ("exp", "log"):
            x = eval_enclosure(tree[1], prec)
            if kind == "exp" and x.hi > 60:
                raise Skip
            return nk.interval_transcendental(x, kind)
        return nk.interval_arith(eval_enclosure(tree[1], prec), eval_enclosure(tree[2], prec), kind)
    except DomainError:
        raise Skip from None


def contains_exactly(enc: Enclosure, value) -> bool:
    v = to_fraction(value)
    return to_fraction(enc.lo) <= v <= to_fraction(enc.hi)


# -- worked examples --------------------------------------------------------

def test_add_exact():
    r = nk.interval_arith(iv(1, 1), iv(2, 2), "add")
    assert r.lo == 3 and r.hi == 3


def test_mul_hull():
    r = nk.interval_arith(iv(1, 2), iv(-1, 1), "mul")
    assert (r.lo, r.hi) == (-2, 2)


def test_div_one_third():
    r = nk.interval_arith(iv(1, 1), iv(3, 3), "div")
    assert r.contains(Fraction(1, 3))
    assert to_fraction(r.width) <= Fraction(1, 2**51)


def test_div_by_zero_interval():
    with pytest.raises(DomainError):
        nk.interval_arith(iv(1, 1), iv(-1, 1), "div")


def test_exp_log_trivial_points():
    assert nk.exp(nk.point(0, 64)).contains(1)
    assert nk.log(nk.point(1, 64)).contains(0)


def test_log_nonpositive():
    with pytest.raises(DomainError):
        nk.log(iv(0, 1))
    with pytest.raises(DomainError):
        nk.log(iv(-2, -1))


def test_exp4_against_series_oracle():
    # e^4 = sum 4^k / k!, tail after 80 terms below 4^80/80! * 2
    s = sum(Fraction(4**k, _fact(k)) for k in range(80))
    tail = Fraction(2 * 4**80, _fact(80))
    e4 = nk.exp(nk.point(4, 64))
    assert to_fraction(e4.lo) <= s and s + tail <= to_fraction(e4.hi)
    assert to_fraction(e4.width) < Fraction(1, 2**50)
    assert nk.compare(e4, nk.point(54, 64)) is Order.GREATER


def _fact(k):
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def test_compare_examples():
    assert nk.compare(iv(1, 2), iv(3, 4)) is Order.LESS
    assert nk.compare(iv(1, 3), iv(2, 4)) is Order.OVERLAP
    assert nk.compare(iv(3, 4), iv(1, 2)) is Order.GREATER


@pytest.mark.parametrize("prec", [2, 8, 53, 64, 300])
def test_dyadic_is_point(prec):
    r = nk.rational_to_enclosure(Fraction(1, 2), prec)
    assert r.lo == r.hi == 0.5


def test_one_third_at_53():
    r = nk.rational_to_enclosure(Fraction(1, 3), 53)
    assert r.contains(Fraction(1, 3))
    assert to_fraction(r.width) <= Fraction(1, 2**51)


def test_25_12_at_8_bits():
    r = nk.rational_to_enclosure(Fraction(25, 12), 8)
    assert r.contains(Fraction(25, 12))
    assert r.lo != r.hi
    assert r.lo.precision == 8


@given(q=st.fractions(max_denominator=10**12), prec=st.integers(2, 400))
def test_rational_enclosure_is_tight(q, prec):
    r = nk.rational_to_enclosure(q, prec)
    assert r.contains(q)
    lo, hi = to_fraction(r.lo), to_fraction(r.hi)
    if lo == hi:
        assert lo == q
    else:
        # one unit in the last place of a prec-bit mantissa
        assert hi - lo <= abs(q) * Fraction(2, 2**prec)


def test_negative_rational_keeps_precision():
    r = nk.point(Fraction(-1, 120), 128)
    assert r.contains(Fraction(-1, 120))
    assert to_fraction(r.width) < Fraction(1, 2**120)


# -- gamma ------------------------------------------------------------------

@pytest.fixture(scope="module")
def gamma_ref():
    return gamma_oracle()


def test_gamma_literal_inside_independent_oracle(gamma_ref):
    lo, hi = gamma_ref
    literal = Fraction(nk.GAMMA_LITERAL)
    # the literal truncates gamma: gamma in [literal, literal + 1e-100]
    assert to_fraction(lo) <= literal + nk.GAMMA_LITERAL_ERROR
    assert literal <= to_fraction(hi)
    assert to_fraction(hi) - to_fraction(lo) < Fraction(1, 10**105)


@pytest.mark.parametrize("prec", [16, 32, 53, 64, 128, 256, 257, 512, 1024])
def test_gamma_encloses_oracle(gamma_ref, prec):
    g = nk.gamma_constant(prec)
    lo, hi = gamma_ref
    # both contain the true value, so they must meet
    assert to_fraction(g.lo) <= to_fraction(hi) and to_fraction(lo) <= to_fraction(g.hi)
    assert to_fraction(g.width) <= Fraction(4, 2**prec)


def test_gamma_examples():
    g16, g64, g128 = (nk.gamma_constant(p) for p in (16, 64, 128))
    assert g64.lo <= gmpy2.mpfr("0.57721566490153286060", 200) <= g64.hi
    assert g16.contains(g64)
    assert g128.width < g64.width


def test_gamma_enclosures_pairwise_intersect():
    encs = [nk.gamma_constant(p) for p in (16, 24, 53, 64, 100, 128, 256, 300, 1000)]
    for a in encs:
        for b in encs:
            assert a.intersects(b)


def test_gamma_against_mpmath_at_1000_bits():
    g = nk.gamma_constant(1000)
    with mpmath.workprec(1100):
        assert contains_exactly(g, +mpmath.euler)


# -- properties -------------------------------------------------------------

PRECISIONS = st.sampled_from([16, 24, 53, 64, 96, 128])


@settings(max_examples=1000, deadline=None, derandomize=True,
          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(tree=trees(), prec=PRECISIONS)
def test_expression_trees_contain_oracle(tree, prec):
    try:
        enc = eval_enclosure(tree, prec)
        ref = eval_mpmath(tree, dps=int(4 * prec * 0.30103) + 10)
    except Skip:
        assume(False)
    assert contains_exactly(enc, ref)


@settings(max_examples=300, deadline=None, derandomize=True,
          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(tree=trees(), prec=PRECISIONS)
def test_nesting_on_precision_doubling(tree, prec):
    try:
        coarse = eval_enclosure(tree, prec)
        fine = eval_enclosure(tree, 2 * prec)
    except Skip:
        assume(False)
    assert coarse.contains(fine)


def _enc(a, b, prec):
    lo, hi = sorted((a, b))
    return nk.hull(nk.point(lo, prec), nk.point(hi, prec))


@given(a=rationals(), b=rationals(), c=rationals(), d=rationals())
def test_compare_antisymmetric(a, b, c, d):
    x, y = _enc(a, b, 53), _enc(c, d, 53)
    flip = {Order.LESS: Order.GREATER, Order.GREATER: Order.LESS, Order.OVERLAP: Order.OVERLAP}
    assert nk.compare(y, x) is flip[nk.compare(x, y)]


@given(a=rationals(), b=rationals(), op=st.sampled_from(["add", "sub", "mul", "div"]))
def test_arith_contains_exact_rational(a, b, op):
    assume(op != "div" or b != 0)
    r = nk.interval_arith(nk.point(a, 53), nk.point(b, 53), op)
    exact = {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b if b else 0}[op]
    assert r.contains(exact)


def test_precision_ladder():
    assert list(nk.precision_ladder(64, 4096)) == [64, 128, 256, 512, 1024, 2048, 4096]
    assert list(nk.precision_ladder(64, 100)) == [64, 100]
    with pytest.raises(ValueError):
        list(nk.precision_ladder(128, 64))


def test_unbounded_exponent():
    # e^(10^6) is far past double range
    big = nk.exp(nk.point(10**6, 64))
    assert gmpy2.is_finite(big.hi) and big.lo > 0
    assert nk.log(big).contains(10**6)


def test_inverted_enclosure_rejected():
    with pytest.raises(ValueError):
        iv(2, 1)

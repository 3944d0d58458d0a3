import random
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import laurent_st, poly_st, series_st
from mzlab.errors import ContextMismatch, InconclusiveError, InputError
from mzlab.operators import (Derivation, EDerivation, Endomorphism, UnitForm,
                             geometric_derivative_check, graded_decompose, iterate_operator,
                             leibniz_power_check, localized_endo_validate, matrix_of)
from mzlab.rings import GF, QQ, LaurentPoly, TruncSeries, laurent_vars, weight

x1, x2 = laurent_vars(2)
DERIVATIONS = [
    Derivation.partial(0, 2),
    Derivation.euler([1, -2]),
    Derivation((x2, x1 ** 2 + 3)),
    Derivation((x1 * x2 ** -1, x2 ** 2)),
]
ENDOS = [
    Endomorphism((x2, x1)),
    Endomorphism((x1 * 2, x2 * x1 ** -1)),
    Endomorphism((x1 * x2 ** 2, -x2)),
]


@settings(max_examples=300, deadline=None)
@given(laurent_st(), laurent_st(), st.sampled_from(DERIVATIONS))
def test_leibniz_rule(a, b, D):
    assert D(a * b) == D(a) * b + a * D(b)


@settings(max_examples=300, deadline=None)
@given(laurent_st(), laurent_st(), st.sampled_from(ENDOS))
def test_endomorphism_is_multiplicative(a, b, phi):
    assert phi(a * b) == phi(a) * phi(b)
    assert phi(a + b) == phi(a) + phi(b)


@settings(max_examples=300, deadline=None)
@given(laurent_st(), laurent_st(), st.sampled_from(ENDOS))
def test_twisted_leibniz_rule(a, b, phi):
    delta = EDerivation(phi)
    assert delta(a * b) == delta(a) * b + phi(a) * delta(b)


@settings(max_examples=60, deadline=None)
@given(poly_st(degree=3), poly_st(degree=3), st.sampled_from(DERIVATIONS[:3]), st.integers(1, 5))
def test_higher_leibniz_check_agrees_with_direct_sum(a, b, D, n):
    direct = sum((iterate_operator(D, i, a) * iterate_operator(D, n - i, b)).scale(comb(n, i))
                 for i in range(n + 1))
    assert iterate_operator(D, n, a * b) == direct
    assert leibniz_power_check(D, a, b, n)


@settings(max_examples=100, deadline=None)
@given(series_st(order=6), series_st(order=6))
def test_derivation_on_series_obeys_leibniz_to_known_order(a, b):
    u = TruncSeries.var(0, 2, 6)
    D = Derivation((u * u, u + 1))
    lhs = D(a * b)
    rhs = D(a) * b.truncate(5) + a.truncate(5) * D(b)
    assert lhs.agrees(rhs)
    assert lhs.order == 5


def test_series_endomorphism_rejects_unit_images():
    u = TruncSeries.var(0, 1, 5)
    with pytest.raises(InputError, match="nonzero constant term"):
        Endomorphism((u + 1,))


def test_context_mismatch_between_fields():
    D = Derivation.partial(0, 1)
    with pytest.raises(ContextMismatch):
        D(LaurentPoly.var(0, 1, GF(5)))


def test_endomorphism_power_and_compose():
    swap = ENDOS[0]
    assert swap.power(2).images == (x1, x2)
    phi = ENDOS[2]
    assert phi.compose(phi)(x1 * x2) == phi(phi(x1 * x2))


def test_iterate_operator_partial_derivative():
    assert iterate_operator(Derivation.partial(0, 2), 3, x1 ** 5 * x2) == (x1 ** 2 * x2).scale(60)
    assert iterate_operator(Derivation.partial(0, 2), 0, x1) == x1


# -- D^m(1/(1-v)) for D(v) = c v -----------------------------------------------------

def _sympy_remainder(c, m):
    v = sympy.symbols("v")
    g = 1 / (1 - v)
    for _ in range(m):
        g = sympy.Rational(c) * v * sympy.diff(g, v)
    rest = sympy.cancel((g - sympy.factorial(m) * sympy.Rational(c) ** m * v ** m
                         / (1 - v) ** (m + 1)) * (1 - v) ** m)
    return sympy.Poly(rest, v)


@pytest.mark.parametrize("c", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-3)])
@pytest.mark.parametrize("m", range(1, 6))
def test_geometric_derivative_remainder_matches_sympy(c, m):
    rep = geometric_derivative_check(c, m, 40)
    oracle = _sympy_remainder(c, m)
    assert rep.polynomial
    ours = {a[0]: x for a, x in rep.remainder.terms.items()}
    theirs = {k[0]: Fraction(int(x.p), int(x.q)) for k, x in oracle.terms() if x != 0}
    assert ours == theirs


def test_geometric_derivative_needs_enough_order():
    with pytest.raises(InconclusiveError):
        geometric_derivative_check(1, 5, 19)


# -- grading -------------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(laurent_st(max_terms=4), laurent_st(max_terms=4),
       st.tuples(st.integers(1, 4), st.integers(1, 4)))
def test_graded_components_sum_back_and_shift_weight(p, q, d):
    D = Derivation((p, q))
    pieces = graded_decompose(D, d)
    assert pieces.total(D) == D
    mono = LaurentPoly.monomial((2, -1))
    for shift, Di in pieces.components.items():
        image = Di(mono)
        assert all(weight(a, d) == weight((2, -1), d) + shift for a in image.terms)


def test_graded_decompose_rejects_nonpositive_weights():
    with pytest.raises(InputError):
        graded_decompose(DERIVATIONS[2], (1, 0))


def test_graded_example():
    D = Derivation((x1 ** 2 + x2, x1 * 0 + 1))
    pieces = graded_decompose(D, (1, 1))
    assert sorted(pieces.components) == [-1, 0, 1]
    assert pieces.N == -1


# -- unit forms ----------------------------------------------------------------------

def test_unit_form_requires_unit_body():
    u = TruncSeries.var(0, 2, 4)
    with pytest.raises(InputError):
        UnitForm((1, 0), u)


def test_localized_endo_validate():
    one = TruncSeries.constant(1, 2, 4)
    good = localized_endo_validate([((1, 0), one + TruncSeries.var(1, 2, 4)), ((0, 2), one)])
    bad = localized_endo_validate([((-1, 0), one), ((0, 1), one)])
    assert good.preserves_series and not bad.preserves_series
    assert bad.holds == [False, True]


def test_matrix_of_column_convention():
    D = Derivation.partial(0, 1)
    x, = laurent_vars(1)
    M = matrix_of(D, [x ** 0, x, x ** 2], [(0,), (1,), (2,)], QQ)
    assert M.column(2) == (0, 2, 0)
    assert M.column(1) == (1, 0, 0)


def test_random_derivation_over_prime_field_kills_pth_powers():
    rng = random.Random(4)
    F = GF(3)
    for _ in range(20):
        f = LaurentPoly({(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(1, 2)
                         for _ in range(4)}, 2, F)
        D = Derivation.partial(rng.randrange(2), 2, F)
        assert D(f ** 3).is_zero()

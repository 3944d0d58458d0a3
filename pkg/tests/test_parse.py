import re
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import laurent_st, series_st
from mzlab.errors import InputError
from mzlab.operators import Derivation, EDerivation, Endomorphism
from mzlab.parse import (Context, ParseError, infer_nvars, parse_expr, parse_matrix,
                         parse_operator, parse_subspace, parse_unit_forms, parse_vector)
from mzlab.rings import GF, LaurentPoly, Matrix, TruncSeries, laurent_vars

CTX2 = Context(2)
x1, x2 = laurent_vars(2)


@settings(max_examples=500, deadline=None)
@given(laurent_st(low=-4, high=4, coeff=9))
def test_laurent_text_round_trip(f):
    assert parse_expr(str(f), CTX2) == f


@settings(max_examples=300, deadline=None)
@given(series_st(order=6))
def test_series_text_round_trip(f):
    assert parse_expr(str(f), Context(2, carrier="series", order=6)) == f


@settings(max_examples=200, deadline=None)
@given(laurent_st(low=-3, high=3, field=GF(7)))
def test_prime_field_round_trip(f):
    assert parse_expr(str(f), Context(2, GF(7))) == f


def test_precedence():
    assert parse_expr("-x1^2", CTX2) == -(x1 ** 2)
    assert parse_expr("2*x1^2*x2", CTX2) == (x1 ** 2 * x2).scale(2)
    assert parse_expr("1/2*x1", CTX2) == x1.scale(Fraction(1, 2))
    assert parse_expr("x1 - x2 - 1", CTX2) == x1 - x2 - 1
    assert parse_expr("(x1*x2)^-1", CTX2) == x1 ** -1 * x2 ** -1
    assert parse_expr("x1/x2", CTX2) == x1 * x2 ** -1


def test_single_variable_aliases():
    t = parse_expr("t^2 + x + v", Context(1))
    assert t == LaurentPoly({(2,): 1, (1,): 2}, 1)


def test_series_division_expands():
    f = parse_expr("1/(1-x1)", Context(1, carrier="series", order=5))
    assert f == TruncSeries.geometric(0, 1, 5)


@pytest.mark.parametrize("text,message", [
    ("x1 +", "column"),
    ("x3", "unknown variable"),
    ("x1^x2", "integer literal"),
    ("(x1", "expected ')'"),
    ("x1 $ 2", "unexpected character"),
    ("", "empty expression"),
])
def test_parse_errors_carry_positions(text, message):
    with pytest.raises(ParseError, match=re.escape(message)):
        parse_expr(text, CTX2)


def test_negative_exponent_in_series_context():
    with pytest.raises(ParseError, match="negative exponent in power-series context"):
        parse_expr("x1^-1", Context(1, carrier="series"))


def test_non_unit_division_is_an_input_error():
    with pytest.raises(InputError):
        parse_expr("1/(1+x1)", CTX2)


def test_infer_nvars():
    assert infer_nvars("x1 + x3", "x2") == 3
    assert infer_nvars("t") == 1


def test_operator_specs():
    D = parse_operator("derivation: D(x1)=x2, D(x2)=1", CTX2)
    assert isinstance(D, Derivation) and D(x1 * x2) == x2 * x2 + x1
    phi = parse_operator("endo: phi(x1)=2*x1", CTX2)
    assert isinstance(phi, Endomorphism) and phi.images == (x1.scale(2), x2)
    delta = parse_operator("ederivation: phi(x1)=x2, phi(x2)=x1", CTX2)
    assert isinstance(delta, EDerivation) and delta(x1) == x1 - x2
    unassigned = parse_operator("derivation: D(x2)=x1", CTX2)
    assert unassigned.coeffs[0].is_zero()


@pytest.mark.parametrize("text", ["D(x1)=1", "derivation: E(x1)=1", "endo: phi(x1)=1, phi(x1)=2",
                                  "matrix: D(x1)=1"])
def test_bad_operator_specs(text):
    with pytest.raises(InputError):
        parse_operator(text, CTX2)


def test_unit_forms():
    forms = parse_unit_forms("phi(x1)=x1^-1*(1+x2), phi(x2)=x2^2", 2, 4)
    assert forms[0].alpha == (-1, 0) and forms[1].alpha == (0, 2)
    with pytest.raises(InputError):
        parse_unit_forms("phi(x1)=0", 2, 4)


def test_subspaces_matrices_vectors():
    M = parse_subspace("{(0,0), (1,-1)}")
    assert M.support == {(0, 0), (1, -1)} and not M.cofinite
    assert parse_subspace(M.text()) == M
    assert parse_subspace("kernel-support-cofinite: {(1)}").cofinite
    with pytest.raises(InputError):
        parse_subspace("{0,0}")
    assert parse_matrix("2\n1 1/2\n0 3") == Matrix([[1, Fraction(1, 2)], [0, 3]])
    with pytest.raises(InputError):
        parse_matrix("2\n1 2\n3")
    assert parse_vector("(1,-2,1/3)") == (1, -2, Fraction(1, 3))

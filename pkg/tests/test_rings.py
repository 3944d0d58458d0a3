import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import laurent_st, series_st
from mzlab.errors import ContextMismatch, InconclusiveError, InputError, NotAUnitError
from mzlab.rings import (GF, LaurentPoly, LocalSeries, Matrix, SparseEchelon, TruncSeries,
                         UniPoly, compose, formal_inverse, identity_map, laurent_vars)


# -- scalars -------------------------------------------------------------------

def test_prime_field_reduction_and_inverse():
    F = GF(7)
    assert F(-1) == 6
    assert F(Fraction(1, 3)) == 5          # 3 * 5 = 15 = 1 mod 7
    assert all(F.reduce(a * F.inv(a)) == 1 for a in range(1, 7))


def test_field_rejects_composite_characteristic():
    with pytest.raises(InputError):
        GF(6)


def test_mixed_characteristics_do_not_combine():
    a = LaurentPoly.var(0, 1, GF(5))
    b = LaurentPoly.var(0, 1, GF(7))
    with pytest.raises(ContextMismatch):
        a + b


# -- Laurent ring --------------------------------------------------------------

@settings(max_examples=1000, deadline=None)
@given(laurent_st(), laurent_st(), laurent_st())
def test_laurent_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == a.zero()
    assert a * a.one() == a


@settings(max_examples=200, deadline=None)
@given(laurent_st(field=GF(3)), laurent_st(field=GF(3)))
def test_laurent_frobenius_in_char_3(a, b):
    assert (a + b) ** 3 == a ** 3 + b ** 3


@settings(max_examples=300, deadline=None)
@given(laurent_st(nvars=2, low=-2, high=2), st.integers(-2, 2), st.integers(-2, 2))
def test_monomials_are_units(f, i, j):
    m = LaurentPoly.monomial((i, j), 3)
    assert (f * m) / m == f
    assert m * m.inverse() == m.one()


def test_non_monomial_is_not_a_unit():
    x, = laurent_vars(1)
    with pytest.raises(NotAUnitError):
        (1 + x).inverse()


@settings(max_examples=200, deadline=None)
@given(laurent_st(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(lambda p: p != (0, 0)))
def test_evaluation_is_a_homomorphism(f, point):
    g = f * f + f
    pt = [Fraction(point[0] or 1), Fraction(point[1] or 1)]
    v = f.evaluate(pt)
    assert g.evaluate(pt) == v * v + v


def test_laurent_against_sympy_expand():
    rng = random.Random(3)
    X, Y = sympy.symbols("X Y")
    for _ in range(40):
        fs = []
        for _ in range(2):
            d = {(rng.randint(-3, 3), rng.randint(-3, 3)): rng.randint(-4, 4) for _ in range(4)}
            fs.append(d)
        prod = LaurentPoly(fs[0], 2) * LaurentPoly(fs[1], 2)
        oracle = sympy.expand(sympy.Add(*[c * X ** a * Y ** b for (a, b), c in fs[0].items()])
                              * sympy.Add(*[c * X ** a * Y ** b for (a, b), c in fs[1].items()]))
        ours = sympy.Add(*[sympy.Rational(c) * X ** a * Y ** b for (a, b), c in prod.terms.items()])
        assert sympy.expand(ours - oracle) == 0


# -- truncated series ------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(series_st(order=6), series_st(order=6), st.integers(0, 6))
def test_truncation_commutes_with_ring_operations(f, g, k):
    assert (f * g).truncate(k) == f.truncate(k) * g.truncate(k)
    assert (f + g).truncate(k) == f.truncate(k) + g.truncate(k)


@settings(max_examples=300, deadline=None)
@given(series_st(order=6), st.integers(1, 5))
def test_unit_inverse(f, c):
    u = f + (c - f.constant_term())
    assert u * u.inverse() == u.one()


def test_non_unit_series_has_no_inverse():
    x = TruncSeries.var(0, 1, 6)
    with pytest.raises(NotAUnitError):
        x.inverse()


def test_coefficient_beyond_order_is_unknown():
    x = TruncSeries.var(0, 1, 4)
    with pytest.raises(InconclusiveError):
        x.coeff((5,))


def test_geometric_series_matches_inverse():
    x = TruncSeries.var(0, 2, 7)
    assert TruncSeries.geometric(0, 2, 7) == (1 - x).inverse()


def test_mul_tracking_gains_precision_from_valuation():
    x = TruncSeries.var(0, 1, 10)
    f = TruncSeries({(0,): 1, (1,): 1}, 1, 4)
    out = f.mul_tracking(x ** 3)
    assert out.order == 7
    assert out == TruncSeries({(3,): 1, (4,): 1}, 1, 7)


def _dense_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        for j, y in enumerate(b[:n + 1 - i]):
            out[i + j] += x * y
    return out


def _dense_inv(a, n):
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / Fraction(a[0])
    for k in range(1, n + 1):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s * out[0]
    return out


def _lagrange_inverse(f, n):
    """[x^k] g = (1/k) [x^(k-1)] (x/f)^k, computed with dense lists."""
    h = _dense_inv(f[1:] + [Fraction(0)] * n, n)        # x/f = 1/(f/x)
    g = [Fraction(0)] * (n + 1)
    p = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        p = _dense_mul(p, h, n)
        g[k] = p[k - 1] / k
    return g


@pytest.mark.parametrize("seed", range(12))
def test_formal_inverse_matches_lagrange_inversion(seed):
    rng = random.Random(seed)
    K = 9
    coeffs = [Fraction(0), Fraction(rng.choice([1, 2, -3]))] + \
        [Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(K - 1)]
    F = TruncSeries({(i,): c for i, c in enumerate(coeffs)}, 1, K)
    (G,) = formal_inverse([F])
    oracle = _lagrange_inverse(coeffs, K)
    assert [G.coeff((k,)) for k in range(K + 1)] == oracle


@settings(max_examples=60, deadline=None)
@given(series_st(nvars=2, order=5, max_terms=4), series_st(nvars=2, order=5, max_terms=4),
       st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (1, 0))]))
def test_formal_inverse_is_two_sided(h1, h2, J):
    x1, x2 = identity_map(2, 5)
    hi = [h.truncate(5) - h.constant_term() - TruncSeries({(1, 0): h.coeff((1, 0)),
                                                           (0, 1): h.coeff((0, 1))}, 2, 5)
          for h in (h1, h2)]
    F = (x1.scale(J[0][0]) + x2.scale(J[0][1]) + hi[0], x1.scale(J[1][0]) + x2.scale(J[1][1]) + hi[1])
    G = formal_inverse(F)
    ident = identity_map(2, 5)
    assert all(a.agrees(b) for a, b in zip(compose(F, G), ident))
    assert all(a.agrees(b) for a, b in zip(compose(G, F), ident))


def test_formal_inverse_needs_invertible_jacobian():
    x1, x2 = identity_map(2, 4)
    with pytest.raises(InputError):
        formal_inverse((x1 + x2, x1 + x2 + x1 * x2))


def test_local_series_product_and_constant_term():
    x = TruncSeries.var(0, 1, 12)
    a = LocalSeries((-1,), x.one())
    b = LocalSeries.from_series(TruncSeries.geometric(0, 1, 12))
    for m in range(1, 8):
        assert (b * a ** m).constant_term() == 1


# -- linear algebra ---------------------------------------------------------------

def _random_matrix(rng, m, n, rank=None):
    if rank is None:
        return Matrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)])
    L = Matrix([[rng.randint(-3, 3) for _ in range(rank)] for _ in range(m)])
    R = Matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(rank)])
    return L * R


@pytest.mark.parametrize("seed", range(30))
def test_matrix_against_sympy(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    A = _random_matrix(rng, m, n, rank=rng.randint(1, min(m, n)))
    S = sympy.Matrix(A.rows)
    assert A.rank() == S.rank()
    ker = A.kernel()
    assert len(ker) == len(S.nullspace())
    for v in ker:
        assert all(x == 0 for x in A.apply(v))
        assert next(x for x in v if x != 0) == 1
    if m == n:
        assert A.det() == S.det()
        if S.det() != 0:
            assert A.inverse() * A == Matrix.identity(n)


@pytest.mark.parametrize("seed", range(20))
def test_solve(seed):
    rng = random.Random(100 + seed)
    A = _random_matrix(rng, 4, 3, rank=2)
    x = [rng.randint(-3, 3) for _ in range(3)]
    b = A.apply(x)
    sol = A.solve(b)
    assert sol is not None and A.apply(sol) == b
    bad = list(b)
    for extra in range(1, 50):
        bad[0] = b[0] + extra
        if A.solve(bad) is None:
            break
    else:
        pytest.fail("rank-deficient system never became inconsistent")


def test_matrix_over_prime_field():
    A = Matrix([[1, 2], [3, 4]], GF(5))
    assert A.det() == GF(5)(-2)
    assert A * A.inverse() == Matrix.identity(2, GF(5))


def test_sparse_echelon_coordinates():
    E = SparseEchelon()
    assert E.add({"a": 1, "b": 2}) is None
    assert E.add({"b": 1}) is None
    coords = E.add({"a": 2, "b": 7})
    assert coords == {0: 2, 1: 3}


# -- univariate polynomials ----------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-5, 5), min_size=1, max_size=5).filter(any))
def test_unipoly_division(a, b):
    A, B = UniPoly(a), UniPoly(b)
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.is_zero() or r.degree < B.degree


def test_unipoly_gcd_and_squarefree():
    T = UniPoly.T()
    p = (T - 1) ** 2 * (T + 2)
    assert p.gcd(p.derivative()) == T - 1
    assert p.squarefree_part() == (T - 1) * (T + 2)
    assert not p.is_squarefree()
    assert p.multiplicity(T - 1) == 2


def test_exhaustive_small_prime_field_products():
    F = GF(3)
    T = UniPoly.T(F)
    for a, b in product(range(3), repeat=2):
        p = (T + a) * (T + b)
        assert p(F(-a)) == 0 and p(F(-b)) == 0

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import poly_st
from mzlab.errors import InconclusiveError, InputError, UnsupportedError
from mzlab.locfin import (build_invariant_space, cyclic_space, d_degree, degree_additivity_check,
                          detect_periodicity, is_locally_nilpotent_on, normalize_endomorphism,
                          unit_kill_check)
from mzlab.operators import Derivation, EDerivation, Endomorphism
from mzlab.rings import LaurentPoly, Matrix, TruncSeries, compose, formal_inverse, laurent_vars

x1, x2 = laurent_vars(2)
d1 = Derivation.partial(0, 2)
TRIANGULAR = Derivation((x2, x1 * 0 + 1))       # D(x1) = x2, D(x2) = 1
OPERATORS = [d1, TRIANGULAR, Endomorphism((x2, x1)), EDerivation(Endomorphism((x1 + 1, x2)))]


def _iterate_until_zero(D, f, limit=60):
    k = 0
    while not f.is_zero():
        f = D(f)
        k += 1
        if k > limit:
            return None
    return k


@settings(max_examples=150, deadline=None)
@given(poly_st(degree=4), st.sampled_from(OPERATORS))
def test_companion_matrix_reproduces_the_action(f, L):
    cs = cyclic_space(L, f, 40)
    if f.is_zero():
        return
    assert cs.closed
    for j, b in enumerate(cs.basis):
        img = sum((v.scale(cs.matrix[i, j]) for i, v in enumerate(cs.basis)), f.zero())
        assert L(b) == img
    assert cs.basis[0] == f


@settings(max_examples=200, deadline=None)
@given(poly_st(degree=5).filter(lambda f: not f.is_zero()))
def test_d_degree_of_partial_is_top_exponent(f):
    assert d_degree(d1, f, 64) == max(a[0] for a in f.terms)


@settings(max_examples=150, deadline=None)
@given(poly_st(degree=4).filter(lambda f: not f.is_zero()))
def test_d_degree_matches_brute_iteration(f):
    assert d_degree(TRIANGULAR, f, 64) == _iterate_until_zero(TRIANGULAR, f) - 1


@settings(max_examples=150, deadline=None)
@given(poly_st(degree=3).filter(lambda f: not f.is_zero()),
       poly_st(degree=3).filter(lambda f: not f.is_zero()), st.sampled_from([d1, TRIANGULAR]))
def test_degree_additivity(a, b, D):
    assert degree_additivity_check(D, a, b, 64)


def test_nilpotence_statuses():
    x, = laurent_vars(1)
    assert is_locally_nilpotent_on(Derivation.partial(0, 1), x ** 3, 10).m == 4
    assert is_locally_nilpotent_on(Derivation.euler([1]), x, 10).status == "no_evidence"
    assert is_locally_nilpotent_on(Derivation((x ** 2,)), x, 5).status == "exceeded_cap"
    assert is_locally_nilpotent_on(Derivation.partial(0, 1), x.zero(), 5).m == 1


def test_d_degree_inconclusive_beyond_cap():
    x, = laurent_vars(1)
    with pytest.raises(InconclusiveError):
        d_degree(Derivation((x ** 2,)), x, 6)
    with pytest.raises(InputError):
        d_degree(d1, x1.zero(), 6)


def test_cyclic_space_on_series_tracks_order():
    u = TruncSeries.var(0, 1, 10)
    D = Derivation((u.one(),))
    cs = cyclic_space(D, TruncSeries.geometric(0, 1, 10), 30)
    assert cs.closed
    assert cs.order <= 10


def test_unit_kill_check():
    assert unit_kill_check(d1, x2 ** 3, 20)
    assert unit_kill_check(d1, x2.scale(-2) * x2 ** -4, 20)
    with pytest.raises(InconclusiveError):
        unit_kill_check(d1, x1, 20)          # d/dx1 is not nilpotent on 1/x1
    with pytest.raises(InputError):
        unit_kill_check(d1, x1 + 1, 20)


def test_invariant_space_of_swap():
    inv = build_invariant_space(Endomorphism((x2, x1)), [x1], 10)
    assert inv.closed and inv.dim == 2
    assert inv.matrix == Matrix([[0, 1], [1, 0]])


# -- periodicity ---------------------------------------------------------------------

def _least_pair(B, i_max):
    powers = [B]
    for _ in range(i_max - 1):
        powers.append(powers[-1] * B)
    for i in range(1, i_max):
        for j in range(i + 1, i_max + 1):
            if powers[i - 1] == powers[j - 1]:
                return i, j
    return None


@pytest.mark.parametrize("seed", range(40))
def test_detect_periodicity_is_least_pair(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    perm = list(range(n))
    rng.shuffle(perm)
    B = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        B[i][j] = rng.choice([1, -1, 1, 2])
    if rng.random() < 0.4:
        B[rng.randrange(n)] = [0] * n
    xs = laurent_vars(n)
    phi = Endomorphism(tuple(sum((xs[j].scale(B[k][j]) for j in range(n)), xs[0].zero())
                             for k in range(n)))
    i_max = 10
    expect = _least_pair(Matrix(B), i_max)
    got = detect_periodicity(phi, i_max)
    assert (None if got is None else (got.i, got.j)) == expect
    got_m = detect_periodicity(Matrix(B), i_max)
    assert (None if got_m is None else (got_m.i, got_m.j)) == expect
    if got is not None:      # soundness on a random element, not just generators
        f = LaurentPoly({(rng.randint(0, 2),) * n: 1, (1,) * n: 3}, n)
        assert phi.power(got.i)(f) == phi.power(got.j)(f)


def test_periodicity_examples():
    swap = detect_periodicity(Endomorphism((x2, x1)), 10)
    assert (swap.i, swap.j, swap.scope) == (1, 3, "on_generators")
    proj = detect_periodicity(Endomorphism((x1, x1)), 10)
    assert (proj.i, proj.j) == (1, 2)
    u = TruncSeries.var(0, 1, 8)
    neg = detect_periodicity(Endomorphism((-u,)), 5)
    assert (neg.i, neg.j, neg.scope) == (1, 3, "on_generators_at_order_K")
    assert detect_periodicity(Endomorphism((x1.scale(2), x2)), 10) is None
    with pytest.raises(InputError):
        detect_periodicity(Matrix([[1]]), 1)


# -- normalization -------------------------------------------------------------------

def _check_normalization(phi, rep):
    K = rep.order
    for y, c in zip(rep.coordinates, rep.eigenvalues):
        if c is not None:
            assert phi(y).agrees(y.scale(c))
        else:
            z = y
            for _ in range(rep.N):
                z = phi(z)
            assert z.is_zero()
    G = formal_inverse(rep.coordinates, K)
    ident = tuple(TruncSeries.var(i, len(G), K) for i in range(len(G)))
    assert compose(rep.coordinates, G) == ident
    assert rep.inverse_certified


def test_normalize_swap():
    rep = normalize_endomorphism(Endomorphism((x2, x1)), 16)
    assert [y.to_poly() for y in rep.coordinates] == [x1 + x2, x1 - x2]
    assert rep.eigenvalues == [1, -1]
    _check_normalization(Endomorphism(tuple(TruncSeries.from_poly(g, 16) for g in (x2, x1))), rep)


def test_normalize_with_nilpotent_part():
    rep = normalize_endomorphism(Endomorphism((x1 * 0, x2)), 10)
    assert rep.eigenvalues == [1, None] and rep.N == 1


def test_normalize_nonlinear_involution():
    K = 10
    u = TruncSeries.var(0, 1, K)
    h = u + u * u                       # phi = h^-1 o (-id) o h has order 2
    (hinv,) = formal_inverse([h])
    phi_img = hinv.substitute([-h])
    phi = Endomorphism((phi_img,))
    assert phi(phi_img).agrees(u)
    rep = normalize_endomorphism(phi, K)
    assert rep.eigenvalues == [-1]
    _check_normalization(phi, rep)


def test_normalize_refusals():
    with pytest.raises(InputError):
        normalize_endomorphism(Endomorphism((x1.scale(2), x2)), 8)
    x1_, x2_, x3_ = laurent_vars(3)
    with pytest.raises(UnsupportedError):
        normalize_endomorphism(Endomorphism((x2_, x3_, x1_)), 8)

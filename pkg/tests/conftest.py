import random
from fractions import Fraction

from hypothesis import strategies as st

from mzlab.rings import QQ, LaurentPoly, TruncSeries


def laurent_st(nvars=2, low=-3, high=3, coeff=5, max_terms=5, field=QQ):
    exps = st.tuples(*[st.integers(low, high)] * nvars)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: LaurentPoly(d, nvars, field))


def poly_st(nvars=2, degree=3, **kw):
    return laurent_st(nvars, 0, degree, **kw).filter(lambda f: f.total_degree() <= degree
                                                     if not f.is_zero() else True)


def series_st(nvars=2, order=5, max_terms=6, coeff=4, field=QQ):
    exps = st.tuples(*[st.integers(0, order)] * nvars)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: TruncSeries(d, nvars, order, field))


def random_poly(rng: random.Random, nvars: int, degree: int, terms: int = 5) -> LaurentPoly:
    out = {}
    for _ in range(terms):
        a = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            a[rng.randrange(nvars)] += 1
        out[tuple(a)] = Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
    return LaurentPoly(out, nvars)

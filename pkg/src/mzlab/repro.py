"""Reproduction registry: fixed constructions with expected outcomes.

Each case returns ``(items, passed)``. ``passed`` comes from semantic
checks; for default parameters the machine text is also compared byte for
byte with the stored golden file.
"""

from __future__ import annotations

import inspect
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable

from .errors import InputError
from .jordan import (char_poly, eventual_period_certificate, jc_decompose, min_poly,
                     nilpotence_index, roots_of_unity_orders)
from .locfin import degree_additivity_check, detect_periodicity, normalize_endomorphism
from .mzspace import (DiagonalSpec, SubspaceSpec, charp_telescope, compare_radicals,
                      image_membership_bounded, image_membership_diagonal, mz_falsify,
                      power_sum_nilpotency_check, radical_membership, truncation_monomials)
from .operators import (Derivation, EDerivation, Endomorphism, geometric_derivative_check,
                        leibniz_power_check)
from .report import fmt_value
from .rings import GF, QQ, LaurentPoly, LocalSeries, Matrix, TruncSeries, laurent_vars

Items = list


@dataclass(frozen=True)
class ReproCase:
    ident: str
    description: str
    run: Callable[..., tuple[Items, bool]]
    params: tuple = ()        # names of tunable keyword parameters


def random_laurent(rng: random.Random, n: int, box: int, max_terms: int, low: int | None = None,
                   field=QQ) -> LaurentPoly:
    low = -box if low is None else low
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        a = tuple(rng.randint(low, box) for _ in range(n))
        terms[a] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return LaurentPoly(terms, n, field)


def _dk_sample(n: int, count: int, seed: int) -> list[LaurentPoly]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        f = random_laurent(rng, n, 5, 6)
        if k % 2:  # half of the sample gets a constant term removed
            f = f - f.constant_term()
        out.append(f)
    return out


def _image_case(spec: DiagonalSpec, example: LaurentPoly) -> tuple[Items, bool]:
    sample = _dk_sample(2, 60, 1)
    members = agree = 0
    for f in sample:
        rep = image_membership_diagonal(spec, f)
        members += rep.member
        expected_member = f.constant_term() == 0
        agree += rep.member == expected_member and (rep.member or rep.obstructions == [(0, 0)])
    ex = image_membership_diagonal(spec, example)
    const = image_membership_diagonal(spec, LaurentPoly.constant(1, 2))
    items = [("weights", spec.weights), ("sample", len(sample)), ("members", members),
             ("member_iff_no_constant_term", agree == len(sample)),
             ("example", example), ("example.verdict", "member" if ex.member else "non_member"),
             ("example.preimage", ex.preimage),
             ("constant.obstructions", const.obstructions)]
    return items, agree == len(sample) and ex.member and not const.member


def case_dk_image() -> tuple[Items, bool]:
    x1, x2 = laurent_vars(2)
    items, ok = _image_case(DiagonalSpec("endo", (2, 3)), x1 * x2 ** -1)
    pre = image_membership_diagonal(DiagonalSpec("endo", (2, 3)), x1 * x2 ** -1).preimage
    return items, ok and pre == 3 * x1 * x2 ** -1


def case_dk_derivation() -> tuple[Items, bool]:
    x1, x2 = laurent_vars(2)
    spec = DiagonalSpec("derivation", ((1, 0), (0, 1)))
    items, ok = _image_case(spec, x1)
    pre = image_membership_diagonal(spec, x1).preimage
    return items, ok and pre == x1


def case_series_counterexample(mmax: int = 50, order: int = 60) -> tuple[Items, bool]:
    if order < mmax:
        raise InputError(f"order {order} must be >= mmax {mmax} so every constant term is known")
    a = LocalSeries.monomial((-1,), order)
    b = LocalSeries.from_series(TruncSeries.geometric(0, 1, order))
    M = SubspaceSpec.constant_free(1)
    rad = radical_membership(a, M, 1, mmax)
    consts = []
    p = b
    for _ in range(mmax):
        p = p * a
        consts.append(p.constant_term())
    rep = mz_falsify(a, M, [b], mmax)
    v = rep.verdicts[0]
    all_one = all(c == 1 for c in consts)
    items = [("a", a), ("b", f"1/(1-x1) to order {order}"), ("mmax", mmax), ("order", order),
             ("radical", "in_radical_up_to_bound" if rad.in_radical else "not_in_radical"),
             ("constant_terms_all_one", all_one), ("verdict", "violated" if v.violated else "tail_in_M"),
             ("violations", len(v.witnesses))]
    ok = rad.in_radical and all_one and v.violated and v.witnesses == list(range(1, mmax + 1))
    return items, ok


def case_charp_derivation(p: int = 5) -> tuple[Items, bool]:
    F = GF(p)
    (t,) = laurent_vars(1, F)
    D = Derivation.partial(0, 1, F)
    rep = image_membership_bounded(D, t ** (p - 1), 3 * p)
    kill = D(t ** p)
    items = [("p", p), ("D(t^p)", kill), ("f", t ** (p - 1)), ("bound", 3 * p),
             ("verdict", "member" if rep.member else "no_solution_within_bound"),
             ("unconditional", rep.unconditional), ("certificate", rep.certificate)]
    return items, kill.is_zero() and not rep.member and rep.unconditional


def case_charp_ederivation(p: int = 5) -> tuple[Items, bool]:
    F = GF(p)
    (t,) = laurent_vars(1, F)
    delta = EDerivation(Endomorphism((t + 1,)))
    one = delta(-t)
    rep = image_membership_bounded(delta, t ** (p - 1), 3 * p)
    items = [("p", p), ("delta(-t)", one), ("f", t ** (p - 1)), ("bound", 3 * p),
             ("verdict", "member" if rep.member else "no_solution_within_bound"),
             ("unconditional", rep.unconditional), ("certificate", rep.certificate)]
    return items, one == 1 and not rep.member and rep.unconditional


def case_telescope(p: int = 5) -> tuple[Items, bool]:
    s = charp_telescope(p)
    return [("p", p), ("sum", s), ("equals_minus_one", s == p - 1)], s == p - 1


def case_higher_leibniz(samples: int = 40, n_max: int = 8) -> tuple[Items, bool]:
    rng = random.Random(11)
    ops = [Derivation.partial(0, 2), Derivation.euler([1, 1]),
           Derivation(tuple(LaurentPoly(t, 2) for t in ({(0, 1): 1}, {(2, 0): 3, (0, 0): 1})))]
    checks = passed = 0
    for k in range(samples):
        a = random_laurent(rng, 2, 4, 4, low=0)
        b = random_laurent(rng, 2, 4, 4, low=0)
        D = ops[k % len(ops)]
        for n in range(1, n_max + 1):
            checks += 1
            passed += leibniz_power_check(D, a, b, n)
    return [("pairs", samples), ("n_max", n_max), ("checks", checks), ("passed", passed)], \
        passed == checks


def case_geometric_derivative(m_max: int = 6, order: int = 40) -> tuple[Items, bool]:
    items, ok = [], True
    for c in (Fraction(1), Fraction(2), Fraction(1, 2)):
        for m in range(1, m_max + 1):
            r = geometric_derivative_check(c, m, order)
            ok &= r.polynomial and r.degree <= m
            (v,) = laurent_vars(1)
            if m == 1:
                ok &= r.remainder.is_zero()
            if m == 2:
                ok &= r.remainder == v.scale(c * c)
            items.append((f"c={fmt_value(c)},m={m}", f"degree={r.degree} remainder={r.remainder}"))
    return [("order", order)] + items, ok


def _radical_comparison_endos():
    x1, x2 = laurent_vars(2)
    return [("identity", Endomorphism((x1, x2))), ("kill-x1", Endomorphism((x1 * 0, x2))),
            ("swap", Endomorphism((x2, x1)))]


def case_radical_comparison(degree: int = 4) -> tuple[Items, bool]:
    items, ok = [("degree_bound", degree)], True
    x1, x2 = laurent_vars(2)
    for name, phi in _radical_comparison_endos():
        rep = compare_radicals(phi, truncation_monomials(2, degree) + [x1 - x2])
        both = sum(1 for _, rm, ri in rep.rows if rm and ri)
        items += [(f"{name}.ij", (rep.certificate.i, rep.certificate.j)),
                  (f"{name}.tests", len(rep.rows)), (f"{name}.in_both", both),
                  (f"{name}.agree", rep.agree)]
        ok &= rep.agree
    return items, ok


def case_power_sum_nilpotence(samples: int = 100) -> tuple[Items, bool]:
    rng = random.Random(15)
    fixed = []
    e = TruncSeries.var(0, 1, 1)
    fixed.append(power_sum_nilpotency_check([e, -e], 1))
    fixed.append(power_sum_nilpotency_check([e ** 0, -(e ** 0)], 1))
    fixed.append(power_sum_nilpotency_check([e.zero(), e.zero(), e.zero()], 1))
    hyp = held = 0
    for _ in range(samples):
        k = rng.randint(1, 5)
        n = rng.randint(1, 3)
        elems = []
        for _ in range(n):
            terms = {(d,): rng.randint(-2, 2) for d in range(k)}
            if rng.random() < 0.7:
                terms[(0,)] = 0
            elems.append(TruncSeries(terms, 1, k - 1))
        if rng.random() < 0.3 and n >= 2:
            elems[1] = -elems[0]
        rep = power_sum_nilpotency_check(elems, rng.randint(0, 4))
        hyp += rep.hypothesis
        held += rep.implication_holds
    items = [("eps_pair", f"hypothesis={fixed[0].hypothesis} conclusion={fixed[0].conclusion}"),
             ("unit_pair", f"hypothesis={fixed[1].hypothesis} failing_i={fixed[1].failing_i}"),
             ("zeros", f"hypothesis={fixed[2].hypothesis} conclusion={fixed[2].conclusion}"),
             ("random", samples), ("hypothesis_held", hyp), ("implication_held", held)]
    ok = (fixed[0].conclusion is True and not fixed[1].hypothesis and fixed[2].conclusion is True
          and held == samples)
    return items, ok


def case_degree_additivity(samples: int = 40) -> tuple[Items, bool]:
    rng = random.Random(7)
    d1 = Derivation.partial(0, 1)
    d2 = Derivation.partial(0, 2)
    passed = 0
    for k in range(samples):
        n, D = (1, d1) if k % 2 == 0 else (2, d2)
        a = b = LaurentPoly({}, n)
        while a.is_zero():
            a = random_laurent(rng, n, 4, 4, low=0)
        while b.is_zero():
            b = random_laurent(rng, n, 4, 4, low=0)
        passed += degree_additivity_check(D, a, b, 64)
    x = laurent_vars(1)[0]
    hand = degree_additivity_check(d1, x ** 2, x ** 3, 64)
    return [("x^2*x^3", hand), ("samples", samples), ("passed", passed)], hand and passed == samples


def case_periodicity_swap() -> tuple[Items, bool]:
    x1, x2 = laurent_vars(2)
    swap = detect_periodicity(Endomorphism((x2, x1)), 10)
    proj = detect_periodicity(Endomorphism((x1, x1)), 10)
    u = TruncSeries.var(0, 1, 6)
    unip = detect_periodicity(Endomorphism((u + u * u,)), 10)
    cert = eventual_period_certificate(Matrix([[0, 1], [1, 0]]))
    items = [("swap", (swap.i, swap.j)), ("swap.scope", swap.scope),
             ("x1,x1", (proj.i, proj.j)), ("x1+x1^2 at order 6", unip),
             ("swap_matrix.N", cert.N), ("swap_matrix.d", cert.d)]
    ok = (swap.i, swap.j) == (1, 3) and (proj.i, proj.j) == (1, 2) and unip is None \
        and (cert.N, cert.d) == (1, 2)
    return items, ok


def case_jc_certificate() -> tuple[Items, bool]:
    C = Matrix([[0, 0, -1], [1, 0, 1], [0, 1, 1]])
    jc = jc_decompose(C)
    S, N = jc.S, jc.N
    inv_ok = (S + N == C and S * N == N * S and (N ** 3).is_zero()
              and min_poly(S).is_squarefree())
    neg = eventual_period_certificate(Matrix([[-1]]))
    two = eventual_period_certificate(Matrix([[2]]))
    nil = eventual_period_certificate(Matrix([[0, 1], [0, 0]]))
    rot = roots_of_unity_orders(Matrix([[0, 1], [-1, 0]]))
    items = [("companion.charpoly", char_poly(C)), ("companion.S", S.rows), ("companion.N", N.rows),
             ("companion.N_index", nilpotence_index(N)), ("companion.invariants", inv_ok),
             ("[-1]", (neg.N, neg.d)), ("[[0,1],[0,0]]", (nil.N, nil.d)),
             ("[2]", two.reason), ("rotation.d", rot.d)]
    ok = (inv_ok and nilpotence_index(N) == 2 and (neg.N, neg.d) == (1, 2) and neg.verified
          and (nil.N, nil.d) == (2, 1) and two.refused and rot.d == 4)
    return items, ok


def case_finite_order_normalize(order: int = 16) -> tuple[Items, bool]:
    x1, x2 = laurent_vars(2)
    rep = normalize_endomorphism(Endomorphism((x2, x1)), order)
    y = [g.to_poly() for g in rep.coordinates]
    ok = (y == [x1 + x2, x1 - x2] and rep.eigenvalues == [1, -1] and rep.inverse_certified)
    return rep.items(), ok


REGISTRY: dict[str, ReproCase] = {c.ident: c for c in [
    ReproCase("dk-image", "image of 1 - phi, phi(x_i) = p_i x_i, is the constant-term-free subspace",
              case_dk_image),
    ReproCase("dk-derivation", "image of sum c_i x_i d/dx_i with Q-independent c_i is the "
              "constant-term-free subspace", case_dk_derivation),
    ReproCase("series-counterexample", "a = 1/x1, b = 1/(1-x1): every b*a^m has constant term 1",
              case_series_counterexample, ("mmax", "order")),
    ReproCase("charp-derivation", "t^(p-1) is not in the image of d/dt over F_p",
              case_charp_derivation, ("p",)),
    ReproCase("charp-ederivation", "1 is in, t^(p-1) is not in, the image of 1 - phi, phi(t) = t+1, over F_p",
              case_charp_ederivation, ("p",)),
    ReproCase("telescope", "sum_{i<p} (t+i)^(p-1) = -1 in F_p[t]", case_telescope, ("p",)),
    ReproCase("higher-leibniz", "higher Leibniz rule D^n(ab) = sum binom(n,i) D^i(a) D^(n-i)(b)", case_higher_leibniz),
    ReproCase("geometric-derivative", "D^m(1/(1-v)) for D(v) = cv: polynomial remainder of degree <= m", case_geometric_derivative),
    ReproCase("radical-comparison", "radical of im(1 - phi) equals radical of the eventual kernel ideal",
              case_radical_comparison),
    ReproCase("power-sum-nilpotence", "vanishing power sums force nilpotence", case_power_sum_nilpotence),
    ReproCase("degree-additivity", "D-degree of a product is the sum of D-degrees",
              case_degree_additivity),
    ReproCase("periodicity-swap", "least (i, j) with phi^i = phi^j", case_periodicity_swap),
    ReproCase("jc-certificate", "Jordan-Chevalley split and the (N, d) period pair",
              case_jc_certificate),
    ReproCase("finite-order-normalize", "eigen-coordinates of a finite-order endomorphism of k[[x]]",
              case_finite_order_normalize, ("order",)),
]}


def render(items: Items) -> str:
    return "".join(f"{k}\t{fmt_value(v)}\n" for k, v in items)


def golden_text(ident: str) -> str | None:
    try:
        return resources.files("mzlab").joinpath("golden", f"{ident}.txt").read_text()
    except FileNotFoundError:
        return None


@dataclass
class ReproResult:
    ident: str
    text: str
    semantic: bool
    golden: bool | None       # None when parameters differ from the defaults

    @property
    def passed(self) -> bool:
        return self.semantic and self.golden is not False


def run_case(ident: str, **params) -> ReproResult:
    if ident not in REGISTRY:
        raise InputError(f"unknown repro case {ident!r}; known: {', '.join(REGISTRY)}")
    case = REGISTRY[ident]
    used = {k: v for k, v in params.items() if k in case.params and v is not None}
    items, ok = case.run(**used)
    text = render(items)
    golden = None
    defaults = inspect.signature(case.run).parameters
    if all(defaults[k].default == v for k, v in used.items()):
        expected = golden_text(ident)
        golden = expected is not None and expected == text
    return ReproResult(ident, text, ok, golden)

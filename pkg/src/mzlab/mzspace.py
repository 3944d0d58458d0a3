"""MZ-space experiments on coefficient-kernel subspaces.

M = {f : f_a = 0 for a in S}. Radical and MZ verdicts are bounded scans
whose bounds travel with the report; a failure witness is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

from .errors import InconclusiveError, InputError
from .locfin import PeriodicityCertificate, detect_periodicity
from .operators import Derivation, EDerivation, Endomorphism, Operator
from .report import Report
from .rings import GF, QQ, LaurentPoly, LocalSeries, Matrix, TruncSeries, is_prime
from .rings.field import Field
from .rings.laurent import monomial_key

Element = Union[LaurentPoly, TruncSeries, LocalSeries]


@dataclass(frozen=True)
class SubspaceSpec:
    """f is in M iff f_a = 0 for every a in S.

    With ``cofinite`` set, ``support`` lists the complement of S instead,
    so f is in M iff every exponent of f lies in ``support``.
    """

    support: frozenset
    cofinite: bool = False

    def __init__(self, support: Iterable[Sequence[int]], cofinite: bool = False):
        object.__setattr__(self, "support", frozenset(tuple(a) for a in support))
        object.__setattr__(self, "cofinite", cofinite)

    @classmethod
    def constant_free(cls, n: int) -> "SubspaceSpec":
        return cls([(0,) * n])

    def text(self) -> str:
        key = "kernel-support-cofinite" if self.cofinite else "kernel-support"
        inner = ", ".join("(" + ",".join(map(str, a)) + ")" for a in sorted(self.support, key=monomial_key))
        return f"{key}: {{{inner}}}"


def in_subspace(f: Element, M: SubspaceSpec) -> bool:
    if M.cofinite:
        if not isinstance(f, LaurentPoly):
            raise InputError("co-finite supports need finitely many known coefficients (Laurent input)")
        return all(a in M.support for a in f.terms)
    for a in M.support:
        if len(a) != f.nvars:
            raise InputError(f"support exponent {a} has the wrong length for {f.nvars} variables")
        if not isinstance(f, LaurentPoly) and not f.known(a):
            raise InconclusiveError(f"coefficient of x^{a} lies beyond the truncation order")
        if f.coeff(a) != 0:
            return False
    return True


@dataclass
class RadicalReport(Report):
    m0: int
    m1: int
    witness: int | None     # first m in [m0, m1] with a^m outside M

    @property
    def in_radical(self) -> bool:
        return self.witness is None

    def items(self):
        verdict = "in_radical_up_to_bound" if self.in_radical else "not_in_radical"
        return [("verdict", verdict), ("m0", self.m0), ("m1", self.m1), ("witness", self.witness)]


def radical_membership(a: Element, M: SubspaceSpec, m0: int, m1: int) -> RadicalReport:
    if m0 < 1 or m1 < m0:
        raise InputError("need 1 <= m0 <= m1")
    p = a ** m0
    for m in range(m0, m1 + 1):
        if m > m0:
            p = p * a
        if not in_subspace(p, M):
            return RadicalReport(m0, m1, m)
    return RadicalReport(m0, m1, None)


@dataclass
class MZVerdict:
    b: Element
    N: int | None                  # least N with b*a^m in M for N <= m <= m_max
    witnesses: list                # m with b*a^m outside M (all of them when violated)

    @property
    def violated(self) -> bool:
        return self.N is None


@dataclass
class MZReport(Report):
    m_max: int
    verdicts: list

    @property
    def violated(self) -> bool:
        return any(v.violated for v in self.verdicts)

    def items(self):
        out = [("m_max", self.m_max)]
        for k, v in enumerate(self.verdicts):
            tag = f"b{k + 1}"
            out.append((f"{tag}.verdict", "violated" if v.violated else "tail_in_M"))
            if v.violated:
                out.append((f"{tag}.violations", len(v.witnesses)))
                out.append((f"{tag}.witnesses", tuple(v.witnesses)))
            else:
                out.append((f"{tag}.N", v.N))
        return out


def mz_falsify(a: Element, M: SubspaceSpec, bs: Sequence[Element], m_max: int) -> MZReport:
    """Scan b*a^m for m = 1..m_max and each b; a must pass the radical scan first."""
    rad = radical_membership(a, M, 1, m_max)
    if not rad.in_radical:
        raise InputError(f"a is not in the radical up to {m_max} (a^{rad.witness} is outside M); "
                         "the MZ test would be vacuous")
    verdicts = []
    for b in bs:
        inside = []
        p = b
        for m in range(1, m_max + 1):
            p = p * a
            inside.append(in_subspace(p, M))
        if not inside[-1]:
            verdicts.append(MZVerdict(b, None, [m + 1 for m, ok in enumerate(inside) if not ok]))
            continue
        N = m_max
        while N > 1 and inside[N - 2]:
            N -= 1
        verdicts.append(MZVerdict(b, N, [m + 1 for m, ok in enumerate(inside) if not ok]))
    return MZReport(m_max, verdicts)


# -- images of diagonal operators ---------------------------------------------

@dataclass(frozen=True)
class DiagonalSpec:
    """Diagonal operator on Q[x, x^-1].

    kind "endo": delta = 1 - phi with phi(x_i) = weights[i] * x_i.
    kind "derivation": D = sum c_i x_i d/dx_i where c_i = weights[i] is a
    vector in Q^d standing for sum_k c_i[k] * theta_k with theta_1..theta_d
    linearly independent over Q.
    """

    kind: str
    weights: tuple

    def __post_init__(self):
        if self.kind not in ("endo", "derivation"):
            raise InputError(f"unknown diagonal kind {self.kind!r}")
        if self.kind == "endo":
            w = tuple(Fraction(x) for x in self.weights)
            if any(x == 0 for x in w):
                raise InputError("malformed spec: a diagonal scaling factor is zero")
        else:
            w = tuple(tuple(Fraction(c) for c in v) for v in self.weights)
            if len({len(v) for v in w}) > 1:
                raise InputError("derivation weight vectors must share one length")
        object.__setattr__(self, "weights", w)

    @property
    def nvars(self) -> int:
        return len(self.weights)


@dataclass
class ImageReport(Report):
    member: bool
    preimage: Element | None
    obstructions: list
    unconditional: bool = True
    bound: int | None = None
    certificate: str | None = None
    theta: tuple | None = None

    def items(self):
        if self.member:
            verdict = "member"
        else:
            verdict = "non_member" if self.bound is None else "no_solution_within_bound"
        out = [("verdict", verdict)]
        if self.bound is not None:
            out.append(("bound", self.bound))
        if self.member:
            out.append(("preimage", self.preimage))
            if self.theta is not None:
                out.append(("theta", self.theta))
        else:
            if self.obstructions:
                out.append(("obstructions", "{" + ", ".join(
                    "(" + ",".join(map(str, a)) + ")" for a in self.obstructions) + "}"))
            out.append(("unconditional", self.unconditional))
            if self.certificate:
                out.append(("certificate", self.certificate))
        return out


def _ell(spec: DiagonalSpec, a: Sequence[int]) -> tuple:
    d = len(spec.weights[0]) if spec.weights else 0
    return tuple(sum(a[i] * spec.weights[i][k] for i in range(len(a))) for k in range(d))


def _pick_theta(spec: DiagonalSpec, exps: Sequence[tuple]) -> tuple:
    """theta* = (1, t, t^2, ...) with the least t >= 2 keeping every <ell_a, theta*> nonzero."""
    ells = [_ell(spec, a) for a in exps]
    d = len(spec.weights[0]) if spec.weights else 0
    t = 2
    while True:
        theta = tuple(Fraction(t) ** k for k in range(d))
        if all(sum(x * y for x, y in zip(l, theta)) != 0 for l in ells):
            return theta
        t += 1


def diagonal_operator(spec: DiagonalSpec, theta: tuple | None = None) -> Operator:
    """The operator itself; a derivation spec is specialized at theta."""
    n = spec.nvars
    if spec.kind == "endo":
        return EDerivation(Endomorphism.diagonal(spec.weights))
    scal = [sum(x * y for x, y in zip(c, theta)) for c in spec.weights]
    return Derivation.euler(scal, n)


def image_membership_diagonal(spec: DiagonalSpec, f: LaurentPoly) -> ImageReport:
    """Monomial-by-monomial solve of L(g) = f for a diagonal L.

    For a derivation spec the preimage has entries in Q(theta); it is
    returned specialized at a rational theta* that keeps every needed
    divisor nonzero, and checked by applying the specialized derivation.
    """
    if f.nvars != spec.nvars:
        raise InputError("spec and element have different variable counts")
    obstructions, good = [], []
    for a, c in f.items():
        if spec.kind == "endo":
            mu = Fraction(1)
            for lam, e in zip(spec.weights, a):
                mu *= lam ** e
            (obstructions if mu == 1 else good).append(a)
        else:
            (good if any(_ell(spec, a)) else obstructions).append(a)
    if obstructions:
        return ImageReport(False, None, obstructions)
    theta = None
    terms = {}
    if spec.kind == "endo":
        for a in good:
            mu = Fraction(1)
            for lam, e in zip(spec.weights, a):
                mu *= lam ** e
            terms[a] = f.coeff(a) / (1 - mu)
    else:
        theta = _pick_theta(spec, good)
        for a in good:
            terms[a] = f.coeff(a) / sum(x * y for x, y in zip(_ell(spec, a), theta))
    g = LaurentPoly(terms, f.nvars, f.field)
    if diagonal_operator(spec, theta)(g) != f:
        raise AssertionError("diagonal preimage does not reproduce f")
    return ImageReport(True, g, [], theta=theta)


# -- bounded image membership -------------------------------------------------

def _operator_polynomial(L: Operator) -> bool:
    if isinstance(L, Derivation):
        return all(p.is_polynomial() for p in L.coeffs)
    phi = L.phi if isinstance(L, EDerivation) else L
    return all(g.is_polynomial() for g in phi.images)


def _basis(n: int, B: int, polynomial: bool) -> list[tuple]:
    if polynomial:
        out = [a for a in product(range(B + 1), repeat=n) if sum(a) <= B]
    else:
        out = list(product(range(-B, B + 1), repeat=n))
    return sorted(out, key=monomial_key)


def _single_term(D: Derivation):
    """(c, a, j) when D = c * x^a * d/dx_j, else None."""
    terms = [(j, a, c) for j, p in enumerate(D.coeffs) for a, c in p.terms.items()]
    if len(terms) != 1:
        return None
    j, a, c = terms[0]
    return c, a, j


def _single_term_obstruction(D: Derivation, f: LaurentPoly, polynomial: bool) -> str | None:
    # D(x^b) = c * b_j * x^(b + a - e_j): distinct b give distinct monomials,
    # so each monomial of f pins down the one coefficient of g that reaches it
    st = _single_term(D)
    if st is None:
        return None
    c, a, j = st
    red = D.field.reduce
    for t in f.terms:
        b = tuple(x - y + (1 if i == j else 0) for i, (x, y) in enumerate(zip(t, a)))
        if polynomial and any(e < 0 for e in b):
            return f"x^{t} can only come from x^{b}, which is not a polynomial"
        if red(c * b[j]) == 0:
            return f"x^{t} can only come from x^{b}, and D kills that monomial"
    return None


def _permutes_points(phi: Endomorphism) -> bool:
    p = phi.field.char
    n = phi.nvars
    if p ** n > 100_000:
        return False
    pts = list(product(range(p), repeat=n))
    images = {tuple(g.evaluate(P) for g in phi.images) for P in pts}
    return len(images) == len(pts)


def _point_sum_obstruction(L: EDerivation, f: LaurentPoly) -> str | None:
    # if phi permutes F_p^n then sum over points of (h - phi(h)) is 0 for every h
    phi = L.phi
    p = phi.field.char
    if p == 0 or not f.is_polynomial() or not _operator_polynomial(L):
        return None
    if not _permutes_points(phi):
        return None
    s = phi.field.reduce(sum(f.evaluate(P) for P in product(range(p), repeat=phi.nvars)))
    if s != 0:
        return (f"phi permutes F_{p}^{phi.nvars} and the sum of f over all points is "
                f"{s} != 0, while it is 0 on the image")
    return None


def image_membership_bounded(L: Operator, f: LaurentPoly, B: int) -> ImageReport:
    """Solve L(g) = f over g supported in degree <= B (or the box [-B, B]^n for Laurent input)."""
    if B < 0:
        raise InputError("bound must be >= 0")
    n = f.nvars
    polynomial = f.is_polynomial() and _operator_polynomial(L)
    for a in f.terms:
        if (sum(a) if polynomial else max(abs(e) for e in a)) > B:
            raise InputError(f"f has support x^{a} outside the degree bound {B}")
    field = f.field
    basis = _basis(n, B, polynomial)
    images = [L(LaurentPoly({b: 1}, n, field)) for b in basis]
    keys = sorted(set(f.terms).union(*(g.terms for g in images)), key=monomial_key)
    row = {k: i for i, k in enumerate(keys)}
    rows = [[0] * len(basis) for _ in keys]
    for j, g in enumerate(images):
        for a, c in g.terms.items():
            rows[row[a]][j] = c
    rhs = [f.coeff(k) for k in keys]
    sol = Matrix(rows, field).solve(rhs) if keys else tuple(0 for _ in basis)
    if sol is not None:
        g = LaurentPoly({b: c for b, c in zip(basis, sol) if c}, n, field)
        if L(g) != f:
            raise AssertionError("bounded preimage does not reproduce f")
        return ImageReport(True, g, [], bound=B)
    cert = None
    if isinstance(L, Derivation):
        cert = _single_term_obstruction(L, f, polynomial)
    elif isinstance(L, EDerivation):
        cert = _point_sum_obstruction(L, f)
    return ImageReport(False, None, [], unconditional=cert is not None, bound=B, certificate=cert)


def charp_telescope(p: int):
    """sum_{i=0}^{p-1} (t + i)^(p-1) in F_p[t], expanded directly."""
    from .rings import UniPoly
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    F = GF(p)
    total = UniPoly((), F)
    for i in range(p):
        total = total + UniPoly((i, 1), F) ** (p - 1)
    return total


# -- eventual kernel and radical comparison -----------------------------------

def _check_linear(phi: Endomorphism):
    for g in phi.images:
        if not isinstance(g, LaurentPoly) or (g and not (g.is_polynomial() and g.is_homogeneous(1))):
            raise InputError("this test needs phi to map each x_i to a linear form")


def _degree_basis(n: int, d: int) -> list[tuple]:
    return sorted((a for a in product(range(d + 1), repeat=n) if sum(a) == d), key=monomial_key)


def _degree_matrix(L: Operator, n: int, d: int, field: Field) -> tuple[list, Matrix]:
    basis = _degree_basis(n, d)
    idx = {b: i for i, b in enumerate(basis)}
    cols = []
    for b in basis:
        img = L(LaurentPoly({b: 1}, n, field))
        col = [0] * len(basis)
        for a, c in img.terms.items():
            col[idx[a]] = c
        cols.append(col)
    return basis, Matrix.from_columns(cols, field)


@dataclass
class KernelIdeal(Report):
    certificate: PeriodicityCertificate
    degree_bound: int
    basis: list          # I intersected with polynomials of degree <= degree_bound

    def items(self):
        out = [("i", self.certificate.i), ("j", self.certificate.j),
               ("scope", self.certificate.scope), ("degree_bound", self.degree_bound),
               ("dim", len(self.basis))]
        out += [(f"g{k + 1}", g) for k, g in enumerate(self.basis)]
        return out


def _certify(phi: Endomorphism, i_max: int) -> PeriodicityCertificate:
    _check_linear(phi)
    cert = detect_periodicity(phi, i_max)
    if cert is None:
        raise InconclusiveError(f"no phi^i = phi^j found with j <= {i_max}; periodicity not certified")
    return cert


def eventual_kernel_ideal(phi: Endomorphism, degree_bound: int, i_max: int = 12) -> KernelIdeal:
    """I = {a : phi^r(a) = 0 for some r} = ker phi^i once phi^i = phi^j is certified.

    phi maps x_i to linear forms, so it preserves degrees and I is graded;
    the basis lists I in each degree up to the bound.
    """
    cert = _certify(phi, i_max)
    phi_i = phi.power(cert.i)
    n, field = phi.nvars, phi.field
    out = []
    for d in range(degree_bound + 1):
        basis, A = _degree_matrix(phi_i, n, d, field)
        for v in A.kernel():
            out.append(LaurentPoly({b: c for b, c in zip(basis, v) if c}, n, field))
    return KernelIdeal(cert, degree_bound, out)


def in_image_graded(L: Operator, f: LaurentPoly, cache: dict | None = None) -> bool:
    """f in L(Q[x]) for a degree-preserving L, tested one homogeneous component at a time."""
    n = f.nvars
    cache = {} if cache is None else cache
    for d in sorted({sum(a) for a in f.terms}):
        if d not in cache:
            cache[d] = _degree_matrix(L, n, d, f.field)
        basis, A = cache[d]
        part = f.homogeneous_part(d)
        if A.solve([part.coeff(b) for b in basis]) is None:
            return False
    return True


@dataclass
class RadicalComparison(Report):
    certificate: PeriodicityCertificate
    m0: int
    m1: int
    rows: list          # (a, in r(M) within window, in r(I) within bound)

    @property
    def agree(self) -> bool:
        return all(rm == ri for _, rm, ri in self.rows)

    def items(self):
        out = [("i", self.certificate.i), ("j", self.certificate.j),
               ("m0", self.m0), ("m1", self.m1)]
        for a, rm, ri in self.rows:
            out.append((str(a), f"r(M)={'yes' if rm else 'no'} r(I)={'yes' if ri else 'no'}"))
        out.append(("agree", self.agree))
        return out


def compare_radicals(phi: Endomorphism, tests: Sequence[LaurentPoly], m0: int = 1, m1: int = 8,
                     i_max: int = 12) -> RadicalComparison:
    """For M = (1 - phi)(Q[x]) and I = eventual kernel: a^m in M for all m in [m0, m1]
    versus a^m1 in I (I is an ideal, so that covers every m <= m1)."""
    if m0 < 1 or m1 < m0:
        raise InputError("need 1 <= m0 <= m1")
    cert = _certify(phi, i_max)
    phi_i = phi.power(cert.i)
    delta = EDerivation(phi)
    cache: dict = {}
    rows = []
    for a in tests:
        p = a ** m0
        in_m = True
        for m in range(m0, m1 + 1):
            if m > m0:
                p = p * a
            if not in_image_graded(delta, p, cache):
                in_m = False
                break
        in_i = phi_i(a ** m1).is_zero()
        rows.append((a, in_m, in_i))
    return RadicalComparison(cert, m0, m1, rows)


def truncation_monomials(n: int, degree_bound: int, field: Field = QQ) -> list[LaurentPoly]:
    return [LaurentPoly({a: 1}, n, field) for d in range(degree_bound + 1) for a in _degree_basis(n, d)]


# -- power sums ----------------------------------------------------------------

@dataclass
class PowerSumReport(Report):
    r: int
    hypothesis: bool
    failing_i: int | None
    nilpotent: list | None     # per element, only when the hypothesis holds

    @property
    def conclusion(self) -> bool | None:
        return None if self.nilpotent is None else all(self.nilpotent)

    @property
    def implication_holds(self) -> bool:
        return not self.hypothesis or bool(self.conclusion)

    def items(self):
        return [("r", self.r), ("hypothesis", self.hypothesis), ("failing_i", self.failing_i),
                ("conclusion", self.conclusion), ("implication_holds", self.implication_holds)]


def power_sum_nilpotency_check(elements: Sequence[TruncSeries], r: int) -> PowerSumReport:
    """If a_1^(r+i) + ... + a_n^(r+i) = 0 for i = 1..n, each a_j should be nilpotent.

    Elements of k[x]/(x^k) are series of order k - 1; such an element is
    nilpotent iff its k-th power vanishes.
    """
    if not elements:
        raise InputError("need at least one element")
    if r < 0:
        raise InputError("r must be >= 0")
    n = len(elements)
    for i in range(1, n + 1):
        s = elements[0].zero()
        for a in elements:
            s = s + a ** (r + i)
        if not s.is_zero():
            return PowerSumReport(r, False, i, None)
    bound = elements[0].order + 1
    return PowerSumReport(r, True, None, [(a ** bound).is_zero() for a in elements])

"""Spectral data of rational matrices without numeric eigenvalues.

Everything is phrased through polynomial factors over Q: characteristic
and minimal polynomials, the Jordan-Chevalley split A = S + N, cyclotomic
recognition of factors, and the (N, d) pair with A^(N+d) = A^N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd, log2

import sympy

from .errors import InputError, UnsupportedError
from .report import Report
from .rings import QQ, Matrix, SparseEchelon, UniPoly


def _require_square(A: Matrix):
    if not A.is_square:
        raise InputError(f"matrix must be square, got {A.nrows}x{A.ncols}")


def _hessenberg(A: Matrix) -> list[list]:
    f = A.field
    n = A.nrows
    H = [list(r) for r in A.rows]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for r in H:
                r[piv], r[j + 1] = r[j + 1], r[piv]
        for i in range(j + 2, n):
            if H[i][j] == 0:
                continue
            m = f.div(H[i][j], H[j + 1][j])
            H[i] = [f.reduce(a - m * b) for a, b in zip(H[i], H[j + 1])]
            for r in H:
                r[j + 1] = f.reduce(r[j + 1] + m * r[i])
    return H


def char_poly(A: Matrix) -> UniPoly:
    """det(T*I - A) via Hessenberg reduction (any field)."""
    _require_square(A)
    f = A.field
    H = _hessenberg(A)
    n = len(H)
    T = UniPoly.T(f)
    p = [UniPoly.constant(1, f)]
    for m in range(n):
        acc = (T - H[m][m]) * p[m]
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = f.reduce(prod * H[i + 1][i])
            if prod == 0:
                break
            acc = acc - p[i] * f.reduce(H[i][m] * prod)
        p.append(acc)
    return p[n]


def min_poly(A: Matrix) -> UniPoly:
    """Least-degree monic annihilator, from the first dependency among I, A, A^2, ..."""
    _require_square(A)
    f = A.field
    n = A.nrows
    ech = SparseEchelon(f)
    P = Matrix.identity(n, f)
    k = 0
    while True:
        v = {(i, j): P[i, j] for i in range(n) for j in range(n) if P[i, j] != 0}
        combo = ech.add(v)
        if combo is not None:
            coeffs = [f.reduce(-combo.get(i, 0)) for i in range(k)] + [1]
            return UniPoly(coeffs, f)
        P = P * A
        k += 1


def t_adic_valuation(p: UniPoly) -> int:
    if p.is_zero():
        raise InputError("valuation of the zero polynomial")
    return next(k for k, c in enumerate(p.coeffs) if c != 0)


@dataclass
class RationalJC(Report):
    S: Matrix
    N: Matrix

    def items(self):
        return [("S", self.S.rows), ("N", self.N.rows)]


def jc_decompose(A: Matrix) -> RationalJC:
    """A = S + N with S semisimple, N nilpotent, SN = NS (Newton iteration on g = sqfree(chi_A))."""
    _require_square(A)
    if A.field.char != 0:
        raise UnsupportedError("Jordan-Chevalley splitting is implemented over Q only")
    n = A.nrows
    if n == 0:
        return RationalJC(A, A)
    g = char_poly(A).squarefree_part()
    dg = g.derivative()
    S = A
    for _ in range(ceil(log2(n)) + 1 if n > 1 else 1):
        gS = g(S)
        if gS.is_zero():
            break
        S = S - gS * dg(S).inverse()
    if not g(S).is_zero():
        raise AssertionError("Newton iteration did not reach a root of the squarefree part")
    return RationalJC(S, A - S)


def nilpotence_index(N: Matrix) -> int:
    """Smallest k >= 1 with N^k = 0."""
    _require_square(N)
    n = N.nrows
    P = N
    for k in range(1, max(n, 1) + 1):
        if P.is_zero():
            return k
        P = P * N
    raise InputError("matrix is not nilpotent")


# -- cyclotomic recognition ------------------------------------------------------

def _factorint(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def totient(m: int) -> int:
    if m < 1:
        raise InputError("totient needs m >= 1")
    out = m
    for p in _factorint(m):
        out = out // p * (p - 1)
    return out


def totient_inverse(k: int) -> list[int]:
    """All m with totient(m) = k; totient(m) >= sqrt(m/2) bounds the search by 2k^2."""
    if k < 1:
        return []
    return [m for m in range(1, 2 * k * k + 1) if totient(m) == k]


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(m: int) -> tuple:
    p = UniPoly([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            p = p // UniPoly(_cyclotomic_coeffs(d))
    return p.coeffs


def cyclotomic(m: int) -> UniPoly:
    if m < 1:
        raise InputError("cyclotomic polynomial needs m >= 1")
    return UniPoly(_cyclotomic_coeffs(m))


def factor_over_q(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Monic irreducible factors with multiplicities (ordered by degree, then coefficients)."""
    if p.field.char != 0:
        raise UnsupportedError("factorization is implemented over Q only")
    if p.degree < 1:
        return []
    T = sympy.Symbol("T")
    sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                     for c in reversed(p.coeffs)], T, domain="QQ")
    _, facs = sympy.factor_list(sp)
    out = []
    for q, mult in facs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(q.all_coeffs())]
        out.append((UniPoly(coeffs).monic(), int(mult)))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def describe_root(q: UniPoly) -> str:
    if q.degree == 1:
        return f"eigenvalue {QQ.fmt(QQ.reduce(-q[0]))}"
    return f"eigenvalues = roots of {q}"


@dataclass
class FactorInfo:
    poly: UniPoly
    multiplicity: int
    kind: str            # "zero-root", "cyclotomic", "other"
    order: int | None = None

    def text(self) -> str:
        tag = f"cyclotomic({self.order})" if self.kind == "cyclotomic" else self.kind
        return f"({self.poly})^{self.multiplicity} {tag}"


@dataclass
class CycloReport(Report):
    charpoly: UniPoly
    factors: list[FactorInfo]

    @property
    def orders(self) -> list[int]:
        return sorted({f.order for f in self.factors if f.kind == "cyclotomic"})

    @property
    def non_root_of_unity(self) -> list[FactorInfo]:
        return [f for f in self.factors if f.kind == "other"]

    @property
    def d(self) -> int | None:
        if self.non_root_of_unity:
            return None
        out = 1
        for m in self.orders:
            out = out * m // gcd(out, m)
        return out

    def product(self) -> UniPoly:
        out = UniPoly.constant(1)
        for f in self.factors:
            out = out * f.poly ** f.multiplicity
        return out

    def items(self):
        out = [("charpoly", self.charpoly)]
        for k, f in enumerate(self.factors):
            out.append((f"factor{k + 1}", f.text()))
        out += [("orders", ",".join(map(str, self.orders)) or "none"), ("d", self.d),
                ("all_roots_of_unity", not self.non_root_of_unity)]
        return out


def classify_factor(q: UniPoly) -> tuple[str, int | None]:
    if q.degree == 1 and q[0] == 0:
        return "zero-root", None
    for m in totient_inverse(q.degree):
        if cyclotomic(m) == q:
            return "cyclotomic", m
    return "other", None


def roots_of_unity_orders(A: Matrix) -> CycloReport:
    """Factor chi_A over Q and mark each factor as T, some Phi_m, or other."""
    _require_square(A)
    chi = char_poly(A)
    infos = [FactorInfo(q, mult, *classify_factor(q)) for q, mult in factor_over_q(chi)]
    rep = CycloReport(chi, infos)
    if rep.product() != chi:
        raise AssertionError("factorization does not reproduce the characteristic polynomial")
    return rep


@dataclass
class BlockReport(Report):
    minpoly: UniPoly
    violations: list[tuple[UniPoly, int]]

    @property
    def clean(self) -> bool:
        return not self.violations

    def items(self):
        out = [("minpoly", self.minpoly), ("clean", self.clean)]
        for q, mult in self.violations:
            out.append(("violation", f"{describe_root(q)} has multiplicity {mult} in the minimal polynomial"))
        return out


def jordan_block_check(A: Matrix) -> BlockReport:
    """Every irreducible factor other than T must divide min_poly exactly once."""
    _require_square(A)
    mp = min_poly(A)
    bad = [(q, m) for q, m in factor_over_q(mp) if not (q.degree == 1 and q[0] == 0) and m > 1]
    return BlockReport(mp, bad)


@dataclass
class PeriodCertificate(Report):
    N: int | None
    d: int | None
    verified: bool
    d_minimal: bool
    reason: str | None = None

    @property
    def refused(self) -> bool:
        return self.reason is not None

    def items(self):
        if self.refused:
            return [("status", "refused"), ("reason", self.reason)]
        return [("status", "certified"), ("N", self.N), ("d", self.d),
                ("verified", self.verified), ("d_minimal", self.d_minimal)]


def eventual_period_certificate(A: Matrix) -> PeriodCertificate:
    """(N, d) with A^(N+d) = A^N, or a refusal naming the obstruction."""
    cyc = roots_of_unity_orders(A)
    if cyc.non_root_of_unity:
        q = cyc.non_root_of_unity[0].poly
        return PeriodCertificate(None, None, False, False,
                                 f"{describe_root(q)} is not a root of unity")
    blocks = jordan_block_check(A)
    if not blocks.clean:
        q, _ = blocks.violations[0]
        return PeriodCertificate(None, None, False, False,
                                 f"nontrivial Jordan block at {describe_root(q)}")
    N = max(1, t_adic_valuation(blocks.minpoly))
    d = cyc.d
    AN = A ** N
    ok = A ** (N + d) == AN
    minimal = ok and all(A ** (N + e) != AN for e in range(1, d) if d % e == 0)
    return PeriodCertificate(N, d, ok, minimal)

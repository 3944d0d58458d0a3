"""Local finiteness: cyclic subspaces, local nilpotence, D-degree, invariant
spaces of endomorphisms, periodicity search and eigen-coordinates on k[[x]].

All answers are bounded: a dimension cap (and, on k[[x]], a truncation
order) is part of every report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InconclusiveError, InputError, UnsupportedError
from .jordan import jordan_block_check, nilpotence_index, roots_of_unity_orders
from .operators import Endomorphism, Operator, RingElement
from .report import Report
from .rings import Matrix, SparseEchelon, TruncSeries, compose, formal_inverse


def _order(f: RingElement) -> int | None:
    return f.order if isinstance(f, TruncSeries) else None


def _lower(elems: list, order: int | None) -> list:
    if order is None:
        return elems
    return [e.truncate(order) if e.order > order else e for e in elems]


def _combine(basis: Sequence[RingElement], coords: Sequence) -> RingElement:
    out = basis[0].zero()
    for b, c in zip(basis, coords):
        if c:
            out = out + b.scale(c)
    return out


@dataclass
class CyclicSpace(Report):
    """span{a, L(a), L^2(a), ...} with the Krylov basis a, L(a), ..., L^(dim-1)(a)."""

    element: RingElement
    basis: list
    matrix: Matrix | None      # companion action of L, column convention; None unless closed
    status: str                # "closed" or "exceeded_cap"
    cap: int
    order: int | None          # truncation order the verdict holds at (series only)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def items(self):
        out = [("status", self.status), ("dim", self.dim), ("cap", self.cap)]
        if self.order is not None:
            out.append(("order", self.order))
        for k, b in enumerate(self.basis):
            out.append((f"L^{k}(a)", b))
        if self.matrix is not None:
            out.append(("matrix", self.matrix.rows))
        return out


def _krylov_close(seq: list, field) -> tuple[SparseEchelon, int, dict | None]:
    """Echelonize seq in order; return (echelon, dim, dependency of seq[dim]) at the first dependency."""
    ech = SparseEchelon(field)
    for k, v in enumerate(seq):
        combo = ech.add(dict(v.terms))
        if combo is not None:
            return ech, k, combo
    return ech, len(seq), None


def cyclic_space(L: Operator, a: RingElement, cap: int) -> CyclicSpace:
    """Iterate L from a until the next iterate falls in the span or the span would exceed cap."""
    if cap < 1:
        raise InputError("cap must be >= 1")
    seq = [a]
    order = _order(a)
    ech = SparseEchelon(a.field)
    while True:
        combo = ech.add(dict(seq[-1].terms))
        dim = len(ech)
        if combo is not None:
            basis = seq[:dim]
            cols = [tuple(1 if r == k + 1 else 0 for r in range(dim)) for k in range(dim - 1)]
            if dim:
                cols.append(tuple(combo.get(r, 0) for r in range(dim)))
            M = Matrix.from_columns(cols, a.field) if dim else Matrix.zeros(0, 0, a.field)
            return CyclicSpace(a, basis, M, "closed", cap, order)
        if dim >= cap + 1:
            return CyclicSpace(a, seq[:cap], None, "exceeded_cap", cap, order)
        nxt = L(seq[-1])
        nord = _order(nxt)
        if nord is not None and nord < order:
            # precision dropped: redo the elimination at the lower order
            order = nord
            seq = _lower(seq, order)
            ech, dim, combo = _krylov_close(seq, a.field)
            if combo is not None:
                seq = seq[:dim + 1]
                ech = SparseEchelon(a.field)
                for v in seq[:-1]:
                    ech.add(dict(v.terms))
                nxt = seq.pop()
        seq.append(nxt)


@dataclass
class NilpotenceReport(Report):
    status: str          # "yes", "no_evidence", "exceeded_cap"
    m: int | None
    cap: int
    order: int | None

    def items(self):
        out = [("status", self.status), ("m", self.m), ("cap", self.cap)]
        if self.order is not None:
            out.append(("order", self.order))
        return out


def is_locally_nilpotent_on(L: Operator, a: RingElement, cap: int) -> NilpotenceReport:
    """yes(m) with the least m >= 1 such that L^m(a) = 0, when that happens within the cap."""
    if a.is_zero():
        return NilpotenceReport("yes", 1, cap, _order(a))
    cs = cyclic_space(L, a, cap)
    if not cs.closed:
        return NilpotenceReport("exceeded_cap", None, cap, cs.order)
    # a, ..., L^(dim-1)(a) are independent, so L^m(a) = 0 first happens at m = dim
    last = cs.matrix.column(cs.dim - 1)
    if not any(last):
        return NilpotenceReport("yes", cs.dim, cap, cs.order)
    return NilpotenceReport("no_evidence", None, cap, cs.order)


def d_degree(D: Operator, a: RingElement, cap: int) -> int:
    """min{n >= 0 : D^(n+1)(a) = 0}."""
    if a.is_zero():
        raise InputError("D-degree is undefined for a = 0")
    rep = is_locally_nilpotent_on(D, a, cap)
    if rep.status != "yes":
        raise InconclusiveError(f"operator not certified locally nilpotent on {a} within cap {cap} "
                                f"({rep.status})")
    return rep.m - 1


def degree_additivity_check(D: Operator, a: RingElement, b: RingElement, cap: int) -> bool:
    """deg(ab) = deg(a) + deg(b) for the D-degree."""
    return d_degree(D, a * b, cap) == d_degree(D, a, cap) + d_degree(D, b, cap)


def unit_kill_check(D: Operator, u: RingElement, cap: int) -> bool:
    """A locally nilpotent derivation must send the unit u to 0.

    Local nilpotence is certified on both u and 1/u: nilpotence on u alone
    says nothing (d/dx is nilpotent on x but not on 1/x).
    """
    if not u.is_unit():
        raise InputError(f"{u} is not a unit of the carrier")
    for w in (u, u.inverse()):
        rep = is_locally_nilpotent_on(D, w, cap)
        if rep.status != "yes":
            raise InconclusiveError(f"not certified locally nilpotent on {w} within cap {cap} "
                                    f"({rep.status})")
    return D(u).is_zero()


@dataclass
class InvariantSpace(Report):
    """V = sum_j phi^j(W) with the action matrix of phi on the basis of V."""

    generators: list
    basis: list
    matrix: Matrix | None
    status: str
    cap: int
    order: int | None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def items(self):
        out = [("status", self.status), ("dim", self.dim), ("cap", self.cap)]
        if self.order is not None:
            out.append(("order", self.order))
        for k, b in enumerate(self.basis):
            out.append((f"v{k + 1}", b))
        if self.matrix is not None:
            out.append(("matrix", self.matrix.rows))
        return out


def build_invariant_space(phi: Operator, W: Sequence[RingElement], cap: int) -> InvariantSpace:
    """Close span(W) under phi, at most cap dimensions."""
    W = list(W)
    if not W:
        raise InputError("generator list is empty")
    if cap < len(W):
        raise InputError(f"cap {cap} is smaller than the number of generators {len(W)}")
    field = W[0].field
    order = min((w.order for w in W if isinstance(w, TruncSeries)), default=None)
    W = _lower(W, order)
    ech = SparseEchelon(field)
    basis = []
    for w in W:
        if ech.add(dict(w.terms)) is None:
            basis.append(w)
    cols: list[dict] = []
    k = 0
    while k < len(basis):
        img = phi(basis[k])
        io = _order(img)
        if io is not None and io < order:
            return build_invariant_space(phi, _lower(W, io), cap)
        if io is not None and io > order:
            img = img.truncate(order)
        combo = ech.add(dict(img.terms))
        if combo is None:
            if len(basis) >= cap:
                return InvariantSpace(W, basis, None, "exceeded_cap", cap, order)
            basis.append(img)
            combo = {len(basis) - 1: 1}
        cols.append(combo)
        k += 1
    n = len(basis)
    M = Matrix.from_columns([[c.get(r, 0) for r in range(n)] for c in cols], field)
    return InvariantSpace(W, basis, M, "closed", cap, order)


@dataclass
class PeriodicityCertificate(Report):
    i: int
    j: int
    scope: str     # "on_generators", "on_generators_at_order_K", "on_basis"
    order: int | None = None

    def items(self):
        out = [("status", "periodic"), ("i", self.i), ("j", self.j), ("scope", self.scope)]
        if self.order is not None:
            out.append(("order", self.order))
        return out


def detect_periodicity(phi: Union[Endomorphism, Matrix], i_max: int) -> PeriodicityCertificate | None:
    """Lexicographically least (i, j), 1 <= i < j <= i_max, with phi^i = phi^j.

    Endomorphisms are compared through their generator images (at the
    truncation order on k[[x]]); a matrix is compared entrywise.
    """
    if i_max < 2:
        raise InputError("i_max must be >= 2")
    if isinstance(phi, Matrix):
        iterates = [phi]
        for _ in range(i_max - 1):
            iterates.append(iterates[-1] * phi)
        scope, order = "on_basis", None
        same = lambda u, v: u == v
    else:
        images = phi.images
        iterates = [images]
        for _ in range(i_max - 1):
            iterates.append(tuple(phi(g) for g in iterates[-1]))
        if isinstance(images[0], TruncSeries):
            order = min(g.order for it in iterates for g in it)
            scope = "on_generators_at_order_K"
            same = lambda u, v: all(x.truncate(order) == y.truncate(order) for x, y in zip(u, v))
        else:
            scope, order = "on_generators", None
            same = lambda u, v: u == v
    for i in range(1, i_max):
        for j in range(i + 1, i_max + 1):
            if same(iterates[i - 1], iterates[j - 1]):
                return PeriodicityCertificate(i, j, scope, order)
    return None


@dataclass
class Normalization(Report):
    coordinates: list        # y_1..y_n, eigen-coordinates first
    eigenvalues: list        # c_i for i <= d, None for nilpotent coordinates
    N: int | None            # phi^N kills the nilpotent coordinates
    order: int
    inverse_certified: bool

    @property
    def d(self) -> int:
        return sum(1 for c in self.eigenvalues if c is not None)

    def items(self):
        out = [("status", "normalized"), ("order", self.order), ("d", self.d), ("N", self.N)]
        for k, (y, c) in enumerate(zip(self.coordinates, self.eigenvalues)):
            out.append((f"y{k + 1}", y))
            out.append((f"c{k + 1}", "nilpotent" if c is None else c))
        out.append(("coordinates_certified", self.inverse_certified))
        return out


def _as_series_endo(phi: Endomorphism, order: int) -> Endomorphism:
    imgs = [g if isinstance(g, TruncSeries) else TruncSeries.from_poly(g, order) for g in phi.images]
    return Endomorphism(tuple(g.truncate(order) if g.order > order else g for g in imgs))


def normalize_endomorphism(phi: Endomorphism, order: int, cap: int = 64) -> Normalization:
    """Coordinates y with phi(y_i) = c_i y_i (i <= d) and phi^N(y_i) = 0 (i > d), at the given order.

    Only eigenvalues 1 and -1 (besides 0) are handled: their eigenvectors
    have rational entries. Other roots of unity raise UnsupportedError.
    """
    phi = _as_series_endo(phi, order)
    n = phi.nvars
    field = phi.field
    gens = [TruncSeries.var(i, n, order, field) for i in range(n)]
    inv = build_invariant_space(phi, gens, cap)
    if not inv.closed:
        raise InconclusiveError(f"invariant space of the generators exceeds cap {cap}")
    A = inv.matrix
    K = inv.order
    cyc = roots_of_unity_orders(A)
    if cyc.non_root_of_unity:
        raise InputError(f"not locally finite on a local domain: eigenvalue roots of "
                         f"{cyc.non_root_of_unity[0].poly} are not roots of unity")
    bad = [f for f in cyc.factors if f.kind == "cyclotomic" and f.order > 2]
    if bad:
        raise UnsupportedError(f"eigenvalues of order {bad[0].order} need irrational eigenvector "
                               "entries; unsupported over Q")
    blocks = jordan_block_check(A)
    if not blocks.clean:
        raise InputError("not locally finite on a local domain: nontrivial Jordan block at a "
                         "nonzero eigenvalue")
    dim = A.nrows
    eye = Matrix.identity(dim, field)
    cands = [(v, 1) for v in (A - eye).kernel()] + [(v, -1) for v in (A + eye).kernel()]
    nil_vecs = (A ** dim).kernel()
    cands += [(v, None) for v in nil_vecs]
    lin = SparseEchelon(field)
    ys, cs = [], []
    for v, c in cands:
        y = _combine(inv.basis, v)
        if lin.add({i: x for i, x in enumerate(y.linear_part()) if x}) is None:
            ys.append(y)
            cs.append(None if c is None else field(c))
    if len(ys) != n:
        raise AssertionError("eigen-coordinates do not have independent linear parts")
    N = None
    if nil_vecs:
        N = nilpotence_index(A.restrict(nil_vecs))
    for y, c in zip(ys, cs):
        if c is not None and not phi(y).agrees(y.scale(c)):
            raise AssertionError(f"phi({y}) != {c}*({y}) at order {K}")
        if c is None:
            z = y
            for _ in range(N):
                z = phi(z)
            if not z.is_zero():
                raise AssertionError(f"phi^{N}({y}) != 0 at order {K}")
    G = formal_inverse(ys, K)
    ident = tuple(TruncSeries.var(i, n, K, field) for i in range(n))
    certified = compose(ys, G) == ident and compose(G, ys) == ident
    return Normalization(ys, cs, N, K, certified)


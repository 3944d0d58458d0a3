"""Derivations, ring endomorphisms and E-derivations on the carrier rings.

Operators are given by finite data: a derivation by its coefficients
p_1..p_n (D = sum p_i d/dx_i), an endomorphism by the images of the
generators. Every operator is a callable acting on ring elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Callable, Sequence, Union

from .errors import ContextMismatch, InconclusiveError, InputError
from .report import Report
from .rings import LaurentPoly, Matrix, TruncSeries, weight
from .rings.field import Field, Scalar
from .rings.laurent import unit_vector

RingElement = Union[LaurentPoly, TruncSeries]
Operator = Callable[[RingElement], RingElement]


def _series_coeff(p, f: TruncSeries) -> TruncSeries:
    if isinstance(p, TruncSeries):
        return p
    # an exact polynomial: give it more precision than f can use
    deg = p.total_degree() if p else 0
    return TruncSeries.from_poly(p, f.order + deg + 1)


@dataclass(frozen=True)
class Derivation:
    """D = sum_i coeffs[i] * d/dx_{i+1}."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise InputError("a derivation needs at least one variable")
        first = self.coeffs[0]
        for p in self.coeffs:
            if p.nvars != len(self.coeffs):
                raise InputError(f"coefficient count {len(self.coeffs)} != nvars {p.nvars}")
            if p.field != first.field:
                raise ContextMismatch("derivation coefficients over different fields")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @property
    def field(self) -> Field:
        return self.coeffs[0].field

    @classmethod
    def euler(cls, weights: Sequence, nvars: int | None = None, field=None) -> "Derivation":
        """sum_i w_i x_i d/dx_i on the Laurent ring."""
        from .rings import QQ
        field = field or QQ
        n = len(weights) if nvars is None else nvars
        return cls(tuple(LaurentPoly({unit_vector(i, n): w}, n, field) for i, w in enumerate(weights)))

    @classmethod
    def partial(cls, i: int, nvars: int, field=None) -> "Derivation":
        from .rings import QQ
        field = field or QQ
        zero = LaurentPoly({}, nvars, field)
        return cls(tuple(LaurentPoly.constant(1, nvars, field) if k == i else zero
                         for k in range(nvars)))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def __call__(self, f: RingElement) -> RingElement:
        if f.nvars != self.nvars or f.field != self.field:
            raise ContextMismatch("derivation and element live in different rings")
        if isinstance(f, LaurentPoly):
            out = f.zero()
            for i, p in enumerate(self.coeffs):
                if not isinstance(p, LaurentPoly):
                    raise ContextMismatch("series coefficients cannot act on Laurent polynomials")
                if p:
                    out = out + p * f.derivative(i)
            return out
        if isinstance(f, TruncSeries):
            out = None
            for i, p in enumerate(self.coeffs):
                if not p:
                    continue
                if isinstance(p, LaurentPoly) and not p.is_polynomial():
                    raise InputError("derivation coefficient has negative exponents on k[[x]]")
                term = _series_coeff(p, f).mul_tracking(f.derivative(i), cap=f.order)
                out = term if out is None else out + term
            return f.zero() if out is None else out
        raise InputError(f"cannot apply a derivation to {type(f).__name__}")

    def __str__(self):
        return ", ".join(f"D(x{i + 1})={p}" for i, p in enumerate(self.coeffs))


@dataclass(frozen=True)
class Endomorphism:
    """Algebra endomorphism given by generator images x_{i+1} -> images[i]."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        n = len(self.images)
        if not n:
            raise InputError("an endomorphism needs at least one generator")
        first = self.images[0]
        for g in self.images:
            if g.nvars != n:
                raise InputError(f"image count {n} != nvars {g.nvars}")
            if g.field != first.field or type(g) is not type(first):
                raise ContextMismatch("generator images must share one ring")
            if isinstance(g, TruncSeries) and g.constant_term() != 0:
                raise InputError(
                    f"image {g} has a nonzero constant term; an endomorphism of k[[x]] must "
                    "send each x_i into the maximal ideal (else 1/h with h(0) = 0 would be a series)")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @property
    def field(self) -> Field:
        return self.images[0].field

    @classmethod
    def identity(cls, ring_element: RingElement) -> "Endomorphism":
        return cls(ring_element.variables() if isinstance(ring_element, TruncSeries)
                   else tuple(LaurentPoly.var(i, ring_element.nvars, ring_element.field)
                              for i in range(ring_element.nvars)))

    @classmethod
    def diagonal(cls, scalings: Sequence, field=None) -> "Endomorphism":
        """x_i -> scalings[i] * x_i on the Laurent ring."""
        from .rings import QQ
        field = field or QQ
        n = len(scalings)
        return cls(tuple(LaurentPoly({unit_vector(i, n): c}, n, field) for i, c in enumerate(scalings)))

    def __call__(self, f: RingElement) -> RingElement:
        if f.nvars != self.nvars or f.field != self.field:
            raise ContextMismatch("endomorphism and element live in different rings")
        if isinstance(f, LaurentPoly):
            if not isinstance(self.images[0], LaurentPoly):
                raise ContextMismatch("series images cannot act on Laurent polynomials")
            return f.substitute(self.images)
        if isinstance(f, TruncSeries):
            imgs = [g if isinstance(g, TruncSeries) else TruncSeries.from_poly(g, f.order)
                    for g in self.images]
            return f.substitute(imgs)
        raise InputError(f"cannot apply an endomorphism to {type(f).__name__}")

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self o other: x_i -> self(other(x_i))."""
        return Endomorphism(tuple(self(g) for g in other.images))

    def power(self, m: int) -> "Endomorphism":
        if m < 0:
            raise InputError("negative power of an endomorphism")
        images = self.identity(self.images[0]).images
        for _ in range(m):
            images = tuple(self(g) for g in images)
        return Endomorphism(images)

    def __str__(self):
        return ", ".join(f"phi(x{i + 1})={g}" for i, g in enumerate(self.images))


@dataclass(frozen=True)
class EDerivation:
    """delta = 1 - phi."""

    phi: Endomorphism

    @property
    def nvars(self) -> int:
        return self.phi.nvars

    @property
    def field(self) -> Field:
        return self.phi.field

    def __call__(self, f: RingElement) -> RingElement:
        return f - self.phi(f)

    def __str__(self):
        return f"1 - ({self.phi})"


def apply_derivation(D: Derivation, f: RingElement) -> RingElement:
    return D(f)


def apply_endomorphism(phi: Endomorphism, f: RingElement) -> RingElement:
    return phi(f)


def apply_ederivation(delta: EDerivation, f: RingElement) -> RingElement:
    return delta(f)


def iterate_operator(L: Operator, m: int, f: RingElement) -> RingElement:
    """L^m(f); L^0 is the identity."""
    if m < 0:
        raise InputError("iteration count must be >= 0")
    for _ in range(m):
        f = L(f)
    return f


def _same(a: RingElement, b: RingElement) -> bool:
    if isinstance(a, TruncSeries) and isinstance(b, TruncSeries):
        return a.agrees(b)
    return a == b


def leibniz_power_check(D: Derivation, a: RingElement, b: RingElement, n: int) -> bool:
    """Compare D^n(ab) with sum_i binom(n, i) D^i(a) D^(n-i)(b) exactly."""
    if n < 1:
        raise InputError("leibniz_power_check needs n >= 1")
    lhs = iterate_operator(D, n, a * b)
    da = [a]
    db = [b]
    for _ in range(n):
        da.append(D(da[-1]))
        db.append(D(db[-1]))
    rhs = None
    for i in range(n + 1):
        x, y = da[i], db[n - i]
        if isinstance(x, TruncSeries):
            term = x.mul_tracking(y).scale(comb(n, i))
        else:
            term = (x * y).scale(comb(n, i))
        rhs = term if rhs is None else rhs + term
    return _same(lhs, rhs)


@dataclass
class GeometricDerivativeReport(Report):
    c: Scalar
    m: int
    order: int
    remainder: LaurentPoly          # p_m, extracted polynomial
    checked_to: int                 # coefficients verified up to this degree
    polynomial: bool                # all coefficients above degree m vanish

    @property
    def degree(self) -> int:
        return self.remainder.total_degree() if self.remainder else -1

    def items(self):
        return [("c", self.c), ("m", self.m), ("order", self.order),
                ("checked_to", self.checked_to), ("polynomial", self.polynomial),
                ("remainder_degree", self.degree), ("remainder", self.remainder)]


def geometric_derivative_check(c, m: int, order: int, field=None) -> GeometricDerivativeReport:
    """Expand D^m(1/(1-v)) for the derivation D(v) = c*v on k[[v]].

    Subtracts m! c^m v^m (1-v)^-(m+1), multiplies the rest by (1-v)^m and
    checks that what is left is a polynomial of degree <= m.
    """
    from .rings import QQ
    field = field or QQ
    if m < 1:
        raise InputError("m must be >= 1")
    if order < 4 * m:
        raise InconclusiveError(f"order {order} too small for m={m}; need at least {4 * m}")
    c = field(c)
    v = TruncSeries.var(0, 1, order, field)
    D = Derivation((v.scale(c),))
    one_minus_v = 1 - v
    g = one_minus_v.inverse()
    Dm = iterate_operator(D, m, g)
    K = Dm.order
    lead = (v ** m).scale(factorial(m) * c ** m) * (one_minus_v.inverse() ** (m + 1))
    rest = (Dm - lead.truncate(K)) * (one_minus_v.truncate(K) ** m)
    poly = all(sum(a) <= m for a in rest.terms)
    remainder = LaurentPoly({a: x for a, x in rest.terms.items() if sum(a) <= m}, 1, field)
    return GeometricDerivativeReport(c, m, order, remainder, K, poly)


@dataclass
class GradedPieces(Report):
    """D split as sum_i D_i with D_i raising the d-weight by exactly i."""

    weight_vector: tuple
    components: dict  # shift -> Derivation

    @property
    def N(self) -> int | None:
        return min(self.components) if self.components else None

    def total(self, like: Derivation) -> Derivation:
        acc = [p.zero() for p in like.coeffs]
        for comp in self.components.values():
            acc = [x + y for x, y in zip(acc, comp.coeffs)]
        return Derivation(tuple(acc))

    def items(self):
        out = [("weight", self.weight_vector), ("N", self.N),
               ("shifts", ",".join(map(str, sorted(self.components))) or "none")]
        for i in sorted(self.components):
            out.append((f"D[{i}]", str(self.components[i])))
        return out


def graded_decompose(D: Derivation, d: Sequence[int]) -> GradedPieces:
    """Split a Laurent derivation into weight-homogeneous components.

    The term c x^a d/dx_j moves weight by <d, a> - d_j.
    """
    d = tuple(d)
    if len(d) != D.nvars:
        raise InputError("weight vector length must equal nvars")
    if any(w <= 0 for w in d):
        raise InputError("weight vector entries must be strictly positive")
    n = D.nvars
    buckets: dict[int, list[dict]] = {}
    for j, p in enumerate(D.coeffs):
        if not isinstance(p, LaurentPoly):
            raise InputError("graded_decompose works on Laurent polynomial derivations")
        for a, c in p.terms.items():
            shift = weight(a, d) - d[j]
            comps = buckets.setdefault(shift, [dict() for _ in range(n)])
            comps[j][a] = c
    field = D.field
    components = {s: Derivation(tuple(LaurentPoly(t, n, field) for t in comps))
                  for s, comps in sorted(buckets.items())}
    return GradedPieces(d, components)


@dataclass(frozen=True)
class UnitForm:
    """A unit x^alpha * h of k[[x]][x^-1] with h(0) != 0."""

    alpha: tuple
    h: TruncSeries

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if len(self.alpha) != self.h.nvars:
            raise InputError("alpha length must equal nvars")
        if self.h.constant_term() == 0:
            raise InputError("malformed unit form: h(0) = 0")


@dataclass
class LocalizedEndoReport(Report):
    alphas: list
    holds: list

    @property
    def preserves_series(self) -> bool:
        return all(self.holds)

    def items(self):
        out = []
        for i, (a, ok) in enumerate(zip(self.alphas, self.holds)):
            out.append((f"x{i + 1}.alpha", a))
            out.append((f"x{i + 1}.nonnegative", ok))
        out.append(("preserves_series_ring", self.preserves_series))
        return out


def localized_endo_validate(images: Sequence[UnitForm]) -> LocalizedEndoReport:
    """For phi(x_i) = x^alpha_i h_i, report whether every alpha_i lies in N^n.

    Any endomorphism of k[[x]][x^-1] maps k[[x]] into itself, so a failure
    flags input that cannot be an endomorphism.
    """
    images = [u if isinstance(u, UnitForm) else UnitForm(*u) for u in images]
    n = len(images)
    for u in images:
        if len(u.alpha) != n:
            raise InputError("unit-form exponent length must equal the number of images")
    alphas = [u.alpha for u in images]
    return LocalizedEndoReport(alphas, [all(e >= 0 for e in a) for a in alphas])


def matrix_of(L: Operator, basis: Sequence[RingElement], monomials: Sequence[tuple],
              field: Field) -> Matrix:
    """Matrix of L from span(basis) into span(monomials), column j = L(basis[j])."""
    index = {m: i for i, m in enumerate(monomials)}
    cols = []
    for b in basis:
        img = L(b)
        col = [0] * len(monomials)
        for a, c in img.terms.items():
            if a not in index:
                raise InputError(f"operator image leaves the target span (monomial {a})")
            col[index[a]] = c
        cols.append(col)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(monomials))]
    return Matrix(rows, field) if rows else Matrix.zeros(0, len(cols), field)

"""Truncated multivariate power series and their localization at the variables.

A :class:`TruncSeries` stores every coefficient of total degree <= ``order``
(the truncation order K). Arithmetic is exact on those coefficients. Results
whose precision degrades (e.g. after differentiation) carry the smaller
valid order.

:class:`LocalSeries` models elements x^shift * h of k[[x]][x^-1] with
``h`` a truncated series.
"""

from __future__ import annotations

from numbers import Rational
from typing import Iterator, Mapping, Sequence

from ..errors import ContextMismatch, InconclusiveError, InputError, NotAUnitError
from .field import QQ, Field, Scalar
from .laurent import LaurentPoly, MultiIndex, format_terms, monomial_key, unit_vector
from .linalg import Matrix


class TruncSeries:
    """Power series in ``nvars`` variables known up to total degree ``order``."""

    __slots__ = ("terms", "nvars", "order", "field", "_hash")

    def __init__(self, terms: Mapping[MultiIndex, Scalar] | None = None, nvars: int = 1,
                 order: int = 8, field: Field = QQ):
        if order < 0:
            raise InputError(f"truncation order must be >= 0, got {order}")
        clean = {}
        for a, c in (terms or {}).items():
            a = tuple(int(e) for e in a)
            if len(a) != nvars:
                raise InputError(f"exponent {a} has length {len(a)}, expected {nvars}")
            if any(e < 0 for e in a):
                raise InputError("negative exponent in power-series context")
            if sum(a) > order:
                continue
            c = field.reduce(clean.get(a, 0) + field(c))
            if c:
                clean[a] = c
            else:
                clean.pop(a, None)
        self.terms = clean
        self.nvars = nvars
        self.order = order
        self.field = field
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int, order: int, field: Field) -> "TruncSeries":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj.order = order
        obj.field = field
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int, order: int, field: Field = QQ) -> "TruncSeries":
        return cls({(0,) * nvars: c}, nvars, order, field)

    @classmethod
    def var(cls, i: int, nvars: int, order: int, field: Field = QQ) -> "TruncSeries":
        return cls({unit_vector(i, nvars): 1}, nvars, order, field)

    @classmethod
    def from_poly(cls, f: LaurentPoly, order: int) -> "TruncSeries":
        if not f.is_polynomial():
            raise InputError("negative exponent in power-series context")
        return cls(f.terms, f.nvars, order, f.field)

    @classmethod
    def geometric(cls, i: int, nvars: int, order: int, field: Field = QQ) -> "TruncSeries":
        """1/(1 - x_{i+1}) = sum of all powers of that variable."""
        return cls({tuple(k if j == i else 0 for j in range(nvars)): 1 for k in range(order + 1)},
                   nvars, order, field)

    def zero(self) -> "TruncSeries":
        return TruncSeries._raw({}, self.nvars, self.order, self.field)

    def one(self) -> "TruncSeries":
        return TruncSeries._raw({(0,) * self.nvars: 1}, self.nvars, self.order, self.field)

    def variables(self) -> tuple["TruncSeries", ...]:
        return tuple(TruncSeries.var(i, self.nvars, self.order, self.field)
                     for i in range(self.nvars))

    # -- inspection -----------------------------------------------------------
    def coeff(self, a: Sequence[int]) -> Scalar:
        a = tuple(a)
        if sum(a) > self.order:
            raise InconclusiveError(f"coefficient of degree {sum(a)} beyond truncation order {self.order}")
        return self.terms.get(a, 0)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def known(self, a: Sequence[int]) -> bool:
        return sum(a) <= self.order

    def support(self) -> list[MultiIndex]:
        return sorted(self.terms, key=monomial_key)

    def items(self) -> Iterator[tuple[MultiIndex, Scalar]]:
        for a in self.support():
            yield a, self.terms[a]

    def is_zero(self) -> bool:
        """True when every coefficient up to the truncation order vanishes."""
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def valuation(self) -> int:
        """Lowest total degree present; ``order + 1`` for a series that is 0 to this order."""
        if not self.terms:
            return self.order + 1
        return min(sum(a) for a in self.terms)

    def is_unit(self) -> bool:
        return self.constant_term() != 0

    def linear_part(self) -> tuple:
        return tuple(self.terms.get(unit_vector(i, self.nvars), 0) for i in range(self.nvars))

    def homogeneous_parts(self) -> list[dict]:
        parts = [dict() for _ in range(self.order + 1)]
        for a, c in self.terms.items():
            parts[sum(a)][a] = c
        return parts

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise InputError(f"cannot raise precision from {self.order} to {order}")
        return TruncSeries._raw({a: c for a, c in self.terms.items() if sum(a) <= order},
                                self.nvars, order, self.field)

    def to_poly(self) -> LaurentPoly:
        """The stored coefficients as an exact polynomial."""
        return LaurentPoly._raw(dict(self.terms), self.nvars, self.field)

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "TruncSeries"):
        if other.nvars != self.nvars or other.field != self.field:
            raise ContextMismatch(
                f"series over ({self.nvars} vars, {self.field!r}) and "
                f"({other.nvars} vars, {other.field!r}) cannot be combined")

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ContextMismatch("polynomial and series live in different rings")
            return TruncSeries.from_poly(other, self.order)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return TruncSeries.constant(other, self.nvars, self.order, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        red = self.field.reduce
        out = {a: c for a, c in self.terms.items() if sum(a) <= order}
        for a, c in other.terms.items():
            if sum(a) > order:
                continue
            s = red(out.get(a, 0) + c)
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return TruncSeries._raw(out, self.nvars, order, self.field)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return TruncSeries._raw({a: red(-c) for a, c in self.terms.items()},
                                self.nvars, self.order, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.order != self.order:
            raise InputError(f"truncation order mismatch: {self.order} vs {other.order}")
        return _mul(self, other, self.order)

    __rmul__ = __mul__

    def mul_tracking(self, other: "TruncSeries", cap: int | None = None) -> "TruncSeries":
        """Product at the best order both operands' precision allows (at most ``cap``)."""
        self._check(other)
        order = min(self.order + other.valuation(), other.order + self.valuation())
        if cap is not None:
            order = min(order, cap)
        return _mul(self, other, order)

    def scale(self, c) -> "TruncSeries":
        c = self.field(c)
        if c == 0:
            return self.zero()
        red = self.field.reduce
        return TruncSeries._raw({a: red(v * c) for a, v in self.terms.items()},
                                self.nvars, self.order, self.field)

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.scale(self.field.inv(self.field(other)))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse to the same order; only units are invertible."""
        c0 = self.constant_term()
        if c0 == 0:
            raise NotAUnitError("not a unit: the constant term is zero")
        f = self.field
        red = f.reduce
        inv0 = f.inv(c0)
        parts = self.homogeneous_parts()
        inv_parts: list[dict] = [{(0,) * self.nvars: inv0}]
        for d in range(1, self.order + 1):
            acc: dict = {}
            for k in range(1, d + 1):
                if not parts[k] or not inv_parts[d - k]:
                    continue
                for a, c in parts[k].items():
                    for b, e in inv_parts[d - k].items():
                        key = tuple(x + y for x, y in zip(a, b))
                        acc[key] = acc.get(key, 0) + c * e
            out = {}
            for key, v in acc.items():
                v = red(-v * inv0)
                if v:
                    out[key] = v
            inv_parts.append(out)
        terms = {}
        for part in inv_parts:
            terms.update(part)
        return TruncSeries._raw(terms, self.nvars, self.order, self.field)

    def __pow__(self, m: int):
        if not isinstance(m, int):
            return NotImplemented
        if m < 0:
            if not self.is_unit():
                raise NotAUnitError("negative exponent in power-series context")
            return self.inverse() ** (-m)
        result = self.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def derivative(self, i: int) -> "TruncSeries":
        """Partial derivative; the valid order drops by one."""
        if self.order == 0:
            raise InconclusiveError("cannot differentiate a series known only to order 0")
        red = self.field.reduce
        out = {}
        for a, c in self.terms.items():
            e = a[i]
            if e:
                v = red(c * e)
                if v:
                    out[a[:i] + (e - 1,) + a[i + 1:]] = v
        return TruncSeries._raw(out, self.nvars, self.order - 1, self.field)

    def substitute(self, images: Sequence["TruncSeries"]) -> "TruncSeries":
        """Composition f(images); every image needs a zero constant term."""
        if len(images) != self.nvars:
            raise InputError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0]
        for g in images:
            if not isinstance(g, TruncSeries):
                raise InputError("substitution images must be truncated series")
            if g.nvars != target.nvars or g.field != self.field:
                raise ContextMismatch("substitution images must share one series ring")
            if g.constant_term() != 0:
                raise InputError(
                    "substitution image has a nonzero constant term; the substitution would "
                    "not be continuous (it would force 1/h with h(0) = 0 to be a series)")
        out_order = min(g.order for g in images)
        v = min(g.valuation() for g in images)
        out_order = min(out_order, (self.order + 1) * v - 1)
        imgs = [g.truncate(out_order) for g in images]
        return _substitute(self.terms, imgs, out_order, target.nvars, self.field)

    # -- comparison / text ----------------------------------------------------
    def agrees(self, other: "TruncSeries") -> bool:
        """Equality on every coefficient both operands know."""
        self._check(other)
        k = min(self.order, other.order)
        return self.truncate(k).terms == other.truncate(k).terms

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return (self.nvars == other.nvars and self.field == other.field
                    and self.order == other.order and self.terms == other.terms)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.terms == TruncSeries.constant(other, self.nvars, self.order, self.field).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.order, self.field, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_terms(self.terms.items(), self.field)

    def __repr__(self):
        return f"TruncSeries({self}, nvars={self.nvars}, order={self.order}, field={self.field!r})"


def _mul(f: TruncSeries, g: TruncSeries, order: int) -> TruncSeries:
    by_deg: dict[int, list] = {}
    for b, d in g.terms.items():
        by_deg.setdefault(sum(b), []).append((b, d))
    gdegs = sorted(by_deg)
    acc: dict = {}
    for a, c in f.terms.items():
        room = order - sum(a)
        for dg in gdegs:
            if dg > room:
                break
            for b, d in by_deg[dg]:
                k = tuple(x + y for x, y in zip(a, b))
                acc[k] = acc.get(k, 0) + c * d
    red = f.field.reduce
    out = {}
    for k, v in acc.items():
        v = red(v)
        if v:
            out[k] = v
    return TruncSeries._raw(out, f.nvars, order, f.field)


def _substitute(terms: dict, imgs: list[TruncSeries], order: int, nvars: int,
                field: Field) -> TruncSeries:
    # Horner-style recursion on the first variable:
    #   f(img) = sum_k img_0^k * f_k(img_1, ..., img_{n-1})
    red = field.reduce
    powers: list[list[TruncSeries]] = []
    for g in imgs:
        pw = [TruncSeries._raw({(0,) * nvars: 1}, nvars, order, field)]
        cap = order // max(g.valuation(), 1)
        for _ in range(cap):
            pw.append(_mul(pw[-1], g, order))
        powers.append(pw)

    def rec(tms: dict, depth: int) -> dict:
        if depth == len(imgs) - 1:
            acc: dict = {}
            pw = powers[depth]
            for a, c in tms.items():
                e = a[depth]
                if e >= len(pw):
                    continue
                for k, v in pw[e].terms.items():
                    acc[k] = acc.get(k, 0) + c * v
            return acc
        groups: dict[int, dict] = {}
        for a, c in tms.items():
            groups.setdefault(a[depth], {})[a] = c
        acc = {}
        pw = powers[depth]
        for e, sub in groups.items():
            if e >= len(pw):
                continue
            inner = rec(sub, depth + 1)
            inner = {k: red(v) for k, v in inner.items()}
            inner = {k: v for k, v in inner.items() if v}
            if not inner:
                continue
            prod = _mul(pw[e], TruncSeries._raw(inner, nvars, order, field), order)
            for k, v in prod.terms.items():
                acc[k] = acc.get(k, 0) + v
        return acc

    acc = rec(terms, 0)
    out = {}
    for k, v in acc.items():
        v = red(v)
        if v and sum(k) <= order:
            out[k] = v
    return TruncSeries._raw(out, nvars, order, field)


def compose(F: Sequence[TruncSeries], G: Sequence[TruncSeries]) -> tuple[TruncSeries, ...]:
    """The map F o G, i.e. (F_1(G), ..., F_n(G))."""
    return tuple(f.substitute(G) for f in F)


def identity_map(nvars: int, order: int, field: Field = QQ) -> tuple[TruncSeries, ...]:
    return tuple(TruncSeries.var(i, nvars, order, field) for i in range(nvars))


def jacobian_at_zero(F: Sequence[TruncSeries]) -> Matrix:
    field = F[0].field
    return Matrix([f.linear_part() for f in F], field)


def formal_inverse(F: Sequence[TruncSeries], order: int | None = None) -> tuple[TruncSeries, ...]:
    """Compositional inverse G of F (F o G = G o F = id) to the given order.

    Each F_i needs a zero constant term and the linear part must be
    invertible. G is built degree by degree: after step d, G is correct
    through total degree d.
    """
    if not F:
        return ()
    n = len(F)
    field = F[0].field
    if any(f.nvars != n for f in F):
        raise InputError("formal_inverse needs n series in n variables")
    K = min(f.order for f in F) if order is None else order
    if any(f.order < K for f in F):
        raise InputError(f"series known only to order {min(f.order for f in F)} < {K}")
    if any(f.constant_term() != 0 for f in F):
        raise InputError("formal_inverse: every component needs a zero constant term")
    if K == 0:
        return tuple(TruncSeries._raw({}, n, 0, field) for _ in F)
    J = jacobian_at_zero(F)
    try:
        Jinv = J.inverse()
    except NotAUnitError:
        raise InputError("Jacobian not invertible at 0") from None
    F = [f.truncate(K) for f in F]
    # nonlinear remainder H = F - J x
    H = []
    for f in F:
        H.append(TruncSeries._raw({a: c for a, c in f.terms.items() if sum(a) >= 2},
                                  n, K, field))
    ys = identity_map(n, K, field)

    def linear_solve(rhs: Sequence[TruncSeries]) -> list[TruncSeries]:
        out = []
        for i in range(n):
            acc = rhs[0].zero()
            for j in range(n):
                if Jinv[i, j]:
                    acc = acc + rhs[j].scale(Jinv[i, j])
            out.append(acc)
        return out

    G = linear_solve([y.truncate(1) for y in ys])
    for d in range(2, K + 1):
        Gd = [g.truncate(d - 1) for g in G]
        Gd = [TruncSeries._raw(dict(g.terms), n, d, field) for g in Gd]
        HG = [h.truncate(d).substitute(Gd) for h in H]
        G = linear_solve([y.truncate(d) - hg for y, hg in zip(ys, HG)])
    return tuple(TruncSeries._raw(dict(g.terms), n, K, field) for g in G)


class LocalSeries:
    """Element x^shift * body of k[[x]][x^-1], with ``body`` a truncated series.

    The coefficient of x^e is known exactly when e - shift has a negative
    entry (it is 0) or total degree <= body.order.
    """

    __slots__ = ("shift", "body")

    def __init__(self, shift: Sequence[int], body: TruncSeries):
        if len(shift) != body.nvars:
            raise InputError("shift length must equal the number of variables")
        self.shift = tuple(int(e) for e in shift)
        self.body = body

    @classmethod
    def monomial(cls, a: Sequence[int], order: int, field: Field = QQ) -> "LocalSeries":
        n = len(a)
        return cls(a, TruncSeries.constant(1, n, order, field))

    @classmethod
    def from_series(cls, f: TruncSeries) -> "LocalSeries":
        return cls((0,) * f.nvars, f)

    @property
    def nvars(self) -> int:
        return self.body.nvars

    @property
    def field(self) -> Field:
        return self.body.field

    @property
    def order(self) -> int:
        return self.body.order

    def known(self, e: Sequence[int]) -> bool:
        b = [x - s for x, s in zip(e, self.shift)]
        return any(x < 0 for x in b) or sum(b) <= self.body.order

    def coeff(self, e: Sequence[int]) -> Scalar:
        b = tuple(x - s for x, s in zip(e, self.shift))
        if any(x < 0 for x in b):
            return 0
        if sum(b) > self.body.order:
            raise InconclusiveError(
                f"coefficient of x^{tuple(e)} needs body order {sum(b)} > {self.body.order}")
        return self.body.terms.get(b, 0)

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.nvars)

    def support(self) -> list[MultiIndex]:
        return sorted((tuple(x + s for x, s in zip(a, self.shift)) for a in self.body.terms),
                      key=monomial_key)

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def _coerce(self, other) -> "LocalSeries":
        if isinstance(other, LocalSeries):
            return other
        if isinstance(other, TruncSeries):
            return LocalSeries.from_series(other)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return LocalSeries.from_series(
                TruncSeries.constant(other, self.nvars, self.order, self.field))
        return NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        shift = tuple(x + y for x, y in zip(self.shift, other.shift))
        return LocalSeries(shift, self.body * other.body)

    __rmul__ = __mul__

    def __neg__(self):
        return LocalSeries(self.shift, -self.body)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        # bring both to the common shift min(shift_a, shift_b)
        common = tuple(min(x, y) for x, y in zip(self.shift, other.shift))

        def lift(z: "LocalSeries") -> TruncSeries:
            # entries below the shift are exact zeros, so precision grows by |d|
            d = tuple(x - c for x, c in zip(z.shift, common))
            if not any(d):
                return z.body
            return TruncSeries._raw({tuple(x + y for x, y in zip(a, d)): c
                                     for a, c in z.body.terms.items()},
                                    z.nvars, z.order + sum(d), z.field)

        return LocalSeries(common, lift(self) + lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __pow__(self, m: int):
        if m < 0:
            if not self.body.is_unit():
                raise NotAUnitError("x^a * h is a unit only when h(0) != 0")
            return LocalSeries(tuple(e * m for e in self.shift), self.body.inverse() ** (-m))
        return LocalSeries(tuple(e * m for e in self.shift), self.body ** m)

    def __eq__(self, other):
        if not isinstance(other, LocalSeries):
            return NotImplemented
        return self.shift == other.shift and self.body == other.body

    def __hash__(self):
        return hash((self.shift, self.body))

    def __str__(self):
        return format_terms(((tuple(x + s for x, s in zip(a, self.shift)), c)
                             for a, c in self.body.terms.items()), self.field)

    def __repr__(self):
        return f"LocalSeries({self}, shift={self.shift}, order={self.order})"

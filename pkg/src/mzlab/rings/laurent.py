"""Sparse multivariate Laurent polynomials over Q or F_p.

A :class:`LaurentPoly` is a finite map from exponent vectors in Z^n to
nonzero scalars. Polynomials are the special case with nonnegative
exponents, so the same class serves k[x] and k[x, x^-1].
"""

from __future__ import annotations

from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import ContextMismatch, InputError, NotAUnitError
from .field import QQ, Field, Scalar

MultiIndex = tuple


def monomial_key(a: MultiIndex):
    """Canonical order: total degree ascending, then lexicographic."""
    return (sum(a), a)


def weight(b: Sequence[int], d: Sequence[int]) -> int:
    """Weight of the monomial x^b under the grading vector ``d``, i.e. <d, b>."""
    if len(b) != len(d):
        raise InputError(f"weight: length mismatch {len(b)} vs {len(d)}")
    return sum(x * y for x, y in zip(b, d))


def unit_vector(i: int, n: int) -> MultiIndex:
    return tuple(1 if k == i else 0 for k in range(n))


def add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def format_terms(terms: Iterable[tuple[MultiIndex, Scalar]], field: Field) -> str:
    """Render ``(exponent, coeff)`` pairs in the canonical text form.

    Terms are emitted in canonical monomial order; e.g.
    ``5 - x1 + 3/2*x1^2*x2^-1``.
    """
    out = []
    for a, c in sorted(terms, key=lambda t: monomial_key(t[0])):
        neg = field.char == 0 and c < 0
        mag = -c if neg else c
        factors = []
        for i, e in enumerate(a):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e != 0:
                factors.append(f"x{i + 1}^{e}")
        if not factors:
            body = field.fmt(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = field.fmt(mag) + "*" + "*".join(factors)
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``nvars`` variables."""

    __slots__ = ("terms", "nvars", "field", "_hash")

    def __init__(self, terms: Mapping[MultiIndex, Scalar] | None = None, nvars: int = 1,
                 field: Field = QQ):
        clean = {}
        for a, c in (terms or {}).items():
            a = tuple(int(e) for e in a)
            if len(a) != nvars:
                raise InputError(f"exponent {a} has length {len(a)}, expected {nvars}")
            c = field(c)
            if c != 0:
                clean[a] = field.reduce(clean.get(a, 0) + c)
                if clean[a] == 0:
                    del clean[a]
        self.terms = clean
        self.nvars = nvars
        self.field = field
        self._hash = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict, nvars: int, field: Field) -> "LaurentPoly":
        # trusted path: keys valid, values reduced and nonzero
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj.field = field
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c, nvars: int, field: Field = QQ) -> "LaurentPoly":
        return cls({(0,) * nvars: c}, nvars, field)

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ) -> "LaurentPoly":
        """The variable x_{i+1} (``i`` is 0-based)."""
        return cls({unit_vector(i, nvars): 1}, nvars, field)

    @classmethod
    def monomial(cls, a: Sequence[int], c=1, field: Field = QQ) -> "LaurentPoly":
        return cls({tuple(a): c}, len(a), field)

    def zero(self) -> "LaurentPoly":
        return LaurentPoly._raw({}, self.nvars, self.field)

    def one(self) -> "LaurentPoly":
        return LaurentPoly._raw({(0,) * self.nvars: 1}, self.nvars, self.field)

    # -- inspection -----------------------------------------------------------
    def coeff(self, a: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(a), 0)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def support(self) -> list[MultiIndex]:
        return sorted(self.terms, key=monomial_key)

    def items(self) -> Iterator[tuple[MultiIndex, Scalar]]:
        for a in self.support():
            yield a, self.terms[a]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for a in self.terms for e in a)

    def is_unit(self) -> bool:
        """Units of k[x, x^-1] are the nonzero scalar multiples of monomials."""
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            raise InputError("total degree of the zero polynomial")
        return max(sum(a) for a in self.terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(a) for a in self.terms}
        if degree is not None:
            return degs <= {degree}
        return len(degs) <= 1

    def homogeneous_part(self, degree: int) -> "LaurentPoly":
        return LaurentPoly._raw({a: c for a, c in self.terms.items() if sum(a) == degree},
                                self.nvars, self.field)

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ContextMismatch(
                    f"Laurent polynomials over ({self.nvars} vars, {self.field!r}) and "
                    f"({other.nvars} vars, {other.field!r}) cannot be combined")
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return LaurentPoly.constant(other, self.nvars, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.field.reduce
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = red(out.get(a, 0) + c)
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return LaurentPoly._raw(out, self.nvars, self.field)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return LaurentPoly._raw({a: red(-c) for a, c in self.terms.items()},
                                self.nvars, self.field)

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
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                acc[k] = acc.get(k, 0) + c * d
        red = self.field.reduce
        out = {}
        for k, v in acc.items():
            v = red(v)
            if v:
                out[k] = v
        return LaurentPoly._raw(out, self.nvars, self.field)

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        c = self.field(c)
        if c == 0:
            return self.zero()
        red = self.field.reduce
        return LaurentPoly._raw({a: red(v * c) for a, v in self.terms.items()},
                                self.nvars, self.field)

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.scale(self.field.inv(self.field(other)))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise NotAUnitError(f"{self} is not a unit of the Laurent polynomial ring")
        (a, c), = self.terms.items()
        return LaurentPoly._raw({tuple(-e for e in a): self.field.inv(c)}, self.nvars, self.field)

    def __pow__(self, m: int):
        if not isinstance(m, int):
            return NotImplemented
        if m < 0:
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

    def derivative(self, i: int) -> "LaurentPoly":
        """Partial derivative with respect to x_{i+1}."""
        red = self.field.reduce
        out = {}
        for a, c in self.terms.items():
            e = a[i]
            if e:
                v = red(c * e)
                if v:
                    k = a[:i] + (e - 1,) + a[i + 1:]
                    out[k] = v
        return LaurentPoly._raw(out, self.nvars, self.field)

    def substitute(self, images: Sequence["LaurentPoly"]) -> "LaurentPoly":
        """Ring substitution x_i -> images[i].

        A variable occurring with a negative exponent must map to a unit.
        """
        if len(images) != self.nvars:
            raise InputError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0]
        for g in images:
            if not isinstance(g, LaurentPoly) or g.nvars != target.nvars or g.field != self.field:
                raise ContextMismatch("substitution images must share one Laurent ring")
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                if e < 0 and not images[i].is_unit():
                    raise NotAUnitError(
                        f"x{i + 1} occurs with exponent {e} but its image {images[i]} is not a unit")
                cache[key] = images[i] ** e
            return cache[key]

        result = target.zero()
        for a, c in self.terms.items():
            term = LaurentPoly.constant(c, target.nvars, self.field)
            for i, e in enumerate(a):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise InputError("evaluation point has the wrong length")
        f = self.field
        total = 0
        for a, c in self.terms.items():
            v = c
            for x, e in zip(point, a):
                if e < 0:
                    v = v * f.inv(x) ** (-e)
                else:
                    v = v * x ** e
            total = total + v
        return f.reduce(total)

    # -- comparison / text ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return (self.nvars == other.nvars and self.field == other.field
                    and self.terms == other.terms)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.terms == LaurentPoly.constant(other, self.nvars, self.field).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_terms(self.terms.items(), self.field)

    def __repr__(self):
        return f"LaurentPoly({self}, nvars={self.nvars}, field={self.field!r})"


def laurent_vars(nvars: int, field: Field = QQ) -> tuple[LaurentPoly, ...]:
    """Convenience: the generators x1..xn."""
    return tuple(LaurentPoly.var(i, nvars, field) for i in range(nvars))

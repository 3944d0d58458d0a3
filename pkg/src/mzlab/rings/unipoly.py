"""Dense univariate polynomials over Q or F_p (coefficient lists, low degree first)."""

from __future__ import annotations

from numbers import Rational
from typing import Sequence

from ..errors import ContextMismatch, InputError
from .field import QQ, Field, Scalar
from .linalg import Matrix


class UniPoly:
    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence = (), field: Field = QQ):
        c = [field(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self.field = field

    @classmethod
    def _raw(cls, coeffs: list, field: Field) -> "UniPoly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.field = field
        return obj

    @classmethod
    def T(cls, field: Field = QQ) -> "UniPoly":
        return cls((0, 1), field)

    @classmethod
    def constant(cls, c, field: Field = QQ) -> "UniPoly":
        return cls((c,), field)

    @classmethod
    def from_roots(cls, roots: Sequence, field: Field = QQ) -> "UniPoly":
        p = cls((1,), field)
        for r in roots:
            p = p * cls((-field(r), 1), field)
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise ContextMismatch(f"polynomials over {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return UniPoly((other,), self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.field.reduce
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly._raw([red(self[k] + other[k]) for k in range(n)], self.field)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return UniPoly._raw([red(-c) for c in self.coeffs], self.field)

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
        if not self.coeffs or not other.coeffs:
            return UniPoly._raw([], self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        red = self.field.reduce
        return UniPoly._raw([red(c) for c in out], self.field)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "UniPoly":
        if m < 0:
            raise InputError("negative power of a polynomial")
        result = UniPoly((1,), self.field)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly"):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = other.degree
        inv = f.inv(other.lc)
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            t = f.reduce(c * inv)
            quot[k - dq] = t
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = f.reduce(rem[k - dq + j] - t * b)
        return UniPoly._raw(quot, f), UniPoly._raw(rem[:dq] if dq > 0 else [], f)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "UniPoly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = self.field.inv(self.lc)
        red = self.field.reduce
        return UniPoly._raw([red(c * inv) for c in self.coeffs], self.field)

    def derivative(self) -> "UniPoly":
        red = self.field.reduce
        return UniPoly._raw([red(k * c) for k, c in enumerate(self.coeffs)][1:], self.field)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, self._coerce(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def squarefree_part(self) -> "UniPoly":
        """Product of the distinct irreducible factors (monic); char 0 only."""
        if self.field.char != 0:
            raise InputError("squarefree part is implemented over Q only")
        return (self // self.gcd(self.derivative())).monic()

    def multiplicity(self, factor: "UniPoly") -> int:
        """Largest m with factor^m dividing self (self must be nonzero)."""
        if not self.coeffs:
            raise InputError("multiplicity in the zero polynomial")
        if factor.degree < 1:
            raise InputError("multiplicity of a constant factor")
        m, rest = 0, self
        while True:
            q, r = divmod(rest, factor)
            if r:
                return m
            m, rest = m + 1, q

    def __call__(self, x):
        """Horner evaluation at a scalar or a square :class:`Matrix`."""
        if isinstance(x, Matrix):
            n = x.nrows
            acc = Matrix.zeros(n, n, x.field)
            eye = Matrix.identity(n, x.field)
            for c in reversed(self.coeffs):
                acc = acc * x + eye.scale(c)
            return acc
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return self.field.reduce(acc)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.coeffs == UniPoly((other,), self.field).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.field))

    def to_text(self, var: str = "T") -> str:
        terms = []
        f = self.field
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            neg = f.char == 0 and c < 0
            mag = -c if neg else c
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = f.fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{f.fmt(mag)}*{mono}"
            if not terms:
                terms.append("-" + body if neg else body)
            else:
                terms.append((" - " if neg else " + ") + body)
        return "".join(terms) if terms else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"UniPoly({self.to_text()}, field={self.field!r})"

"""Exact scalar fields: the rationals and prime fields F_p.

Scalars are plain Python numbers. Over Q a scalar is an ``int`` or a
``Fraction`` (``Fraction`` keeps lowest terms with positive denominator);
over F_p it is an ``int`` in ``range(p)``. The :class:`Field` object carries
the characteristic and performs every reduction, so two rings with different
characteristics never silently mix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from ..errors import InputError

Scalar = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``char == 0``, otherwise the prime field F_char."""

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not is_prime(self.char):
            raise InputError(f"characteristic must be 0 or a prime, got {self.char}")

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __call__(self, x) -> Scalar:
        """Coerce ``x`` (int, Fraction or a ``p/q`` string) into this field."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except ValueError:
                raise InputError(f"not a rational number: {x!r}") from None
        if isinstance(x, bool) or not isinstance(x, Rational):
            raise InputError(f"cannot coerce {x!r} into {self!r}")
        return self.reduce(x)

    def reduce(self, x: Scalar) -> Scalar:
        p = self.char
        if p == 0:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        if isinstance(x, int):
            return x % p
        den = x.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator {x.denominator} vanishes in GF({p})")
        return x.numerator * pow(den, -1, p) % p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.char == 0:
            return self.reduce(1 / Fraction(a))
        return pow(a, -1, self.char)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        if self.char == 0:
            if b == 0:
                raise ZeroDivisionError("division by zero")
            return self.reduce(Fraction(a) / b)
        return a * self.inv(b) % self.char

    def fmt(self, a: Scalar) -> str:
        """Text form of a scalar: ``p/q`` over Q, a residue in ``[0, p)`` over F_p."""
        if self.char == 0 and isinstance(a, Fraction):
            return f"{a.numerator}/{a.denominator}"
        return str(a)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)

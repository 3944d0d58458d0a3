"""Exact dense matrices and sparse incremental echelon forms over Q or F_p."""

from __future__ import annotations

from typing import Hashable, Sequence

from ..errors import InputError, NotAUnitError
from .field import QQ, Field, Scalar


class Matrix:
    """Immutable matrix with exact entries; ``A * B`` is the matrix product."""

    __slots__ = ("rows", "field", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], field: Field = QQ):
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise InputError("ragged matrix rows")
        self.field = field

    @classmethod
    def _raw(cls, rows, field: Field, ncols: int | None = None) -> "Matrix":
        obj = cls.__new__(cls)
        obj.rows = tuple(tuple(r) for r in rows)
        obj.nrows = len(obj.rows)
        obj.ncols = len(obj.rows[0]) if obj.rows else (ncols or 0)
        obj.field = field
        return obj

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls._raw([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, m: int, n: int | None = None, field: Field = QQ) -> "Matrix":
        n = m if n is None else n
        return cls._raw([[0] * n for _ in range(m)], field, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], field: Field = QQ) -> "Matrix":
        if not cols:
            return cls._raw([], field)
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))], field)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix._raw(list(zip(*self.rows)), self.field, self.nrows)

    T = property(transpose)

    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise InputError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("shape mismatch in matrix sum")
        red = self.field.reduce
        return Matrix._raw([[red(a + b) for a, b in zip(r, s)]
                            for r, s in zip(self.rows, other.rows)], self.field, self.ncols)

    def __neg__(self) -> "Matrix":
        red = self.field.reduce
        return Matrix._raw([[red(-a) for a in r] for r in self.rows], self.field, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        red = self.field.reduce
        return Matrix._raw([[red(a * c) for a in r] for r in self.rows], self.field, self.ncols)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        self._check(other)
        if self.ncols != other.nrows:
            raise InputError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        red = self.field.reduce
        cols = other.columns()
        return Matrix._raw([[red(sum(a * b for a, b in zip(r, c) if a and b)) for c in cols]
                            for r in self.rows], self.field, other.ncols)

    def __rmul__(self, c):
        return self.scale(c)

    def apply(self, v: Sequence) -> tuple:
        red = self.field.reduce
        return tuple(red(sum(a * b for a, b in zip(r, v))) for r in self.rows)

    def __pow__(self, m: int) -> "Matrix":
        if not self.is_square:
            raise InputError("power of a non-square matrix")
        if m < 0:
            return self.inverse() ** (-m)
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self):
        return hash((self.rows, self.field))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def __repr__(self):
        return f"Matrix({[[self.field.fmt(a) for a in r] for r in self.rows]})"

    def to_text(self) -> str:
        """Matrix file format: ``n`` on the first line, then whitespace-separated rows."""
        lines = [str(self.nrows)]
        lines += [" ".join(self.field.fmt(a) for a in r) for r in self.rows]
        return "\n".join(lines)

    # -- elimination ----------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the pivot columns."""
        f = self.field
        m = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            piv = next((i for i in range(r, self.nrows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.reduce(x * inv) for x in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c] != 0:
                    factor = m[i][c]
                    m[i] = [f.reduce(x - factor * y) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix._raw(m, f, self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[tuple]:
        """Basis of the right null space, each vector scaled to lead with 1."""
        f = self.field
        R, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for fj in free:
            v = [0] * self.ncols
            v[fj] = 1
            for row, pc in enumerate(pivots):
                v[pc] = f.reduce(-R.rows[row][fj])
            lead = next(x for x in v if x != 0)
            inv = f.inv(lead)
            basis.append(tuple(f.reduce(x * inv) for x in v))
        return basis

    def column_space(self) -> list[tuple]:
        _, pivots = self.rref()
        return [self.column(j) for j in pivots]

    def det(self) -> Scalar:
        if not self.is_square:
            raise InputError("determinant of a non-square matrix")
        f = self.field
        m = [list(r) for r in self.rows]
        n = self.nrows
        d = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            d = f.reduce(d * m[c][c])
            inv = f.inv(m[c][c])
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    factor = f.reduce(m[i][c] * inv)
                    m[i] = [f.reduce(x - factor * y) for x, y in zip(m[i], m[c])]
        return f.reduce(d)

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise InputError("inverse of a non-square matrix")
        n = self.nrows
        aug = Matrix._raw([list(r) + [1 if i == j else 0 for j in range(n)]
                           for i, r in enumerate(self.rows)], self.field)
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise NotAUnitError("matrix is singular")
        return Matrix._raw([r[n:] for r in R.rows], self.field, n)

    def solve(self, b: Sequence) -> tuple | None:
        """One solution of ``A x = b`` (free variables set to 0), or None."""
        f = self.field
        aug = Matrix._raw([list(r) + [f(x)] for r, x in zip(self.rows, b)], f, self.ncols + 1)
        R, pivots = aug.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        x = [0] * self.ncols
        for row, pc in enumerate(pivots):
            x[pc] = R.rows[row][self.ncols]
        return tuple(x)

    def restrict(self, basis: Sequence[Sequence]) -> "Matrix":
        """Matrix of this map on the invariant subspace spanned by ``basis`` (columns)."""
        B = Matrix.from_columns(basis, self.field)
        cols = []
        for v in basis:
            coords = B.solve(self.apply(v))
            if coords is None:
                raise InputError("subspace is not invariant")
            cols.append(coords)
        return Matrix.from_columns(cols, self.field)


class SparseEchelon:
    """Incremental semi-echelon basis for vectors given as ``{key: scalar}`` dicts.

    Every inserted vector that is independent of the current span is kept;
    for a dependent vector :meth:`add` returns its coordinates with respect
    to the vectors inserted so far (by insertion index).
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self._rows: list[tuple[Hashable, dict, dict]] = []  # (pivot, reduced, representation)
        self.count = 0

    def __len__(self):
        return self.count

    def reduce(self, v: dict) -> tuple[dict, dict]:
        """Return (remainder, combo) with v = remainder + sum(combo[i] * original_i)."""
        f = self.field
        v = dict(v)
        combo: dict = {}
        for pivot, row, rep in self._rows:
            c = v.get(pivot)
            if not c:
                continue
            t = f.div(c, row[pivot])
            for k, x in row.items():
                s = f.reduce(v.get(k, 0) - t * x)
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
            for i, x in rep.items():
                s = f.reduce(combo.get(i, 0) + t * x)
                if s:
                    combo[i] = s
                else:
                    combo.pop(i, None)
        return v, combo

    def add(self, v: dict) -> dict | None:
        """Insert ``v``. Returns None when independent, else its coordinates."""
        rem, combo = self.reduce(v)
        if not rem:
            return combo
        pivot = max(rem, key=_pivot_key)
        f = self.field
        rep = {i: f.reduce(-x) for i, x in combo.items()}
        rep[self.count] = 1
        self._rows.append((pivot, rem, rep))
        self.count += 1
        return None

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]


def _pivot_key(k):
    if isinstance(k, tuple) and all(isinstance(e, int) for e in k):
        return (sum(k), k)
    return (0, k)

"""Exact rational scalars and dense/sparse linear algebra over Q.

Everything here works on :class:`fractions.Fraction`; there is no floating
point anywhere in the package.  Vectors are plain tuples of Fractions and
matrices are immutable :class:`Matrix` values.  Internally, elimination runs on
sparse rows (``dict`` column -> value) because the evaluation matrices built by
the PI engine are overwhelmingly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
SparseRow = dict  # dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    if "." in s or "e" in s.lower():
        raise ValueError(f"not a rational literal: {s!r}")
    return Fraction(s)


def fmt_rational(q: Fraction) -> str:
    """Canonical reduced ``"p/q"`` (or ``"p"``) form."""
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> Vector:
    return tuple(Q(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero_vec(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def to_sparse(v: Sequence) -> SparseRow:
    return {i: x for i, x in enumerate(v) if x != 0}


def from_sparse(row: SparseRow, n: int) -> Vector:
    out = [ZERO] * n
    for i, x in row.items():
        out[i] = x
    return tuple(out)


# ---------------------------------------------------------------------------
# Sparse row reduction
# ---------------------------------------------------------------------------


class RowReducer:
    """Incremental reduced row echelon basis of a row space.

    Rows are sparse dicts.  Each stored row has pivot coefficient 1 and no
    entries in any other stored row's pivot column, so the sorted stored rows
    are exactly the RREF of everything inserted so far.
    """

    def __init__(self) -> None:
        self.rows: dict[int, SparseRow] = {}
        # column -> pivots of rows with a nonzero entry there (excluding the pivot row itself)
        self._col_users: dict[int, set[int]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, row: SparseRow) -> SparseRow:
        r = {k: v for k, v in row.items() if v != 0}
        hits = [k for k in r if k in self.rows]
        while hits:
            p = hits.pop()
            c = r.get(p)
            if not c:
                continue
            for k, v in self.rows[p].items():
                nv = r.get(k, ZERO) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            # entries of a fully reduced row never land on other pivots
        return r

    def add(self, row: SparseRow) -> int | None:
        """Insert a row; return its new pivot column, or None if dependent."""
        r = self.reduce(row)
        if not r:
            return None
        p = min(r)
        c = r[p]
        if c != 1:
            r = {k: v / c for k, v in r.items()}
        # clear column p from existing rows
        for q in list(self._col_users.get(p, ())):
            other = self.rows[q]
            f = other.get(p)
            if not f:
                continue
            for k, v in r.items():
                nv = other.get(k, ZERO) - f * v
                if nv:
                    if k not in other and k != q:
                        self._col_users.setdefault(k, set()).add(q)
                    other[k] = nv
                else:
                    if k in other:
                        del other[k]
                        if k != q:
                            self._col_users.get(k, set()).discard(q)
        self._col_users.pop(p, None)
        self.rows[p] = r
        for k in r:
            if k != p:
                self._col_users.setdefault(k, set()).add(p)
        return p

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def echelon(self) -> list[SparseRow]:
        return [self.rows[p] for p in sorted(self.rows)]


def sparse_rref(rows: Iterable[SparseRow]) -> tuple[list[SparseRow], list[int]]:
    red = RowReducer()
    for r in rows:
        red.add(r)
    return red.echelon(), red.pivots()


def sparse_rank(rows: Iterable[SparseRow]) -> int:
    red = RowReducer()
    for r in rows:
        red.add(r)
    return len(red)


# ---------------------------------------------------------------------------
# Dense matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major Fractions

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    # -- construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        return cls(nr, nc, tuple(Q(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [list(c) for c in cols]
        if not cols:
            return cls(nrows or 0, 0, ())
        nr = len(cols[0])
        return cls(nr, len(cols), tuple(Q(cols[j][i]) for i in range(nr) for j in range(len(cols))))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls(r, c, (ZERO,) * (r * c))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        vals = [Q(v) for v in values]
        n = len(vals)
        return cls(n, n, tuple(vals[i] if i == j else ZERO for i in range(n) for j in range(n)))

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.rows) if self.is_square else False

    # -- arithmetic -------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        ocols = other.columns()
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, x) for k, x in enumerate(r) if x]
            for c in ocols:
                out.append(sum((x * c[k] for k, x in nz), ZERO))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((self.entries[i * self.cols + k] * x for k, x in nz), ZERO) for i in range(self.rows))

    def scale(self, c) -> "Matrix":
        c = Q(c)
        return Matrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), ZERO)

    def rank(self) -> int:
        return sparse_rank(to_sparse(self.row(i)) for i in range(self.rows))

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        a = self.to_rows()
        n = self.rows
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return ZERO
            if p != c:
                a[p], a[c] = a[c], a[p]
                d = -d
            d *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    for k in range(c, n):
                        a[r][k] -= f * a[c][k]
        return d

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = Matrix.from_rows([list(self.row(i)) + list(Matrix.identity(n).row(i)) for i in range(n)])
        r, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix.from_rows([r.row(i)[n:] for i in range(n)])

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def to_json(self) -> list[list[str]]:
        return [[fmt_rational(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls.from_rows([[Q(x) for x in r] for r in data])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix([{body}])"


# ---------------------------------------------------------------------------
# rref / kernel / solve
# ---------------------------------------------------------------------------


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.  Zero rows go to the bottom."""
    ech, piv = sparse_rref(to_sparse(m.row(i)) for i in range(m.rows))
    rows = [from_sparse(r, m.cols) for r in ech]
    rows += [zero_vec(m.cols)] * (m.rows - len(rows))
    return Matrix(m.rows, m.cols, tuple(x for r in rows for x in r)), piv


def kernel(a: Matrix) -> list[Vector]:
    """Basis of the null space, one vector per free column (in column order)."""
    ech, piv = sparse_rref(to_sparse(a.row(i)) for i in range(a.rows))
    return _kernel_from_echelon(ech, piv, a.cols)


def _kernel_from_echelon(ech: list[SparseRow], piv: list[int], ncols: int) -> list[Vector]:
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for p, r in zip(piv, ech):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Solution:
    """Affine solution set of ``a @ x = b``.

    ``particular`` is None exactly when the system is infeasible; otherwise the
    full solution set is ``particular + span(kernel)`` (column-wise for
    multi-column ``b``).
    """

    feasible: bool
    particular: Matrix | None
    kernel: tuple
    inconsistent_row: int | None = None

    @property
    def unique(self) -> bool:
        return self.feasible and not self.kernel

    def contains(self, x: Sequence) -> bool:
        """True if the column vector ``x`` solves a single-column system."""
        if not self.feasible:
            return False
        p = self.particular.col(0)
        diff = tuple(Q(xi) - pi for xi, pi in zip(x, p))
        if is_zero_vec(diff):
            return True
        if not self.kernel:
            return False
        return in_span(self.kernel, diff)


def in_span(vectors: Sequence[Vector], v: Vector) -> bool:
    red = RowReducer()
    for w in vectors:
        red.add(to_sparse(w))
    return not red.reduce(to_sparse(v))


def solve(a: Matrix, b: Matrix) -> Solution:
    if a.rows != b.rows:
        raise ValueError(f"solve: a has {a.rows} rows but b has {b.rows}")
    n = a.cols
    rows = []
    for i in range(a.rows):
        r = to_sparse(a.row(i))
        for j, x in enumerate(b.row(i)):
            if x:
                r[n + j] = x
        rows.append(r)
    red = RowReducer()
    bad = None
    for i, r in enumerate(rows):
        p = red.add(r)
        if p is not None and p >= n and bad is None:
            bad = i
    ech, piv = red.echelon(), red.pivots()
    ker = tuple(kernel(a))
    if bad is not None:
        return Solution(False, None, ker, bad)
    part = [[ZERO] * b.cols for _ in range(n)]
    for p, r in zip(piv, ech):
        for j in range(b.cols):
            part[p][j] = r.get(n + j, ZERO)
    x = Matrix.from_rows(part) if n else Matrix(0, b.cols, ())
    return Solution(True, x, ker)


def solve_vector(a: Matrix, b: Sequence) -> Solution:
    return solve(a, Matrix.from_columns([list(b)], a.rows) if a.rows else Matrix(0, 1, ()))

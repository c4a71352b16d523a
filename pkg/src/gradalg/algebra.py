"""Finite-dimensional graded algebras given by structure constants.

Every basis vector carries exactly one degree label, so homogeneous components
are coordinate subspaces.  Multiplication is the bilinear extension of a sparse
structure-constant table ``sc[(i, j)] = {k: c_ijk}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .exact import (
    ONE,
    ZERO,
    Matrix,
    RowReducer,
    Q,
    Vector,
    fmt_rational,
    from_sparse,
    is_zero_vec,
    kernel,
    solve_vector,
    to_sparse,
    unit_vec,
)


class AlgebraError(ValueError):
    pass


class GradingViolation(AlgebraError):
    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient stored by its RREF basis (so ``==`` is equality)."""

    ambient: int
    basis: tuple  # tuple of RREF row vectors
    pivots: tuple = ()

    @classmethod
    def span(cls, ambient: int, vectors) -> "Subspace":
        red = RowReducer()
        for v in vectors:
            if len(v) != ambient:
                raise AlgebraError(f"vector of length {len(v)} in ambient dimension {ambient}")
            red.add(to_sparse(v))
        return cls(ambient, tuple(from_sparse(r, ambient) for r in red.echelon()), tuple(red.pivots()))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, (), ())

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls.span(ambient, [unit_vec(ambient, i) for i in range(ambient)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def _reducer(self) -> RowReducer:
        red = RowReducer()
        for v in self.basis:
            red.add(to_sparse(v))
        return red

    def contains(self, v: Sequence) -> bool:
        return not self._reducer().reduce(to_sparse(v))

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of ``v`` modulo the subspace (zero at every pivot column)."""
        return from_sparse(self._reducer().reduce(to_sparse(v)), self.ambient)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of a member in the RREF basis."""
        if not self.contains(v):
            raise AlgebraError("vector not in subspace")
        return tuple(Q(v[p]) for p in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, list(self.basis) + list(other.basis))

    def __le__(self, other: "Subspace") -> bool:
        red = other._reducer()
        return all(not red.reduce(to_sparse(v)) for v in self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient)
        # x = sum a_i u_i = sum b_j w_j
        cols = list(self.basis) + [tuple(-x for x in w) for w in other.basis]
        m = Matrix.from_columns(cols)
        vecs = []
        for k in kernel(m):
            a = k[:self.dim]
            vecs.append(tuple(sum((a[i] * self.basis[i][c] for i in range(self.dim)), ZERO)
                              for c in range(self.ambient)))
        return Subspace.span(self.ambient, vecs)

    def image(self, m: Matrix) -> "Subspace":
        return Subspace.span(m.rows, [m.apply(v) for v in self.basis])

    def to_json(self) -> list[list[str]]:
        return [[fmt_rational(x) for x in v] for v in self.basis]


# ---------------------------------------------------------------------------
# Graded algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    basis: tuple  # basis names
    degrees: tuple  # label per basis vector
    labels: tuple  # all labels (supp is the subset actually used)
    sc: Mapping  # (i, j) -> {k: Fraction}; omitted entries are zero
    label_product: Mapping | None = None  # (s, t) -> r
    claims_associative: bool = True
    claims_group_grading: bool = False
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.basis)
        if len(self.degrees) != n:
            raise AlgebraError(f"{n} basis vectors but {len(self.degrees)} degrees")
        if len(set(self.labels)) != len(self.labels):
            raise AlgebraError("duplicate labels")
        for d in self.degrees:
            if d not in self.labels:
                raise AlgebraError(f"degree {d!r} is not a declared label")
        for (i, j), row in self.sc.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in row):
                raise AlgebraError(f"structure constant index out of range at ({i}, {j})")
        if self.claims_group_grading and self.label_product is None:
            raise AlgebraError("group grading claimed but no label product given")

    # -- basic data -------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def supp(self) -> tuple:
        present = set(self.degrees)
        return tuple(t for t in self.labels if t in present)

    def component(self, t) -> tuple:
        """Basis indices spanning the homogeneous component of degree ``t``."""
        key = ("comp", t)
        if key not in self._cache:
            self._cache[key] = tuple(i for i, d in enumerate(self.degrees) if d == t)
        return self._cache[key]

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def e(self, i) -> Vector:
        if isinstance(i, str):
            i = self.index(i)
        return unit_vec(self.dim, i)

    def vector(self, coeffs: Mapping) -> Vector:
        """Build a vector from ``{basis name or index: coefficient}``."""
        v = [ZERO] * self.dim
        for k, c in coeffs.items():
            v[self.index(k) if isinstance(k, str) else k] += Q(c)
        return tuple(v)

    def is_trivially_graded(self) -> bool:
        return len(self.supp) <= 1

    def star(self, s, t):
        if self.label_product is None:
            raise AlgebraError("this operation needs a group law on labels, but none was given")
        try:
            return self.label_product[(s, t)]
        except KeyError:
            raise AlgebraError(f"label product {s!r}*{t!r} is undefined") from None

    # -- multiplication ---------------------------------------------------
    def mul_basis(self, i: int, j: int) -> dict:
        return self.sc.get((i, j), {})

    def multiply_sparse(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                row = self.sc.get((i, j))
                if not row:
                    continue
                ab = a * b
                for k, c in row.items():
                    v = out.get(k, ZERO) + ab * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def multiply(self, x: Sequence, y: Sequence) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise AlgebraError(f"multiply: expected vectors of length {self.dim}")
        return from_sparse(self.multiply_sparse(to_sparse(x), to_sparse(y)), self.dim)

    def commutator(self, x: Sequence, y: Sequence) -> Vector:
        return tuple(a - b for a, b in zip(self.multiply(x, y), self.multiply(y, x)))

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y -> x*y``."""
        return Matrix.from_columns([self.multiply(x, unit_vec(self.dim, j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, x: Sequence) -> Matrix:
        return Matrix.from_columns([self.multiply(unit_vec(self.dim, j), x) for j in range(self.dim)], self.dim)

    def is_commutative(self) -> bool:
        return all(self.mul_basis(i, j) == self.mul_basis(j, i)
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def find_unit(self) -> Vector | None:
        """Two-sided identity element, if any (solved as a linear system)."""
        if "unit" in self._cache:
            return self._cache["unit"]
        n = self.dim
        # unknown u: u*e_j = e_j and e_j*u = e_j for all j
        rows, rhs = [], []
        for j in range(n):
            for side in (0, 1):
                for k in range(n):
                    rows.append([(self.mul_basis(i, j) if side == 0 else self.mul_basis(j, i)).get(k, ZERO)
                                 for i in range(n)])
                    rhs.append(ONE if k == j else ZERO)
        sol = solve_vector(Matrix.from_rows(rows), rhs) if n else None
        unit = sol.particular.col(0) if sol is not None and sol.feasible else None
        self._cache["unit"] = unit
        return unit

    # -- homogeneous bookkeeping -------------------------------------------
    def homogeneous_parts(self, v: Sequence) -> dict:
        """Split ``v`` into its nonzero homogeneous components."""
        parts = {}
        for t in self.supp:
            idx = set(self.component(t))
            w = tuple(x if i in idx else ZERO for i, x in enumerate(v))
            if not is_zero_vec(w):
                parts[t] = w
        return parts

    def degree_of(self, v: Sequence):
        parts = self.homogeneous_parts(v)
        if len(parts) != 1:
            return None
        return next(iter(parts))

    def projector(self, t) -> Matrix:
        idx = set(self.component(t))
        return Matrix.diag([ONE if i in idx else ZERO for i in range(self.dim)])

    def preserves_components(self, m: Matrix) -> tuple | None:
        """None if ``m`` maps every component into itself, else a witness (basis index, label)."""
        for j in range(self.dim):
            col = m.col(j)
            for k, x in enumerate(col):
                if x and self.degrees[k] != self.degrees[j]:
                    return (j, self.degrees[k])
        return None

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        sc = []
        for (i, j) in sorted(self.sc):
            for k in sorted(self.sc[(i, j)]):
                c = self.sc[(i, j)][k]
                if c:
                    sc.append([i, j, k, fmt_rational(c)])
        out = {
            "name": self.name,
            "dim": self.dim,
            "basis": list(self.basis),
            "degrees": list(self.degrees),
            "labels": list(self.labels),
            "sc": sc,
            "flags": {"associative": self.claims_associative, "group_grading": self.claims_group_grading},
        }
        if self.label_product is not None:
            out["label_product"] = [[s, t, r] for (s, t), r in sorted(self.label_product.items(),
                                                                     key=lambda kv: (self.labels.index(kv[0][0]),
                                                                                     self.labels.index(kv[0][1])))]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedAlgebra":
        try:
            dim = int(data["dim"])
            basis = tuple(data.get("basis") or [f"e{i}" for i in range(dim)])
            degrees = tuple(str(d) for d in data.get("degrees") or ["0"] * dim)
            labels = tuple(str(t) for t in data.get("labels") or sorted(set(degrees), key=degrees.index))
            if len(basis) != dim:
                raise AlgebraError(f"dim is {dim} but {len(basis)} basis names given")
            sc: dict = {}
            for entry in data.get("sc", []):
                i, j, k, c = entry
                c = Q(c)
                if c:
                    row = sc.setdefault((int(i), int(j)), {})
                    row[int(k)] = row.get(int(k), ZERO) + c
            lp = data.get("label_product")
            label_product = None
            if lp is not None:
                if isinstance(lp, Mapping):
                    label_product = {tuple(str(x) for x in k.split("*")): str(v) for k, v in lp.items()}
                else:
                    label_product = {(str(s), str(t)): str(r) for s, t, r in lp}
            flags = data.get("flags", {})
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, AlgebraError):
                raise
            raise AlgebraError(f"malformed algebra definition: {exc}") from exc
        return cls(basis, degrees, labels, sc, label_product,
                   bool(flags.get("associative", True)), bool(flags.get("group_grading", False)),
                   str(data.get("name", "")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def make_algebra(basis, degrees, table: Mapping, *, labels=None, label_product=None,
                 associative=True, group_grading=False, name="") -> GradedAlgebra:
    """Build an algebra from ``{(name_i, name_j): {name_k: coeff}}``."""
    basis = tuple(basis)
    pos = {b: i for i, b in enumerate(basis)}
    sc = {}
    for (a, b), out in table.items():
        row = {pos[k]: Q(c) for k, c in out.items() if Q(c)}
        if row:
            sc[(pos[a], pos[b])] = row
    degrees = tuple(degrees)
    if labels is None:
        labels = tuple(sorted(set(degrees), key=degrees.index))
    return GradedAlgebra(basis, degrees, tuple(labels), sc, label_product, associative, group_grading, name)


def forget_grading(A: GradedAlgebra, label: str = "0") -> GradedAlgebra:
    """The same algebra with every basis vector in a single component."""
    return GradedAlgebra(A.basis, (label,) * A.dim, (label,), A.sc, {(label, label): label},
                         A.claims_associative, True, A.name + "_plain" if A.name else "")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class GradingReport:
    valid: bool
    supp: tuple
    star: dict  # (s, t) -> r on T0 = {(s, t) : A^s A^t != 0}
    violations: list  # (i, j, k) witnesses
    message: str = ""

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "supp": list(self.supp),
            "star": [[s, t, r] for (s, t), r in self.star.items()],
            "violations": [list(v) for v in self.violations],
            "message": self.message,
        }


def verify_grading(A: GradedAlgebra) -> GradingReport:
    """Check that products of homogeneous basis vectors land in one component.

    For a set grading a pair of components with zero product has no target
    label and is left out of the partial operation.
    """
    supp = A.supp
    star: dict = {}
    violations: list = []
    msg = ""
    for s in supp:
        for t in supp:
            target = None
            first = None
            for i in A.component(s):
                for j in A.component(t):
                    for k, c in A.mul_basis(i, j).items():
                        if not c:
                            continue
                        r = A.degrees[k]
                        if target is None:
                            target, first = r, (i, j, k)
                        elif r != target:
                            violations.append((i, j, k))
                            msg = msg or (f"{A.basis[i]}*{A.basis[j]} has components of degree "
                                          f"{target!r} and {r!r}")
            if target is not None:
                star[(s, t)] = target
                if A.claims_group_grading:
                    want = A.star(s, t)
                    if want != target:
                        violations.append(first)
                        i, j, k = first
                        msg = msg or (f"{A.basis[i]}*{A.basis[j]} has a component on {A.basis[k]} of degree "
                                      f"{target!r}, expected {s!r}*{t!r} = {want!r}")
    return GradingReport(not violations, supp, star, violations, msg)


@dataclass
class AssociativityCheck:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_associative(A: GradedAlgebra) -> AssociativityCheck:
    n = A.dim
    for i, j, k in product(range(n), repeat=3):
        left = A.multiply_sparse(A.mul_basis(i, j), {k: ONE})
        right = A.multiply_sparse({i: ONE}, A.mul_basis(j, k))
        if left != right:
            return AssociativityCheck(False, (i, j, k))
    return AssociativityCheck(True)


# ---------------------------------------------------------------------------
# Ideals and annihilators
# ---------------------------------------------------------------------------


def product_space(A: GradedAlgebra, U: Subspace, V: Subspace) -> Subspace:
    return Subspace.span(A.dim, [A.multiply(u, v) for u in U.basis for v in V.basis])


def ideal_generated(A: GradedAlgebra, S: Subspace) -> Subspace:
    """Smallest two-sided ideal containing ``S`` (closure under basis multiplication)."""
    cur = S
    while True:
        gens = list(cur.basis)
        for v in cur.basis:
            for i in range(A.dim):
                e = unit_vec(A.dim, i)
                gens.append(A.multiply(e, v))
                gens.append(A.multiply(v, e))
        nxt = Subspace.span(A.dim, gens)
        if nxt == cur:
            return cur
        cur = nxt


def is_ideal(A: GradedAlgebra, I: Subspace) -> bool:
    return ideal_generated(A, I) == I


def is_graded_subspace(A: GradedAlgebra, V: Subspace) -> bool:
    return all(V.contains(p) for v in V.basis for p in A.homogeneous_parts(v).values())


def power(A: GradedAlgebra, I: Subspace, k: int) -> Subspace:
    """I^k: span of all products of k elements of I (any bracketing, associative assumed)."""
    cur = I
    for _ in range(k - 1):
        cur = product_space(A, cur, I)
    return cur


def nilpotency_index(A: GradedAlgebra, I: Subspace) -> int | None:
    """Least k with I^k = 0, or None if I is not nilpotent."""
    if I.is_zero():
        return 1
    cur, k = I, 1
    while k <= A.dim + 1:
        cur = product_space(A, cur, I)
        k += 1
        if cur.is_zero():
            return k
    return None


def annihilator_lr(A: GradedAlgebra, M: Subspace) -> Subspace:
    """{a : a*m = m*a = 0 for all m in M}, as a kernel."""
    n = A.dim
    if M.is_zero():
        return Subspace.whole(n)
    rows = []
    for m in M.basis:
        L = A.right_matrix(m)  # a -> a*m
        R = A.left_matrix(m)  # a -> m*a
        rows.extend(L.to_rows())
        rows.extend(R.to_rows())
    return Subspace.span(n, kernel(Matrix.from_rows(rows)))


def quotient_algebra(A: GradedAlgebra, I: Subspace, name: str = "") -> tuple[GradedAlgebra, tuple]:
    """A/I on the basis of non-pivot coordinate vectors.

    Returns the quotient and the tuple of kept basis indices.  When ``I`` is
    graded the quotient inherits the grading.
    """
    piv = set(I.pivots)
    keep = tuple(i for i in range(A.dim) if i not in piv)
    pos = {i: a for a, i in enumerate(keep)}
    sc = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            prod = I.reduce(from_sparse(A.mul_basis(i, j), A.dim))
            row = {pos[k]: c for k, c in enumerate(prod) if c}
            if row:
                sc[(a, b)] = row
    Q_ = GradedAlgebra(tuple(A.basis[i] for i in keep), tuple(A.degrees[i] for i in keep), A.labels, sc,
                       A.label_product, A.claims_associative, A.claims_group_grading,
                       name or (A.name + "/I" if A.name else ""))
    return Q_, keep


def induced_map(A: GradedAlgebra, I: Subspace, phi: Matrix) -> Matrix:
    """Matrix of the map A/I -> A/I induced by ``phi`` (requires phi(I) in I)."""
    piv = set(I.pivots)
    keep = [i for i in range(A.dim) if i not in piv]
    cols = []
    for j in keep:
        img = I.reduce(phi.col(j))
        cols.append([img[i] for i in keep])
    return Matrix.from_columns(cols, len(keep))


__all__ = [
    "AlgebraError",
    "GradingViolation",
    "Subspace",
    "GradedAlgebra",
    "make_algebra",
    "forget_grading",
    "GradingReport",
    "verify_grading",
    "AssociativityCheck",
    "verify_associative",
    "product_space",
    "ideal_generated",
    "is_ideal",
    "is_graded_subspace",
    "power",
    "nilpotency_index",
    "annihilator_lr",
    "quotient_algebra",
    "induced_map",
]

"""Operator spans acting on an algebra, and the generalized action axiom.

An ``OperatorSpan`` is a finite list of named linear maps of ``A`` whose span
stands in for the image of an acting algebra ``H``.  The span is generalized
acting when every listed ``h`` satisfies

    h(ab) = sum_i (u_i a)(v_i b) + (u'_i b)(v'_i a)

with all ``u, v`` in the span; ``verify_generalized_action`` finds such a
decomposition by one linear solve per operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraError, GradedAlgebra, Subspace, is_graded_subspace
from .exact import Matrix, RowReducer, fmt_rational, solve_vector, to_sparse


@dataclass(frozen=True)
class OperatorSpan:
    names: tuple
    operators: tuple  # Matrix per name
    unit_index: int | None  # None: identity lies in the span without being listed

    def __post_init__(self) -> None:
        if len(self.names) != len(self.operators):
            raise AlgebraError("operator names and matrices differ in length")
        if not self.operators:
            raise AlgebraError("an operator span needs at least the identity")
        if self.unit_index is not None and not self.operators[self.unit_index].is_identity():
            raise AlgebraError(f"operator {self.names[self.unit_index]!r} marked as unit is not the identity")

    @classmethod
    def build(cls, named: Sequence[tuple], unit: str | None = None) -> "OperatorSpan":
        """From ``[(name, Matrix), ...]``; the identity is appended as ``"id"`` if absent."""
        names = [n for n, _ in named]
        ops = [m for _, m in named]
        if unit is None:
            idx = next((i for i, m in enumerate(ops) if m.is_identity()), None)
            if idx is None:
                n = ops[0].rows
                names.append("id" if "id" not in names else "1")
                ops.append(Matrix.identity(n))
                idx = len(ops) - 1
        else:
            if unit not in names:
                raise AlgebraError(f"unit operator {unit!r} is not listed")
            idx = names.index(unit)
        return cls(tuple(names), tuple(ops), idx)

    @classmethod
    def trivial(cls, n: int) -> "OperatorSpan":
        return cls(("id",), (Matrix.identity(n),), 0)

    @property
    def size(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].rows

    def __iter__(self):
        return iter(zip(self.names, self.operators))

    def independent(self) -> "OperatorSpan":
        """Canonical independent subset in list order (keeps an identity slot if the span needs one)."""
        keep = independent_indices(self.operators)
        names = tuple(self.names[i] for i in keep)
        ops = tuple(self.operators[i] for i in keep)
        unit = next((k for k, m in enumerate(ops) if m.is_identity()), None)
        return OperatorSpan(names, ops, unit)

    def span_dim(self) -> int:
        return len(independent_indices(self.operators))

    def contains(self, m: Matrix) -> bool:
        red = RowReducer()
        for op in self.operators:
            red.add(to_sparse(op.entries))
        return not red.reduce(to_sparse(m.entries))

    def closure_defect(self) -> list:
        """Pairs (i, j) whose product leaves the span."""
        return [(self.names[i], self.names[j])
                for i, a in enumerate(self.operators)
                for j, b in enumerate(self.operators)
                if not self.contains(a @ b)]

    def to_json(self) -> dict:
        return {
            "operators": [{"name": n, "matrix": m.to_json()} for n, m in self],
            "unit": None if self.unit_index is None else self.names[self.unit_index],
        }

    @classmethod
    def from_json(cls, data) -> "OperatorSpan":
        try:
            named = [(op["name"], Matrix.from_json(op["matrix"])) for op in data["operators"]]
            return cls.build(named, data.get("unit"))
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed operator span: {exc}") from exc


def independent_indices(ops: Sequence[Matrix]) -> list[int]:
    red = RowReducer()
    return [i for i, m in enumerate(ops) if red.add(to_sparse(m.entries)) is not None]


# ---------------------------------------------------------------------------
# Generalized action axiom
# ---------------------------------------------------------------------------


@dataclass
class GeneralizedActionWitness:
    span: OperatorSpan
    # operator name -> list of (kind, u, v, coeff); kind "ab" means (u a)(v b), "ba" means (u b)(v a)
    terms: dict

    def to_json(self) -> dict:
        return {name: [{"kind": k, "u": u, "v": v, "coeff": fmt_rational(c)} for k, u, v, c in ts]
                for name, ts in self.terms.items()}


class NotGeneralizedAction(Exception):
    def __init__(self, message: str, operator: str, residual=None):
        super().__init__(message)
        self.operator = operator
        self.residual = residual


def _candidate_columns(A: GradedAlgebra, ops: Sequence[Matrix]) -> tuple[list, list]:
    """Columns of the bilinear candidates, each flattened over (i, j, k)."""
    n = A.dim
    imgs = [[op.col(i) for i in range(n)] for op in ops]
    cols, labels = [], []
    m = len(ops)
    for kind in ("ab", "ba"):
        for u in range(m):
            for v in range(m):
                col = []
                for i in range(n):
                    for j in range(n):
                        if kind == "ab":
                            p = A.multiply(imgs[u][i], imgs[v][j])
                        else:
                            p = A.multiply(imgs[u][j], imgs[v][i])
                        col.extend(p)
                cols.append(col)
                labels.append((kind, u, v))
    return cols, labels


def verify_generalized_action(A: GradedAlgebra, H: OperatorSpan) -> GeneralizedActionWitness:
    n = A.dim
    ops = list(H.operators)
    cols, labels = _candidate_columns(A, ops)
    system = Matrix.from_columns(cols, n ** 3)
    terms = {}
    for name, h in H:
        target = []
        for i in range(n):
            for j in range(n):
                target.extend(h.apply(A.multiply(A.e(i), A.e(j))))
        sol = solve_vector(system, target)
        if not sol.feasible:
            raise NotGeneralizedAction(f"operator {name!r} does not satisfy the generalized action axiom",
                                       name, sol.inconsistent_row)
        x = sol.particular.col(0)
        if system.apply(x) != tuple(target):
            raise AssertionError("generalized action witness does not re-evaluate")
        terms[name] = [(k, H.names[u], H.names[v], c) for (k, u, v), c in zip(labels, x) if c]
    return GeneralizedActionWitness(H, terms)


# ---------------------------------------------------------------------------
# Projections and the tensor construction
# ---------------------------------------------------------------------------


def projection_action(A: GradedAlgebra) -> OperatorSpan:
    """Projectors onto the homogeneous components, plus the identity."""
    named = [(f"q_{t}", A.projector(t)) for t in A.supp]
    if len(named) == 1:
        return OperatorSpan.trivial(A.dim)
    return OperatorSpan.build(named)


def check_component_preserving(A: GradedAlgebra, H: OperatorSpan) -> None:
    for name, h in H:
        w = A.preserves_components(h)
        if w is not None:
            j, t = w
            raise AlgebraError(f"operator {name!r} moves {A.basis[j]} into degree {t!r}")


def tensor_action(A: GradedAlgebra, H: OperatorSpan) -> OperatorSpan:
    """Independent list of ``q_t o h`` (t in supp, h in H) with the identity adjoined."""
    check_component_preserving(A, H)
    hs = H.independent()
    named = []
    for t in A.supp:
        q = A.projector(t)
        for name, h in hs:
            named.append((f"q_{t}*{name}", q @ h))
    keep = independent_indices([m for _, m in named])
    named = [named[i] for i in keep]
    return OperatorSpan.build(named)


def is_invariant(V: Subspace, ops: Sequence[Matrix]) -> bool:
    return all(V.contains(m.apply(v)) for m in ops for v in V.basis)


@dataclass
class InvarianceComparison:
    tensor_invariant: bool
    graded: bool
    h_invariant: bool

    @property
    def agree(self) -> bool:
        return self.tensor_invariant == (self.graded and self.h_invariant)


def invariant_subspaces_coincide(A: GradedAlgebra, H: OperatorSpan, V: Subspace) -> InvarianceComparison:
    """Compare tensor-span invariance with (graded and H-invariant), each computed on its own."""
    T = tensor_action(A, H)
    return InvarianceComparison(
        is_invariant(V, T.operators),
        is_graded_subspace(A, V),
        is_invariant(V, H.operators),
    )


def span_from_certificates(certs: dict) -> OperatorSpan:
    """Operator span of a group action: the generator matrices and the identity."""
    return OperatorSpan.build([(name, c.phi) for name, c in certs.items()])


__all__ = [
    "OperatorSpan",
    "independent_indices",
    "GeneralizedActionWitness",
    "NotGeneralizedAction",
    "verify_generalized_action",
    "projection_action",
    "check_component_preserving",
    "tensor_action",
    "is_invariant",
    "InvarianceComparison",
    "invariant_subspaces_coincide",
    "span_from_certificates",
]

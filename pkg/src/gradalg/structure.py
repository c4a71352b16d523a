"""Jacobson radical and the action-invariant Wedderburn decomposition.

The radical is computed with Dickson's trace criterion on the unitalization,
which is valid over fields of characteristic zero:

    J(A) = { x in A : tr L_{xy} = 0 for all y in A + Q1 }.

Splitting a semisimple algebra uses primitive central idempotents obtained by
factoring the minimal polynomial of a random central element over Q.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import sympy

from .algebra import (AlgebraError, GradedAlgebra, Subspace, annihilator_lr, induced_map,
                      is_graded_subspace, nilpotency_index, product_space, quotient_algebra,
                      verify_associative)
from .exact import ONE, ZERO, Matrix, RowReducer, kernel, to_sparse, unit_vec
from .haction import OperatorSpan
from .pseudo import GradedGroupAction

MAX_SPLIT_ATTEMPTS = 8


class StructureError(AlgebraError):
    pass


def _require_associative(A: GradedAlgebra) -> None:
    chk = verify_associative(A)
    if not chk:
        i, j, k = chk.witness
        raise StructureError(
            f"algebra is not associative: ({A.basis[i]}{A.basis[j]}){A.basis[k]} != "
            f"{A.basis[i]}({A.basis[j]}{A.basis[k]})")


def _left_traces(A: GradedAlgebra) -> list:
    """tr of left multiplication by e_l on the unitalization (the unit column contributes nothing)."""
    return [sum((A.mul_basis(l, j).get(j, ZERO) for j in range(A.dim)), ZERO) for l in range(A.dim)]


def radical(A: GradedAlgebra, check: bool = True) -> Subspace:
    _require_associative(A)
    n = A.dim
    t = _left_traces(A)
    rows = [t]  # y = 1
    for m in range(n):
        rows.append([sum((c * t[k] for k, c in A.mul_basis(l, m).items()), ZERO) for l in range(n)])
    J = Subspace.span(n, kernel(Matrix.from_rows(rows))) if n else Subspace.zero(0)
    if check and not J.is_zero():
        if nilpotency_index(A, J) is None:
            raise StructureError("trace-form kernel is not nilpotent")
        Q, _ = quotient_algebra(A, J)
        if not radical(Q, check=False).is_zero():
            raise StructureError("quotient by the computed radical is not semisimple")
    return J


@dataclass
class GradedRadical:
    graded: bool
    homogeneous_basis: list  # (label, vector)


def check_radical_graded(A: GradedAlgebra, J: Subspace | None = None) -> GradedRadical:
    J = radical(A) if J is None else J
    parts = []
    ok = True
    for v in J.basis:
        for t, p in A.homogeneous_parts(v).items():
            if not J.contains(p):
                ok = False
            parts.append((t, p))
    basis = []
    for t in A.supp:
        sub = Subspace.span(A.dim, [p for s, p in parts if s == t])
        basis.extend((t, v) for v in sub.basis)
    return GradedRadical(ok, basis)


def _operators(action) -> list:
    if action is None:
        return []
    if isinstance(action, GradedGroupAction):
        return list(action.matrices().items())
    if isinstance(action, OperatorSpan):
        return list(action)
    if isinstance(action, dict):
        return list(action.items())
    return list(action)


def check_radical_invariant(A: GradedAlgebra, action, J: Subspace | None = None) -> dict:
    """Per operator: True if it maps the radical into itself."""
    J = radical(A) if J is None else J
    return {name: J.image(m) <= J for name, m in _operators(action)}


# ---------------------------------------------------------------------------
# Semisimple splitting
# ---------------------------------------------------------------------------


def center(A: GradedAlgebra) -> Subspace:
    n = A.dim
    rows = []
    for j in range(n):
        e = unit_vec(n, j)
        rows.extend((A.left_matrix(e) - A.right_matrix(e)).to_rows())
    return Subspace.span(n, kernel(Matrix.from_rows(rows)) if rows else [])


def _minimal_polynomial(A: GradedAlgebra, z, unit) -> list:
    """Coefficients c_0..c_d (monic, c_d = 1) of the minimal polynomial of z."""
    powers = [tuple(unit)]
    red = RowReducer()
    n = A.dim
    # augmented column n + k records the coefficient of z^k
    red.add({**to_sparse(powers[0]), n: ONE})
    while True:
        nxt = A.multiply(powers[-1], z)
        d = len(powers)
        row = {**to_sparse(nxt), n + d: ONE}
        r = red.reduce(row)
        if not any(k < n for k in r):
            # z^d + sum c_k z^k = 0 read off the augmented part
            coeffs = [r.get(n + k, ZERO) for k in range(d + 1)]
            lead = coeffs[d]
            return [c / lead for c in coeffs]
        red.add(row)
        powers.append(nxt)


def _eval_poly(A: GradedAlgebra, coeffs: Sequence, z, unit) -> tuple:
    acc = tuple(ZERO for _ in range(A.dim))
    for c in reversed(coeffs):
        acc = A.multiply(acc, z)
        acc = tuple(a + c * u for a, u in zip(acc, unit))
    return acc


@dataclass
class CentralSplit:
    idempotents: list
    split: bool  # every block has a one-dimensional center over Q
    attempts: int


def central_idempotents(B: GradedAlgebra, seed: int = 0) -> CentralSplit:
    unit = B.find_unit()
    if unit is None:
        raise StructureError("semisimple algebra has no unit")
    Z = center(B)
    if Z.dim == 1:
        return CentralSplit([tuple(unit)], True, 0)
    rng = random.Random(seed)
    x = sympy.Symbol("x")
    for attempt in range(1, MAX_SPLIT_ATTEMPTS + 1):
        weights = [rng.randint(-9, 9) for _ in Z.basis]
        z = tuple(sum((w * v[i] for w, v in zip(weights, Z.basis)), ZERO) for i in range(B.dim))
        mp = _minimal_polynomial(B, z, unit)
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(mp)], x, domain="QQ")
        if poly.degree() < Z.dim:
            continue  # z does not generate the center
        _, factors = poly.factor_list()
        if any(mult > 1 for _, mult in factors):
            raise StructureError("central element has a repeated factor: algebra is not semisimple")
        idems = []
        for f, _ in factors:
            g = sympy.quo(poly, f)
            u = sympy.invert(g, f)
            h = sympy.rem(u * g, poly)
            coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(h, x).all_coeffs())]
            idems.append(_eval_poly(B, coeffs, z, unit))
        split = all(sympy.degree(f, x) == 1 for f, _ in factors)
        return CentralSplit(idems, split, attempts=attempt)
    raise StructureError(f"no generic central element found in {MAX_SPLIT_ATTEMPTS} attempts")


@dataclass
class Component:
    subspace: Subspace
    minimal_ideals: list  # indices into the idempotent list
    labels_present: list
    invariant: bool
    graded: bool

    def to_json(self) -> dict:
        return {
            "basis": self.subspace.to_json(),
            "labels_present": list(self.labels_present),
            "invariant": self.invariant,
        }


@dataclass
class StructureReport:
    algebra: GradedAlgebra
    radical: Subspace
    homogeneous: bool
    homogeneous_radical_basis: list
    quotient: GradedAlgebra
    components: list
    invariance_log: dict = field(default_factory=dict)
    split: bool = True

    @property
    def semisimple_dim(self) -> int:
        return self.quotient.dim

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "radical_basis": self.radical.to_json(),
            "homogeneous": self.homogeneous,
            "semisimple_dim": self.semisimple_dim,
            "quotient_basis": list(self.quotient.basis),
            "components": [c.to_json() for c in self.components],
            "invariance": dict(self.invariance_log),
            "split_over_Q": self.split,
        }


def wedderburn_invariant(B: GradedAlgebra, action=None, seed: int = 0) -> tuple[list, bool]:
    """Minimal graded action-invariant ideals of a semisimple algebra, plus the split flag."""
    _require_associative(B)
    if not radical(B, check=False).is_zero():
        raise StructureError("algebra is not semisimple")
    n = B.dim
    if n == 0:
        return [], True
    cs = central_idempotents(B, seed)
    ideals = [Subspace.span(n, [B.multiply(e, unit_vec(n, j)) for j in range(n)]) for e in cs.idempotents]
    ops = [m for _, m in _operators(action)]
    movers = ops + ([B.projector(t) for t in B.supp] if len(B.supp) > 1 else [])
    k = len(ideals)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, M in enumerate(ideals):
        for g in movers:
            for v in M.basis:
                w = g.apply(v)
                for j, e in enumerate(cs.idempotents):
                    if j != i and any(B.multiply(e, w)):
                        parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    comps = []
    for members in groups.values():
        S = Subspace.span(n, [v for i in members for v in ideals[i].basis])
        labels = [t for t in B.supp if any(any(v[i] for i in B.component(t)) for v in S.basis)]
        comps.append(Component(S, members, labels, _invariant(S, ops), is_graded_subspace(B, S)))
    comps.sort(key=lambda c: c.subspace.pivots)
    _check_components(B, comps, ideals, ops)
    return comps, cs.split


def _invariant(S: Subspace, ops) -> bool:
    return all(S.contains(g.apply(v)) for g in ops for v in S.basis)


def _check_components(B: GradedAlgebra, comps: list, ideals: list, ops) -> None:
    n = B.dim
    total = Subspace.zero(n)
    for c in comps:
        total = total + c.subspace
        if not (c.graded and c.invariant):
            raise StructureError("component is not graded and invariant")
    if total.dim != n:
        raise StructureError("components do not sum to the algebra")
    for a, b in combinations(comps, 2):
        if not product_space(B, a.subspace, b.subspace).is_zero() or \
                not product_space(B, b.subspace, a.subspace).is_zero():
            raise StructureError("distinct components do not annihilate each other")
    for c in comps:
        others = Subspace.zero(n)
        for d in comps:
            if d is not c:
                others = others + d.subspace
        if annihilator_lr(B, c.subspace) != others:
            raise StructureError("annihilator of a component is not the sum of the others")
        # every graded invariant ideal is a sum of minimal ideals; no proper sub-sum may qualify
        mem = c.minimal_ideals
        for r in range(1, len(mem)):
            for sub in combinations(mem, r):
                S = Subspace.span(n, [v for i in sub for v in ideals[i].basis])
                if is_graded_subspace(B, S) and _invariant(S, ops):
                    raise StructureError("component contains a proper graded invariant ideal")


def structure_report(A: GradedAlgebra, action=None, seed: int = 0) -> StructureReport:
    J = radical(A)
    gr = check_radical_graded(A, J)
    log = check_radical_invariant(A, action, J)
    if not gr.graded:
        raise StructureError("radical is not graded")
    Q, _ = quotient_algebra(A, J, name=(A.name + "/J") if A.name else "")
    ops = _operators(action)
    induced = [(name, induced_map(A, J, m)) for name, m in ops]
    comps, split = wedderburn_invariant(Q, induced, seed)
    return StructureReport(A, J, gr.graded, gr.homogeneous_basis, Q, comps, log, split)


__all__ = [
    "StructureError",
    "radical",
    "GradedRadical",
    "check_radical_graded",
    "check_radical_invariant",
    "center",
    "CentralSplit",
    "central_idempotents",
    "Component",
    "StructureReport",
    "wedderburn_invariant",
    "structure_report",
]

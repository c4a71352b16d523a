"""Named algebras with their gradings, actions and pseudoautomorphism families."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable

from .algebra import GradedAlgebra, make_algebra
from .exact import Matrix
from .haction import OperatorSpan
from .pseudo import GradedGroupAction, certify_action

Z2 = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"}
TRIVIAL = {("0", "0"): "0"}
GRID = tuple(Fraction(x) for x in ("1", "-1", "2", "-2", "1/2", "-1/2", "3", "-1/3"))


@dataclass(frozen=True)
class ActionSpec:
    generators: dict  # name -> Matrix
    relations: tuple = ()  # words of generator names

    def span(self) -> OperatorSpan:
        return OperatorSpan.build(list(self.generators.items()))

    def certify(self, A: GradedAlgebra) -> GradedGroupAction:
        return certify_action(A, self.generators, self.relations)


@dataclass(frozen=True)
class Family:
    params: tuple  # parameter names
    build: Callable  # params -> Matrix
    constraint: Callable = lambda *p: True

    def __call__(self, *p) -> Matrix:
        return self.build(*(Fraction(x) for x in p))

    def samples(self, count: int, seed: int = 0) -> list:
        """Deterministic parameter tuples drawn from GRID that satisfy the constraint."""
        rng = random.Random(seed)
        out, tries = [], 0
        while len(out) < count and tries < 100 * count:
            tries += 1
            p = tuple(rng.choice(GRID) for _ in self.params)
            if self.constraint(*p):
                out.append(p)
        return out


@dataclass
class CatalogEntry:
    name: str
    algebra: GradedAlgebra
    actions: dict = field(default_factory=dict)  # name -> ActionSpec
    families: dict = field(default_factory=dict)  # name -> Family
    expected: dict = field(default_factory=dict)
    description: str = ""


def _units(n: int) -> list:
    return [f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]


def _matrix_units_table(names_by_pos: dict) -> dict:
    """Products e_ij e_kl = delta_jk e_il restricted to the listed units."""
    table = {}
    for (i, j), a in names_by_pos.items():
        for (k, l), b in names_by_pos.items():
            if j == k and (i, l) in names_by_pos:
                table[(a, b)] = {names_by_pos[(i, l)]: 1}
    return table


def matrix_algebra(n: int, name: str = "") -> GradedAlgebra:
    pos = {(i, j): f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)}
    basis = _units(n)
    return make_algebra(basis, ["0"] * len(basis), _matrix_units_table(pos), labels=["0"],
                        label_product=TRIVIAL, group_grading=True, name=name or f"m{n}")


def upper_triangular(n: int, name: str = "") -> GradedAlgebra:
    pos = {(i, j): f"e{i}{j}" for i in range(1, n + 1) for j in range(i, n + 1)}
    basis = [pos[k] for k in sorted(pos)]
    return make_algebra(basis, ["0"] * len(basis), _matrix_units_table(pos), labels=["0"],
                        label_product=TRIVIAL, group_grading=True, name=name or f"ut{n}")


def transpose_matrix(basis: list) -> Matrix:
    idx = {b: k for k, b in enumerate(basis)}
    cols = []
    for b in basis:
        col = [0] * len(basis)
        col[idx["e" + b[2] + b[1]]] = 1
        cols.append(col)
    return Matrix.from_columns(cols, len(basis))


def _perm_matrix(basis: list, images: dict) -> Matrix:
    """Matrix sending basis[j] to images[basis[j]] = {name: coeff}."""
    idx = {b: k for k, b in enumerate(basis)}
    cols = []
    for b in basis:
        col = [0] * len(basis)
        for t, c in images.get(b, {b: 1}).items():
            col[idx[t]] = c
        cols.append(col)
    return Matrix.from_columns(cols, len(basis))


# ---------------------------------------------------------------------------
# Entries
# ---------------------------------------------------------------------------


def ut2_graded() -> CatalogEntry:
    basis = ["e11", "e12", "e22"]
    A = _ut2_graded_algebra()
    flip = _perm_matrix(basis, {"e11": {"e22": 1}, "e22": {"e11": 1}})
    return CatalogEntry(
        "ut2_graded", A,
        actions={"flip": ActionSpec({"flip": flip}, (("flip", "flip"),))},
        families={"scale": Family(("alpha",), lambda a: Matrix.diag([1, a, 1]), lambda a: a != 0)},
        expected={
            "identities": [("[x,y]", {"x": "0", "y": "0"}), ("x y", {"x": "1", "y": "1"})],
            "action_identities": [("x^g - x", {"x": "0"}), ("x^g - alpha*x", {"x": "1"})],
            "radical": [[0, 1, 0]],
            "cases": {("0", "0"): 4, ("0", "1"): 5, ("1", "1"): 1},
        },
        description="upper triangular 2x2 matrices, diagonal in degree 0 and e12 in degree 1",
    )


def _ut2_graded_algebra() -> GradedAlgebra:
    table = {("e11", "e11"): {"e11": 1}, ("e11", "e12"): {"e12": 1},
             ("e12", "e22"): {"e12": 1}, ("e22", "e22"): {"e22": 1}}
    return make_algebra(["e11", "e12", "e22"], ["0", "1", "0"], table, labels=["0", "1"],
                        label_product=Z2, group_grading=True, name="ut2_graded")


def ut2() -> CatalogEntry:
    A = upper_triangular(2)
    flip = _perm_matrix(list(A.basis), {"e11": {"e22": 1}, "e22": {"e11": 1}})
    return CatalogEntry(
        "ut2", A,
        actions={"flip": ActionSpec({"flip": flip}, (("flip", "flip"),))},
        families={"conj": Family(("a", "b", "s"), lambda a, b, s: _ut2_conjugation(a, b, s),
                                 lambda a, b, s: a != 0 and b != 0 and s != 0)},
        expected={"radical": [[0, 1, 0]], "codim": [1, 2, 6, 18], "rigid": True},
        description="upper triangular 2x2 matrices, trivially graded",
    )


def _ut2_conjugation(a, b, s) -> Matrix:
    """s times conjugation by g = [[a, a], [0, b]]."""
    g = [[a, a], [0, b]]
    gi = _inv2(g)
    cols = []
    for (i, j) in ((0, 0), (0, 1), (1, 1)):
        e = [[0, 0], [0, 0]]
        e[i][j] = 1
        m = _mul2(_mul2(g, e), gi)
        cols.append([s * m[0][0], s * m[0][1], s * m[1][1]])
    return Matrix.from_columns(cols, 3)


def _mul2(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def _inv2(x):
    d = x[0][0] * x[1][1] - x[0][1] * x[1][0]
    return [[x[1][1] / d, -x[0][1] / d], [-x[1][0] / d, x[0][0] / d]]


def ut3() -> CatalogEntry:
    A = upper_triangular(3)
    basis = list(A.basis)
    # anti-automorphism X -> J X^T J with J the anti-diagonal unit
    flip = _perm_matrix(basis, {b: {f"e{4 - int(b[2])}{4 - int(b[1])}": 1} for b in basis})
    return CatalogEntry(
        "ut3", A,
        actions={"flip": ActionSpec({"flip": flip}, (("flip", "flip"),))},
        families={"diag": Family(("a", "b", "c"), lambda a, b, c: _ut3_diag(a, b, c),
                                 lambda a, b, c: a != 0 and b != 0 and c != 0)},
        expected={"radical_dim": 3, "rigid": True},
        description="upper triangular 3x3 matrices, trivially graded",
    )


def _ut3_diag(a, b, c) -> Matrix:
    d = {1: a, 2: b, 3: c}
    vals = []
    for i in range(1, 4):
        for j in range(i, 4):
            vals.append(d[i] / d[j])
    return Matrix.diag(vals)


def m2() -> CatalogEntry:
    A = matrix_algebra(2)
    basis = list(A.basis)
    T = transpose_matrix(basis)
    return CatalogEntry(
        "m2", A,
        actions={"transpose": ActionSpec({"t": T}, (("t", "t"),))},
        families={
            "scaled_transpose": Family(("s",), lambda s: T.scale(s), lambda s: s != 0),
            "conj": Family(("a", "b", "s"), lambda a, b, s: _m2_conjugation(a, b, s),
                           lambda a, b, s: a != 0 and b != 0 and s != 0),
        },
        expected={"radical": [], "transpose": (0, 1), "rigid": True},
        description="full 2x2 matrix algebra, trivially graded",
    )


def _m2_conjugation(a, b, s) -> Matrix:
    g = [[a, 1], [0, b]]
    gi = _inv2(g)
    cols = []
    for i in range(2):
        for j in range(2):
            e = [[0, 0], [0, 0]]
            e[i][j] = 1
            m = _mul2(_mul2(g, e), gi)
            cols.append([s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1]])
    return Matrix.from_columns(cols, 4)


def m11() -> CatalogEntry:
    basis = ["e11", "e12", "e21", "e22"]
    pos = {(1, 1): "e11", (1, 2): "e12", (2, 1): "e21", (2, 2): "e22"}
    A = make_algebra(basis, ["0", "1", "1", "0"], _matrix_units_table(pos), labels=["0", "1"],
                     label_product=Z2, group_grading=True, name="m11")
    T = transpose_matrix(basis)
    c = _perm_matrix(basis, {"e11": {"e22": 1}, "e22": {"e11": 1}})
    sigma = _perm_matrix(basis, {"e11": {"e22": 1}, "e22": {"e11": 1}, "e21": {"e21": -1}})
    pseudo = _perm_matrix(basis, {"e12": {"e21": 1}, "e21": {"e12": -1}})
    return CatalogEntry(
        "m11", A,
        actions={
            "superinvolution": ActionSpec({"sigma": sigma}, (("sigma", "sigma"),)),
            "pseudoinvolution": ActionSpec({"rho": pseudo}, (("rho", "rho", "rho", "rho"),)),
            "full": ActionSpec({"t": T, "c": c}, (("t", "t"), ("c", "c"), ("t", "c", "t", "c"))),
        },
        families={
            "scalar": Family(("lam", "mu", "nu"), lambda l, m, n: Matrix.diag([l, m, n, l]),
                             lambda l, m, n: l != 0 and m != 0 and n != 0),
            "transpose": Family((), lambda: T),
            "swap": Family((), lambda: c),
        },
        expected={
            "cases": {("0", "0"): 4, ("0", "1"): 5, ("1", "1"): 6},
            "radical": [],
            "components": 1,
        },
        description="2x2 matrices graded by diagonal (0) and off-diagonal (1) parts",
    )


def grassmann_truncated(m: int = 3) -> CatalogEntry:
    if not 1 <= m <= 4:
        raise ValueError("generator count must be between 1 and 4")
    subsets = [s for k in range(m + 1) for s in combinations(range(1, m + 1), k)]
    names = ["1" if not s else "".join(f"e{i}" for i in s) for s in subsets]
    index = {s: k for k, s in enumerate(subsets)}
    table = {}
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            word = list(s) + list(t)
            inversions = sum(1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b])
            table[(names[index[s]], names[index[t]])] = {names[index[tuple(sorted(word))]]: (-1) ** inversions}
    A = make_algebra(names, ["0"] * len(names), table, labels=["0"], label_product=TRIVIAL,
                     group_grading=True, name=f"grassmann{m}")

    def q_family(a, b):
        return Matrix.diag([((a - b) / (a + b)) ** (len(s) // 2) * (a + b) ** (len(s) - 1) for s in subsets])

    parity = Matrix.diag([(-1) ** len(s) for s in subsets])
    return CatalogEntry(
        f"grassmann{m}", A,
        actions={"parity": ActionSpec({"eps": parity}, (("eps", "eps"),))},
        families={"Q": Family(("alpha", "beta"), q_family, lambda a, b: a * a != b * b)},
        expected={"identity": "[[x1,x2],x3]"},
        description=f"unital exterior algebra on {m} generators, trivially graded",
    )


def a0_nilpotent() -> CatalogEntry:
    basis = ["1", "u", "v", "w"]
    table = {("u", "u"): {"w": 1}, ("u", "v"): {"w": 1}, ("v", "u"): {"w": -1}}
    for b in basis:
        table[("1", b)] = {b: 1}
        if b != "1":
            table[(b, "1")] = {b: 1}
    A = make_algebra(basis, ["0"] * 4, table, labels=["0"], label_product=TRIVIAL,
                     group_grading=True, name="a0")

    def c_family(c22, c32, c33, c42, c43, c44):
        return Matrix.from_rows([
            [c22 * c22 / c44, 0, 0, 0],
            [0, c22, 0, 0],
            [0, c32, c33, 0],
            [0, c42, c43, c44],
        ])

    def q_embed(a, b):
        return Matrix.diag([1 / (a + b), a - b, a + b, (a * a - b * b) * (a - b)])

    return CatalogEntry(
        "a0", A,
        families={
            "C": Family(("c22", "c32", "c33", "c42", "c43", "c44"), c_family,
                        lambda c22, c32, c33, c42, c43, c44: c22 != 0 and c33 != 0 and c44 != 0),
            "Q": Family(("alpha", "beta"), q_embed, lambda a, b: a * a != b * b),
        },
        expected={
            "alpha": lambda c22, c33, c44: c44 * (c33 + c22) / (2 * c22 * c22 * c33),
            "beta": lambda c22, c33, c44: c44 * (c33 - c22) / (2 * c22 * c22 * c33),
            "radical": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            "nilpotency_index": 3,
        },
        description="unit adjoined to the nilpotent algebra <u, v, w> with uu = uv = w, vu = -w",
    )


def qxq() -> CatalogEntry:
    A = make_algebra(["a", "b"], ["0", "0"], {("a", "a"): {"a": 1}, ("b", "b"): {"b": 1}},
                     labels=["0"], label_product=TRIVIAL, group_grading=True, name="qxq")
    swap = Matrix.from_rows([[0, 1], [1, 0]])
    return CatalogEntry(
        "qxq", A,
        actions={"swap": ActionSpec({"c": swap}, (("c", "c"),))},
        families={"scaled_swap": Family(("s",), lambda s: swap.scale(s), lambda s: s != 0)},
        expected={"components": {"swap": 1, None: 2}},
        description="Q x Q with the coordinate swap",
    )


def q1() -> CatalogEntry:
    A = make_algebra(["1"], ["0"], {("1", "1"): {"1": 1}}, labels=["0"], label_product=TRIVIAL,
                     group_grading=True, name="q1")
    return CatalogEntry("q1", A, families={"scalar": Family(("s",), lambda s: Matrix.diag([s]), lambda s: s != 0)},
                        expected={"codim": [1, 1, 1, 1, 1]}, description="the field Q")


def m2_plus_m3() -> CatalogEntry:
    pos = {}
    for i in range(1, 3):
        for j in range(1, 3):
            pos[(i, j)] = f"a{i}{j}"
    for i in range(3, 6):
        for j in range(3, 6):
            pos[(i, j)] = f"b{i - 2}{j - 2}"
    basis = [pos[k] for k in sorted(pos)]
    A = make_algebra(basis, ["0"] * len(basis), _matrix_units_table(pos), labels=["0"],
                     label_product=TRIVIAL, group_grading=True, name="m2_plus_m3")
    return CatalogEntry("m2_plus_m3", A, expected={"components": 2},
                        description="direct sum of 2x2 and 3x3 matrix algebras")


def two_step() -> CatalogEntry:
    A = make_algebra(["e1", "e2"], ["a", "b"], {("e1", "e2"): {"e2": 1}}, labels=["a", "b"],
                     associative=False, name="two_step")
    return CatalogEntry(
        "two_step", A,
        families={"diag": Family(("p", "q"), lambda p, q: Matrix.diag([p, q]), lambda p, q: p != 0 and q != 0)},
        expected={"cases": {("a", "a"): 1, ("a", "b"): 2, ("b", "b"): 1}},
        description="e1 e2 = e2 with e1, e2 in separate components (not associative)",
    )


S3 = [tuple(p) for p in permutations(range(3))]


def _s3_name(p) -> str:
    return "g" + "".join(str(x) for x in p)


def _s3_mul(p, q) -> tuple:
    return tuple(p[q[i]] for i in range(3))


def group_algebra_s3() -> CatalogEntry:
    names = [_s3_name(p) for p in S3]
    table = {(_s3_name(p), _s3_name(q)): {_s3_name(_s3_mul(p, q)): 1} for p in S3 for q in S3}
    labels = names
    law = {(_s3_name(p), _s3_name(q)): _s3_name(_s3_mul(p, q)) for p in S3 for q in S3}
    A = make_algebra(names, names, table, labels=labels, label_product=law, group_grading=True, name="qs3")

    def sign(p):
        return (-1) ** sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])

    sgn = Matrix.diag([sign(p) for p in S3])
    return CatalogEntry(
        "qs3", A,
        actions={"sign": ActionSpec({"sgn": sgn}, (("sgn", "sgn"),))},
        families={"scalar": Family(("s",), lambda s: Matrix.diag([s] * 6), lambda s: s != 0)},
        expected={"components_graded": 1, "components_plain": 3},
        description="group algebra of S3 graded by S3",
    )


_BUILDERS = {
    "ut2_graded": ut2_graded,
    "ut2": ut2,
    "ut3": ut3,
    "m2": m2,
    "m11": m11,
    "grassmann1": lambda: grassmann_truncated(1),
    "grassmann2": lambda: grassmann_truncated(2),
    "grassmann3": lambda: grassmann_truncated(3),
    "a0": a0_nilpotent,
    "qxq": qxq,
    "q1": q1,
    "m2_plus_m3": m2_plus_m3,
    "two_step": two_step,
    "qs3": group_algebra_s3,
}


def names() -> list:
    return list(_BUILDERS)


def get(name: str) -> CatalogEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}") from None


def matrix_and_misc() -> list:
    return [m2(), ut2(), ut3(), qxq()]


__all__ = [
    "GRID",
    "ActionSpec",
    "Family",
    "CatalogEntry",
    "matrix_algebra",
    "upper_triangular",
    "ut2_graded",
    "ut2",
    "ut3",
    "m2",
    "m11",
    "grassmann_truncated",
    "a0_nilpotent",
    "qxq",
    "q1",
    "m2_plus_m3",
    "two_step",
    "group_algebra_s3",
    "matrix_and_misc",
    "names",
    "get",
]

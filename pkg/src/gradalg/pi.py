"""Multilinear (graded, decorated) polynomials, identity tests and codimensions.

A multilinear monomial of degree ``n`` is described by the order in which the
variables ``x_0..x_{n-1}`` appear, a degree label and an operator decoration
per variable, and a bracketing shape (``None`` for the flat associative word).

Codimensions are ranks of evaluation matrices.  Rows are monomials, columns
are pairs (assignment of homogeneous basis vectors to variables, output
coordinate).  Monomials whose variables carry different degree tuples involve
different free variables, so a combination vanishes on ``A`` iff each
fixed-tuple part vanishes on its own.  The quotient dimension is therefore the
sum of per-tuple ranks.
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .algebra import AlgebraError, GradedAlgebra
from .exact import ZERO, Matrix, RowReducer, fmt_rational
from .haction import OperatorSpan, tensor_action

PLAIN = "*"  # the single label used when the grading is ignored
DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(Exception):
    def __init__(self, message: str, estimate: int, budget: int):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bracket_shapes(lo: int, hi: int) -> tuple:
    """All full binary trees with leaves lo..hi-1 in order (leaves are ints)."""
    if hi - lo == 1:
        return (lo,)
    out = []
    for mid in range(lo + 1, hi):
        for left in bracket_shapes(lo, mid):
            for right in bracket_shapes(mid, hi):
                out.append((left, right))
    return tuple(out)


@dataclass(frozen=True)
class Monomial:
    sigma: tuple  # variable index at each position
    degrees: tuple  # label of each variable (indexed by variable)
    decorations: tuple  # operator index of each variable
    shape: object = None  # None: flat word; else nested pairs of positions

    @property
    def n(self) -> int:
        return len(self.sigma)

    def render(self, names: Sequence[str] | None = None) -> str:
        def leaf(pos):
            v = self.sigma[pos]
            s = f"x{v + 1}"
            if names is not None and len(names) > 1:
                s += f"^{names[self.decorations[v]]}"
            if self.degrees[v] != PLAIN:
                s += f"({self.degrees[v]})"
            return s

        def rec(t):
            if isinstance(t, int):
                return leaf(t)
            return f"({rec(t[0])} {rec(t[1])})"

        if self.shape is None:
            return " ".join(leaf(p) for p in range(self.n))
        return rec(self.shape)


def enumerate_monomials(n: int, labels: Sequence, span_size: int, associative: bool = True) -> Iterator[Monomial]:
    if n < 1:
        raise ValueError("n must be at least 1")
    shapes = (None,) if associative else bracket_shapes(0, n)
    for sigma in permutations(range(n)):
        for degs in product(labels, repeat=n):
            for decs in product(range(span_size), repeat=n):
                for sh in shapes:
                    yield Monomial(sigma, degs, decs, sh)


def _block_monomials(n: int, degs: tuple, span_size: int, associative: bool) -> list:
    shapes = (None,) if associative else bracket_shapes(0, n)
    return [Monomial(sigma, degs, decs, sh)
            for sigma in permutations(range(n))
            for decs in product(range(span_size), repeat=n)
            for sh in shapes]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def components(A: GradedAlgebra, graded: bool) -> dict:
    if graded:
        return {t: A.component(t) for t in A.supp}
    return {PLAIN: tuple(range(A.dim))}


class _Evaluator:
    """Cached decorated basis images and products for one algebra and span."""

    def __init__(self, A: GradedAlgebra, ops: Sequence):
        self.A = A
        self.ops = list(ops)
        self.images = [[_sparse_col(op, i) for i in range(A.dim)] for op in self.ops]

    def value(self, m: Monomial, assignment: Sequence[int]) -> dict:
        vals = [self.images[m.decorations[v]][assignment[v]] for v in m.sigma]
        if m.shape is None:
            acc = vals[0]
            for x in vals[1:]:
                if not acc:
                    return {}
                acc = self.A.multiply_sparse(acc, x)
            return acc
        return self._tree(m.shape, vals)

    def _tree(self, t, vals):
        if isinstance(t, int):
            return vals[t]
        left = self._tree(t[0], vals)
        if not left:
            return {}
        return self.A.multiply_sparse(left, self._tree(t[1], vals))

    def flat_rows(self, n: int, assignment: Sequence[int], s: int, sink) -> None:
        """Evaluate every flat monomial of the block at one assignment, sharing prefixes.

        ``sink(row_index, value)`` receives nonzero values; rows are ordered by
        (sigma, decorations per variable) lexicographically.
        """
        weights = [s ** (n - 1 - v) for v in range(n)]
        per_sigma = s ** n
        for si, sigma in enumerate(permutations(range(n))):
            base = si * per_sigma

            def dfs(pos, acc, idx):
                v = sigma[pos]
                for d in range(s):
                    x = self.images[d][assignment[v]]
                    nxt = x if acc is None else self.A.multiply_sparse(acc, x)
                    if not nxt:
                        continue
                    j = idx + d * weights[v]
                    if pos == n - 1:
                        sink(base + j, nxt)
                    else:
                        dfs(pos + 1, nxt, j)

            dfs(0, None, 0)


def _sparse_col(op, i: int) -> dict:
    return {k: x for k, x in enumerate(op.col(i)) if x}


def evaluate_monomial(A: GradedAlgebra, H: OperatorSpan, m: Monomial, assignment: Sequence[int]) -> tuple:
    if len(assignment) != m.n:
        raise AlgebraError(f"assignment has {len(assignment)} entries for {m.n} variables")
    for v, a in enumerate(assignment):
        if m.degrees[v] != PLAIN and A.degrees[a] != m.degrees[v]:
            raise AlgebraError(f"x{v + 1} has degree {m.degrees[v]!r} but {A.basis[a]} has degree {A.degrees[a]!r}")
    out = _Evaluator(A, H.operators).value(m, assignment)
    return tuple(out.get(k, ZERO) for k in range(A.dim))


# ---------------------------------------------------------------------------
# Codimensions
# ---------------------------------------------------------------------------


@dataclass
class BlockResult:
    degrees: tuple
    rows: int
    cols: int
    rank: int
    assignments: list = field(default_factory=list, repr=False)
    echelon: list = field(default_factory=list, repr=False)
    pivots: list = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"tuple": list(self.degrees), "rows": self.rows, "cols": self.cols, "rank": self.rank}


@dataclass
class CodimResult:
    n: int
    graded: bool
    associative: bool
    span_size: int
    blocks: list

    @property
    def c_n(self) -> int:
        return sum(b.rank for b in self.blocks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": {"graded": self.graded, "associative": self.associative, "span_size": self.span_size},
            "blocks": [b.to_json() for b in self.blocks],
            "c_n": self.c_n,
        }


def block_size(A: GradedAlgebra, degs: tuple, comps: dict, span_size: int, associative: bool) -> tuple[int, int]:
    n = len(degs)
    rows = math.factorial(n) * span_size ** n
    if not associative:
        rows *= len(bracket_shapes(0, n))
    cols = A.dim * math.prod(len(comps[t]) for t in degs)
    return rows, cols


def _decoration_ops(H: OperatorSpan | None, A: GradedAlgebra) -> list:
    if H is None:
        return [Matrix.identity(A.dim)]
    return list(H.independent().operators)


def degree_tuples(A: GradedAlgebra, n: int, graded: bool) -> list:
    return list(product(list(components(A, graded)), repeat=n))


def compute_block(A: GradedAlgebra, ops: Sequence, degs: tuple, comps: dict, associative: bool,
                  keep: bool = False) -> BlockResult:
    n = len(degs)
    s = len(ops)
    ev = _Evaluator(A, ops)
    assignments = list(product(*(comps[t] for t in degs)))
    d = A.dim
    nrows, ncols = block_size(A, degs, comps, s, associative)
    rows = [dict() for _ in range(nrows)]
    if associative:
        for ai, a in enumerate(assignments):
            base = ai * d

            def sink(r, val, base=base):
                row = rows[r]
                for k, x in val.items():
                    row[base + k] = x

            ev.flat_rows(n, a, s, sink)
    else:
        monos = _block_monomials(n, degs, s, associative)
        for r, m in enumerate(monos):
            row = rows[r]
            for ai, a in enumerate(assignments):
                for k, x in ev.value(m, a).items():
                    row[ai * d + k] = x
    red = RowReducer()
    for row in rows:
        if row:
            red.add(row)
    res = BlockResult(tuple(degs), nrows, ncols, len(red))
    if keep:
        res.assignments = assignments
        res.echelon = red.echelon()
        res.pivots = red.pivots()
    return res


def codimension(A: GradedAlgebra, H: OperatorSpan | None, n: int, graded: bool = True,
                associative: bool = True, budget: int = DEFAULT_BUDGET, threads: int = 1,
                keep: bool = False) -> CodimResult:
    if n < 1:
        raise ValueError("n must be at least 1")
    ops = _decoration_ops(H, A)
    comps = components(A, graded)
    tuples = degree_tuples(A, n, graded)
    for degs in tuples:
        r, c = block_size(A, degs, comps, len(ops), associative)
        if r * c > budget:
            raise BudgetExceeded(f"block {degs} needs a {r}x{c} evaluation matrix "
                                 f"({r * c} entries, budget {budget})", r * c, budget)

    def work(degs):
        return compute_block(A, ops, degs, comps, associative, keep)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(work, tuples))
    else:
        blocks = [work(t) for t in tuples]
    return CodimResult(n, graded, associative, len(ops), blocks)


def codimension_sequence(A: GradedAlgebra, H: OperatorSpan | None, nmax: int, **kw) -> list:
    return [codimension(A, H, n, **kw).c_n for n in range(1, nmax + 1)]


@dataclass
class EqualityReport:
    n: int
    graded_side: CodimResult
    tensor_side: CodimResult
    tensor_span: OperatorSpan

    @property
    def equal(self) -> bool:
        return self.graded_side.c_n == self.tensor_side.c_n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "graded_H": self.graded_side.c_n,
            "ungraded_tensor": self.tensor_side.c_n,
            "tensor_span_size": self.tensor_side.span_size,
            "equal": self.equal,
        }


def codim_equality_check(A: GradedAlgebra, H: OperatorSpan | None, n: int, **kw) -> EqualityReport:
    """Graded codimension with H against ungraded codimension with the tensor span."""
    H = OperatorSpan.trivial(A.dim) if H is None else H
    left = codimension(A, H, n, graded=True, **kw)
    T = tensor_action(A, H)
    right = codimension(A, T, n, graded=False, **kw)
    return EqualityReport(n, left, right, T)


# ---------------------------------------------------------------------------
# Polynomials and identity tests
# ---------------------------------------------------------------------------


@dataclass
class Polynomial:
    """Linear combination of multilinear monomials of a common degree."""

    terms: dict  # Monomial -> Fraction
    variables: tuple = ()  # display names, indexed like the monomials' variables
    op_names: tuple = ("id",)

    @property
    def n(self) -> int:
        return next(iter(self.terms)).n if self.terms else len(self.variables)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            parts.append(f"{fmt_rational(c)}*{m.render(self.op_names)}")
        return " + ".join(parts)


@dataclass
class IdentityResult:
    holds: bool
    witness: tuple | None = None  # basis names per variable
    value: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"identity": self.holds}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["value"] = [fmt_rational(x) for x in self.value]
        return out


def is_identity(A: GradedAlgebra, H: OperatorSpan | None, f: Polynomial) -> IdentityResult:
    ops = list(H.operators) if H is not None else [Matrix.identity(A.dim)]
    if not f.terms:
        return IdentityResult(True)
    n = f.n
    blocks: dict = {}
    for m, c in f.terms.items():
        if m.n != n:
            raise AlgebraError("polynomial is not of uniform degree")
        if sorted(m.sigma) != list(range(n)):
            raise AlgebraError("monomial is not multilinear")
        if any(d >= len(ops) for d in m.decorations):
            raise AlgebraError("decoration index out of range")
        blocks.setdefault(m.degrees, []).append((m, c))
    ev = _Evaluator(A, ops)
    for degs, terms in blocks.items():
        comps = []
        for t in degs:
            if t == PLAIN:
                comps.append(range(A.dim))
            elif t in A.labels:
                comps.append(A.component(t))
            else:
                raise AlgebraError(f"unknown degree label {t!r}")
        for a in product(*comps):
            total: dict = {}
            for m, c in terms:
                for k, x in ev.value(m, a).items():
                    total[k] = total.get(k, ZERO) + c * x
            if any(total.values()):
                val = tuple(total.get(k, ZERO) for k in range(A.dim))
                return IdentityResult(False, tuple(A.basis[i] for i in a), val)
    return IdentityResult(True)


# -- a small text syntax ------------------------------------------------------
#
#   poly    := term (('+' | '-') term)*
#   term    := [coeff '*'] factor ('*'? factor)*
#   factor  := var | '[' poly ',' poly ']' | '(' poly ')'
#   var     := name ['^' opname]
#
# Juxtaposition and '*' are the product; [a, b] is ab - ba.

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class PolynomialSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", Fraction(num)))
        elif name is not None:
            out.append(("name", name))
        elif sym.strip():
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    # expressions are dicts: tree -> coeff, trees are ("leaf", var, op) or (left, right)
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise PolynomialSyntaxError(f"expected {val or kind} at token {self.i}, got {tok[1]!r}")
        self.i += 1
        return tok

    def poly(self):
        sign = Fraction(1)
        if self.peek() == ("sym", "-"):
            self.take()
            sign = Fraction(-1)
        acc = _scale(self.term(), sign)
        while self.peek() in (("sym", "+"), ("sym", "-")):
            s = Fraction(1) if self.take()[1] == "+" else Fraction(-1)
            acc = _add(acc, _scale(self.term(), s))
        return acc

    def term(self):
        coeff = Fraction(1)
        if self.peek()[0] == "num":
            coeff = self.take()[1]
            if self.peek() == ("sym", "*"):
                self.take()
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok == ("sym", "*"):
                self.take()
                acc = _mul(acc, self.factor())
            elif tok[0] == "name" or tok in (("sym", "["), ("sym", "(")):
                acc = _mul(acc, self.factor())
            else:
                break
        return _scale(acc, coeff)

    def factor(self):
        tok = self.peek()
        if tok == ("sym", "["):
            self.take()
            a = self.poly()
            self.take("sym", ",")
            b = self.poly()
            self.take("sym", "]")
            return _add(_mul(a, b), _scale(_mul(b, a), Fraction(-1)))
        if tok == ("sym", "("):
            self.take()
            a = self.poly()
            self.take("sym", ")")
            return a
        name = self.take("name")[1]
        op = None
        if self.peek() == ("sym", "^"):
            self.take()
            op = self.take("name")[1]
        return {("leaf", name, op): Fraction(1)}


def _scale(p, c):
    return {k: v * c for k, v in p.items() if v * c}


def _add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


def _mul(p, q):
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            k = (a, b)
            out[k] = out.get(k, ZERO) + x * y
    return {k: v for k, v in out.items() if v}


def _leaves(t) -> list:
    if t[0] == "leaf":
        return [t]
    return _leaves(t[0]) + _leaves(t[1])


def _shape(t, counter) -> object:
    if t[0] == "leaf":
        pos = counter[0]
        counter[0] += 1
        return pos
    return (_shape(t[0], counter), _shape(t[1], counter))


def parse_polynomial(text: str, degrees: dict | None = None, op_names: Sequence[str] = ("id",),
                     associative: bool = True, default_degree=PLAIN, unit: str | None = None) -> Polynomial:
    """Parse a multilinear polynomial; variables are ordered by name.

    Undecorated variables carry ``unit`` (default: ``"id"`` if listed, else the first operator).
    """
    if unit is None:
        unit = "id" if "id" in op_names else op_names[0]
    if unit not in op_names:
        raise PolynomialSyntaxError(f"unit operator {unit!r} is not listed")
    toks = _tokenize(text)
    p = _Parser(toks)
    expr = p.poly()
    if p.i != len(toks):
        raise PolynomialSyntaxError(f"unexpected token {toks[p.i][1]!r}")
    names = sorted({leaf[1] for t in expr for leaf in _leaves(t)}, key=_natural_key)
    index = {v: i for i, v in enumerate(names)}
    degrees = degrees or {}
    degs = tuple(degrees.get(v, default_degree) for v in names)
    terms: dict = {}
    for t, c in expr.items():
        leaves = _leaves(t)
        vars_ = [index[leaf[1]] for leaf in leaves]
        if sorted(vars_) != list(range(len(names))):
            raise PolynomialSyntaxError("polynomial is not multilinear in " + ", ".join(names))
        decs = [0] * len(names)
        for leaf in leaves:
            opn = leaf[2] or unit
            if opn not in op_names:
                raise PolynomialSyntaxError(f"unknown operator {opn!r}")
            decs[index[leaf[1]]] = list(op_names).index(opn)
        shape = None if associative else _shape(t, [0])
        m = Monomial(tuple(vars_), degs, tuple(decs), shape)
        terms[m] = terms.get(m, ZERO) + c
    terms = {m: c for m, c in terms.items() if c}
    return Polynomial(terms, tuple(names), tuple(op_names))


def _natural_key(s: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s)]


def polynomial_from_words(words: Iterable[tuple], degrees: Sequence | None = None) -> Polynomial:
    """Flat polynomial from (coeff, variable order) pairs; convenience for tests."""
    terms: dict = {}
    for c, order in words:
        order = tuple(order)
        k = len(order)
        degs = tuple(degrees) if degrees is not None else (PLAIN,) * k
        m = Monomial(order, degs, (0,) * k)
        terms[m] = terms.get(m, ZERO) + Fraction(c)
    return Polynomial({m: c for m, c in terms.items() if c})


__all__ = [
    "PLAIN",
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "bracket_shapes",
    "Monomial",
    "enumerate_monomials",
    "components",
    "evaluate_monomial",
    "BlockResult",
    "CodimResult",
    "block_size",
    "degree_tuples",
    "compute_block",
    "codimension",
    "codimension_sequence",
    "EqualityReport",
    "codim_equality_check",
    "Polynomial",
    "IdentityResult",
    "is_identity",
    "PolynomialSyntaxError",
    "parse_polynomial",
    "polynomial_from_words",
]

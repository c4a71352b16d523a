"""Symmetric group cocharacters of the multilinear quotient.

Characters come from the Murnaghan-Nakayama rule on beta-sets.  The trace of
a permutation on the quotient is read off the reduced echelon rows of each
evaluation block that the permutation maps to itself.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .algebra import GradedAlgebra
from .haction import OperatorSpan
from .pi import CodimResult, codimension


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def cycle_type(perm: Sequence[int]) -> tuple:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            out.append(k)
    return tuple(sorted(out, reverse=True))


def representative(mu: Sequence[int]) -> tuple:
    """A permutation of cycle type mu (consecutive cycles)."""
    perm = []
    start = 0
    for k in mu:
        perm.extend(start + (i + 1) % k for i in range(k))
        start += k
    return tuple(perm)


def class_size(mu: Sequence[int]) -> int:
    n = sum(mu)
    denom = 1
    for k, m in Counter(mu).items():
        denom *= k ** m * math.factorial(m)
    return math.factorial(n) // denom


def _beta(lam: Sequence[int]) -> tuple:
    ell = len(lam)
    return tuple(lam[i] + ell - 1 - i for i in range(ell))


def _from_beta(beta: Sequence[int]) -> tuple:
    b = sorted(beta, reverse=True)
    ell = len(b)
    return tuple(p for p in (b[i] - (ell - 1 - i) for i in range(ell)) if p > 0)


@lru_cache(maxsize=None)
def sn_character(lam: tuple, mu: tuple) -> int:
    """chi_lambda(mu) by recursive border-strip removal."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"|{lam}| != |{mu}|")
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beta = _beta(lam)
    bset = set(beta)
    total = 0
    for b in beta:
        c = b - r
        if c < 0 or c in bset:
            continue
        height = sum(1 for x in beta if c < x < b)
        new = _from_beta([c if x == b else x for x in beta])
        total += (-1) ** height * sn_character(new, rest)
    return total


def character_dimension(lam: tuple) -> int:
    return sn_character(tuple(lam), (1,) * sum(lam))


# ---------------------------------------------------------------------------
# Traces on the quotient
# ---------------------------------------------------------------------------


def _block_trace(block, perm: Sequence[int], dim: int) -> Fraction:
    index = {a: i for i, a in enumerate(block.assignments)}
    n = len(perm)
    tr = Fraction(0)
    for row, p in zip(block.echelon, block.pivots):
        a = block.assignments[p // dim]
        k = p % dim
        moved = tuple(a[perm[i]] for i in range(n))
        tr += row.get(index[moved] * dim + k, 0)
    return tr


def trace_from_result(res: CodimResult, perm: Sequence[int], dim: int) -> Fraction:
    tr = Fraction(0)
    for block in res.blocks:
        degs = block.degrees
        if all(degs[perm[i]] == degs[i] for i in range(len(perm))):
            tr += _block_trace(block, perm, dim)
    return tr


def quotient_trace(A: GradedAlgebra, H: OperatorSpan | None, n: int, perm: Sequence[int],
                   graded: bool = False, **kw) -> Fraction:
    res = codimension(A, H, n, graded=graded, keep=True, **kw)
    return trace_from_result(res, perm, A.dim)


@dataclass
class CocharacterResult:
    n: int
    multiplicities: dict  # partition -> int
    c_n: int
    traces: dict  # cycle type -> Fraction

    @property
    def colength(self) -> int:
        return sum(self.multiplicities.values())

    @property
    def dim_check(self) -> int:
        return sum(m * character_dimension(lam) for lam, m in self.multiplicities.items())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": [{"partition": list(lam), "mult": m} for lam, m in self.multiplicities.items()],
            "colength": self.colength,
            "dim_check": self.dim_check,
            "c_n": self.c_n,
        }


class MultiplicityError(AssertionError):
    pass


def cocharacter(A: GradedAlgebra, H: OperatorSpan | None, n: int, graded: bool = False, **kw) -> CocharacterResult:
    res = codimension(A, H, n, graded=graded, keep=True, **kw)
    traces = {mu: trace_from_result(res, representative(mu), A.dim) for mu in partitions(n)}
    if traces[(1,) * n] != res.c_n:
        raise MultiplicityError("identity trace differs from the codimension")
    fact = math.factorial(n)
    mults = {}
    for lam in partitions(n):
        s = sum(class_size(mu) * traces[mu] * sn_character(lam, mu) for mu in traces)
        m = Fraction(s, fact)
        if m.denominator != 1 or m < 0:
            raise MultiplicityError(f"multiplicity of {lam} is {m}")
        mults[lam] = int(m)
    out = CocharacterResult(n, mults, res.c_n, traces)
    if out.dim_check != res.c_n:
        raise MultiplicityError("sum of m(lambda) d_lambda differs from the codimension")
    return out


__all__ = [
    "partitions",
    "cycle_type",
    "representative",
    "class_size",
    "sn_character",
    "character_dimension",
    "trace_from_result",
    "quotient_trace",
    "CocharacterResult",
    "MultiplicityError",
    "cocharacter",
]

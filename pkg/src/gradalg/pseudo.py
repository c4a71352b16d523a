"""Graded pseudoautomorphisms: certification, pair cases, composition, inversion.

A linear bijection ``phi`` preserving every homogeneous component is a graded
pseudoautomorphism when, for every pair of labels ``(s, t)``, there are
scalars with ``phi(ab) = alpha(s,t) phi(a)phi(b) + beta(s,t) phi(b)phi(a)``
for ``a`` of degree ``s`` and ``b`` of degree ``t``.  Certification solves the
two-unknown linear system per ordered pair and collapses the raw affine
solution set to the canonical representative of the pair's case (1-6).

Composition convention: ``compose(c1, c2)`` certifies ``phi1 @ phi2`` (apply
``phi2`` first).  With the tau layout ``[[alpha(s,t), beta(t,s)], [beta(s,t),
alpha(t,s)]]`` this gives ``tau(phi1 phi2) = tau(phi1) tau(phi2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import AlgebraError, GradedAlgebra
from .exact import ONE, ZERO, Matrix, Solution, fmt_rational, kernel, solve_vector

COMPOSITION_CONVENTION = "compose(c1, c2) certifies phi1 @ phi2; tau(phi1 @ phi2) = tau(phi1) @ tau(phi2)"


class NotPseudoAutomorphism(Exception):
    """Refusal: the map is not a graded pseudoautomorphism."""

    def __init__(self, message: str, pair: tuple | None = None, witness=None):
        super().__init__(message)
        self.pair = pair
        self.witness = witness


class CertificateError(AssertionError):
    """Internal inconsistency between closed-form bookkeeping and a fresh certificate."""


# ---------------------------------------------------------------------------
# Pair cases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairCase:
    tag: int
    s: str
    t: str
    ratio: tuple | None = None  # (lambda, mu) with lambda = 1 for cases 3/4

    def to_json(self) -> dict:
        out = {"case": self.tag, "s": self.s, "t": self.t}
        if self.ratio is not None:
            out["ratio"] = [fmt_rational(x) for x in self.ratio]
        return out


def _products(A: GradedAlgebra, s, t) -> tuple[list, list]:
    ab, ba = [], []
    for i in A.component(s):
        for j in A.component(t):
            ab.append(A.multiply_sparse({i: ONE}, {j: ONE}))
            ba.append(A.multiply_sparse({j: ONE}, {i: ONE}))
    return ab, ba


def _check_supp(A: GradedAlgebra, *labels) -> None:
    supp = A.supp
    for x in labels:
        if x not in supp:
            raise AlgebraError(f"label {x!r} is not in the support {list(supp)}")


def _pair_key(A: GradedAlgebra, s, t) -> tuple:
    return (s, t) if A.labels.index(s) <= A.labels.index(t) else (t, s)


def classify_pair(A: GradedAlgebra, s, t) -> PairCase:
    _check_supp(A, s, t)
    ab, ba = _products(A, s, t)
    st_zero = not any(ab)
    ts_zero = not any(ba)
    if st_zero and ts_zero:
        s0, t0 = _pair_key(A, s, t)
        return PairCase(1, s0, t0)
    if st_zero != ts_zero:
        return PairCase(2, s, t) if not st_zero else PairCase(2, t, s)
    # lambda * ab + mu * ba = 0 for all basis pairs
    rows = []
    for x, y in zip(ab, ba):
        for k in set(x) | set(y):
            rows.append([x.get(k, ZERO), y.get(k, ZERO)])
    ker = kernel(Matrix.from_rows(rows))
    s0, t0 = (s, t) if s == t else _pair_key(A, s, t)
    if not ker:
        return PairCase(6 if s == t else 5, s0, t0)
    (lam, mu), = ker
    if lam == 0 or mu == 0:
        raise CertificateError("one-sided identity with both products nonzero")
    if (s0, t0) != (s, t):
        lam, mu = mu, lam
    return PairCase(4 if s == t else 3, s0, t0, (ONE, mu / lam))


def case_table(A: GradedAlgebra) -> dict:
    """Case of every unordered pair of support labels, keyed by label-ordered tuples."""
    supp = A.supp
    out = {}
    for a, s in enumerate(supp):
        for t in supp[a:]:
            out[(s, t)] = classify_pair(A, s, t)
    return out


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TauValue:
    kind: str  # "scalar" (k^x), "pair" (k^x x k^x), "gl2", "Q"
    matrix: Matrix  # 1x1, diagonal 2x2 or 2x2

    def to_json(self) -> dict:
        return {"kind": self.kind, "matrix": self.matrix.to_json()}


@dataclass(eq=False)
class PseudoAutoCertificate:
    algebra: GradedAlgebra
    phi: Matrix
    alpha: dict  # (s, t) -> Fraction, normalized
    beta: dict
    cases: dict  # label-ordered (s, t) -> PairCase
    tau: dict  # pair key -> TauValue (case-1 pairs are omitted)
    raw: dict = field(default_factory=dict)  # (s, t) -> Solution of the 2-unknown system

    def coefficients(self, s, t) -> tuple:
        return self.alpha[(s, t)], self.beta[(s, t)]

    def admits(self, s, t, alpha, beta) -> bool:
        """True if (alpha, beta) is in the raw solution set of pair (s, t)."""
        return self.raw[(s, t)].contains((Fraction(alpha), Fraction(beta)))

    def is_automorphism(self) -> bool:
        return all(self.admits(s, t, 1, 0) for (s, t) in self.raw)

    def tau_is_trivial(self) -> bool:
        return all(v.matrix.is_identity() for v in self.tau.values())

    def to_json(self) -> dict:
        A = self.algebra
        return {
            "algebra": A.name,
            "phi": self.phi.to_json(),
            "pairs": [
                {"s": s, "t": t, "alpha": fmt_rational(self.alpha[(s, t)]),
                 "beta": fmt_rational(self.beta[(s, t)])}
                for (s, t) in sorted(self.alpha, key=lambda k: (A.labels.index(k[0]), A.labels.index(k[1])))
            ],
            "cases": [c.to_json() for c in self.cases.values()],
            "tau": [{"pair": list(k), **v.to_json()} for k, v in self.tau.items()],
            "composition_convention": COMPOSITION_CONVENTION,
            "normalization": "case 1: alpha=beta=0; cases 2-4: beta=0; cases 5-6: unique values",
        }


def _pair_system(A: GradedAlgebra, phi: Matrix, images: list, s, t) -> tuple[Matrix, list]:
    rows, rhs = [], []
    for i in A.component(s):
        for j in A.component(t):
            lhs = phi.apply(_dense(A.mul_basis(i, j), A.dim))
            u = A.multiply(images[i], images[j])
            v = A.multiply(images[j], images[i])
            for k in range(A.dim):
                if u[k] or v[k] or lhs[k]:
                    rows.append([u[k], v[k]])
                    rhs.append(lhs[k])
    if not rows:
        rows, rhs = [[ZERO, ZERO]], [ZERO]
    return Matrix.from_rows(rows), rhs


def _dense(sparse: Mapping, n: int) -> tuple:
    v = [ZERO] * n
    for k, c in sparse.items():
        v[k] = c
    return tuple(v)


def _normalized(raw: Solution, fix_alpha: bool, fix_beta: bool) -> tuple[Fraction, Fraction]:
    """Pick the point of the raw solution set with the requested zero coordinates."""
    p = raw.particular.col(0)
    if not raw.kernel:
        return p[0], p[1]
    if len(raw.kernel) == 2:
        return (ZERO if fix_alpha else p[0]), (ZERO if fix_beta else p[1])
    # one free direction d: p + x*d
    d = raw.kernel[0]
    if fix_beta and d[1] != 0:
        x = -p[1] / d[1]
    elif fix_alpha and d[0] != 0:
        x = -p[0] / d[0]
    else:
        x = ZERO
    return p[0] + x * d[0], p[1] + x * d[1]


def certify(A: GradedAlgebra, phi: Matrix) -> PseudoAutoCertificate:
    """Certify ``phi`` as a graded pseudoautomorphism or raise NotPseudoAutomorphism."""
    n = A.dim
    if phi.rows != n or phi.cols != n:
        raise NotPseudoAutomorphism(f"map is {phi.rows}x{phi.cols}, algebra has dimension {n}")
    if not phi.is_invertible():
        raise NotPseudoAutomorphism("map is not invertible")
    w = A.preserves_components(phi)
    if w is not None:
        j, t = w
        raise NotPseudoAutomorphism(
            f"phi({A.basis[j]}) has a component of degree {t!r}, not {A.degrees[j]!r}", witness=w)
    images = [phi.col(j) for j in range(n)]
    supp = A.supp
    raw: dict = {}
    for s in supp:
        for t in supp:
            m, rhs = _pair_system(A, phi, images, s, t)
            sol = solve_vector(m, rhs)
            if not sol.feasible:
                raise NotPseudoAutomorphism(
                    f"no (alpha, beta) satisfies phi(ab) = alpha phi(a)phi(b) + beta phi(b)phi(a) "
                    f"for degrees ({s}, {t})", pair=(s, t), witness=sol.inconsistent_row)
            raw[(s, t)] = sol
    cases = case_table(A)
    alpha, beta = {}, {}
    for (s, t), case in cases.items():
        for (x, y) in {(s, t), (t, s)}:
            sol = raw[(x, y)]
            if case.tag == 1:
                a, b = ZERO, ZERO
            elif case.tag == 2:
                if (x, y) == (case.s, case.t):
                    a, b = _normalized(sol, False, True)
                else:
                    a, b = ZERO, ZERO
            elif case.tag in (3, 4):
                a, b = _normalized(sol, False, True)
            else:
                if not sol.unique:
                    raise CertificateError(f"case {case.tag} pair ({x}, {y}) has a non-unique solution")
                a, b = _normalized(sol, False, False)
            if not sol.contains((a, b)):
                raise CertificateError(f"normalized coefficients for ({x}, {y}) are not a solution")
            alpha[(x, y)], beta[(x, y)] = a, b
    cert = PseudoAutoCertificate(A, phi, alpha, beta, cases, {}, raw)
    cert.tau = _tau(cert)
    _check_determinants(cert)
    return cert


def _tau(c: PseudoAutoCertificate) -> dict:
    out = {}
    for key, case in c.cases.items():
        s, t = case.s, case.t
        if case.tag == 1:
            continue
        if case.tag in (2, 4):
            out[key] = TauValue("scalar", Matrix.from_rows([[c.alpha[(s, t)]]]))
        elif case.tag == 3:
            out[key] = TauValue("pair", Matrix.diag([c.alpha[(s, t)], c.alpha[(t, s)]]))
        else:
            m = Matrix.from_rows([[c.alpha[(s, t)], c.beta[(t, s)]], [c.beta[(s, t)], c.alpha[(t, s)]]])
            out[key] = TauValue("Q" if case.tag == 6 else "gl2", m)
    return out


def _check_determinants(c: PseudoAutoCertificate) -> None:
    for key, v in c.tau.items():
        if v.matrix.det() == 0:
            raise CertificateError(f"tau component {key} is singular")
        if v.kind == "Q":
            m = v.matrix
            if m[0, 0] != m[1, 1] or m[0, 1] != m[1, 0]:
                raise CertificateError(f"tau component {key} is not of the form [[a, b], [b, a]]")


def determinant_condition(c: PseudoAutoCertificate) -> dict:
    """2x2 determinants of every case-5/6 pair (all must be nonzero)."""
    return {k: v.matrix.det() for k, v in c.tau.items() if v.kind in ("gl2", "Q")}


# ---------------------------------------------------------------------------
# Group structure
# ---------------------------------------------------------------------------


def predicted_composition(c1: PseudoAutoCertificate, c2: PseudoAutoCertificate) -> tuple[dict, dict]:
    """Closed-form coefficients of phi1 @ phi2 from those of c1, c2."""
    alpha, beta = {}, {}
    for (s, t) in c1.alpha:
        a1, b1 = c1.alpha[(s, t)], c1.beta[(s, t)]
        a1r, b1r = c1.alpha[(t, s)], c1.beta[(t, s)]
        a2, b2 = c2.alpha[(s, t)], c2.beta[(s, t)]
        alpha[(s, t)] = a2 * a1 + b2 * b1r
        beta[(s, t)] = a2 * b1 + b2 * a1r
    return alpha, beta


def compose(c1: PseudoAutoCertificate, c2: PseudoAutoCertificate) -> PseudoAutoCertificate:
    if c1.algebra is not c2.algebra and c1.algebra.to_json() != c2.algebra.to_json():
        raise AlgebraError("certificates belong to different algebras")
    try:
        c = certify(c1.algebra, c1.phi @ c2.phi)
    except NotPseudoAutomorphism as exc:
        raise CertificateError(f"composition of certified maps was refused: {exc}") from exc
    pa, pb = predicted_composition(c1, c2)
    for key in c.alpha:
        if (c.alpha[key], c.beta[key]) != (pa[key], pb[key]):
            raise CertificateError(f"composition law fails at {key}: "
                                   f"{(c.alpha[key], c.beta[key])} vs predicted {(pa[key], pb[key])}")
    for key, v in c.tau.items():
        if v.matrix != c1.tau[key].matrix @ c2.tau[key].matrix:
            raise CertificateError(f"tau is not multiplicative at {key}")
    return c


def inverse_coefficients(c: PseudoAutoCertificate) -> tuple[dict, dict]:
    """Closed-form alpha', beta' of the inverse map, case by case."""
    alpha, beta = {}, {}
    for case in c.cases.values():
        s, t = case.s, case.t
        pairs = {(s, t), (t, s)}
        if case.tag == 1:
            for p in pairs:
                alpha[p], beta[p] = ZERO, ZERO
        elif case.tag == 2:
            alpha[(s, t)], beta[(s, t)] = 1 / c.alpha[(s, t)], ZERO
            alpha[(t, s)], beta[(t, s)] = ZERO, ZERO
        else:
            m = Matrix.from_rows([[c.alpha[(s, t)], c.beta[(s, t)]], [c.beta[(t, s)], c.alpha[(t, s)]]]).inverse()
            alpha[(s, t)], beta[(s, t)] = m[0, 0], m[0, 1]
            beta[(t, s)], alpha[(t, s)] = m[1, 0], m[1, 1]
    return alpha, beta


def invert(c: PseudoAutoCertificate) -> PseudoAutoCertificate:
    try:
        ci = certify(c.algebra, c.phi.inverse())
    except NotPseudoAutomorphism as exc:
        raise CertificateError(f"inverse of a certified map was refused: {exc}") from exc
    pa, pb = inverse_coefficients(c)
    for key in ci.alpha:
        if (ci.alpha[key], ci.beta[key]) != (pa[key], pb[key]):
            raise CertificateError(f"inverse formula fails at {key}")
    return ci


# ---------------------------------------------------------------------------
# Consequences
# ---------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    holds: bool
    coefficients: dict  # word ("xyz", "xzy", ...) -> Fraction
    witness: tuple | None = None  # basis indices (a, b, c) where the polynomial is nonzero

    def __bool__(self) -> bool:
        return self.holds


def forced_identity_coefficients(A: GradedAlgebra, c: PseudoAutoCertificate, g, h, t) -> dict:
    """Six coefficients of the multilinear identity forced by ``c`` on degrees (g, h, t)."""

    def al(x, y):
        return c.alpha.get((x, y), ZERO)

    def be(x, y):
        return c.beta.get((x, y), ZERO)

    gh, ht = A.star(g, h), A.star(h, t)
    return {
        "xyz": al(g, h) * al(gh, t) - al(h, t) * al(g, ht),
        "xzy": -be(h, t) * al(g, ht),
        "yxz": be(g, h) * al(gh, t),
        "yzx": -al(h, t) * be(g, ht),
        "zxy": al(g, h) * be(gh, t),
        "zyx": be(g, h) * be(gh, t) - be(h, t) * be(g, ht),
    }


def forced_identity(A: GradedAlgebra, c: PseudoAutoCertificate, g, h, t) -> IdentityCheck:
    """Evaluate the forced six-term identity on every homogeneous basis triple."""
    _check_supp(A, g, h, t)
    coeffs = forced_identity_coefficients(A, c, g, h, t)
    for i in A.component(g):
        for j in A.component(h):
            for k in A.component(t):
                val = _eval_words(A, coeffs, {"x": i, "y": j, "z": k})
                if val:
                    return IdentityCheck(False, coeffs, (i, j, k))
    return IdentityCheck(True, coeffs)


def _eval_words(A: GradedAlgebra, coeffs: Mapping, assign: Mapping) -> dict:
    total: dict = {}
    for word, co in coeffs.items():
        if not co:
            continue
        v = {assign[word[0]]: ONE}
        for ch in word[1:]:
            v = A.multiply_sparse(v, {assign[ch]: ONE})
        for k, x in v.items():
            total[k] = total.get(k, ZERO) + co * x
    return {k: x for k, x in total.items() if x}


@dataclass
class UnitImageReport:
    checked: bool
    ok: bool
    reason: str = ""
    phi_of_unit: tuple | None = None
    expected_scale: Fraction | None = None


def unit_image_check(A: GradedAlgebra, c: PseudoAutoCertificate) -> UnitImageReport:
    """phi(1) must equal 1/(alpha + beta) for unital noncommutative trivially graded A."""
    unit = A.find_unit()
    if unit is None:
        raise AlgebraError("algebra has no unit")
    if not A.is_trivially_graded():
        raise AlgebraError("unit image check applies to trivially graded algebras")
    if A.is_commutative():
        return UnitImageReport(False, True, "algebra is commutative; alpha, beta not unique, check skipped")
    (s,) = A.supp
    a, b = c.alpha[(s, s)], c.beta[(s, s)]
    img = c.phi.apply(unit)
    scale = 1 / (a + b)
    return UnitImageReport(True, img == tuple(scale * x for x in unit), "", img, scale)


# ---------------------------------------------------------------------------
# Group actions
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class GradedGroupAction:
    algebra: GradedAlgebra
    generators: dict  # name -> PseudoAutoCertificate
    relations: list  # words, each a list of generator names (suffix "^-1" for inverses)

    def matrices(self) -> dict:
        return {k: v.phi for k, v in self.generators.items()}

    def to_json(self) -> dict:
        return {
            "generators": {k: v.to_json() for k, v in self.generators.items()},
            "relations": [list(w) for w in self.relations],
        }


def evaluate_word(gens: Mapping, word: Sequence[str], n: int) -> Matrix:
    m = Matrix.identity(n)
    for letter in word:
        name, inv = (letter[:-3], True) if letter.endswith("^-1") else (letter, False)
        if name not in gens:
            raise AlgebraError(f"unknown generator {name!r} in relation")
        g = gens[name]
        m = m @ (g.inverse() if inv else g)
    return m


def certify_action(A: GradedAlgebra, gens: Mapping, relations: Sequence[Sequence[str]] = ()) -> GradedGroupAction:
    certs = {}
    for name, m in gens.items():
        try:
            certs[name] = certify(A, m)
        except NotPseudoAutomorphism as exc:
            raise NotPseudoAutomorphism(f"generator {name!r}: {exc}", exc.pair, exc.witness) from exc
    for word in relations:
        if not evaluate_word(gens, word, A.dim).is_identity():
            raise NotPseudoAutomorphism(f"relation {' '.join(word)} does not act as the identity",
                                        witness=tuple(word))
    if A.label_product is not None and A.claims_group_grading:
        _check_beta_vanishing(A, certs)
    return GradedGroupAction(A, certs, [list(w) for w in relations])


def _check_beta_vanishing(A: GradedAlgebra, certs: Mapping) -> None:
    supp = A.supp
    for s in supp:
        for t in supp:
            if A.star(s, t) == A.star(t, s):
                continue
            _, ts = _products(A, s, t)
            if not any(ts):
                continue
            for name, c in certs.items():
                if c.beta[(s, t)] != 0:
                    raise CertificateError(f"generator {name!r}: beta({s},{t}) must vanish "
                                           f"since {s}{t} != {t}{s} and A^({t})A^({s}) != 0")


def identity_certificate(A: GradedAlgebra) -> PseudoAutoCertificate:
    return certify(A, Matrix.identity(A.dim))


__all__ = [
    "COMPOSITION_CONVENTION",
    "NotPseudoAutomorphism",
    "CertificateError",
    "PairCase",
    "classify_pair",
    "case_table",
    "TauValue",
    "PseudoAutoCertificate",
    "certify",
    "determinant_condition",
    "predicted_composition",
    "compose",
    "inverse_coefficients",
    "invert",
    "IdentityCheck",
    "forced_identity_coefficients",
    "forced_identity",
    "UnitImageReport",
    "unit_image_check",
    "GradedGroupAction",
    "evaluate_word",
    "certify_action",
    "identity_certificate",
]

import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from gradalg import catalog
from gradalg.algebra import forget_grading
from gradalg.exact import Matrix
from gradalg.haction import OperatorSpan
from gradalg.pi import (PLAIN, BudgetExceeded, PolynomialSyntaxError, bracket_shapes, codim_equality_check,
                        codimension, codimension_sequence, enumerate_monomials, evaluate_monomial, is_identity,
                        parse_polynomial, polynomial_from_words)
from test_structure import change_basis

# frozen output of oracles.multilinear_codim (concrete 2x2 matrix products, sympy ranks)
ORACLE = {
    ("ut2", False): [1, 2, 6, 18],
    ("ut2", True): [2, 5, 13, 33],
    ("m2", False): [1, 2, 6],
    ("m11", True): [2, 7, 28],
}


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_engine_matches_frozen_oracle(key):
    name, graded = key
    A = catalog.get({"ut2": "ut2_graded", "m2": "m11", "m11": "m11"}[name]).algebra
    if not graded:
        A = forget_grading(A)
    assert codimension_sequence(A, None, len(ORACLE[key]), graded=graded) == ORACLE[key]


def test_oracle_reproduces_frozen_values():
    assert [oracles.multilinear_codim(oracles.UT2, n, oracles.UT2_DEG) for n in (1, 2, 3)] == ORACLE[("ut2", True)][:3]
    assert [oracles.multilinear_codim(oracles.M2, n, oracles.M11_DEG) for n in (1, 2)] == ORACLE[("m11", True)][:2]


@pytest.mark.parametrize("name,expected", [("q1", [1, 1, 1, 1]), ("qxq", [1, 1, 1, 1]),
                                           ("ut3", [1, 2, 6, 24]), ("m2", [1, 2, 6, 23]),
                                           ("grassmann3", [1, 2, 4, 7])])
def test_known_sequences(name, expected):
    # M2 satisfies the standard identity of degree 4; UT3 has no identity below degree 6
    assert codimension_sequence(catalog.get(name).algebra, None, 4, graded=False) == expected


def test_monomial_counts():
    assert len(bracket_shapes(0, 4)) == 5
    assert sum(1 for _ in enumerate_monomials(3, ["0", "1"], 2)) == 6 * 8 * 8
    assert sum(1 for _ in enumerate_monomials(3, [PLAIN], 1, associative=False)) == 6 * 2


@pytest.mark.parametrize("name", ["ut2", "m11", "grassmann2", "qs3"])
def test_nonassociative_engine_agrees_on_associative_algebras(name):
    A = catalog.get(name).algebra
    for n in (2, 3):
        assert codimension(A, None, n, associative=False).c_n == codimension(A, None, n).c_n


def test_nonassociative_two_step():
    A = catalog.get("two_step").algebra
    # only right-nested products ending in e2 with e1 factors survive
    assert codimension_sequence(A, None, 4, graded=False, associative=False) == [1, 2, 3, 4]


@given(st.sampled_from(["ut2", "a0", "grassmann2"]), st.data())
def test_codimension_is_basis_independent(name, data):
    A = catalog.get(name).algebra
    n = A.dim
    P = Matrix.from_rows([[data.draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)])
    assume(P.is_invertible())
    B = change_basis(A, P)
    assert codimension_sequence(B, None, 3, graded=False) == codimension_sequence(A, None, 3, graded=False)


@pytest.mark.parametrize("name", ["ut2_graded", "m11", "qs3", "two_step"])
def test_graded_codimension_dominates(name):
    A = catalog.get(name).algebra
    assoc = A.claims_associative
    for n in (1, 2, 3):
        plain = codimension(A, None, n, graded=False, associative=assoc).c_n
        graded = codimension(A, None, n, graded=True, associative=assoc).c_n
        assert plain <= graded <= math.factorial(n) * len(A.supp) ** n * (1 if assoc else len(bracket_shapes(0, n)))


@pytest.mark.parametrize("name,action", [("ut2_graded", "flip"), ("m11", "superinvolution"),
                                         ("m11", "pseudoinvolution"), ("m11", "full"), ("qs3", "sign")])
def test_codimension_equality(name, action):
    e = catalog.get(name)
    for n in (1, 2):
        rep = codim_equality_check(e.algebra, e.actions[action].span(), n)
        assert rep.equal, rep.to_json()


def test_threads_do_not_change_results():
    A = catalog.get("m11").algebra
    H = catalog.get("m11").actions["superinvolution"].span()
    one = codimension(A, H, 3, threads=1).to_json()
    many = codimension(A, H, 3, threads=4).to_json()
    assert one == many


def test_budget():
    A = catalog.get("m2").algebra
    with pytest.raises(BudgetExceeded) as info:
        codimension(A, None, 5, graded=False, budget=1000)
    assert info.value.estimate == 120 * 4 ** 6


@pytest.mark.parametrize("text,degs,name,holds", [
    ("[x,y]", {"x": "0", "y": "0"}, "ut2_graded", True),
    ("x y", {"x": "1", "y": "1"}, "ut2_graded", True),
    ("x y", {"x": "0", "y": "1"}, "ut2_graded", False),
    ("[[x1,x2],x3]", {}, "grassmann3", True),
    ("[x1,x2][x3,x4]", {}, "ut2", True),
    ("[x1,x2][x3,x4]", {}, "ut3", False),
    ("[x,y] z + [y,z] x + [z,x] y", {}, "m2", False),
    ("x1 x2 x3 x4 - x2 x1 x3 x4", {}, "m2", False),
])
def test_identities(text, degs, name, holds):
    A = catalog.get(name).algebra
    f = parse_polynomial(text, degs, default_degree=PLAIN if not degs else None)
    res = is_identity(A, None, f)
    assert res.holds == holds
    if not holds:
        assert len(res.witness) == f.n and any(x != 0 for x in res.value)


def test_standard_identity_of_m2():
    from itertools import permutations
    words = []
    for p in permutations(range(4)):
        sign = (-1) ** sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        words.append((sign, p))
    assert is_identity(catalog.get("m2").algebra, None, polynomial_from_words(words))
    assert not is_identity(catalog.get("ut3").algebra, None, polynomial_from_words(words[:12]))


def test_decorated_identities():
    e = catalog.get("ut2_graded")
    g = e.families["scale"](2)
    H = OperatorSpan.build([("g", g)])
    ops = H.names
    assert is_identity(e.algebra, H, parse_polynomial("x^g - x", {"x": "0"}, ops))
    assert is_identity(e.algebra, H, parse_polynomial("x^g - 2*x", {"x": "1"}, ops))
    assert not is_identity(e.algebra, H, parse_polynomial("x^g - x", {"x": "1"}, ops))


def test_evaluate_monomial():
    A = catalog.get("m2").algebra
    f = parse_polynomial("x y", {})
    (m,) = f.terms
    assert evaluate_monomial(A, OperatorSpan.trivial(4), m, (A.index("e12"), A.index("e21"))) == A.e("e11")


@pytest.mark.parametrize("text", ["x +", "[x,y", "x x", "x^h", "2/0*x", "x @ y"])
def test_parser_errors(text):
    with pytest.raises((PolynomialSyntaxError, ZeroDivisionError)):
        parse_polynomial(text, {})


def test_parser_normalizes():
    f = parse_polynomial("x2 x10 - 1/2*x10 x2 + 1/2 x10 x2", {})
    assert f.variables == ("x2", "x10")
    # the two x10 x2 terms cancel
    assert [(m.sigma, c) for m, c in f.terms.items()] == [((0, 1), 1)]
    assert parse_polynomial("[x,x2] - [x,x2]", {}).terms == {}
    nested = parse_polynomial("(x y) z", {}, associative=False)
    (m,) = nested.terms
    assert m.shape == ((0, 1), 2)


@pytest.mark.parametrize("name", catalog.names())
def test_codimension_equality_all_catalog_pairs(name):
    e = catalog.get(name)
    assoc = e.algebra.claims_associative
    spans = [None] + [s.span() for s in e.actions.values()]
    for H in spans:
        for n in (1, 2, 3):
            rep = codim_equality_check(e.algebra, H, n, associative=assoc)
            assert rep.equal, (name, n, rep.to_json())
            if len(e.algebra.supp) == 1:
                assert rep.graded_side.to_json()["blocks"][0]["rank"] == rep.tensor_side.c_n


def test_monomial_count_examples():
    assert sum(1 for _ in enumerate_monomials(1, ["0"], 1)) == 1
    assert sum(1 for _ in enumerate_monomials(2, ["0", "1"], 1)) == 8


def test_evaluation_examples():
    e = catalog.get("ut2_graded")
    A = e.algebra
    f = parse_polynomial("x1 x2", {"x1": "0", "x2": "1"})
    (m,) = f.terms
    assert evaluate_monomial(A, OperatorSpan.trivial(3), m, (A.index("e11"), A.index("e12"))) == A.e("e12")
    g = parse_polynomial("x y", {"x": "1", "y": "1"})
    (m,) = g.terms
    assert not any(evaluate_monomial(A, OperatorSpan.trivial(3), m, (1, 1)))
    H = OperatorSpan.build([("a", e.families["scale"](3))])
    h = parse_polynomial("x^a", {"x": "1"}, H.names)
    (m,) = h.terms
    assert evaluate_monomial(A, H, m, (1,)) == (0, 3, 0)


def test_commutator_witness_in_ut2():
    A = catalog.get("ut2").algebra
    res = is_identity(A, None, parse_polynomial("[x1,x2]", {}))
    assert res.witness == ("e11", "e12") and res.value == (0, 1, 0)


def test_odd_block_vanishes_in_graded_ut2():
    res = codimension(catalog.get("ut2_graded").algebra, None, 2)
    ranks = {b.degrees: b.rank for b in res.blocks}
    assert ranks[("1", "1")] == 0

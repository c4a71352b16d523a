import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from gradalg import catalog
from gradalg.cochar import (MultiplicityError, character_dimension, class_size, cocharacter, cycle_type,
                            partitions, quotient_trace, representative, sn_character)

# frozen output of oracles.character_table(4) (Frobenius formula via sympy)
CHAR_TABLE_4 = {
    (4,): {(4,): 1, (3, 1): 1, (2, 2): 1, (2, 1, 1): 1, (1, 1, 1, 1): 1},
    (3, 1): {(4,): -1, (3, 1): 0, (2, 2): -1, (2, 1, 1): 1, (1, 1, 1, 1): 3},
    (2, 2): {(4,): 0, (3, 1): -1, (2, 2): 2, (2, 1, 1): 0, (1, 1, 1, 1): 2},
    (2, 1, 1): {(4,): 1, (3, 1): 0, (2, 2): -1, (2, 1, 1): -1, (1, 1, 1, 1): 3},
    (1, 1, 1, 1): {(4,): -1, (3, 1): 1, (2, 2): 1, (2, 1, 1): -1, (1, 1, 1, 1): 1},
}

# frozen output of oracles.cocharacter_multiplicities (row space of concrete evaluation matrices)
UT2_N4 = {(4,): 1, (3, 1): 3, (2, 2): 1, (2, 1, 1): 2, (1, 1, 1, 1): 0}
M2_N3 = {(3,): 1, (2, 1): 2, (1, 1, 1): 1}


def test_partition_counts():
    assert [len(list(partitions(n))) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_character_table_frozen():
    for lam, row in CHAR_TABLE_4.items():
        for mu, v in row.items():
            assert sn_character(lam, mu) == v


@pytest.mark.parametrize("n", [3, 5])
def test_character_table_against_frobenius(n):
    for (lam, mu), v in oracles.character_table(n).items():
        assert sn_character(lam, mu) == v


@pytest.mark.parametrize("n", range(1, 8))
def test_orthogonality(n):
    parts = list(partitions(n))
    assert sum(class_size(mu) for mu in parts) == math.factorial(n)
    assert sum(character_dimension(lam) ** 2 for lam in parts) == math.factorial(n)
    for mu in parts:
        for nu in parts:
            col = sum(sn_character(lam, mu) * sn_character(lam, nu) for lam in parts)
            assert col == (math.factorial(n) // class_size(mu) if mu == nu else 0)


@given(st.integers(1, 8).flatmap(lambda n: st.sampled_from(list(partitions(n)))))
def test_representative_has_its_cycle_type(mu):
    assert cycle_type(representative(mu)) == tuple(mu)


def test_character_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        sn_character((2,), (1,))


def test_ut2_cocharacter():
    r = cocharacter(catalog.get("ut2").algebra, None, 4)
    assert r.multiplicities == UT2_N4
    assert r.colength == 7 and r.dim_check == r.c_n == 18


def test_m2_cocharacter_against_live_oracle():
    assert oracles.cocharacter_multiplicities(oracles.M2, 3) == M2_N3
    assert cocharacter(catalog.get("m2").algebra, None, 3).multiplicities == M2_N3


def test_trace_of_identity_is_codimension():
    A = catalog.get("m11").algebra
    for graded in (False, True):
        r = cocharacter(A, None, 3, graded=graded)
        assert quotient_trace(A, None, 3, (0, 1, 2), graded=graded) == r.c_n


def test_decorated_and_graded_runs_are_integral():
    e = catalog.get("m11")
    r = cocharacter(e.algebra, e.actions["superinvolution"].span(), 3, graded=True)
    assert r.dim_check == r.c_n == 62
    assert all(m >= 0 for m in r.multiplicities.values())


def test_commutative_algebra_is_trivial_module():
    r = cocharacter(catalog.get("qxq").algebra, None, 4)
    assert r.multiplicities[(4,)] == 1 and r.colength == 1


def test_json_shape():
    data = cocharacter(catalog.get("ut2").algebra, None, 2).to_json()
    assert data == {"n": 2, "m": [{"partition": [2], "mult": 1}, {"partition": [1, 1], "mult": 1}],
                    "colength": 2, "dim_check": 2, "c_n": 2}
    assert issubclass(MultiplicityError, AssertionError)


def test_small_characters():
    assert [sn_character((2, 1), mu) for mu in [(1, 1, 1), (2, 1), (3,)]] == [2, 0, -1]


def test_traces_on_small_quotients():
    A = catalog.get("q1").algebra
    for perm in [(0, 1, 2), (1, 2, 0), (1, 0, 2)]:
        assert quotient_trace(A, None, 3, perm) == 1
    ut2 = catalog.get("ut2").algebra
    # c_2 = 2 with one copy of each one-dimensional module: trace of (12) is 1 - 1
    assert quotient_trace(ut2, None, 2, (1, 0)) == 0
    r = cocharacter(ut2, None, 2)
    assert r.multiplicities == {(2,): 1, (1, 1): 1} and r.colength == 2

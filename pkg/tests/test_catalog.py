import pytest

from gradalg import catalog
from gradalg.pi import codimension_sequence
from gradalg.pseudo import case_table, certify


@pytest.mark.parametrize("name", catalog.names())
def test_actions_and_families_certify(name):
    e = catalog.get(name)
    for act in e.actions.values():
        act = act.certify(e.algebra)
        assert set(act.generators) == set(act.generators)
    for fam in e.families.values():
        samples = fam.samples(5, seed=1)
        assert samples == fam.samples(5, seed=1)
        for p in samples:
            assert fam.constraint(*p)
            certify(e.algebra, fam(*p))


@pytest.mark.parametrize("name", ["ut2", "q1"])
def test_expected_codimensions(name):
    e = catalog.get(name)
    want = e.expected["codim"]
    assert codimension_sequence(e.algebra, None, len(want), graded=False) == want


def test_m11_expected_cases():
    e = catalog.get("m11")
    assert {k: v.tag for k, v in case_table(e.algebra).items()} == e.expected["cases"]


def test_grassmann_builder():
    assert catalog.grassmann_truncated(2).algebra.basis == ("1", "e1", "e2", "e1e2")
    A = catalog.grassmann_truncated(2).algebra
    assert A.multiply(A.e("e2"), A.e("e1")) == tuple(-x for x in A.e("e1e2"))
    with pytest.raises(ValueError):
        catalog.grassmann_truncated(5)


def test_registry():
    assert len(catalog.names()) == len(set(catalog.names()))
    with pytest.raises(KeyError, match="unknown catalog entry"):
        catalog.get("nope")
    assert [e.name for e in catalog.matrix_and_misc()] == ["m2", "ut2", "ut3", "qxq"]
    for name in catalog.names():
        assert catalog.get(name).description


def test_nilpotent_embedding_family():
    e = catalog.get("a0")
    for a, b in e.families["Q"].samples(6, seed=4):
        cert = certify(e.algebra, e.families["Q"](a, b))
        m = cert.tau[("0", "0")].matrix
        assert (m[0, 0], m[0, 1], m[1, 0], m[1, 1]) == (a, b, b, a)


def test_grassmann_family_reference_point():
    e = catalog.get("grassmann3")
    assert certify(e.algebra, e.families["Q"](2, 1)).coefficients("0", "0") == (2, 1)
    # beta = 0 gives a scalar multiple of an automorphism
    c = certify(e.algebra, e.families["Q"](3, 0))
    assert certify(e.algebra, c.phi.scale(3)).is_automorphism()

from fractions import Fraction

from hypothesis import strategies as st

from gradalg.exact import Matrix

small = st.integers(-4, 4)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero = rationals.filter(bool)
grid = st.sampled_from([Fraction(x) for x in ("1", "-1", "2", "-2", "1/2", "-1/3", "3", "5/2")])


def matrices(rows=st.integers(1, 5), cols=st.integers(1, 5), entries=rationals):
    @st.composite
    def build(draw):
        r, c = draw(rows), draw(cols)
        return Matrix.from_rows([[draw(entries) for _ in range(c)] for _ in range(r)])
    return build()


def square(n=st.integers(1, 4), entries=rationals):
    return n.flatmap(lambda k: matrices(st.just(k), st.just(k), entries))

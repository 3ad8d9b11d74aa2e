"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from twostep.group import GroupElement, SkewTriple


@st.composite
def triples(draw, max_m=3, max_n=4):
    m, n = draw(st.integers(0, max_m)), draw(st.integers(0, max_n))
    forms = []
    for _ in range(m):
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                M[i][j] = draw(st.integers(-9, 9))
                M[j][i] = -M[i][j]
        forms.append(M)
    return SkewTriple(m, n, forms)


@st.composite
def triple_and_elements(draw, count=3):
    t = draw(triples())
    vec = lambda k: tuple(draw(st.lists(st.integers(-50, 50), min_size=k, max_size=k)))
    return (t, *[GroupElement(vec(t.m), vec(t.n)) for _ in range(count)])

import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twostep.group import HEISENBERG as H3, DimensionMismatch, SkewTriple
from twostep.nctorus import (
    Character,
    ExteriorElement,
    FiberForm,
    canonical_trace_check,
    clock_shift_rep,
    elliott_trace,
    fiber_form,
    is_fiber_untwisted,
    k_ranks,
    parse_rational,
    trace_pairing,
    wedge,
)
from twostep.sampling import random_triple

from strategies import triples


def e(n, *idx):
    return ExteriorElement(n, {tuple(idx): 1})


def direct_pairing(t, chi, b1, b2):
    # chi(omega(b1 ^ b2)) mod 1 straight from the definition
    total = sum(
        c * sum(b1[i] * f[i][j] * b2[j] for i in range(t.n) for j in range(t.n))
        for c, f in zip(chi.coords, t.forms)
    )
    return total % 1


class TestFiberForm:
    def test_examples(self):
        assert fiber_form(H3, Character((0,))).is_zero()
        assert fiber_form(H3, Character((F(1, 3),))).entries[0][1] == F(1, 3)
        assert fiber_form(H3, Character((F(1, 3),))).entries[1][0] == F(2, 3)
        scaled = SkewTriple(1, 2, [[[0, 3], [-3, 0]]])
        assert fiber_form(scaled, Character((F(2, 3),))).entries[0][1] == 0

    def test_untwisted(self):
        assert is_fiber_untwisted(H3, Character.trivial(1))
        assert not is_fiber_untwisted(H3, Character((F(1, 3),)))
        assert is_fiber_untwisted(SkewTriple(1, 2, [[[0, 3], [-3, 0]]]), Character((F(1, 3),)))

    def test_character_reduced(self):
        assert Character((F(7, 3), F(-1, 4))).coords == (F(1, 3), F(3, 4))
        assert str(Character.parse("1/2, 5/4")) == "1/2,1/4"

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            fiber_form(H3, Character((0, 0)))

    def test_fiber_validation(self):
        with pytest.raises(ValueError):
            FiberForm(2, ((F(0), F(1, 3)), (F(1, 3), F(0))))

    def test_linear_in_chi(self):
        rng = random.Random(1)
        for _ in range(200):
            t = random_triple(rng, rng.randint(1, 3), rng.randint(2, 4))
            rand_chi = lambda: Character(tuple(F(rng.randint(0, 30), rng.randint(1, 9)) for _ in range(t.m)))
            c1, c2 = rand_chi(), rand_chi()
            f1, f2, f12 = fiber_form(t, c1), fiber_form(t, c2), fiber_form(t, c1 + c2)
            for i in range(t.n):
                for j in range(t.n):
                    assert (f1.entries[i][j] + f2.entries[i][j] - f12.entries[i][j]) % 1 == 0


class TestExterior:
    def test_wedge_examples(self):
        e1 = ExteriorElement.from_vector((1, 0))
        e2 = ExteriorElement.from_vector((0, 1))
        assert wedge(e1, e2) == e(2, 0, 1)
        assert wedge(e2, e1) == e(2, 0, 1).scale(-1)
        x = ExteriorElement.from_vector((1, 1))
        y = ExteriorElement.from_vector((1, -1))
        assert wedge(x, y) == e(2, 0, 1).scale(-2)

    def test_graded_commutative(self):
        a, b = e(4, 0, 2), e(4, 1)
        assert wedge(a, b) == wedge(b, a)  # even with odd commutes
        c, d = e(4, 1), e(4, 3)
        assert wedge(c, d) == wedge(d, c).scale(-1)
        assert wedge(c, c) == ExteriorElement(4, {})

    def test_associative(self):
        rng = random.Random(2)
        for _ in range(50):
            vs = [ExteriorElement.from_vector([rng.randint(-3, 3) for _ in range(4)]) for _ in range(3)]
            x, y, z = vs
            assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))

    def test_k_ranks(self):
        assert k_ranks(0) == (1, 0)
        assert k_ranks(1) == (1, 1)
        assert k_ranks(2) == (2, 2)
        for n in range(11):
            assert sum(k_ranks(n)) == 2**n
        with pytest.raises(ValueError):
            k_ranks(-1)


class TestTracePairing:
    def test_examples(self):
        assert trace_pairing(H3, Character((F(1, 3),)), (1, 0), (0, 1)) == F(1, 3)
        assert trace_pairing(H3, Character((F(1, 2),)), (2, 0), (0, 1)) == 0
        assert trace_pairing(H3, Character((F(2, 7),)), (3, 5), (3, 5)) == 0

    def test_elliott_degrees(self):
        theta = fiber_form(H3, Character((F(1, 3),)))
        assert elliott_trace(theta, ExteriorElement.one(2).scale(4)) == 0
        with pytest.raises(ValueError):
            elliott_trace(theta, e(2, 0))
        with pytest.raises(NotImplementedError):
            elliott_trace(fiber_form(SkewTriple.zero(1, 4), Character((0,))), e(4, 0, 1, 2, 3))

    @given(triples(), st.data())
    def test_matches_definition(self, t, data):
        chi = Character(tuple(F(data.draw(st.integers(0, 40)), data.draw(st.integers(1, 12))) for _ in range(t.m)))
        vec = st.lists(st.integers(-9, 9), min_size=t.n, max_size=t.n)
        b1, b2 = data.draw(vec), data.draw(vec)
        p = trace_pairing(t, chi, b1, b2)
        assert p == direct_pairing(t, chi, b1, b2)
        assert (p + trace_pairing(t, chi, b2, b1)) % 1 == 0
        assert trace_pairing(t, Character.trivial(t.m), b1, b2) == 0

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            trace_pairing(H3, Character((0,)), (1,), (0, 1))


class TestClockShift:
    def test_theta_zero(self):
        rep = clock_shift_rep(0)
        assert rep.q == 1
        assert rep.commutator_residual() < 1e-12

    @pytest.mark.parametrize("theta", [F(1, 3), F(1, 2), F(5, 12)])
    def test_commutation(self, theta):
        rep = clock_shift_rep(theta)
        assert rep.q == theta.denominator
        assert rep.commutator_residual() < 1e-9
        u, v = rep.unitary((1, 0)), rep.unitary((0, 1))
        group_comm = u @ v @ u.conj().T @ v.conj().T
        assert np.allclose(group_comm, np.exp(2j * np.pi * float(theta)) * np.eye(rep.q), atol=1e-12)

    def test_pauli(self):
        rep = clock_shift_rep(F(1, 2))
        assert np.allclose(rep.clock, np.diag([1, -1]))
        assert np.allclose(rep.shift, [[0, 1], [1, 0]])

    def test_normalizes(self):
        assert clock_shift_rep(parse_rational("2/6")).theta == F(1, 3)
        assert clock_shift_rep(F(4, 3)).theta == F(1, 3)

    def test_trace_examples(self):
        rep = clock_shift_rep(F(1, 3))
        assert canonical_trace_check(rep, (0, 0)) < 1e-12
        assert canonical_trace_check(rep, (1, 0)) < 1e-9
        assert abs(abs(np.trace(rep.unitary((3, 0))) / 3) - 1) < 1e-12
        assert canonical_trace_check(rep, (-3, 6)) < 1e-9

    def test_unitary(self):
        rep = clock_shift_rep(F(3, 7))
        for b in [(1, 2), (-4, 5), (0, -9)]:
            assert rep.unitarity_residual(b) < 1e-9

    def test_immutable(self):
        rep = clock_shift_rep(F(1, 3))
        with pytest.raises(ValueError):
            rep.clock[0, 0] = 2

    def test_parse_rational(self):
        assert parse_rational(" 3/9 ") == F(1, 3)
        with pytest.raises(ValueError):
            parse_rational("1/0")
        with pytest.raises(ValueError):
            parse_rational("abc")

"""Pauli algebra: commutation, products with exact phases, GF(2) rank."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gsc_forge.pauli import (
    PauliError,
    PauliString,
    SymplecticTable,
    commutes,
    in_group,
    multiply,
    rank_gf2,
)


def pauli(text):
    return PauliString.from_text(text)


class TestTextForm:
    def test_roundtrip(self):
        for t in ["X", "Z", "Y", "IXYZ", "-Y", "+iXZ", "-iZZ", "ZZII"]:
            p = pauli(t)
            q = PauliString.from_text(p.text())
            assert p == q

    def test_canonical_tokens(self):
        assert pauli("X").text() == "X"
        assert pauli("+X").text() == "X"
        assert pauli("-Y").text() == "-Y"
        assert pauli("iX").text() == "+iX"

    def test_zz_on_four(self):
        p = pauli("ZZII")
        assert p.n == 4
        assert p.support == (0, 1)
        assert not p.x_bits.any()

    def test_bad_text(self):
        with pytest.raises(PauliError):
            pauli("XQ")
        with pytest.raises(PauliError):
            pauli("")

    def test_phase_of_y(self):
        # Y stored as i*X*Z; letter-form phase must still read +1.
        y = pauli("Y")
        assert y.phase == 1
        assert y.phase_exp == 1


class TestCommutes:
    def test_x_vs_z_same_qubit(self):
        assert commutes(pauli("X"), pauli("Z")) is False

    def test_disjoint_supports(self):
        assert commutes(pauli("XI"), pauli("IX")) is True

    def test_table_s1_double_anticommutation(self):
        # g_12 of the combined 18-qubit code vs the cross error Z_0*X_9:
        # it anticommutes with each factor, so the pair commutes overall.
        g12 = PauliString.from_support(18, "X", range(6)) * PauliString.from_support(
            18, "Z", [9, 12, 15]
        )
        err = PauliString.single(18, 0, "Z") * PauliString.single(18, 9, "X")
        assert commutes(g12, err) is True

    def test_length_mismatch(self):
        with pytest.raises(PauliError):
            commutes(pauli("X"), pauli("XX"))


class TestMultiply:
    def test_square_is_identity(self):
        p = pauli("X")
        r = multiply(p, p)
        assert r.is_identity_bits() and r.phase == 1

    def test_xz_is_minus_i_y(self):
        r = multiply(pauli("X"), pauli("Z"))
        assert r.letters() == "Y"
        assert r.phase == -1j
        assert r.text() == "-iY"

    def test_zx_is_plus_i_y(self):
        r = multiply(pauli("Z"), pauli("X"))
        assert r.text() == "+iY"

    def test_gsc34_generator_product(self):
        g0 = pauli("ZZIIIIIIIIII")
        g1 = pauli("IZZIIIIIIIII")
        r = multiply(g0, g1)
        assert r.text() == "ZIZIIIIIIIII"
        assert r.phase == 1

    def test_associative(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            ps = [_random_pauli(rng, 5) for _ in range(3)]
            a = multiply(multiply(ps[0], ps[1]), ps[2])
            b = multiply(ps[0], multiply(ps[1], ps[2]))
            assert a == b

    def test_length_mismatch(self):
        with pytest.raises(PauliError):
            multiply(pauli("X"), pauli("XX"))


def _random_pauli(rng, n, hermitian=False):
    x = rng.integers(0, 2, n).astype(bool)
    z = rng.integers(0, 2, n).astype(bool)
    n_y = int(np.count_nonzero(x & z))
    phase_exp = (n_y + (2 * rng.integers(0, 2) if hermitian else rng.integers(0, 4))) % 4
    return PauliString(n, x, z, int(phase_exp))


class TestRank:
    def test_empty(self):
        assert rank_gf2(SymplecticTable(())) == 0

    def test_dependent_triple(self):
        rows = (pauli("ZZI"), pauli("IZZ"), pauli("ZIZ"))
        assert rank_gf2(SymplecticTable(rows)) == 2

    def test_table_s1_rank_sixteen(self):
        from gsc_forge.protocol import table_s1_combined

        combined = table_s1_combined()
        assert rank_gf2(combined.stabilizers) == 16

    def test_in_group(self):
        gens = [pauli("ZZI"), pauli("IZZ")]
        assert in_group(pauli("ZIZ"), gens)
        assert not in_group(pauli("XII"), gens)
        assert in_group(PauliString.identity(3), gens)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1), st.integers(0, 2 ** 40 - 1))
def test_symplectic_form_is_bilinear(a, b, c):
    """commutes(p*q, r) == commutes(p, r) XNOR commutes(q, r)."""
    n = 10
    def unpack(v):
        x = np.array([(v >> i) & 1 for i in range(n)], dtype=bool)
        z = np.array([(v >> (i + n)) & 1 for i in range(n)], dtype=bool)
        n_y = int(np.count_nonzero(x & z))
        return PauliString(n, x, z, n_y)
    p, q, r = unpack(a), unpack(b), unpack(c)
    assert commutes(multiply(p, q), r) == (commutes(p, r) == commutes(q, r))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 16 - 1), st.booleans())
def test_hermitian_square_is_positive_identity(v, sign):
    n = 8
    x = np.array([(v >> i) & 1 for i in range(n)], dtype=bool)
    z = np.array([(v >> (i + 4)) & 1 for i in range(n)], dtype=bool)
    n_y = int(np.count_nonzero(x & z))
    p = PauliString(n, x, z, (n_y + (2 if sign else 0)) % 4)
    sq = multiply(p, p)
    assert sq.is_identity_bits() and sq.phase == 1


def test_commutes_symmetric():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p, q = _random_pauli(rng, 6), _random_pauli(rng, 6)
        assert commutes(p, q) == commutes(q, p)


def test_weight_subadditive():
    rng = np.random.default_rng(12)
    for _ in range(50):
        p, q = _random_pauli(rng, 6), _random_pauli(rng, 6)
        assert multiply(p, q).weight <= p.weight + q.weight


def test_embed_and_restrict():
    p = pauli("XZ")
    e = p.embed(5, 2)
    assert e.letters() == "IIXZI"
    assert e.restrict([2, 3]).letters() == "XZ"

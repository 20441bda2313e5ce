"""GSC/GSCH construction, the code registry, and validation utilities."""

import json

import numpy as np
import pytest

from gsc_forge.codes import (
    BudgetError,
    CodeError,
    GscParams,
    StabilizerCode,
    distance_bruteforce,
    gsc,
    gsc_q,
    gsch,
    gsch_basis,
    load_code_file,
    registry,
    save_code_file,
    verify_code,
)
from gsc_forge.pauli import PauliString, commutes


# The full stabilizer table for GSC(3, 4), as published.
GSC_3_4_GENERATORS = [
    "ZZIIIIIIIIII",
    "IZZIIIIIIIII",
    "IIZZIIIIIIII",
    "IIIIZZIIIIII",
    "IIIIIZZIIIII",
    "IIIIIIZZIIII",
    "IIIIIIIIZZII",
    "IIIIIIIIIZZI",
    "IIIIIIIIIIZZ",
    "XXXXXXXXIIII",
    "IIIIXXXXXXXX",
]


class TestGscConstruction:
    def test_gsc_3_4_exact(self):
        code = gsc(GscParams(3, 4))
        assert [g.text() for g in code.generators] == GSC_3_4_GENERATORS
        assert code.logical_z[0].text() == "XXXXIIIIIIII"
        assert code.logical_x[0].text() == "ZIIIZIIIZIII"

    def test_gsc_3_3_is_shor(self):
        code = gsc(GscParams(3, 3))
        assert (code.n, code.k, code.distance) == (9, 1, 3)
        assert code.logical_z[0].text() == "XXXIIIIII"
        assert code.logical_x[0].text() == "ZIIZIIZII"

    def test_gsc_3_5_counts(self):
        code = gsc(GscParams(3, 5))
        z_gens = [g for g in code.generators if not g.x_bits.any()]
        x_gens = [g for g in code.generators if not g.z_bits.any()]
        assert len(z_gens) == 12 and len(x_gens) == 2
        assert code.distance == 3

    def test_q_mapping_skips_subregister_boundaries(self):
        # For b=4 the fourth Z-generator starts at qubit 4, not 3.
        assert gsc_q(3, 4) == 4

    @pytest.mark.parametrize("a,b", [(3, 3), (3, 4), (3, 5), (5, 3), (5, 5)])
    def test_generator_census(self, a, b):
        code = gsc(GscParams(a, b))
        z_gens = [g for g in code.generators if not g.x_bits.any()]
        x_gens = [g for g in code.generators if not g.z_bits.any()]
        assert len(z_gens) == a * (b - 1)
        assert all(g.weight == 2 for g in z_gens)
        assert len(x_gens) == a - 1
        assert all(g.weight == 2 * b for g in x_gens)
        assert verify_code(code).ok

    def test_invalid_params(self):
        with pytest.raises(CodeError):
            GscParams(4, 3)
        with pytest.raises(CodeError):
            GscParams(3, 2)
        with pytest.raises(CodeError):
            GscParams(1, 3)


class TestGsch:
    def test_logicals_swapped(self):
        a, b = gsc(GscParams(3, 3)), gsch(GscParams(3, 3))
        assert b.logical_z == a.logical_x
        assert b.logical_x == a.logical_z

    def test_generators_shared(self):
        assert gsch(GscParams(3, 4)).generators == gsc(GscParams(3, 4)).generators

    def test_5_5_shape(self):
        code = gsch(GscParams(5, 5))
        assert (code.n, code.k) == (25, 1)
        assert verify_code(code).ok


class TestGschBasis:
    def test_3_4_even_terms(self):
        terms = dict(gsch_basis(GscParams(3, 4), 0))
        expect = {
            "0000" "0000" "0000",
            "0000" "1111" "1111",
            "1111" "0000" "1111",
            "1111" "1111" "0000",
        }
        assert set(terms) == expect
        assert all(abs(v - 0.5) < 1e-12 for v in terms.values())

    def test_3_4_odd_terms(self):
        terms = dict(gsch_basis(GscParams(3, 4), 1))
        expect = {
            "0000" "0000" "1111",
            "0000" "1111" "0000",
            "1111" "0000" "0000",
            "1111" "1111" "1111",
        }
        assert set(terms) == expect

    @pytest.mark.parametrize("a,b", [(3, 3), (3, 4), (5, 3)])
    def test_normalized_and_disjoint(self, a, b):
        p = GscParams(a, b)
        even, odd = gsch_basis(p, 0), gsch_basis(p, 1)
        assert abs(sum(amp ** 2 for _, amp in even) - 1) < 1e-12
        assert abs(sum(amp ** 2 for _, amp in odd) - 1) < 1e-12
        assert not set(s for s, _ in even) & set(s for s, _ in odd)
        assert len(even) == len(odd) == 2 ** (a - 1)


class TestRegistry:
    def test_all_entries_verify(self):
        for name, code in registry().items():
            report = verify_code(code)
            assert report.ok, f"{name}: {report}"

    def test_five_qubit_shape(self):
        code = registry()["five_qubit"]
        assert (code.n, code.k, len(code.generators)) == (5, 1, 4)
        assert code.generators[0].text() == "XZZXI"

    def test_four_qubit(self):
        code = registry()["four_qubit"]
        gens = {g.text() for g in code.generators}
        assert gens == {"XXXX", "ZZZZ"}
        assert code.k == 2

    def test_trivial(self):
        code = registry()["trivial"]
        assert (code.n, code.k, len(code.generators)) == (1, 1, 0)

    def test_minimum_weight_logicals(self):
        reg = registry()
        assert reg["five_qubit"].logical_x[0].weight == 3
        assert reg["five_qubit"].logical_z[0].weight == 3
        assert reg["steane"].logical_x[0].weight == 3
        assert reg["reed_muller_15"].logical_z[0].weight == 3
        assert reg["reed_muller_15"].logical_x[0].weight == 7
        assert reg["dodeca_15"].logical_x[0].weight == 5
        assert reg["dodeca_15"].logical_z[0].weight == 5


class TestDistance:
    def test_gsc_3_3(self):
        assert distance_bruteforce(gsc(GscParams(3, 3)), 3) == 3

    def test_gsc_3_4(self):
        assert distance_bruteforce(gsc(GscParams(3, 4)), 3) == 3

    def test_gsc_3_5(self):
        assert distance_bruteforce(gsc(GscParams(3, 5)), 3) == 3

    def test_five_qubit(self):
        assert distance_bruteforce(registry()["five_qubit"], 3) == 3

    def test_five_qubit_no_low_weight(self):
        assert distance_bruteforce(registry()["five_qubit"], 2) is None

    def test_trivial(self):
        assert distance_bruteforce(registry()["trivial"], 1) == 1

    def test_dodeca_no_weight_4_logical(self):
        assert distance_bruteforce(registry()["dodeca_15"], 4) is None

    def test_budget_guard(self):
        with pytest.raises(BudgetError):
            distance_bruteforce(registry()["dodeca_15"], 15)


class TestVerifyFailures:
    def test_anticommuting_generators_reported(self):
        bad = StabilizerCode(
            name="bad",
            n=1,
            k=-1,
            generators=(PauliString.from_text("X"), PauliString.from_text("Z")),
            logical_x=(),
            logical_z=(),
        )
        report = verify_code(bad)
        assert not report.ok
        assert any(check == "generator-commutation" for check, _ in report.failures)


def test_code_file_roundtrip(tmp_path):
    code = registry()["five_qubit"]
    path = tmp_path / "five.json"
    save_code_file(code, path)
    loaded = load_code_file(path)
    assert loaded.generators == code.generators
    assert loaded.logical_x == code.logical_x
    assert loaded.distance == 3
    blob = json.loads(path.read_text())
    assert blob["stabilizers"][0] == "XZZXI"

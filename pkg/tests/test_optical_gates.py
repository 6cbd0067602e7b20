"""Unit tests for the post-selected filter and CNOT constructions.

Branch amplitudes are compared against frozen closed forms worked out by
hand from the element matrices: the filter sends input (a, b) with
auxiliary (c, d) to (-i/sqrt(2)) (a c, b d) on both corrected branches,
the plate-sandwiched CNOT line gives exactly +1/2 times the flipped
target, and the full CNOT branch is (-i/4) times the CNOT image.
"""

import numpy as np
import pytest

from pgw.fock_core import (
    FockKet,
    H,
    ModeId,
    Register,
    V,
    single_photon,
)
from pgw.optical_gates import (
    FGateLayout,
    destructive_cnot,
    e_cnot,
    f_gate,
    gate_truth_table,
    quantum_parity_check,
)
from pgw.qubit_teleport import CNOT_MATRIX

HALF = 2.0 ** -0.5
LAYOUT = FGateLayout("IN", "A", ("D0", "D1"))


def _pair(register, in_amps, aux_amps):
    terms = {}
    for pol1, c1 in zip((H, V), in_amps):
        for pol2, c2 in zip((H, V), aux_amps):
            occ = [0] * register.n_modes
            occ[register.index_of(ModeId("IN", pol1))] = 1
            occ[register.index_of(ModeId("A", pol2))] = 1
            terms[tuple(occ)] = complex(c1) * complex(c2)
    return FockKet(register, terms)


def _two_qubit(register, amps):
    terms = {}
    for index, (pol1, pol2) in enumerate(((H, H), (H, V), (V, H), (V, V))):
        occ = [0] * register.n_modes
        occ[register.index_of(ModeId("IN", pol1))] = 1
        occ[register.index_of(ModeId("IN'", pol2))] = 1
        terms[tuple(occ)] = complex(amps[index])
    return FockKet(register, terms)


@pytest.fixture
def filter_register():
    return Register(("IN", "A", "D0", "D1"))


def test_f_gate_branch_amplitudes_match_closed_form(filter_register):
    a, b = 0.6, 0.8j
    c, d = 0.48 + 0.36j, -0.8
    result = f_gate(_pair(filter_register, (a, b), (c, d)), LAYOUT)
    assert len(result.accepted_branches) == 2
    for branch, j_want in zip(result.accepted_branches, (0, 1)):
        assert branch.j == j_want
        state = branch.conditional_state
        assert abs(state.amplitude((1, 0)) - (-1j * HALF) * a * c) < 1e-12
        assert abs(state.amplitude((0, 1)) - (-1j * HALF) * b * d) < 1e-12
    assert result.corrected_outputs_equal


def test_f_gate_branch_labels_follow_detectors(filter_register):
    result = f_gate(_pair(filter_register, (1.0, 0.0), (HALF, HALF)), LAYOUT)
    assert [b.outcome_label for b in result.accepted_branches] == ["D0", "D1"]


def test_f_gate_neutral_aux_success_half(filter_register):
    rng = np.random.default_rng(5)
    for _ in range(20):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        a, b = v / np.linalg.norm(v)
        result = f_gate(_pair(filter_register, (a, b), (HALF, HALF)), LAYOUT)
        assert result.success_probability == pytest.approx(0.5, abs=1e-10)
        for branch in result.accepted_branches:
            assert branch.probability == pytest.approx(0.25, abs=1e-10)


def test_f_gate_minus_aux_flips_relative_phase(filter_register):
    a, b = 0.6, 0.8
    result = f_gate(_pair(filter_register, (a, b), (HALF, -HALF)), LAYOUT)
    for branch in result.accepted_branches:
        state = branch.conditional_state
        ratio = state.amplitude((0, 1)) / state.amplitude((1, 0))
        assert ratio == pytest.approx(-b / a, abs=1e-12)


def test_parity_check_passes_matching_component():
    reg = Register(("IN",))
    state = FockKet(reg, {(1, 0): 0.6, (0, 1): 0.8})
    result = quantum_parity_check(state, H)
    assert result.success_probability == pytest.approx(0.36, abs=1e-12)
    for branch in result.accepted_branches:
        assert abs(branch.conditional_state.amplitude((0, 1))) == 0.0
    flipped = quantum_parity_check(state, V)
    assert flipped.success_probability == pytest.approx(0.64, abs=1e-12)


def test_f_gate_rejects_multiphoton_input(filter_register):
    occ = [0] * filter_register.n_modes
    occ[filter_register.index_of(ModeId("IN", H))] = 1
    occ[filter_register.index_of(ModeId("IN", V))] = 1
    occ[filter_register.index_of(ModeId("A", H))] = 1
    with pytest.raises(ValueError):
        f_gate(FockKet(filter_register, {tuple(occ): 1.0}), LAYOUT)


def test_f_gate_requires_vacuum_detectors(filter_register):
    occ = [0] * filter_register.n_modes
    occ[filter_register.index_of(ModeId("IN", H))] = 1
    occ[filter_register.index_of(ModeId("A", H))] = 1
    occ[filter_register.index_of(ModeId("D0", H))] = 1
    with pytest.raises(ValueError):
        f_gate(FockKet(filter_register, {tuple(occ): 1.0}, validate=False), LAYOUT)


def test_f_gate_layout_requires_distinct_ports():
    with pytest.raises(ValueError):
        FGateLayout("IN", "IN", ("D0", "D1"))


def test_destructive_cnot_lines_carry_exactly_half(filter_register):
    gamma, delta = 0.6, 0.8j
    for control, want in (((1.0, 0.0), (gamma, delta)), ((0.0, 1.0), (delta, gamma))):
        result = destructive_cnot(_pair(filter_register, (gamma, delta), control),
                                  LAYOUT)
        assert result.success_probability == pytest.approx(0.5, abs=1e-10)
        for branch in result.accepted_branches:
            state = branch.conditional_state
            assert abs(state.amplitude((1, 0)) - 0.5 * want[0]) < 1e-12
            assert abs(state.amplitude((0, 1)) - 0.5 * want[1]) < 1e-12


def test_e_cnot_truth_table_rows():
    reg = Register(("IN", "IN'"))
    basis = [_two_qubit(reg, np.eye(4)[i]) for i in range(4)]
    rows = gate_truth_table(e_cnot, basis)
    for i, row in enumerate(rows):
        want = _two_qubit(reg, np.eye(4)[(0, 1, 3, 2)[i]])
        assert row.probability == pytest.approx(0.25, abs=1e-10)
        got = row.output_state
        overlap = sum(np.conj(want.amplitude(k)) * got.amplitude(k)
                      for k in want.terms)
        assert abs(overlap) == pytest.approx(1.0, abs=1e-10)


def test_e_cnot_branch_amplitudes_are_quarter_i_times_cnot():
    reg = Register(("IN", "IN'"))
    result = e_cnot(_two_qubit(reg, np.eye(4)[2]))
    assert [b.outcome_label for b in result.accepted_branches] == [
        "D0,D0'", "D0,D1'", "D1,D0'", "D1,D1'"]
    for branch in result.accepted_branches:
        assert branch.probability == pytest.approx(1.0 / 16.0, abs=1e-12)
        state = branch.conditional_state
        occ_vv = (0, 1, 0, 1)
        assert abs(state.amplitude(occ_vv) - (-0.25j)) < 1e-12


def test_e_cnot_success_quarter_on_random_inputs():
    rng = np.random.default_rng(9)
    reg = Register(("IN", "IN'"))
    for _ in range(10):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v = v / np.linalg.norm(v)
        result = e_cnot(_two_qubit(reg, v))
        assert result.success_probability == pytest.approx(0.25, abs=1e-10)
        want = _two_qubit(reg, CNOT_MATRIX @ v)
        for branch in result.accepted_branches:
            got = branch.conditional_state.normalized()
            overlap = sum(np.conj(want.amplitude(k)) * got.amplitude(k)
                          for k in set(want.terms) | set(got.terms))
            assert abs(overlap) == pytest.approx(1.0, abs=1e-10)
        assert result.corrected_outputs_equal


def test_e_cnot_requires_the_declared_ports():
    reg = Register(("X", "Y"))
    terms = {}
    occ = [0] * reg.n_modes
    occ[reg.index_of(ModeId("X", H))] = 1
    occ[reg.index_of(ModeId("Y", H))] = 1
    terms[tuple(occ)] = 1.0
    with pytest.raises(ValueError):
        e_cnot(FockKet(reg, terms))


def test_gate_truth_table_blocked_row_has_no_output():
    reg = Register(("IN",))
    rows = gate_truth_table(lambda s: quantum_parity_check(s, H),
                            [single_photon(ModeId("IN", H), reg),
                             single_photon(ModeId("IN", V), reg)])
    assert rows[0].probability == pytest.approx(1.0, abs=1e-12)
    assert rows[1].probability == pytest.approx(0.0, abs=1e-12)
    assert rows[1].output_state is None

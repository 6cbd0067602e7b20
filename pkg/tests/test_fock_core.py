"""Unit tests for the sparse Fock state layer."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference
from pgw.fock_core import (
    DetectionPattern,
    FockKet,
    H,
    ModeId,
    ModeTransform,
    OccupationVector,
    Register,
    RegisterError,
    V,
    apply_mode_transform,
    drop_vacuum_ports,
    fidelity_up_to_global_phase,
    measure_and_postselect,
    overlap,
    single_photon,
    superpose,
    tensor,
    vacuum,
)

HALF = 2.0 ** -0.5


def test_mode_id_parse_and_str():
    mode = ModeId.parse("IN'.V")
    assert mode.spatial_label == "IN'"
    assert mode.polarization is V
    assert str(mode) == "IN'.V"


@pytest.mark.parametrize("text", ["IN", "IN.X", ".H", "H", "IN.h"])
def test_mode_id_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        ModeId.parse(text)


def test_register_orders_modes_lexicographically():
    reg = Register(("D0", "A", "IN"))
    assert [str(m) for m in reg.modes] == [
        "A.H", "A.V", "D0.H", "D0.V", "IN.H", "IN.V"]
    assert reg.spatial_labels == ("A", "D0", "IN")


def test_register_rejects_duplicates_and_bad_cutoff():
    with pytest.raises(RegisterError):
        Register(("A", "A"))
    with pytest.raises(ValueError):
        Register(("A",), cutoff=0)


def test_register_index_of_unknown_mode():
    reg = Register(("A",))
    with pytest.raises(RegisterError):
        reg.index_of(ModeId("B", H))


def test_occupation_vector_validation():
    assert OccupationVector((0, 2, 1)).total_photons == 3
    with pytest.raises(ValueError):
        OccupationVector((0, -1))
    with pytest.raises(ValueError):
        OccupationVector((0.5, 1))


def test_single_photon_and_vacuum():
    reg = Register(("A", "B"))
    ket = single_photon(ModeId("B", V), reg)
    assert ket.amplitude((0, 0, 0, 1)) == 1.0
    assert ket.norm_squared() == pytest.approx(1.0)
    assert vacuum(reg).amplitude((0, 0, 0, 0)) == 1.0


def test_fock_ket_rejects_norm_above_one():
    reg = Register(("A",))
    with pytest.raises(ValueError):
        FockKet(reg, {(1, 0): 1.0, (0, 1): 1.0})


def test_fock_ket_prunes_tiny_amplitudes():
    reg = Register(("A",))
    ket = FockKet(reg, {(1, 0): 1.0, (0, 1): 1e-15})
    assert (0, 1) not in ket.terms


def test_fock_ket_rejects_counts_over_cutoff():
    reg = Register(("A",), cutoff=2)
    with pytest.raises(ValueError):
        FockKet(reg, {(3, 0): 0.5})


def test_superpose_requires_matching_registers():
    a = single_photon(ModeId("A", H), Register(("A",)))
    b = single_photon(ModeId("B", H), Register(("B",)))
    with pytest.raises(RegisterError):
        superpose([(HALF, a), (HALF, b)])


def test_tensor_merges_and_maps_occupations():
    left = single_photon(ModeId("IN", V), Register(("IN",)))
    right = single_photon(ModeId("A", H), Register(("A",)))
    joint = tensor(left, right)
    assert joint.register.spatial_labels == ("A", "IN")
    assert joint.amplitude((1, 0, 0, 1)) == 1.0


def test_tensor_rejects_overlapping_ports():
    a = single_photon(ModeId("A", H), Register(("A",)))
    with pytest.raises(RegisterError):
        tensor(a, a)


def test_apply_transform_single_photon_follows_matrix_columns():
    rng = np.random.default_rng(11)
    reg = Register(("A", "B"))
    u = reference.haar_unitary(rng, 4)
    transform = ModeTransform(reg, u)
    for k in range(4):
        ket = FockKet(reg, {tuple(int(i == k) for i in range(4)): 1.0})
        out = apply_mode_transform(ket, transform)
        for j in range(4):
            occ = tuple(int(i == j) for i in range(4))
            assert out.amplitude(occ) == pytest.approx(u[j, k], abs=1e-13)


def test_apply_transform_matches_permanent_oracle_on_two_photons():
    rng = np.random.default_rng(7)
    reg = Register(("A", "B"))
    u = reference.haar_unitary(rng, 4)
    transform = ModeTransform(reg, u)
    basis = [occ for occ in reference.fock_basis(4, 2) if sum(occ) == 2]
    matrix = np.array([[reference.fock_matrix_element(u, out, inp)
                        for inp in basis] for out in basis])
    for col, inp in enumerate(basis):
        out = apply_mode_transform(FockKet(reg, {inp: 1.0}), transform)
        for row, occ in enumerate(basis):
            assert abs(out.amplitude(occ) - matrix[row, col]) < 1e-12


def test_two_photon_bunching_at_balanced_splitter():
    # one photon in each mode of a balanced two-mode mixer leaves bunched
    reg = Register(("A",))
    u = HALF * np.array([[1.0, 1.0], [1.0, -1.0]])
    out = apply_mode_transform(FockKet(reg, {(1, 1): 1.0}), ModeTransform(reg, u))
    assert abs(out.amplitude((1, 1))) < 1e-14
    assert out.amplitude((2, 0)) == pytest.approx(HALF, abs=1e-14)
    assert out.amplitude((0, 2)) == pytest.approx(-HALF, abs=1e-14)


def test_mode_transform_rejects_non_unitary():
    reg = Register(("A",))
    with pytest.raises(ValueError):
        ModeTransform(reg, np.array([[1.0, 0.0], [0.0, 0.5]]))


def test_mode_transform_rejects_wrong_shape():
    reg = Register(("A", "B"))
    with pytest.raises(ValueError):
        ModeTransform(reg, np.eye(2))


def test_measure_and_postselect_probability_and_survivors():
    reg = Register(("A", "IN"))
    state = FockKet(reg, {(1, 0, 1, 0): 0.6, (0, 1, 0, 1): 0.8})
    pattern = DetectionPattern({ModeId("A", H): 1, ModeId("A", V): 0})
    branch = measure_and_postselect(state, pattern, outcome_label="hit", j=0)
    assert branch.probability == pytest.approx(0.36)
    assert branch.outcome_label == "hit"
    assert branch.conditional_state.register.spatial_labels == ("IN",)
    assert branch.conditional_state.amplitude((1, 0)) == pytest.approx(0.6)


def test_measurement_outcomes_sum_to_norm():
    reg = Register(("A", "IN"))
    state = FockKet(reg, {(1, 0, 1, 0): 0.5, (0, 1, 0, 1): 0.5,
                          (1, 0, 0, 1): 0.5, (0, 1, 1, 0): 0.5})
    total = 0.0
    for counts in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)):
        pattern = DetectionPattern({ModeId("A", H): counts[0],
                                    ModeId("A", V): counts[1]})
        total += measure_and_postselect(state, pattern).probability
    assert total == pytest.approx(state.norm_squared(), abs=1e-13)


def test_measure_rejects_indefinite_unconstrained_measured_mode():
    # both terms satisfy A.H=1 but disagree on the unconstrained A.V count
    reg = Register(("A", "IN"))
    state = FockKet(reg, {(1, 0, 1, 0): HALF, (1, 1, 0, 1): HALF})
    pattern = DetectionPattern({ModeId("A", H): 1},
                               measured=(ModeId("A", H), ModeId("A", V)))
    with pytest.raises(ValueError):
        measure_and_postselect(state, pattern)


def test_fidelity_ignores_global_phase():
    reg = Register(("A",))
    ket = FockKet(reg, {(1, 0): 0.6, (0, 1): 0.8})
    rotated = FockKet(reg, {(1, 0): 0.6 * np.exp(0.7j), (0, 1): 0.8 * np.exp(0.7j)})
    assert fidelity_up_to_global_phase(ket, rotated) == pytest.approx(1.0, abs=1e-14)


def test_fidelity_rejects_zero_states():
    reg = Register(("A",))
    ket = single_photon(ModeId("A", H), reg)
    with pytest.raises(ValueError):
        fidelity_up_to_global_phase(ket, FockKet(reg, {}))


def test_drop_vacuum_ports():
    reg = Register(("A", "IN"))
    state = FockKet(reg, {(0, 0, 1, 0): 1.0})
    smaller = drop_vacuum_ports(state, ("A",))
    assert smaller.register.spatial_labels == ("IN",)
    assert smaller.amplitude((1, 0)) == 1.0
    occupied = FockKet(reg, {(1, 0, 1, 0): 1.0})
    with pytest.raises(ValueError):
        drop_vacuum_ports(occupied, ("A",))


def test_permanent_oracle_known_values():
    assert reference.permanent(np.array([[3.0]])) == pytest.approx(3.0)
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert reference.permanent(m) == pytest.approx(10.0)
    assert reference.permanent(np.ones((3, 3))) == pytest.approx(6.0)


def test_haar_unitary_is_unitary():
    u = reference.haar_unitary(np.random.default_rng(3), 5)
    assert np.abs(u.conj().T @ u - np.eye(5)).max() < 1e-12


_FIXED_REG = Register(("A",))
_FIXED_U = ModeTransform(_FIXED_REG,
                         reference.haar_unitary(np.random.default_rng(2), 2))

_coeff = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)


@given(_coeff, _coeff, _coeff, _coeff)
@settings(max_examples=60, deadline=None)
def test_transform_is_linear(ar, ai, br, bi):
    a = complex(ar, ai)
    b = complex(br, bi)
    x = FockKet(_FIXED_REG, {(1, 0): 1.0})
    y = FockKet(_FIXED_REG, {(0, 1): 1.0})
    combined = apply_mode_transform(superpose([(a, x), (b, y)]), _FIXED_U)
    split = superpose([(a, apply_mode_transform(x, _FIXED_U)),
                       (b, apply_mode_transform(y, _FIXED_U))])
    keys = set(combined.terms) | set(split.terms)
    assert all(abs(combined.amplitude(k) - split.amplitude(k)) < 1e-12 for k in keys)


@given(st.lists(_coeff, min_size=8, max_size=8))
@settings(max_examples=60, deadline=None)
def test_transform_preserves_norm(raw):
    amps = np.array(raw[0::2]) + 1j * np.array(raw[1::2])
    scale = max(1.0, np.linalg.norm(amps))
    occs = [(2, 0), (1, 1), (0, 2), (1, 0)]
    ket = FockKet(_FIXED_REG, {occ: amp / scale for occ, amp in zip(occs, amps)})
    out = apply_mode_transform(ket, _FIXED_U)
    assert out.norm_squared() == pytest.approx(ket.norm_squared(), abs=1e-12)


@given(_coeff, _coeff)
@settings(max_examples=40, deadline=None)
def test_overlap_is_sesquilinear_in_scale(ar, ai):
    a = complex(ar, ai)
    x = FockKet(_FIXED_REG, {(1, 0): 0.5, (0, 1): 0.5})
    y = FockKet(_FIXED_REG, {(1, 0): 0.5, (2, 0): 0.5})
    scaled = superpose([(a, x)])
    assert overlap(scaled, y) == pytest.approx(np.conj(a) * overlap(x, y), abs=1e-12)

"""Composite post-selected polarization gates with feed-forward corrections.

The building block is a two-photon parity-check filter (f_gate): a
polarizing beam splitter couples the input port to an auxiliary port, a
half-wave plate at 22.5 degrees rotates the auxiliary photon, and the
auxiliary port is split onto two number-resolving detectors. Exactly one
detected photon is accepted; the detector that fired fixes the correction
index j, and j = 1 triggers a phase flip on the input port.

With the auxiliary photon in (|H> + |V>)/sqrt(2) the filter passes any
input with success probability 1/2 (the two accepted branches carry 1/4
each); with |H> or |V> it acts as a parity check passing only the matching
polarization component. Composing the filter with half-wave plates gives a
destructive CNOT (control photon consumed, success 1/2), and adding a
parity check fed by one half of an entangled pair gives the full
post-selected CNOT on two polarization qubits (success 1/4, four accepted
detector combinations carrying 1/16 each).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .fock_core import (
    Branch,
    DetectionPattern,
    FockKet,
    GateResult,
    H,
    ModeId,
    Register,
    V,
    apply_mode_transform,
    drop_vacuum_ports,
    fidelity_up_to_global_phase,
    measure_and_postselect,
    single_photon,
    superpose,
    tensor,
    vacuum,
)
from .optical_elements import hwp, mode_swap, pbs, pockels_z

BRANCH_EQUALITY_TOL = 1e-10
ROTATION_DEG = 22.5


@dataclass(frozen=True)
class FGateLayout:
    """Port assignment for one parity-check filter instance."""

    input_port: str
    aux_port: str
    detector_ports: tuple[str, str]

    def __post_init__(self):
        ports = (self.input_port, self.aux_port) + tuple(self.detector_ports)
        if len(set(ports)) != 4:
            raise ValueError(f"layout ports must be distinct, got {ports}")


def _require_one_photon_per_port(state: FockKet, ports: Sequence[str]) -> None:
    for port in ports:
        idx = [state.register.index_of(m) for m in state.register.port_modes(port)]
        for occ in state.terms:
            if sum(occ[i] for i in idx) != 1:
                raise ValueError(f"expected exactly one photon in port {port!r}")


def _require_vacuum_ports(state: FockKet, ports: Sequence[str]) -> None:
    for port in ports:
        idx = [state.register.index_of(m) for m in state.register.port_modes(port)]
        for occ in state.terms:
            if any(occ[i] for i in idx):
                raise ValueError(f"expected vacuum in port {port!r}")


def _branches_all_equal(branches: Sequence[Branch], tol: float = BRANCH_EQUALITY_TOL) -> bool:
    live = [b.conditional_state for b in branches if b.probability > 0.0]
    return all(fidelity_up_to_global_phase(live[0], s) >= 1.0 - tol for s in live[1:])


def _f_pipeline(state: FockKet, layout: FGateLayout) -> tuple[Branch, Branch]:
    """Run one filter instance on a joint state; other ports ride along.

    Returns the two accepted branches, correction already applied, with the
    detector modes traced out. The auxiliary port stays in the register
    (vacuum after detection); callers drop it when they are done.
    """
    reg = state.register
    inp, aux = layout.input_port, layout.aux_port
    d0, d1 = layout.detector_ports
    state = apply_mode_transform(state, pbs(reg, inp, aux))
    state = apply_mode_transform(state, hwp(reg, aux, ROTATION_DEG))
    state = apply_mode_transform(state, mode_swap(reg, ModeId(aux, H), ModeId(d0, H)))
    state = apply_mode_transform(state, mode_swap(reg, ModeId(aux, V), ModeId(d1, V)))

    detector_modes = reg.port_modes(d0) + reg.port_modes(d1)
    counts_j0 = {ModeId(d0, H): 1, ModeId(d0, V): 0, ModeId(d1, H): 0, ModeId(d1, V): 0}
    counts_j1 = {ModeId(d0, H): 0, ModeId(d0, V): 0, ModeId(d1, H): 0, ModeId(d1, V): 1}
    b0 = measure_and_postselect(
        state, DetectionPattern(counts_j0, detector_modes), outcome_label=d0, j=0)
    b1 = measure_and_postselect(
        state, DetectionPattern(counts_j1, detector_modes), outcome_label=d1, j=1)
    corrected = apply_mode_transform(
        b1.conditional_state, pockels_z(b1.conditional_state.register, inp))
    b1 = Branch(b1.outcome_label, 1, corrected, b1.probability)
    return b0, b1


def f_gate(joint: FockKet, layout: FGateLayout) -> GateResult:
    """Post-selected parity-check filter on (input, aux); see module docstring.

    The joint state must hold exactly one photon in the input port and one
    in the auxiliary port; detector ports must be vacuum. Accepted branch
    states live on the input port (plus any bystander ports).
    """
    _require_one_photon_per_port(joint, (layout.input_port, layout.aux_port))
    _require_vacuum_ports(joint, layout.detector_ports)
    branches = tuple(
        Branch(b.outcome_label, b.j,
               drop_vacuum_ports(b.conditional_state, (layout.aux_port,)), b.probability)
        for b in _f_pipeline(joint, layout))
    success = sum(b.probability for b in branches)
    return GateResult(branches, success, _branches_all_equal(branches))


def quantum_parity_check(input_state: FockKet, aux_polarization) -> GateResult:
    """Filter specialization with a definite H or V auxiliary photon.

    Passes only the input component whose polarization matches the
    auxiliary photon; success probability is that component's weight.
    """
    ports = input_state.register.spatial_labels
    if len(ports) != 1:
        raise ValueError("input_state must live on a single spatial port")
    inp = ports[0]
    if inp in ("A", "D0", "D1"):
        raise ValueError("input port may not be named A, D0 or D1")
    pol = {"H": H, "V": V}[str(aux_polarization)]
    aux_reg = Register(("A", "D0", "D1"), cutoff=input_state.register.cutoff)
    joint = tensor(input_state, single_photon(ModeId("A", pol), aux_reg))
    return f_gate(joint, FGateLayout(inp, "A", ("D0", "D1")))


def destructive_cnot(joint: FockKet, layout: FGateLayout) -> GateResult:
    """CNOT whose control photon (the auxiliary port) is consumed by detection.

    The filter is sandwiched in half-wave plates: one on the target before,
    one on the auxiliary control (mapping H/V onto the +/- basis), and one
    on the target after. An H control leaves the target alone, a V control
    flips it; success probability 1/2.
    """
    _require_one_photon_per_port(joint, (layout.input_port, layout.aux_port))
    _require_vacuum_ports(joint, layout.detector_ports)
    reg = joint.register
    state = apply_mode_transform(joint, hwp(reg, layout.input_port, ROTATION_DEG))
    state = apply_mode_transform(state, hwp(reg, layout.aux_port, ROTATION_DEG))
    branches = []
    for b in _f_pipeline(state, layout):
        out = apply_mode_transform(
            b.conditional_state, hwp(b.conditional_state.register, layout.input_port, ROTATION_DEG))
        out = drop_vacuum_ports(out, (layout.aux_port,))
        branches.append(Branch(b.outcome_label, b.j, out, b.probability))
    branches = tuple(branches)
    success = sum(b.probability for b in branches)
    return GateResult(branches, success, _branches_all_equal(branches))


def e_cnot(two_qubit_input: FockKet, control_port: str = "IN",
           target_port: str = "IN'") -> GateResult:
    """Full post-selected CNOT on two polarization qubits.

    Internally tensors in the entangled auxiliary pair
    (|HH> + |VV>)/sqrt(2) on ports A, A'; a parity check couples the
    control to A, and a destructive CNOT driven by A' acts on the target.
    Four accepted detector combinations, 1/16 probability each, all equal
    to the CNOT output up to a global phase after feed-forward.
    """
    _require_one_photon_per_port(two_qubit_input, (control_port, target_port))
    reg = two_qubit_input.register
    if set(reg.spatial_labels) != {control_port, target_port}:
        raise ValueError("input register must hold exactly the control and target ports")
    if reg.cutoff < 4:
        raise ValueError("e_cnot needs a register cutoff of at least 4 photons")

    half = 2.0 ** -0.5
    a_reg = Register(("A",), cutoff=reg.cutoff)
    ap_reg = Register(("A'",), cutoff=reg.cutoff)
    pair = superpose([
        (half, tensor(single_photon(ModeId("A", H), a_reg),
                      single_photon(ModeId("A'", H), ap_reg))),
        (half, tensor(single_photon(ModeId("A", V), a_reg),
                      single_photon(ModeId("A'", V), ap_reg))),
    ])
    detectors = Register(("D0", "D1", "D0'", "D1'"), cutoff=reg.cutoff)
    state = tensor(tensor(two_qubit_input, pair), vacuum(detectors))

    parity_layout = FGateLayout(control_port, "A", ("D0", "D1"))
    cnot_layout = FGateLayout(target_port, "A'", ("D0'", "D1'"))
    branches = []
    for b1 in _f_pipeline(state, parity_layout):
        mid = apply_mode_transform(
            b1.conditional_state, hwp(b1.conditional_state.register, target_port, ROTATION_DEG))
        mid = apply_mode_transform(mid, hwp(mid.register, "A'", ROTATION_DEG))
        for b2 in _f_pipeline(mid, cnot_layout):
            out = apply_mode_transform(
                b2.conditional_state,
                hwp(b2.conditional_state.register, target_port, ROTATION_DEG))
            out = drop_vacuum_ports(out, ("A", "A'"))
            branches.append(Branch(f"{b1.outcome_label},{b2.outcome_label}", b2.j,
                                   out, b2.probability))
    branches = tuple(branches)
    success = sum(b.probability for b in branches)
    return GateResult(branches, success, _branches_all_equal(branches))


@dataclass(frozen=True)
class TruthTableRow:
    input_state: FockKet
    output_state: FockKet | None
    probability: float


def gate_truth_table(gate: Callable[[FockKet], GateResult],
                     basis: Sequence[FockKet]) -> tuple[TruthTableRow, ...]:
    """Run a gate over basis inputs and tabulate corrected outputs.

    The output column holds the first nonzero accepted branch, normalized
    (branches agree up to global phase whenever the gate succeeds), or
    None when the gate rejects the input with certainty.
    """
    rows = []
    for ket in basis:
        result = gate(ket)
        live = [b for b in result.accepted_branches if b.probability > 0.0]
        out = live[0].conditional_state.normalized() if live else None
        rows.append(TruthTableRow(ket, out, result.success_probability))
    return tuple(rows)

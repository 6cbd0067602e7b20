"""Mixed-basis bridge between the optical and teleportation layers.

The mixed basis keeps input ports as polarization qubits (H maps to 0,
V to 1) while each auxiliary port contributes two occupation-number
qubits, one per mode, ordered (V mode, H mode):

    |H>_A  ->  |0>_AV |1>_AH        |V>_A  ->  |1>_AV |0>_AH

A single photon split across the two modes of one auxiliary port is then
exactly a Bell state of the two occupation qubits: (|H> + |V>)/sqrt(2)
encodes to Psi+ and (|H> - |V>)/sqrt(2) to Psi-. Under this dictionary
the polarizing beam splitter acts as the even-parity filter on (input,
V-qubit), the half-wave plate at 22.5 degrees acts as the Bell rotation
|01> -> (|01> + |10>)/sqrt(2), |10> -> (|01> - |10>)/sqrt(2) (up to a
global -i), and per-port detection realizes the partial Bell measurement.
The verify_* functions machine-check these statements, the branch-by-
branch equality of the optical parity-check filter with the parity-filter
telegate, the equality of the rotated entangled pair with the controlled-Z
auxiliary resource, and the end-to-end match of the optical CNOT with the
teleportation CNOT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock_core import (
    DEFAULT_CUTOFF,
    FockKet,
    H,
    ModeId,
    Register,
    V,
    apply_mode_transform,
)
from .optical_elements import hwp, pbs
from .optical_gates import FGateLayout, e_cnot, f_gate
from .qubit_teleport import (
    PSI_MINUS,
    PSI_PLUS,
    QubitState,
    bell_state,
    cnot_via_cz,
    cz_aux_state,
    overlap_q,
    qubit_fidelity,
    random_qubit_state,
    telegate_t,
)

ROTATION_DEG = 22.5


class EncodingDomainError(ValueError):
    """The optical state lies outside the encodable subspace."""


class DecodingDomainError(ValueError):
    """The qubit state has support outside the image of the encoding."""


@dataclass(frozen=True)
class MBEncoding:
    """Port declaration for the mixed-basis dictionary.

    input_ports stay polarization qubits; each aux port becomes the qubit
    pair (portV, portH) read from mode occupations.
    """

    input_ports: tuple[str, ...]
    aux_ports: tuple[str, ...]

    def __post_init__(self):
        ports = tuple(self.input_ports) + tuple(self.aux_ports)
        if not ports:
            raise ValueError("encoding needs at least one port")
        if len(set(ports)) != len(ports):
            raise ValueError(f"ports declared twice in {ports}")
        object.__setattr__(self, "input_ports", tuple(self.input_ports))
        object.__setattr__(self, "aux_ports", tuple(self.aux_ports))

    @property
    def qubit_labels(self) -> tuple[str, ...]:
        labels = list(self.input_ports)
        for port in self.aux_ports:
            labels.extend((f"{port}V", f"{port}H"))
        return tuple(labels)


def _term_bits(occ, register: Register, enc: MBEncoding) -> tuple[int, ...]:
    """Qubit bit values of one occupation term, or EncodingDomainError."""
    declared = set(enc.input_ports) | set(enc.aux_ports)
    for mode, count in zip(register.modes, occ):
        if count and mode.spatial_label not in declared:
            raise EncodingDomainError(f"photon in undeclared port {mode.spatial_label!r}")
    bits = []
    for port in enc.input_ports:
        ch = occ[register.index_of(ModeId(port, H))]
        cv = occ[register.index_of(ModeId(port, V))]
        if (ch, cv) == (1, 0):
            bits.append(0)
        elif (ch, cv) == (0, 1):
            bits.append(1)
        else:
            raise EncodingDomainError(
                f"input port {port!r} holds counts (H={ch}, V={cv}), not one photon")
    for port in enc.aux_ports:
        ch = occ[register.index_of(ModeId(port, H))]
        cv = occ[register.index_of(ModeId(port, V))]
        if ch + cv != 1 or ch > 1 or cv > 1:
            raise EncodingDomainError(
                f"aux port {port!r} holds counts (H={ch}, V={cv}), not one photon")
        bits.extend((cv, ch))
    return tuple(bits)


def mb_encode(state: FockKet, enc: MBEncoding) -> QubitState:
    """Isometric map from the one-photon-per-port subspace to qubits."""
    labels = enc.qubit_labels
    amps = np.zeros(2 ** len(labels), dtype=complex)
    for occ, amp in state.terms.items():
        bits = _term_bits(occ, state.register, enc)
        index = 0
        for b in bits:
            index = (index << 1) | b
        amps[index] += amp
    return QubitState(labels, amps)


def mb_decode(state: QubitState, enc: MBEncoding,
              cutoff: int = DEFAULT_CUTOFF) -> FockKet:
    """Left inverse of mb_encode, back onto an optical register."""
    if state.labels != enc.qubit_labels:
        raise ValueError(f"state labels {state.labels} do not match encoding "
                         f"{enc.qubit_labels}")
    register = Register(enc.input_ports + enc.aux_ports, cutoff)
    terms: dict[tuple[int, ...], complex] = {}
    n = len(state.labels)
    for index, amp in enumerate(state.amplitudes):
        if abs(amp) == 0.0:
            continue
        bits = [(index >> (n - 1 - i)) & 1 for i in range(n)]
        occ = [0] * register.n_modes
        pos = 0
        for port in enc.input_ports:
            pol = V if bits[pos] else H
            occ[register.index_of(ModeId(port, pol))] = 1
            pos += 1
        for port in enc.aux_ports:
            bv, bh = bits[pos], bits[pos + 1]
            pos += 2
            if (bv, bh) not in ((0, 1), (1, 0)):
                raise DecodingDomainError(
                    f"aux pair for port {port!r} holds |{bv}{bh}>, outside the "
                    "single-photon image")
            occ[register.index_of(ModeId(port, V))] = bv
            occ[register.index_of(ModeId(port, H))] = bh
        terms[tuple(occ)] = amp
    return FockKet(register, terms)


def project_encodable(state: FockKet, enc: MBEncoding) -> FockKet:
    """Keep only the terms inside the encodable subspace (post-selection)."""
    kept = {}
    for occ, amp in state.terms.items():
        try:
            _term_bits(occ, state.register, enc)
        except EncodingDomainError:
            continue
        kept[occ] = amp
    return FockKet(state.register, kept, validate=False)


def check_record(check_id: str, ref: str, got: float, want: float, tol: float) -> dict:
    """One verification record in the report schema."""
    got, want, tol = float(got), float(want), float(tol)
    status = "pass" if abs(got - want) <= tol else "fail"
    return {"id": check_id, "ref": ref, "status": status,
            "got": got, "want": want, "tol": tol}


def _polarization_pair_state(register: Register, port1: str, amps1, port2: str,
                             amps2) -> FockKet:
    """(x|H> + y|V>)_port1 tensor (u|H> + v|V>)_port2 on a shared register."""
    terms = {}
    for pol1, c1 in zip((H, V), amps1):
        for pol2, c2 in zip((H, V), amps2):
            occ = [0] * register.n_modes
            occ[register.index_of(ModeId(port1, pol1))] = 1
            occ[register.index_of(ModeId(port2, pol2))] = 1
            terms[tuple(occ)] = complex(c1) * complex(c2)
    return FockKet(register, terms)


def _single_port_state(register: Register, port: str, amps) -> FockKet:
    terms = {}
    for pol, c in zip((H, V), amps):
        occ = [0] * register.n_modes
        occ[register.index_of(ModeId(port, pol))] = 1
        terms[tuple(occ)] = complex(c)
    return FockKet(register, terms)


def verify_pbs_mb(rng: np.random.Generator, trials: int = 100,
                  cutoff: int = DEFAULT_CUTOFF) -> list[dict]:
    """Check that the beam splitter's coincidence action encodes to the
    even-parity filter structure a A |001> + b B |110> on (IN, AV, AH)."""
    enc = MBEncoding(("IN",), ("A",))

    def encoded_after_pbs(a, b, big_a, big_b) -> QubitState:
        register = Register(("IN", "A"), cutoff)
        joint = _polarization_pair_state(register, "IN", (a, b), "A", (big_a, big_b))
        out = apply_mode_transform(joint, pbs(register, "IN", "A"))
        return mb_encode(project_encodable(out, enc), enc)

    def expected(a, b, big_a, big_b) -> np.ndarray:
        amps = np.zeros(8, dtype=complex)
        amps[0b001] = a * big_a
        amps[0b110] = b * big_b
        return amps

    checks = []
    got = np.abs(encoded_after_pbs(1, 0, 1, 0).amplitudes - expected(1, 0, 1, 0)).max()
    checks.append(check_record(
        "pbs-mb-even-term", "matched H input and H auxiliary pass the beam splitter "
        "into the surviving even-parity ket", got, 0.0, 1e-12))
    got = encoded_after_pbs(0, 1, 1, 0).norm()
    checks.append(check_record(
        "pbs-mb-odd-filtered", "odd-parity input and auxiliary combination is "
        "post-selected away by the beam splitter", got, 0.0, 1e-12))
    worst = 0.0
    for _ in range(trials):
        a, b = _random_pair(rng)
        big_a, big_b = _random_pair(rng)
        dev = np.abs(encoded_after_pbs(a, b, big_a, big_b).amplitudes
                     - expected(a, b, big_a, big_b)).max()
        worst = max(worst, dev)
    if trials > 0:
        checks.append(check_record(
            "pbs-mb-random", "beam splitter action on random coincidence inputs "
            "equals the even-parity filter structure", worst, 0.0, 1e-12))
    return checks


def _random_pair(rng: np.random.Generator) -> tuple[complex, complex]:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v = v / np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


def verify_hwp_mb(rng: np.random.Generator, trials: int = 100,
                  cutoff: int = DEFAULT_CUTOFF) -> list[dict]:
    """Check the half-wave plate's mixed-basis image: the Bell rotation on
    the occupation qubit pair, and Bell discrimination after detection."""
    enc = MBEncoding((), ("A",))
    register = Register(("A",), cutoff)
    rotation = hwp(register, "A", ROTATION_DEG)
    root_half = 2.0 ** -0.5

    def encoded_after_hwp(x, y) -> QubitState:
        return mb_encode(apply_mode_transform(
            _single_port_state(register, "A", (x, y)), rotation), enc)

    def expected(x, y) -> QubitState:
        amps = np.zeros(4, dtype=complex)
        amps[0b01] = (x + y) * root_half
        amps[0b10] = (x - y) * root_half
        return QubitState(("AV", "AH"), amps)

    checks = []
    checks.append(check_record(
        "hwp-mb-h-line", "plate maps the H occupation pattern to the plus Bell "
        "state up to a global phase",
        qubit_fidelity(encoded_after_hwp(1, 0), expected(1, 0)), 1.0, 1e-12))
    checks.append(check_record(
        "hwp-mb-v-line", "plate maps the V occupation pattern to the minus Bell "
        "state up to a global phase",
        qubit_fidelity(encoded_after_hwp(0, 1), expected(0, 1)), 1.0, 1e-12))

    analyzer = []
    for sign, mode_pol in ((1, H), (-1, V)):
        plus = _single_port_state(register, "A", (root_half, sign * root_half))
        after = apply_mode_transform(plus, rotation)
        fired = sum(abs(amp) ** 2 for occ, amp in after.terms.items()
                    if occ[register.index_of(ModeId("A", mode_pol))] == 1)
        analyzer.append(fired)
    checks.append(check_record(
        "bell-analyzer-psi-plus", "plus Bell state fires the H-side detector "
        "deterministically", analyzer[0], 1.0, 1e-12))
    checks.append(check_record(
        "bell-analyzer-psi-minus", "minus Bell state fires the V-side detector "
        "deterministically", analyzer[1], 1.0, 1e-12))

    worst = 1.0
    for _ in range(trials):
        x, y = _random_pair(rng)
        worst = min(worst, qubit_fidelity(encoded_after_hwp(x, y), expected(x, y)))
    if trials > 0:
        checks.append(check_record(
            "hwp-mb-random", "plate action on random single-photon auxiliary states "
            "matches the Bell rotation up to a global phase", worst, 1.0, 1e-12))
    return checks


def _optical_filter_result(alpha, beta, aux_sign, cutoff):
    register = Register(("IN", "A", "D0", "D1"), cutoff)
    root_half = 2.0 ** -0.5
    joint = _polarization_pair_state(
        register, "IN", (alpha, beta), "A", (root_half, aux_sign * root_half))
    return f_gate(joint, FGateLayout("IN", "A", ("D0", "D1")))


def verify_f_equals_tprime(rng: np.random.Generator, trials: int = 200,
                           cutoff: int = DEFAULT_CUTOFF) -> list[dict]:
    """Branch-by-branch equality of the optical parity-check filter with the
    parity-filter telegate on the encodable auxiliary domain."""
    enc = MBEncoding(("IN",), ())
    worst_prob = 0.0
    worst_fid = 1.0
    for trial in range(max(trials, 1)):
        if trial == 0:
            alpha, beta = 0.6 + 0.0j, 0.8j
        else:
            alpha, beta = _random_pair(rng)
        for aux_sign, label in ((1, PSI_PLUS), (-1, PSI_MINUS)):
            optical = _optical_filter_result(alpha, beta, aux_sign, cutoff)
            teleported = telegate_t(
                QubitState(("IN",), (alpha, beta)), "IN",
                bell_state(label, ("AV", "AH")), variant="parity_filter")
            for ob, tb in zip(optical.accepted_branches, teleported.accepted_branches):
                worst_prob = max(worst_prob, abs(ob.probability - tb.probability))
                worst_fid = min(worst_fid, qubit_fidelity(
                    mb_encode(ob.conditional_state, enc), tb.conditional_state))
    return [
        check_record(
            "filter-telegate-branch-prob", "optical filter branches and parity-filter "
            "telegate branches carry identical probabilities", worst_prob, 0.0, 1e-11),
        check_record(
            "filter-telegate-branch-state", "encoded optical filter branches equal the "
            "matching telegate branches up to a global phase", worst_fid, 1.0, 1e-11),
    ]


def verify_aux_state_equivalence(cutoff: int = DEFAULT_CUTOFF) -> list[dict]:
    """The rotated entangled pair encodes exactly to the controlled-Z
    auxiliary resource; dropping the rotation or flipping the pair sign
    kills the overlap entirely."""
    enc = MBEncoding((), ("A", "A'"))
    register = Register(("A", "A'"), cutoff)
    target = cz_aux_state(("AV", "AH", "A'V", "A'H"))
    root_half = 2.0 ** -0.5

    def pair_state(sign) -> FockKet:
        terms = {}
        for pol in (H, V):
            occ = [0] * register.n_modes
            occ[register.index_of(ModeId("A", pol))] = 1
            occ[register.index_of(ModeId("A'", pol))] = 1
            terms[tuple(occ)] = root_half * (sign if pol is V else 1.0)
        return FockKet(register, terms)

    rotated = apply_mode_transform(pair_state(1), hwp(register, "A'", ROTATION_DEG))
    fid = qubit_fidelity(mb_encode(rotated, enc), target)
    unrotated_fid = abs(overlap_q(mb_encode(pair_state(1), enc), target))
    wrong_sign = apply_mode_transform(pair_state(-1), hwp(register, "A'", ROTATION_DEG))
    wrong_sign_fid = abs(overlap_q(mb_encode(wrong_sign, enc), target))
    return [
        check_record(
            "aux-resource-equivalence", "rotating one arm of the entangled pair and "
            "encoding gives the controlled-Z auxiliary resource", fid, 1.0, 1e-12),
        check_record(
            "aux-resource-needs-rotation", "without the plate the encoded pair is "
            "orthogonal to the controlled-Z resource", unrotated_fid, 0.0, 1e-12),
        check_record(
            "aux-resource-needs-plus-pair", "starting from the minus-signed pair the "
            "encoded state is orthogonal to the resource", wrong_sign_fid, 0.0, 1e-12),
    ]


def verify_ecnot_equals_tcnot(rng: np.random.Generator, trials: int = 100,
                              cutoff: int = DEFAULT_CUTOFF) -> list[dict]:
    """End to end: encoded branches of the optical CNOT equal the branches
    of the teleportation CNOT, pairing detector outcomes with Bell outcomes
    stage by stage."""
    enc = MBEncoding(("IN", "IN'"), ())
    register = Register(("IN", "IN'"), cutoff)
    worst_prob = 0.0
    worst_fid = 1.0
    for trial in range(max(trials, 1)):
        if trial == 0:
            amps = np.array([0.5, 0.5j, -0.5, 0.5])
        else:
            amps = random_qubit_state(rng, ("IN", "IN'")).amplitudes
        optical_input = _polarization_product_from_amplitudes(register, amps)
        optical = e_cnot(optical_input)
        teleported = cnot_via_cz(QubitState(("IN", "IN'"), amps))
        for ob, tb in zip(optical.accepted_branches, teleported.accepted_branches):
            worst_prob = max(worst_prob, abs(ob.probability - 1.0 / 16.0),
                             abs(tb.probability - 1.0 / 16.0))
            worst_fid = min(worst_fid, qubit_fidelity(
                mb_encode(ob.conditional_state, enc), tb.conditional_state))
    return [
        check_record(
            "ecnot-tcnot-branch-prob", "optical CNOT and teleportation CNOT branches "
            "all carry probability 1/16", worst_prob, 0.0, 1e-10),
        check_record(
            "ecnot-tcnot-branch-state", "encoded optical CNOT branches equal the "
            "teleportation CNOT branches up to a global phase", worst_fid, 1.0, 1e-10),
    ]


def _polarization_product_from_amplitudes(register: Register, amps) -> FockKet:
    """Two-port two-photon state with the four polarization amplitudes given
    in (HH, HV, VH, VV) order on the register's two ports."""
    port1, port2 = register.spatial_labels
    terms = {}
    for index, (pol1, pol2) in enumerate(((H, H), (H, V), (V, H), (V, V))):
        occ = [0] * register.n_modes
        occ[register.index_of(ModeId(port1, pol1))] = 1
        occ[register.index_of(ModeId(port2, pol2))] = 1
        terms[tuple(occ)] = complex(amps[index])
    return FockKet(register, terms)

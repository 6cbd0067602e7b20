"""Sparse multimode Fock-space states and the machinery that moves them.

A Register fixes an ordered set of optical modes, each identified by a
spatial label and a polarization. States are sparse maps from occupation
vectors to complex amplitudes (FockKet). Passive elements act through
ModeTransform, which rewrites each creation operator a†_k into
sum_j U_jk a†_j and expands the product multinomially. Number-resolving
detection with post-selection produces Branch values whose squared norm
is the branch probability; branch states stay unnormalized so
probabilities can be read off directly, matching the 1/sqrt(2) prefactor
style of the gate algebra.

Conventions pinned here and relied on everywhere else:
  * mode order is lexicographic by (spatial label, H before V);
  * amplitudes with magnitude below 1e-14 are pruned;
  * total photon number is capped by the register cutoff (default 4);
  * detectors are ideal and number resolving.

All values are immutable after construction and every operation is a pure
function, so everything in this module is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

PRUNE_THRESHOLD = 1e-14
NORM_SLACK = 1e-12
UNITARITY_TOL = 1e-12
DEFAULT_CUTOFF = 4


class RegisterError(ValueError):
    """A mode or spatial port was used with a register it does not belong to."""


class Polarization(str, Enum):
    H = "H"
    V = "V"

    def __str__(self):
        return self.value


H = Polarization.H
V = Polarization.V


@dataclass(frozen=True, order=True)
class ModeId:
    """One optical mode: a spatial port label plus a polarization."""

    spatial_label: str
    polarization: Polarization

    def __str__(self):
        return f"{self.spatial_label}.{self.polarization.value}"

    @classmethod
    def parse(cls, text: str) -> "ModeId":
        label, _, pol = text.rpartition(".")
        if not label or pol not in ("H", "V"):
            raise ValueError(f"not a mode id: {text!r} (expected LABEL.H or LABEL.V)")
        return cls(label, Polarization(pol))


class Register:
    """Ordered mode register shared by states and transforms.

    Built either from spatial labels (each contributing an H and a V mode)
    or from an explicit mode collection (sub-registers left over after
    detection). Mode order is always lexicographic by (label, H before V).
    """

    __slots__ = ("modes", "cutoff", "_index")

    def __init__(self, spatial_labels: Sequence[str] = (), cutoff: int = DEFAULT_CUTOFF,
                 modes: Iterable[ModeId] | None = None):
        if modes is None:
            labels = tuple(spatial_labels)
            if len(set(labels)) != len(labels):
                raise RegisterError(f"duplicate spatial labels in {labels}")
            modes = [ModeId(lab, pol) for lab in labels for pol in (H, V)]
        modes = tuple(sorted(modes))
        if len(set(modes)) != len(modes):
            raise RegisterError("duplicate modes in register")
        if cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        self.modes = modes
        self.cutoff = int(cutoff)
        self._index = {m: i for i, m in enumerate(modes)}

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def spatial_labels(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(m.spatial_label for m in self.modes))

    def index_of(self, mode: ModeId) -> int:
        try:
            return self._index[mode]
        except KeyError:
            raise RegisterError(f"mode {mode} not in register {self.spatial_labels}") from None

    def port_modes(self, label: str) -> tuple[ModeId, ...]:
        found = tuple(m for m in self.modes if m.spatial_label == label)
        if not found:
            raise RegisterError(f"spatial port {label!r} not in register {self.spatial_labels}")
        return found

    def drop_modes(self, removed: Iterable[ModeId]) -> "Register":
        removed = set(removed)
        for m in removed:
            self.index_of(m)
        return Register(cutoff=self.cutoff, modes=[m for m in self.modes if m not in removed])

    def merged(self, other: "Register") -> "Register":
        if self.cutoff != other.cutoff:
            raise RegisterError("cannot merge registers with different cutoffs")
        if set(self.modes) & set(other.modes):
            raise RegisterError("registers overlap")
        return Register(cutoff=self.cutoff, modes=self.modes + other.modes)

    def __eq__(self, other):
        return (isinstance(other, Register)
                and self.modes == other.modes and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash((self.modes, self.cutoff))

    def __repr__(self):
        return f"Register({[str(m) for m in self.modes]}, cutoff={self.cutoff})"


class OccupationVector(tuple):
    """Photon counts per flat mode index; a validated tuple of ints >= 0."""

    __slots__ = ()

    def __new__(cls, counts):
        counts = tuple(counts)
        for c in counts:
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"occupation counts must be ints >= 0, got {counts}")
        return super().__new__(cls, counts)

    @property
    def total_photons(self) -> int:
        return sum(self)


class FockKet:
    """Sparse state: occupation vector -> complex amplitude.

    Unnormalized kets are allowed (norm <= 1), which is how conditional
    branch states carry their probability. Construction prunes dust below
    PRUNE_THRESHOLD and validates the register invariants.
    """

    __slots__ = ("register", "terms")

    def __init__(self, register: Register, terms: Mapping[Any, complex], *,
                 validate: bool = True):
        pruned: dict[OccupationVector, complex] = {}
        for occ, amp in terms.items():
            c = complex(amp)
            if abs(c) < PRUNE_THRESHOLD:
                continue
            if not isinstance(occ, OccupationVector):
                occ = OccupationVector(occ)
            pruned[occ] = c
        if validate:
            for occ, c in pruned.items():
                if len(occ) != register.n_modes:
                    raise ValueError(
                        f"occupation length {len(occ)} != register size {register.n_modes}")
                if occ.total_photons > register.cutoff:
                    raise ValueError(
                        f"{occ.total_photons} photons exceeds cutoff {register.cutoff}")
                if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                    raise ValueError("non-finite amplitude")
            sq = sum(abs(c) ** 2 for c in pruned.values())
            if sq > 1.0 + NORM_SLACK:
                raise ValueError(f"squared norm {sq} exceeds 1 (unnormalized kets may not exceed norm 1)")
        self.register = register
        self.terms = pruned

    def norm_squared(self) -> float:
        return sum(abs(c) ** 2 for c in self.terms.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def is_zero(self) -> bool:
        return not self.terms

    def normalized(self) -> "FockKet":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero ket")
        return FockKet(self.register,
                       {occ: amp / n for occ, amp in self.terms.items()}, validate=False)

    def amplitude(self, occ) -> complex:
        if not isinstance(occ, OccupationVector):
            occ = OccupationVector(occ)
        return self.terms.get(occ, 0.0 + 0.0j)

    def __repr__(self):
        parts = []
        for occ in sorted(self.terms):
            labels = " ".join(f"{m}={c}" for m, c in zip(self.register.modes, occ) if c)
            parts.append(f"({self.terms[occ]:.6g})|{labels or 'vac'}>")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ModeTransform:
    """Unitary over mode creation operators, stored as a full register matrix.

    touched holds the flat indices on which the matrix differs from the
    identity; the multinomial expansion only ever walks those.
    """

    register: Register
    matrix: np.ndarray
    touched: tuple[int, ...]

    def __init__(self, register: Register, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        n = register.n_modes
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} != ({n}, {n})")
        dev = np.abs(matrix.conj().T @ matrix - np.eye(n)).max()
        if dev > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3g})")
        diff = np.abs(matrix - np.eye(n))
        touched = tuple(i for i in range(n)
                        if diff[i, :].max() > 1e-15 or diff[:, i].max() > 1e-15)
        matrix.setflags(write=False)
        object.__setattr__(self, "register", register)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "touched", touched)


@dataclass(frozen=True)
class DetectionPattern:
    """Exact photon counts required on measured modes.

    required lists (mode, count) constraints; measured is the full set of
    modes consumed by the detection (traced out of the surviving state).
    """

    required: tuple[tuple[ModeId, int], ...]
    measured: frozenset[ModeId]

    def __init__(self, required: Mapping[ModeId, int],
                 measured: Iterable[ModeId] | None = None):
        req = tuple(sorted(required.items()))
        meas = frozenset(measured) if measured is not None else frozenset(required)
        for mode, count in req:
            if count < 0:
                raise ValueError("required photon counts must be >= 0")
            if mode not in meas:
                raise ValueError(f"required mode {mode} missing from measured set")
        object.__setattr__(self, "required", req)
        object.__setattr__(self, "measured", meas)


@dataclass(frozen=True)
class Branch:
    """One post-selected measurement outcome.

    conditional_state is unnormalized: probability == its squared norm.
    j is the feed-forward correction index associated with the outcome.
    For composite gates with several detection stages, outcome_label
    records the full detector pattern and j is the final stage's index.
    """

    outcome_label: str
    j: int
    conditional_state: Any
    probability: float


@dataclass(frozen=True)
class GateResult:
    """Accepted branches of a post-selected gate, corrections applied.

    success_probability is the sum of accepted branch probabilities.
    corrected_outputs_equal records whether all nonzero corrected branches
    agree up to a global phase (within 1e-10).
    """

    accepted_branches: tuple[Branch, ...]
    success_probability: float
    corrected_outputs_equal: bool


def single_photon(mode: ModeId, register: Register) -> FockKet:
    """Normalized ket with one photon in `mode` and vacuum elsewhere."""
    idx = register.index_of(mode)
    occ = tuple(1 if i == idx else 0 for i in range(register.n_modes))
    return FockKet(register, {occ: 1.0 + 0.0j})


def vacuum(register: Register) -> FockKet:
    return FockKet(register, {(0,) * register.n_modes: 1.0 + 0.0j})


def superpose(terms: Sequence[tuple[complex, FockKet]]) -> FockKet:
    """Linear combination sum_i c_i |ket_i>. Pruned, not auto-normalized."""
    if not terms:
        raise ValueError("superpose needs at least one term")
    register = terms[0][1].register
    out: dict[OccupationVector, complex] = {}
    for coeff, ket in terms:
        if ket.register != register:
            raise RegisterError("superpose requires kets on the same register")
        for occ, amp in ket.terms.items():
            out[occ] = out.get(occ, 0.0 + 0.0j) + complex(coeff) * amp
    return FockKet(register, out)


def tensor(a: FockKet, b: FockKet) -> FockKet:
    """Product state on the union register (registers must be disjoint)."""
    merged = a.register.merged(b.register)
    pos_a = [merged.index_of(m) for m in a.register.modes]
    pos_b = [merged.index_of(m) for m in b.register.modes]
    out: dict[tuple[int, ...], complex] = {}
    for occ_a, amp_a in a.terms.items():
        for occ_b, amp_b in b.terms.items():
            occ = [0] * merged.n_modes
            for p, c in zip(pos_a, occ_a):
                occ[p] = c
            for p, c in zip(pos_b, occ_b):
                occ[p] = c
            out[tuple(occ)] = amp_a * amp_b
    return FockKet(merged, out)


def apply_mode_transform(state: FockKet, u: ModeTransform) -> FockKet:
    """Apply a mode unitary by multinomial expansion over occupied modes.

    Norm is preserved to floating precision; the result is pruned.
    """
    if u.register != state.register:
        raise RegisterError("transform register differs from state register")
    touched = u.touched
    if not touched:
        return state
    tpos = {k: p for p, k in enumerate(touched)}
    columns = {k: [(tpos[j], u.matrix[j, k]) for j in touched if abs(u.matrix[j, k]) > 0.0]
               for k in touched}
    zeros = (0,) * len(touched)
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.terms.items():
        occupied = [k for k in touched if occ[k] > 0]
        if not occupied:
            out[occ] = out.get(occ, 0.0 + 0.0j) + amp
            continue
        denom = 1.0
        for k in occupied:
            denom *= math.factorial(occ[k])
        partial: dict[tuple[int, ...], complex] = {zeros: amp / math.sqrt(denom)}
        for k in occupied:
            col = columns[k]
            for _ in range(occ[k]):
                grown: dict[tuple[int, ...], complex] = {}
                for added, coeff in partial.items():
                    for p, entry in col:
                        key = added[:p] + (added[p] + 1,) + added[p + 1:]
                        grown[key] = grown.get(key, 0.0 + 0.0j) + coeff * entry
                partial = grown
        base = list(occ)
        for k in touched:
            base[k] = 0
        for added, coeff in partial.items():
            numer = 1.0
            for c in added:
                numer *= math.factorial(c)
            final = list(base)
            for p, k in enumerate(touched):
                final[k] = added[p]
            key = tuple(final)
            out[key] = out.get(key, 0.0 + 0.0j) + coeff * math.sqrt(numer)
    return FockKet(state.register, out, validate=False)


def measure_and_postselect(state: FockKet, pattern: DetectionPattern, *,
                           outcome_label: str = "", j: int = 0) -> Branch:
    """Project onto exact counts on measured modes and trace those modes out.

    Returns an unnormalized conditional state on the surviving modes; the
    branch probability is its squared norm. Zero-probability outcomes give
    a zero branch rather than an error.
    """
    register = state.register
    required = [(register.index_of(m), c) for m, c in pattern.required]
    measured_idx = sorted(register.index_of(m) for m in pattern.measured)
    constrained = {i for i, _ in required}
    free_idx = [i for i in measured_idx if i not in constrained]
    surviving_idx = [i for i in range(register.n_modes) if i not in set(measured_idx)]
    sub_register = register.drop_modes(pattern.measured)

    out: dict[tuple[int, ...], complex] = {}
    free_counts_seen: tuple[int, ...] | None = None
    for occ, amp in state.terms.items():
        if any(occ[i] != c for i, c in required):
            continue
        free_counts = tuple(occ[i] for i in free_idx)
        if free_counts_seen is None:
            free_counts_seen = free_counts
        elif free_counts != free_counts_seen:
            raise ValueError(
                "detection pattern leaves a measured mode with an indefinite count; "
                "constrain every measured mode")
        key = tuple(occ[i] for i in surviving_idx)
        out[key] = out.get(key, 0.0 + 0.0j) + amp
    conditional = FockKet(sub_register, out, validate=False)
    label = outcome_label or ",".join(f"{m}={c}" for m, c in pattern.required)
    return Branch(label, j, conditional, conditional.norm_squared())


def overlap(a: FockKet, b: FockKet) -> complex:
    """Inner product <a|b> over the shared register."""
    if a.register != b.register:
        raise RegisterError("overlap requires the same register")
    small, big = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    total = 0.0 + 0.0j
    for occ, amp in small.terms.items():
        other = big.terms.get(occ)
        if other is not None:
            if small is a:
                total += amp.conjugate() * other
            else:
                total += other.conjugate() * amp
    return total


def fidelity_up_to_global_phase(a: FockKet, b: FockKet) -> float:
    """|<a|b>| / (|a| |b|), insensitive to global phase. Errors on zero kets."""
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ValueError("fidelity is undefined for the zero ket")
    return abs(overlap(a, b)) / (na * nb)


def drop_vacuum_ports(state: FockKet, labels: Iterable[str]) -> FockKet:
    """Remove spatial ports that are vacuum in every term of the state."""
    removed: list[ModeId] = []
    for label in labels:
        removed.extend(state.register.port_modes(label))
    removed_idx = [state.register.index_of(m) for m in removed]
    for occ in state.terms:
        for i in removed_idx:
            if occ[i] != 0:
                raise ValueError(f"port {state.register.modes[i].spatial_label!r} is not vacuum")
    keep = [i for i in range(state.register.n_modes) if i not in set(removed_idx)]
    sub = state.register.drop_modes(removed)
    return FockKet(sub, {tuple(occ[i] for i in keep): amp for occ, amp in state.terms.items()},
                   validate=False)

"""Passive and active optical elements as mode transforms.

Conventions:
  * pbs transmits H and reflects V between its two spatial ports, with
    reflection coefficient +1 (real permutation on the V modes);
  * hwp at angle theta applies -i [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
    on the (H, V) pair of its port, so 22.5 degrees is the balanced
    rotation including the -i factor;
  * pockels_z is the polarization phase flip |V> -> -|V>, applied by the
    gate layer as classical feed-forward, not as a quantum control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fock_core import H, V, ModeId, ModeTransform, Register


class ElementKind(str, Enum):
    PBS = "pbs"
    HWP = "hwp"
    PC = "pc"
    SWAP = "swap"


@dataclass(frozen=True)
class ElementSpec:
    """Declarative element description; the unit of the CLI circuit format."""

    kind: ElementKind
    spatial_ports: tuple[str, ...] = ()
    modes: tuple[ModeId, ...] = ()
    angle_degrees: float = 0.0

    def __post_init__(self):
        kind = ElementKind(self.kind)
        object.__setattr__(self, "kind", kind)
        arity = {ElementKind.PBS: 2, ElementKind.HWP: 1, ElementKind.PC: 1}
        if kind is ElementKind.SWAP:
            if len(self.modes) != 2 or self.spatial_ports:
                raise ValueError("swap takes exactly 2 modes")
        elif len(self.spatial_ports) != arity[kind] or self.modes:
            raise ValueError(f"{kind.value} takes exactly {arity[kind]} spatial port(s)")

    def build(self, register: Register) -> ModeTransform:
        if self.kind is ElementKind.PBS:
            return pbs(register, *self.spatial_ports)
        if self.kind is ElementKind.HWP:
            return hwp(register, self.spatial_ports[0], self.angle_degrees)
        if self.kind is ElementKind.PC:
            return pockels_z(register, self.spatial_ports[0])
        return mode_swap(register, *self.modes)


def _identity(register: Register) -> np.ndarray:
    return np.eye(register.n_modes, dtype=complex)


def pbs(register: Register, port_a: str, port_b: str) -> ModeTransform:
    """Polarizing beam splitter: H transmits, V is exchanged between ports."""
    if port_a == port_b:
        raise ValueError("pbs needs two distinct spatial ports")
    av = register.index_of(ModeId(port_a, V))
    bv = register.index_of(ModeId(port_b, V))
    register.index_of(ModeId(port_a, H))
    register.index_of(ModeId(port_b, H))
    m = _identity(register)
    m[av, av] = m[bv, bv] = 0.0
    m[av, bv] = m[bv, av] = 1.0
    return ModeTransform(register, m)


def hwp(register: Register, port: str, theta_degrees: float) -> ModeTransform:
    """Half-wave plate at theta_degrees on the (H, V) pair of one port."""
    ih = register.index_of(ModeId(port, H))
    iv = register.index_of(ModeId(port, V))
    two_theta = math.radians(2.0 * theta_degrees)
    c, s = math.cos(two_theta), math.sin(two_theta)
    m = _identity(register)
    m[ih, ih] = -1j * c
    m[ih, iv] = -1j * s
    m[iv, ih] = -1j * s
    m[iv, iv] = 1j * c
    return ModeTransform(register, m)


def pockels_z(register: Register, port: str) -> ModeTransform:
    """Conditional phase flip element: |H> -> |H>, |V> -> -|V> on the port."""
    register.index_of(ModeId(port, H))
    iv = register.index_of(ModeId(port, V))
    m = _identity(register)
    m[iv, iv] = -1.0
    return ModeTransform(register, m)


def mode_swap(register: Register, m1: ModeId, m2: ModeId) -> ModeTransform:
    """Permutation exchanging two modes (used to route photons to detectors)."""
    if m1 == m2:
        raise ValueError("mode_swap needs two distinct modes")
    i1, i2 = register.index_of(m1), register.index_of(m2)
    m = _identity(register)
    m[i1, i1] = m[i2, i2] = 0.0
    m[i1, i2] = m[i2, i1] = 1.0
    return ModeTransform(register, m)

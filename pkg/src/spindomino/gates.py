"""Exact gate-level model of the domino amplification circuit.

A chain of CNOTs, first gate CNOT(1,2) and last CNOT(n-1,n), expands the
state of spin 1 over the whole register:

    (a|0> + b|1>) |0...0>  ->  a|0...0> + b|1...1>

so the polarization of one spin becomes the total polarization of the
cluster.  Gates are basis-index permutations, never dense matrices, which
keeps registers of ~20 spins cheap.
"""

from dataclasses import dataclass, InitVar

import numpy as np

from .basis import label_to_index, spin_mask
from .errors import ValidationError

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm complex amplitudes over the 2**n_spins computational basis."""

    amplitudes: np.ndarray
    n_spins: int
    check: InitVar[bool] = True

    def __post_init__(self, check):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if check:
            if amps.shape != (1 << self.n_spins,):
                raise ValidationError(
                    f"need 2**{self.n_spins} amplitudes, got shape {amps.shape}")
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValidationError(f"state norm is {norm!r}, not 1")

    @property
    def dim(self) -> int:
        return 1 << self.n_spins

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(label: str) -> StateVector:
    """Computational basis state from a '0'/'1' label, spin 1 leftmost."""
    index = label_to_index(label)
    amps = np.zeros(1 << len(label), dtype=complex)
    amps[index] = 1.0
    return StateVector(amps, len(label))


def prepare_initial(a: complex, b: complex, n_spins: int) -> StateVector:
    """(a|0> + b|1>) on spin 1, all other spins up."""
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > NORM_TOL:
        raise ValidationError("|a|^2 + |b|^2 must equal 1")
    if n_spins < 1:
        raise ValidationError("n_spins must be >= 1")
    amps = np.zeros(1 << n_spins, dtype=complex)
    amps[0] = a
    amps[1 << (n_spins - 1)] = b
    return StateVector(amps, n_spins)


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Flip the target spin on every basis state whose control spin is down."""
    n = state.n_spins
    cmask = spin_mask(n, control)
    tmask = spin_mask(n, target)
    if control == target:
        raise ValidationError("control and target must differ")
    idx = np.arange(state.dim)
    perm = np.where(idx & cmask, idx ^ tmask, idx)
    return StateVector(state.amplitudes[perm], n, check=False)


def domino_circuit(state: StateVector) -> StateVector:
    """Apply CNOT(1,2), CNOT(2,3), ..., CNOT(n-1,n) in that order."""
    if state.n_spins < 2:
        raise ValidationError("the domino circuit needs at least 2 spins")
    for i in range(1, state.n_spins):
        state = apply_cnot(state, i, i + 1)
    return state


def fidelity(x: StateVector, y: StateVector) -> float:
    """|<x|y>|^2."""
    if x.dim != y.dim:
        raise ValidationError(f"dimension mismatch: {x.dim} vs {y.dim}")
    return float(abs(np.vdot(x.amplitudes, y.amplitudes)) ** 2)

"""Spin-chain data model and Hamiltonian assembly.

The chain is a set of spin-1/2 nuclei in a shared rotating frame.  Each spin
has a chemical-shift offset (Hz) and the spins are pairwise J-coupled (Hz,
full symmetric matrix so that weak couplings beyond nearest neighbors are
representable).  The static Hamiltonian is

    H_static = sum_i pi * offset_i * sigma_z_i
             + sum_{i<j} (pi/2) * J_ij * sigma_z_i sigma_z_j          (zz form)

with the zz coupling optionally replaced by the full isotropic form
(J/4)(XX + YY + ZZ).  A transverse multi-tone drive adds

    H_drive(t) = 2*pi * sum_k a_k cos(2*pi*nu_k*t + phi_k) * sum_i sigma_x_i

i.e. every harmonic drives every spin through one global coil; selectivity
comes from resonance alone.  All configuration values are Hz (phases in
radians); operators are rad/s, conversion factor exactly 2*pi.  Under this
convention a resonant tone of amplitude ``a`` Hz nutates a single spin as
<sigma_z>(t) = cos(2*pi*a*t) once the counter-rotating component is dropped.
"""

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .basis import z_table
from .errors import UnsupportedFormError, ValidationError

TWO_PI = 2.0 * np.pi

COUPLING_FORMS = ("zz", "isotropic")


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """Static description of the spin chain.

    Args:
        n_spins: number of spins, >= 1.
        offsets: rotating-frame offset of each spin in Hz, length n_spins.
        couplings: symmetric (n_spins, n_spins) J-coupling matrix in Hz,
            zero diagonal.
        coupling_form: "zz" (secular truncation, default) or "isotropic".
    """

    n_spins: int
    offsets: np.ndarray
    couplings: np.ndarray
    coupling_form: str = "zz"

    def __post_init__(self):
        n = self.n_spins
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError(f"n_spins must be a positive integer, got {n!r}")
        offsets = np.asarray(self.offsets, dtype=float)
        couplings = np.asarray(self.couplings, dtype=float)
        if offsets.shape != (n,):
            raise ValidationError(
                f"offsets must have length {n}, got shape {offsets.shape}")
        if couplings.shape != (n, n):
            raise ValidationError(
                f"couplings must be {n}x{n}, got shape {couplings.shape}")
        scale = max(1.0, float(np.abs(couplings).max()) if couplings.size else 1.0)
        if not np.allclose(couplings, couplings.T, rtol=0.0, atol=1e-12 * scale):
            raise ValidationError("couplings matrix must be symmetric")
        if np.any(np.abs(np.diag(couplings)) > 0.0):
            raise ValidationError("couplings matrix must have zero diagonal")
        if self.coupling_form not in COUPLING_FORMS:
            raise ValidationError(
                f"coupling_form must be one of {COUPLING_FORMS}, got {self.coupling_form!r}")
        offsets.setflags(write=False)
        couplings.setflags(write=False)
        object.__setattr__(self, "n_spins", int(n))
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "couplings", couplings)

    @property
    def dim(self) -> int:
        return 1 << self.n_spins


def coupling_matrix(n_spins: int, pairs: Mapping[tuple, float]) -> np.ndarray:
    """Build a symmetric coupling matrix from {(i, j): J_ij} with 1-based spins."""
    j = np.zeros((n_spins, n_spins))
    for (a, b), value in pairs.items():
        if not (1 <= a <= n_spins and 1 <= b <= n_spins) or a == b:
            raise ValidationError(f"bad coupling pair ({a}, {b}) for {n_spins} spins")
        j[a - 1, b - 1] = value
        j[b - 1, a - 1] = value
    return j


@dataclass(frozen=True)
class Harmonic:
    """One drive tone: frequency and amplitude in Hz, phase in radians."""

    frequency: float
    amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class DriveSpec:
    """A list of transverse drive harmonics; empty means free evolution."""

    harmonics: tuple = ()

    def __post_init__(self):
        harmonics = tuple(
            h if isinstance(h, Harmonic) else Harmonic(*h) for h in self.harmonics)
        for h in harmonics:
            if h.amplitude < 0.0:
                raise ValidationError(f"harmonic amplitude must be >= 0, got {h.amplitude}")
        object.__setattr__(self, "harmonics", harmonics)

    @classmethod
    def for_domino(cls, spec: "ChainSpec", amplitude: float, phase: float = 0.0) -> "DriveSpec":
        """One tone per domino transition (spins 2..n), shared amplitude."""
        return cls(tuple(Harmonic(f, amplitude, phase) for f in domino_tones(spec)))

    def max_frequency(self) -> float:
        return max((abs(h.frequency) for h in self.harmonics), default=0.0)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian operator split into a real diagonal and a sparse off-diagonal part.

    Either part may be None (absent).  ``apply`` never materializes the dense
    matrix, so structured terms (diagonal zz part, sigma_x sums) stay cheap.
    """

    dim: int
    diag: np.ndarray | None = None
    offdiag: sp.csr_matrix | None = None

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-free H @ vec."""
        if self.diag is not None:
            out = self.diag * vec
        else:
            out = np.zeros_like(vec, dtype=complex)
        if self.offdiag is not None:
            out = out + self.offdiag @ vec
        return out

    def to_sparse(self) -> sp.csr_matrix:
        mat = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        if self.diag is not None:
            mat = mat + sp.diags(self.diag.astype(complex), format="csr")
        if self.offdiag is not None:
            mat = mat + self.offdiag
        return mat

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        if self.diag is not None:
            out[np.diag_indices(self.dim)] = self.diag
        if self.offdiag is not None:
            out += self.offdiag.toarray()
        return out

    @property
    def is_diagonal(self) -> bool:
        return self.offdiag is None or self.offdiag.nnz == 0


def transverse_field_sum(n_spins: int) -> sp.csr_matrix:
    """Sparse sum_i sigma_x_i: one bit-flip permutation matrix per spin."""
    dim = 1 << n_spins
    idx = np.arange(dim)
    rows = np.concatenate([idx ^ (1 << k) for k in range(n_spins)])
    cols = np.tile(idx, n_spins)
    data = np.ones(n_spins * dim)
    return sp.csr_matrix((data, (rows, cols)), shape=(dim, dim), dtype=complex)


def static_diagonal(spec: ChainSpec) -> np.ndarray:
    """Diagonal of the zz-form static Hamiltonian in rad/s (also the Zeeman+ZZ
    part of the isotropic form)."""
    z = z_table(spec.n_spins)
    diag = np.pi * (spec.offsets @ z)
    for i in range(spec.n_spins):
        for j in range(i + 1, spec.n_spins):
            jij = spec.couplings[i, j]
            if jij != 0.0:
                diag = diag + (np.pi / 2.0) * jij * z[i] * z[j]
    return diag


def _flip_flop_offdiag(spec: ChainSpec) -> sp.csr_matrix:
    """Sparse (pi/2)*J_ij*(XX + YY) part of the isotropic coupling."""
    n, dim = spec.n_spins, spec.dim
    idx = np.arange(dim)
    rows, cols, data = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            jij = spec.couplings[i, j]
            if jij == 0.0:
                continue
            mi, mj = 1 << (n - 1 - i), 1 << (n - 1 - j)
            # XX + YY connects basis states whose bits i and j differ.
            mask = ((idx & mi) != 0) ^ ((idx & mj) != 0)
            src = idx[mask]
            rows.append(src ^ mi ^ mj)
            cols.append(src)
            data.append(np.full(src.size, np.pi * jij))
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    return sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim), dtype=complex)


def build_static_hamiltonian(spec: ChainSpec) -> HermitianOperator:
    """Zeeman + coupling Hamiltonian in rad/s; diagonal for the zz form."""
    diag = static_diagonal(spec)
    if spec.coupling_form == "zz":
        return HermitianOperator(spec.dim, diag=diag)
    return HermitianOperator(spec.dim, diag=diag, offdiag=_flip_flop_offdiag(spec))


def drive_envelope(drive: DriveSpec, t) -> float | np.ndarray:
    """Scalar coefficient of sum_i sigma_x_i at time ``t``, in rad/s.

    Vectorized over ``t``.  The drive is a plain cosine in the rotating
    frame: no per-tone rotating-wave approximation is applied, so tones at
    different frequencies beat against each other as they physically would.
    """
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for h in drive.harmonics:
        total = total + h.amplitude * np.cos(TWO_PI * h.frequency * t + h.phase)
    return TWO_PI * total if total.shape else float(TWO_PI * total)


def drive_envelope_step_average(drive: DriveSpec, t: float, h: float) -> float:
    """Exact average of the drive envelope over [t, t + h], in rad/s.

    Equals the midpoint envelope with a per-tone sinc(nu*h) factor; using it
    in the exponential stepper removes the (2*pi*nu*h)^2/24 amplitude bias
    that plain midpoint sampling of a fast cosine would accumulate.
    """
    t_mid = t + 0.5 * h
    total = 0.0
    for hk in drive.harmonics:
        total += (hk.amplitude * np.cos(TWO_PI * hk.frequency * t_mid + hk.phase)
                  * np.sinc(hk.frequency * h))
    return TWO_PI * total


def drive_hamiltonian_at(spec: ChainSpec, drive: DriveSpec, t: float) -> HermitianOperator:
    """Transverse drive Hamiltonian evaluated at time ``t`` (rad/s)."""
    if t < 0.0:
        raise ValidationError(f"time must be >= 0, got {t}")
    coeff = drive_envelope(drive, t)
    if not drive.harmonics:
        return HermitianOperator(spec.dim)
    return HermitianOperator(spec.dim, offdiag=coeff * transverse_field_sum(spec.n_spins))


def conditional_resonance(spec: ChainSpec, i: int, neighbor_states: Mapping[int, str]) -> float:
    """Transition frequency (Hz) of spin ``i`` given its partners' states.

    ``neighbor_states`` maps each coupled spin j != i to "up" or "down".
    Returns offset_i + sum_j (J_ij / 2) * z_j with z = +1 for up, -1 for
    down; in the zz form this is exactly the energy gap, over 2*pi, between
    the spin-i-up and spin-i-down basis states with the given partners.
    """
    if spec.coupling_form != "zz":
        raise UnsupportedFormError(
            "conditional_resonance is exact only for the zz coupling form")
    if not 1 <= i <= spec.n_spins:
        raise ValidationError(f"spin index {i} out of range 1..{spec.n_spins}")
    nu = float(spec.offsets[i - 1])
    for j in range(1, spec.n_spins + 1):
        jij = spec.couplings[i - 1, j - 1]
        if j == i or jij == 0.0:
            continue
        state = neighbor_states.get(j)
        if state == "up":
            z = 1.0
        elif state == "down":
            z = -1.0
        elif state is None:
            raise ValidationError(
                f"spin {j} is coupled to spin {i} but has no assigned state")
        else:
            raise ValidationError(f"neighbor state must be 'up' or 'down', got {state!r}")
        nu += 0.5 * jij * z
    return nu


def domino_tones(spec: ChainSpec) -> np.ndarray:
    """The n-1 drive frequencies (Hz) that let the polarization wave advance.

    Tone i-1 (for spin i = 2..n) is the resonance of spin i when its left
    neighbor i-1 is down and every other coupled spin is up: the transition
    that becomes allowed once the wavefront reaches spin i-1.
    """
    if spec.n_spins < 2:
        raise ValidationError("domino tones need at least 2 spins")
    tones = []
    for i in range(2, spec.n_spins + 1):
        states = {j: "up" for j in range(1, spec.n_spins + 1) if j != i}
        states[i - 1] = "down"
        tones.append(conditional_resonance(spec, i, states))
    return np.asarray(tones)

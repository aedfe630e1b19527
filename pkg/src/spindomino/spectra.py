"""Population-state models and linear-response stick spectra.

Spectra are computed directly from basis-state populations and single-flip
transition matrix elements (a stick model), not from a simulated FID plus
Fourier transform: the two agree in linear response and the stick model is
far cheaper for state diagnostics.

Sign and axis conventions
-------------------------
* Deviation populations: ``p_b = -E_b / scale`` with ``E_b`` the static
  eigen-energies and ``scale`` chosen so that max|p| = 1.  Only ratios are
  physical; the overall normalization is arbitrary.
* Each stick sits at the transition frequency of the flipped spin given its
  partners' states: for the pair (a = spin up, b = spin down) the frequency
  is (E_a - E_b)/(2*pi), identical to ``conditional_resonance``, and the
  intensity is p_a - p_b.  Flipping a neighbor with J > 0 therefore moves a
  line toward *lower* frequency by exactly J.
* CSV output stores plain increasing Hz.  The demo plots draw frequency
  increasing left-to-right, so the displacement above appears as a shift to
  the left.
"""

from dataclasses import dataclass

import numpy as np

from .basis import index_to_label, spin_mask
from .chain import ChainSpec, static_diagonal, TWO_PI
from .errors import UnsupportedFormError, ValidationError
from .gates import StateVector

INTENSITY_FLOOR = 1e-12
DEFAULT_FWHM_HZ = 1.0


@dataclass(frozen=True, eq=False)
class PopulationVector:
    """Real (deviation) populations over the 2**n_spins basis states."""

    populations: np.ndarray
    n_spins: int

    def __post_init__(self):
        pops = np.asarray(self.populations, dtype=float)
        if pops.shape != (1 << self.n_spins,):
            raise ValidationError(
                f"need 2**{self.n_spins} populations, got shape {pops.shape}")
        object.__setattr__(self, "populations", pops)


@dataclass(frozen=True)
class StickLine:
    frequency: float
    intensity: float
    from_label: str
    to_label: str


@dataclass(frozen=True)
class StickSpectrum:
    """Delta-function transition lines before lineshape broadening."""

    lines: tuple


def thermal_populations(spec: ChainSpec) -> PopulationVector:
    """High-temperature deviation populations, max|p| normalized to 1."""
    energies = static_diagonal(spec)
    scale = float(np.abs(energies).max())
    if scale == 0.0:
        return PopulationVector(np.zeros(spec.dim), spec.n_spins)
    return PopulationVector(-energies / scale, spec.n_spins)


def pseudopure_ground(spec: ChainSpec) -> PopulationVector:
    """Thermal populations with everything but the all-up state equalized.

    Models the outcome of partial saturation: the all-up population is
    trapped while the remaining 2**n - 1 populations are replaced by their
    arithmetic mean.  The resulting deviation state responds like the pure
    all-up state in linear-response measurements.
    """
    if spec.coupling_form != "zz":
        raise UnsupportedFormError(
            "pseudopure preparation assumes basis states are eigenstates (zz form)")
    pops = thermal_populations(spec).populations.copy()
    if spec.dim > 1:
        pops[1:] = pops[1:].mean()
    return PopulationVector(pops, spec.n_spins)


def flip_populations(pops: PopulationVector, i: int) -> PopulationVector:
    """Ideal pi pulse on spin ``i``: swap populations across that bit."""
    mask = spin_mask(pops.n_spins, i)
    perm = np.arange(1 << pops.n_spins) ^ mask
    return PopulationVector(pops.populations[perm], pops.n_spins)


def populations_from_state(state: StateVector) -> PopulationVector:
    """|psi|^2 of a pure state as a population vector."""
    return PopulationVector(np.abs(state.amplitudes) ** 2, state.n_spins)


def stick_spectrum(spec: ChainSpec, pops: PopulationVector) -> StickSpectrum:
    """Single-quantum stick spectrum of a diagonal (population) state.

    One candidate line per ordered basis pair (a -> b) that differs in a
    single spin, oriented with the flipped spin up in ``a``; the transition
    matrix element |<b| sum_i sigma_x_i |a>|^2 is exactly 1 for such pairs.
    Lines below the intensity floor are pruned.
    """
    if spec.coupling_form != "zz":
        raise UnsupportedFormError(
            "stick spectra need the zz form (eigenbasis = computational basis)")
    if pops.n_spins != spec.n_spins:
        raise ValidationError("population vector does not match the chain")
    energies = static_diagonal(spec)
    p = pops.populations
    n = spec.n_spins
    lines = []
    for i in range(1, n + 1):
        mask = spin_mask(n, i)
        ups = np.flatnonzero((np.arange(spec.dim) & mask) == 0)
        for a in ups:
            b = a | mask
            intensity = p[a] - p[b]
            if abs(intensity) < INTENSITY_FLOOR:
                continue
            lines.append(StickLine(
                frequency=float((energies[a] - energies[b]) / TWO_PI),
                intensity=float(intensity),
                from_label=index_to_label(a, n),
                to_label=index_to_label(b, n)))
    return StickSpectrum(tuple(lines))


def broadened_spectrum(sticks: StickSpectrum, fwhm: float,
                       grid: tuple) -> tuple[np.ndarray, np.ndarray]:
    """Sum of Lorentzians over a uniform frequency grid.

    Each line contributes intensity * (w/2)^2 / ((f - f0)^2 + (w/2)^2), so a
    stick's peak height equals its intensity.  ``grid`` is (f_min, f_max,
    n_points); returns (frequencies, amplitudes).
    """
    if fwhm <= 0.0:
        raise ValidationError(f"fwhm must be positive, got {fwhm}")
    f_min, f_max, n_points = grid
    if not (n_points >= 2 and f_min < f_max):
        raise ValidationError(f"bad frequency grid {grid!r}")
    freqs = np.linspace(f_min, f_max, int(n_points))
    amps = np.zeros_like(freqs)
    half = 0.5 * fwhm
    for line in sticks.lines:
        amps += line.intensity * half**2 / ((freqs - line.frequency) ** 2 + half**2)
    return freqs, amps


def default_grid(sticks: StickSpectrum, fwhm: float,
                 n_points: int = 2000) -> tuple[float, float, int]:
    """A grid covering every line with a 20*fwhm margin on both sides."""
    if not sticks.lines:
        return (-1.0, 1.0, n_points)
    lo = min(line.frequency for line in sticks.lines) - 20.0 * fwhm
    hi = max(line.frequency for line in sticks.lines) + 20.0 * fwhm
    return (lo, hi, n_points)


def write_stick_csv(sticks: StickSpectrum, path) -> None:
    """CSV with header freq_hz,intensity,from,to."""
    with open(path, "w") as fh:
        fh.write("freq_hz,intensity,from,to\n")
        for line in sticks.lines:
            fh.write(f"{line.frequency:.15g},{line.intensity:.15g},"
                     f"{line.from_label},{line.to_label}\n")


def write_curve_csv(freqs: np.ndarray, amps: np.ndarray, path) -> None:
    """CSV with header freq_hz,amplitude."""
    with open(path, "w") as fh:
        fh.write("freq_hz,amplitude\n")
        for f, a in zip(freqs, amps):
            fh.write(f"{f:.15g},{a:.15g}\n")

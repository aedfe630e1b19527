"""Simulator of stimulated polarization waves in driven J-coupled spin chains.

Four layers:

* :mod:`spindomino.gates` — exact CNOT-chain amplifier on state vectors.
* :mod:`spindomino.chain` — chain/drive specs, Hamiltonians, domino tones.
* :mod:`spindomino.propagate` — driven time evolution and polarizations.
* :mod:`spindomino.spectra` — population states and stick/broadened spectra.

``spindomino.cli`` exposes the same capabilities as a command-line tool.
"""

from .chain import (ChainSpec, DriveSpec, Harmonic, HermitianOperator,
                    build_static_hamiltonian, conditional_resonance,
                    coupling_matrix, domino_tones, drive_envelope,
                    drive_hamiltonian_at, transverse_field_sum)
from .config import (ExperimentConfig, config_from_dict, config_to_dict,
                     load_config, serialize_config)
from .errors import IntegrationAccuracyError, UnsupportedFormError, ValidationError
from .gates import (StateVector, apply_cnot, basis_state, domino_circuit,
                    fidelity, prepare_initial)
from .propagate import (SimParams, Trajectory, amplification_coefficient,
                        default_dt, evolve, flip_spin, max_inversion_time,
                        polarization, write_trajectory_csv)
from .spectra import (PopulationVector, StickLine, StickSpectrum,
                      broadened_spectrum, flip_populations,
                      populations_from_state, pseudopure_ground,
                      stick_spectrum, thermal_populations)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec", "DriveSpec", "Harmonic", "HermitianOperator",
    "build_static_hamiltonian", "conditional_resonance", "coupling_matrix",
    "domino_tones", "drive_envelope", "drive_hamiltonian_at",
    "transverse_field_sum",
    "ExperimentConfig", "config_from_dict", "config_to_dict", "load_config",
    "serialize_config",
    "IntegrationAccuracyError", "UnsupportedFormError", "ValidationError",
    "StateVector", "apply_cnot", "basis_state", "domino_circuit", "fidelity",
    "prepare_initial",
    "SimParams", "Trajectory", "amplification_coefficient", "default_dt",
    "evolve", "flip_spin", "max_inversion_time", "polarization",
    "write_trajectory_csv",
    "PopulationVector", "StickLine", "StickSpectrum", "broadened_spectrum",
    "flip_populations", "populations_from_state", "pseudopure_ground",
    "stick_spectrum", "thermal_populations",
    "__version__",
]

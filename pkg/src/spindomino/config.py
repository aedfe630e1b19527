"""Experiment configuration: JSON schema, validation, canonical serialization.

Schema (version 1):

    {
      "schema_version": 1,
      "description": "optional free text",
      "chain": {
        "n_spins": 4,
        "offsets": [150.0, 480.0, 810.0, 1150.0],        # Hz
        "couplings": [[0, 52, ...], ...],                 # Hz, symmetric
        "coupling_form": "zz"                             # default "zz"
      },
      "drive": {"auto_domino": {"amplitude": 7.5, "phase": 0.0}}
            or {"harmonics": [{"frequency": f, "amplitude": a, "phase": p}]},
      "sim": {
        "t_end": 0.15,                                    # s
        "dt": null,              # default 1/(50 * fastest frequency)
        "sample_every": 1,
        "method": "expm_midpoint"
      },
      "initial": "pseudopure_ground" or a basis label like "0000",
      "trigger": true,           # flip spin 1 at t = 0
      "outputs": "out",          # directory for CSV/JSON artifacts
      "spectrum": {"fwhm": 1.0,  # Hz, optional
                   "grid": {"f_min": ..., "f_max": ..., "n_points": ...}}
    }

"initial": "pseudopure_ground" selects the pure all-up state as the
propagation input; it is the pure-state proxy whose linear-response behavior
the pseudopure preparation mimics.  Exactly one of "harmonics" /
"auto_domino" must be present in "drive"; auto_domino derives one tone per
domino transition from the chain itself.

Validation errors carry the JSON field path (e.g. ``sim.dt``).
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import label_to_index
from .chain import ChainSpec, DriveSpec, Harmonic
from .errors import ValidationError
from .propagate import SimParams, default_dt
from .spectra import DEFAULT_FWHM_HZ

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema_version", "description", "chain", "drive", "sim",
             "initial", "trigger", "outputs", "spectrum"}


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """A validated experiment: chain, drive, integration grid, initial state."""

    chain: ChainSpec
    drive: DriveSpec
    sim: SimParams
    initial: str
    trigger: bool
    outputs: str
    auto_domino: dict | None = None   # {"amplitude": .., "phase": ..} if derived
    fwhm: float = DEFAULT_FWHM_HZ
    grid: tuple | None = None
    description: str | None = None

    def initial_label(self) -> str:
        if self.initial == "pseudopure_ground":
            return "0" * self.chain.n_spins
        return self.initial


def _fail(path: str, message: str):
    raise ValidationError(f"{path}: {message}")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        _fail(f"{path}.{key}" if path else key, "missing required field")
    return mapping[key]


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    return float(value)


def _parse_chain(raw, path="chain") -> ChainSpec:
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    extra = set(raw) - {"n_spins", "offsets", "couplings", "coupling_form"}
    if extra:
        _fail(path, f"unknown fields {sorted(extra)}")
    n = _require(raw, "n_spins", path)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        _fail(f"{path}.n_spins", f"expected a positive integer, got {n!r}")
    offsets = _require(raw, "offsets", path)
    couplings = _require(raw, "couplings", path)
    form = raw.get("coupling_form", "zz")
    try:
        return ChainSpec(n_spins=n, offsets=np.asarray(offsets, dtype=float),
                         couplings=np.asarray(couplings, dtype=float),
                         coupling_form=form)
    except (ValidationError, TypeError, ValueError) as err:
        _fail(path, str(err))


def _parse_drive(raw, chain: ChainSpec, path="drive"):
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    has_harmonics = "harmonics" in raw
    has_auto = "auto_domino" in raw
    if has_harmonics == has_auto:
        _fail(path, "exactly one of 'harmonics' or 'auto_domino' is required")
    extra = set(raw) - {"harmonics", "auto_domino"}
    if extra:
        _fail(path, f"unknown fields {sorted(extra)}")
    if has_auto:
        auto = raw["auto_domino"]
        if not isinstance(auto, dict) or "amplitude" not in auto:
            _fail(f"{path}.auto_domino", "requires an 'amplitude' field")
        amplitude = _as_number(auto["amplitude"], f"{path}.auto_domino.amplitude")
        phase = _as_number(auto.get("phase", 0.0), f"{path}.auto_domino.phase")
        try:
            drive = DriveSpec.for_domino(chain, amplitude, phase)
        except ValidationError as err:
            _fail(f"{path}.auto_domino", str(err))
        return drive, {"amplitude": amplitude, "phase": phase}
    harmonics = raw["harmonics"]
    if not isinstance(harmonics, list):
        _fail(f"{path}.harmonics", "expected a list")
    parsed = []
    for k, h in enumerate(harmonics):
        hpath = f"{path}.harmonics[{k}]"
        if not isinstance(h, dict):
            _fail(hpath, "expected an object")
        extra = set(h) - {"frequency", "amplitude", "phase"}
        if extra:
            _fail(hpath, f"unknown fields {sorted(extra)}")
        freq = _as_number(_require(h, "frequency", hpath), f"{hpath}.frequency")
        amp = _as_number(_require(h, "amplitude", hpath), f"{hpath}.amplitude")
        if amp < 0.0:
            _fail(f"{hpath}.amplitude", f"must be >= 0, got {amp}")
        phase = _as_number(h.get("phase", 0.0), f"{hpath}.phase")
        parsed.append(Harmonic(freq, amp, phase))
    return DriveSpec(tuple(parsed)), None


def _parse_sim(raw, chain: ChainSpec, drive: DriveSpec, path="sim") -> SimParams:
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    extra = set(raw) - {"t_end", "dt", "sample_every", "method"}
    if extra:
        _fail(path, f"unknown fields {sorted(extra)}")
    t_end = _as_number(_require(raw, "t_end", path), f"{path}.t_end")
    if t_end <= 0.0:
        _fail(f"{path}.t_end", f"must be positive, got {t_end}")
    dt_raw = raw.get("dt")
    if dt_raw is None:
        dt = min(default_dt(chain, drive), t_end)
    else:
        dt = _as_number(dt_raw, f"{path}.dt")
        if not 0.0 < dt <= t_end:
            _fail(f"{path}.dt", f"must satisfy 0 < dt <= t_end, got {dt}")
    sample_every = raw.get("sample_every", 1)
    if isinstance(sample_every, bool) or not isinstance(sample_every, int) or sample_every < 1:
        _fail(f"{path}.sample_every", f"expected an integer >= 1, got {sample_every!r}")
    method = raw.get("method", "expm_midpoint")
    try:
        return SimParams(t_end=t_end, dt=dt, sample_every=sample_every, method=method)
    except ValidationError as err:
        _fail(path, str(err))


def _parse_spectrum(raw, path="spectrum"):
    if raw is None:
        return DEFAULT_FWHM_HZ, None
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    extra = set(raw) - {"fwhm", "grid"}
    if extra:
        _fail(path, f"unknown fields {sorted(extra)}")
    fwhm = _as_number(raw.get("fwhm", DEFAULT_FWHM_HZ), f"{path}.fwhm")
    if fwhm <= 0.0:
        _fail(f"{path}.fwhm", f"must be positive, got {fwhm}")
    grid = None
    if "grid" in raw:
        g = raw["grid"]
        if not isinstance(g, dict) or set(g) != {"f_min", "f_max", "n_points"}:
            _fail(f"{path}.grid", "expected an object with f_min, f_max, n_points")
        f_min = _as_number(g["f_min"], f"{path}.grid.f_min")
        f_max = _as_number(g["f_max"], f"{path}.grid.f_max")
        n_points = g["n_points"]
        if isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < 2:
            _fail(f"{path}.grid.n_points", f"expected an integer >= 2, got {n_points!r}")
        if not f_min < f_max:
            _fail(f"{path}.grid", f"f_min must be below f_max, got {f_min} >= {f_max}")
        grid = (f_min, f_max, n_points)
    return fwhm, grid


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a parsed JSON object and apply defaults."""
    if not isinstance(raw, dict):
        _fail("<root>", "expected a JSON object")
    extra = set(raw) - _TOP_KEYS
    if extra:
        _fail("<root>", f"unknown fields {sorted(extra)}")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    chain = _parse_chain(_require(raw, "chain", ""))
    drive, auto = _parse_drive(_require(raw, "drive", ""), chain)
    sim = _parse_sim(_require(raw, "sim", ""), chain, drive)

    initial = _require(raw, "initial", "")
    if not isinstance(initial, str):
        _fail("initial", f"expected a string, got {initial!r}")
    if initial != "pseudopure_ground":
        try:
            label_to_index(initial)
        except ValidationError:
            _fail("initial", f"expected 'pseudopure_ground' or a 0/1 label, got {initial!r}")
        if len(initial) != chain.n_spins:
            _fail("initial", f"label length {len(initial)} != n_spins {chain.n_spins}")

    trigger = raw.get("trigger", False)
    if not isinstance(trigger, bool):
        _fail("trigger", f"expected a boolean, got {trigger!r}")
    outputs = raw.get("outputs", "out")
    if not isinstance(outputs, str) or not outputs:
        _fail("outputs", f"expected a nonempty string, got {outputs!r}")
    description = raw.get("description")
    if description is not None and not isinstance(description, str):
        _fail("description", f"expected a string, got {description!r}")
    fwhm, grid = _parse_spectrum(raw.get("spectrum"))

    return ExperimentConfig(chain=chain, drive=drive, sim=sim, initial=initial,
                            trigger=trigger, outputs=outputs, auto_domino=auto,
                            fwhm=fwhm, grid=grid, description=description)


def load_config(path) -> ExperimentConfig:
    """Load and validate a JSON experiment config file."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"{path}: not valid JSON ({err})") from err
    return config_from_dict(raw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical JSON object for a config (defaults materialized)."""
    out = {
        "schema_version": SCHEMA_VERSION,
        "chain": {
            "n_spins": cfg.chain.n_spins,
            "offsets": [float(x) for x in cfg.chain.offsets],
            "couplings": [[float(x) for x in row] for row in cfg.chain.couplings],
            "coupling_form": cfg.chain.coupling_form,
        },
        "sim": {
            "t_end": cfg.sim.t_end,
            "dt": cfg.sim.dt,
            "sample_every": cfg.sim.sample_every,
            "method": cfg.sim.method,
        },
        "initial": cfg.initial,
        "trigger": cfg.trigger,
        "outputs": cfg.outputs,
        "spectrum": {"fwhm": cfg.fwhm},
    }
    if cfg.auto_domino is not None:
        out["drive"] = {"auto_domino": dict(cfg.auto_domino)}
    else:
        out["drive"] = {"harmonics": [
            {"frequency": h.frequency, "amplitude": h.amplitude, "phase": h.phase}
            for h in cfg.drive.harmonics]}
    if cfg.grid is not None:
        out["spectrum"]["grid"] = {
            "f_min": cfg.grid[0], "f_max": cfg.grid[1], "n_points": cfg.grid[2]}
    if cfg.description is not None:
        out["description"] = cfg.description
    return out


def serialize_config(cfg: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"

"""Command-line runner: simulations, spectra, tone tables, gate checks.

One binary with four subcommands:

    spindomino simulate  --config cfg.json [--out DIR] [--paired]
                         [--sweep-t-end start:stop:steps] [--print-config]
    spindomino spectrum  --config cfg.json --state SELECTOR [--out DIR]
    spindomino tones     --config cfg.json [--json]
    spindomino gate-check --n-spins N [--trials K] [--seed S]

Exit codes: 0 success, 2 validation error, 3 numerical-accuracy failure.
"""

import argparse
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from .chain import conditional_resonance, domino_tones
from .config import ExperimentConfig, load_config, serialize_config
from .errors import IntegrationAccuracyError, ValidationError
from .gates import basis_state, domino_circuit, fidelity, prepare_initial
from .propagate import (Trajectory, amplification_coefficient, evolve,
                        flip_spin, max_inversion_time, write_trajectory_csv)
from .spectra import (broadened_spectrum, default_grid, flip_populations,
                      populations_from_state, pseudopure_ground,
                      stick_spectrum, thermal_populations, write_curve_csv,
                      write_stick_csv)

GATE_CHECK_BOUND = 1.0 - 1e-12

STATE_SELECTORS = ("thermal", "pseudopure", "pseudopure_flipped")


def _initial_state(cfg: ExperimentConfig, triggered: bool):
    state = basis_state(cfg.initial_label())
    if triggered:
        state = flip_spin(state, 1)
    return state


def _run(cfg: ExperimentConfig, triggered: bool) -> Trajectory:
    return evolve(_initial_state(cfg, triggered), cfg.chain, cfg.drive, cfg.sim)


def _run_summary(traj: Trajectory) -> dict:
    return {
        "amplification_coefficient": amplification_coefficient(traj),
        "time_of_max_inversion_s": max_inversion_time(traj),
        "initial_total_polarization": float(traj.total[0]),
        "min_total_polarization": float(traj.total.min()),
        "final_total_polarization": float(traj.total[-1]),
    }


def cmd_simulate(cfg: ExperimentConfig, out_dir: Path, paired: bool,
                 sweep: tuple | None) -> int:
    """Run the configured experiment (and its untriggered twin with --paired)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    variants = [True, False] if paired else [cfg.trigger]
    summary = {"schema_version": 1, "runs": {}}
    if sweep is not None:
        start, stop, steps = sweep
        t_ends = np.linspace(start, stop, steps)
        for triggered in variants:
            name = "triggered" if triggered else "untriggered"
            finals = _sweep_finals(cfg, triggered, t_ends)
            path = out_dir / f"sweep_{name}.csv"
            _write_sweep_csv(finals, t_ends, cfg.chain.n_spins, path)
            totals = finals.sum(axis=0)
            summary["runs"][name] = {
                "amplification_coefficient": float(np.abs(totals - totals[0]).max() / 2.0),
                "time_of_max_inversion_s": float(t_ends[np.argmax(np.abs(totals - totals[0]))]),
                "initial_total_polarization": float(totals[0]),
                "min_total_polarization": float(totals.min()),
                "final_total_polarization": float(totals[-1]),
            }
    else:
        for triggered in variants:
            name = "triggered" if triggered else "untriggered"
            traj = _run(cfg, triggered)
            write_trajectory_csv(traj, out_dir / f"trajectory_{name}.csv")
            summary["runs"][name] = _run_summary(traj)
    lead = summary["runs"].get("triggered") or next(iter(summary["runs"].values()))
    summary["amplification_coefficient"] = lead["amplification_coefficient"]
    summary["time_of_max_inversion_s"] = lead["time_of_max_inversion_s"]
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out_dir}/summary.json "
          f"(amplification {summary['amplification_coefficient']:.4g}, "
          f"t* = {summary['time_of_max_inversion_s']:.4g} s)")
    return 0


def _sweep_finals(cfg, triggered, t_ends):
    """Final per-spin polarizations for each pulse length, one run per point."""
    from .propagate import SimParams, polarization

    n = cfg.chain.n_spins
    finals = np.empty((n, t_ends.size))
    for k, t_end in enumerate(t_ends):
        if t_end <= 0.0:
            state = _initial_state(cfg, triggered)
            finals[:, k] = [polarization(state, i) for i in range(1, n + 1)]
            continue
        params = SimParams(t_end=float(t_end), dt=min(cfg.sim.dt, float(t_end)),
                           sample_every=max(1, 10**9), method=cfg.sim.method)
        traj = _run_on(cfg, triggered, params)
        finals[:, k] = traj.per_spin[:, -1]
    return finals


def _run_on(cfg, triggered, params):
    return evolve(_initial_state(cfg, triggered), cfg.chain, cfg.drive, params)


def _write_sweep_csv(finals, t_ends, n, path):
    with open(path, "w") as fh:
        fh.write("t_end," + ",".join(f"p{i}" for i in range(1, n + 1)) + ",total\n")
        for k in range(t_ends.size):
            row = [t_ends[k], *finals[:, k], finals[:, k].sum()]
            fh.write(",".join(f"{x:.15g}" for x in row) + "\n")


def cmd_spectrum(cfg: ExperimentConfig, state_selector: str, out_dir: Path) -> int:
    """Write stick and broadened CSVs for the selected population state."""
    out_dir.mkdir(parents=True, exist_ok=True)
    match = re.fullmatch(r"from_trajectory[:(]([0-9.eE+-]+)\)?", state_selector)
    if state_selector == "thermal":
        pops = thermal_populations(cfg.chain)
    elif state_selector == "pseudopure":
        pops = pseudopure_ground(cfg.chain)
    elif state_selector == "pseudopure_flipped":
        pops = flip_populations(pseudopure_ground(cfg.chain), 1)
    elif match:
        t = float(match.group(1))
        traj = _run(cfg, triggered=True)
        k = int(np.argmin(np.abs(traj.times - t)))
        state = _state_at_sample(cfg, traj, k)
        pops = populations_from_state(state)
    else:
        raise ValidationError(
            f"unknown state selector {state_selector!r}; expected one of "
            f"{STATE_SELECTORS} or from_trajectory:T")
    sticks = stick_spectrum(cfg.chain, pops)
    grid = cfg.grid if cfg.grid is not None else default_grid(sticks, cfg.fwhm)
    freqs, amps = broadened_spectrum(sticks, cfg.fwhm, grid)
    tag = re.sub(r"[^A-Za-z0-9_]+", "_", state_selector).strip("_")
    write_stick_csv(sticks, out_dir / f"sticks_{tag}.csv")
    write_curve_csv(freqs, amps, out_dir / f"spectrum_{tag}.csv")
    print(f"wrote {out_dir}/sticks_{tag}.csv ({len(sticks.lines)} lines) "
          f"and spectrum_{tag}.csv")
    return 0


def _state_at_sample(cfg, traj, k):
    """Re-evolve up to the sampled time so the populations match exactly."""
    from .propagate import SimParams

    t = float(traj.times[k])
    if t <= 0.0:
        return _initial_state(cfg, triggered=True)
    params = SimParams(t_end=t, dt=min(cfg.sim.dt, t),
                       sample_every=cfg.sim.sample_every, method=cfg.sim.method)
    return _run_on(cfg, True, params).final_state


def cmd_tones(cfg: ExperimentConfig, as_json: bool) -> int:
    """Print the domino tones and the full conditional-resonance table."""
    chain = cfg.chain
    tones = domino_tones(chain)
    table = []
    for i in range(1, chain.n_spins + 1):
        partners = [j for j in range(1, chain.n_spins + 1)
                    if j != i and chain.couplings[i - 1, j - 1] != 0.0]
        for bits in range(1 << len(partners)):
            states = {j: ("down" if (bits >> k) & 1 else "up")
                      for k, j in enumerate(partners)}
            table.append({
                "spin": i,
                "partners": {str(j): states[j] for j in partners},
                "frequency_hz": conditional_resonance(chain, i, states),
            })
    if as_json:
        print(json.dumps({"domino_tones_hz": [float(t) for t in tones],
                          "conditional_resonances": table}, indent=2))
        return 0
    print("domino tones (Hz):")
    for i, tone in enumerate(tones, start=2):
        print(f"  spin {i}: {tone:.6f}")
    print("conditional resonances (Hz):")
    for row in table:
        partners = ", ".join(f"{j}:{s}" for j, s in row["partners"].items())
        print(f"  spin {row['spin']} [{partners}]: {row['frequency_hz']:.6f}")
    return 0


def cmd_gate_check(n_spins: int, trials: int, seed: int) -> int:
    """Random-superposition fidelity check of the CNOT-chain amplifier."""
    if n_spins < 2:
        raise ValidationError("gate-check needs --n-spins >= 2")
    rng = np.random.default_rng(seed)
    worst = 1.0
    t0 = time.perf_counter()
    for _ in range(trials):
        pair = rng.normal(size=4)
        a = complex(pair[0], pair[1])
        b = complex(pair[2], pair[3])
        scale = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        a, b = a / scale, b / scale
        out = domino_circuit(prepare_initial(a, b, n_spins))
        expected = a * basis_state("0" * n_spins).amplitudes \
            + b * basis_state("1" * n_spins).amplitudes
        fid = float(abs(np.vdot(expected, out.amplitudes)) ** 2)
        worst = min(worst, fid)
    elapsed = time.perf_counter() - t0
    ok = worst >= GATE_CHECK_BOUND
    print(f"gate-check: n_spins={n_spins} trials={trials} "
          f"min_fidelity={worst:.15f} elapsed={elapsed:.2f}s "
          f"{'OK' if ok else 'FAIL'}")
    return 0 if ok else 3


def _parse_triplet(text: str, name: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"{name} must look like start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as err:
        raise ValidationError(f"{name}: {err}") from err
    if steps < 2 or stop <= start:
        raise ValidationError(f"{name}: need stop > start and steps >= 2")
    return start, stop, steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindomino",
        description="Stimulated polarization waves in driven J-coupled spin chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_opts(p):
        p.add_argument("--config", required=True, help="experiment JSON file")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--print-config", action="store_true",
                       help="echo the validated config as canonical JSON and exit")
        p.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit)")

    p_sim = sub.add_parser("simulate", help="propagate and write trajectory CSVs")
    add_config_opts(p_sim)
    p_sim.add_argument("--paired", action="store_true",
                       help="run both the triggered and untriggered variants")
    p_sim.add_argument("--sweep-t-end", default=None, metavar="START:STOP:STEPS",
                       help="rerun with incremented pulse length instead of one run")

    p_spec = sub.add_parser("spectrum", help="write stick and broadened spectra CSVs")
    add_config_opts(p_spec)
    p_spec.add_argument("--state", default="pseudopure",
                        help="thermal | pseudopure | pseudopure_flipped | from_trajectory:T")

    p_tones = sub.add_parser("tones", help="print drive tones and resonance table")
    add_config_opts(p_tones)
    p_tones.add_argument("--json", action="store_true", help="emit JSON")

    p_gate = sub.add_parser("gate-check", help="CNOT-chain fidelity self-test")
    p_gate.add_argument("--n-spins", type=int, required=True)
    p_gate.add_argument("--trials", type=int, default=1000)
    p_gate.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gate-check":
            return cmd_gate_check(args.n_spins, args.trials, args.seed)
        cfg = load_config(args.config)
        if args.print_config:
            sys.stdout.write(serialize_config(cfg))
            return 0
        out_dir = Path(args.out) if args.out else Path(cfg.outputs)
        if args.command == "simulate":
            sweep = _parse_triplet(args.sweep_t_end, "--sweep-t-end") \
                if args.sweep_t_end else None
            return cmd_simulate(cfg, out_dir, args.paired, sweep)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, args.state, out_dir)
        if args.command == "tones":
            return cmd_tones(cfg, args.json)
        raise AssertionError(f"unhandled command {args.command}")
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except IntegrationAccuracyError as err:
        print(f"numerical-accuracy error: {err}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command-line front end: certified numbers and figure-ready tables.

Commands: gmn (single-state value), evolve (density matrix at time t),
sweep (E and eta over a gt grid), ensemble (pointwise eta statistics
over seeded state families), asymptotic (E at t = infinity). Output is
CSV or JSON with 9-significant-digit numbers, plus a run manifest that
records parameters, seeds, tolerances, and per-result solver
certificates so any output can be reproduced.

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, channel, dynamics, states
from .gmn import InfeasibleNumerics, SdpSettings, SolverFailure, genuine_negativity
from .matcore import DIM, BadDim, NotHermitian
from .states import BadTrace, DensityMatrix, NotNormalized, NotPSD, PureState

NAMED_STATES = {
    "ghz1": states.ghz1,
    "ghz2": states.ghz2,
    "w": states.w_state,
    "plus-product": states.plus_product,
}


class ParseError(ValueError):
    """Malformed state spec, argument, or state file."""


_INVALID_INPUT = (ParseError, NotHermitian, BadTrace, NotPSD, BadDim,
                  NotNormalized, ValueError)


def _fmt(x):
    """9-significant-digit text; NaN becomes the empty string."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".9g")


def load_state_file(path):
    """Parse a JSON state file into a PureState or DensityMatrix.

    Density matrices use fields dim/re/im (dim x dim real arrays); pure
    states use amps_re/amps_im (length-8 arrays).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object")
    if "amps_re" in obj or "amps_im" in obj:
        try:
            re = np.asarray(obj["amps_re"], dtype=float)
            im = np.asarray(obj["amps_im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: fields amps_re/amps_im must both be numeric arrays") from exc
        if re.shape != im.shape:
            raise ParseError(f"{path}: amps_re and amps_im shapes differ")
        if re.shape != (DIM,):
            raise BadDim(f"{path}: expected {DIM} amplitudes, got shape {re.shape}")
        return PureState(re + 1j * im, label=f"file:{path}")
    if "re" in obj and "im" in obj:
        try:
            dim = int(obj.get("dim", DIM))
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj["im"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{path}: fields dim/re/im must be numeric") from exc
        if re.shape != im.shape:
            raise ParseError(f"{path}: re and im shapes differ")
        if re.shape != (dim, dim):
            raise ParseError(f"{path}: re/im shape {re.shape} does not match dim={dim}")
        return states.validate_density(re + 1j * im, label=f"file:{path}")
    raise ParseError(f"{path}: expected re/im or amps_re/amps_im fields")


def parse_state_spec(text):
    """Resolve a --state argument to a (label, DensityMatrix) pair.

    Accepted forms: a named state (ghz1, ghz2, w, plus-product),
    file:PATH, random:SEED:INDEX, or graph:SEED:INDEX.
    """
    if text in NAMED_STATES:
        psi = NAMED_STATES[text]()
        return psi.label, states.pure_to_density(psi)
    kind, _, rest = text.partition(":")
    if kind == "file" and rest:
        loaded = load_state_file(rest)
        if isinstance(loaded, PureState):
            return loaded.label, states.pure_to_density(loaded)
        return loaded.label, loaded
    if kind in ("random", "graph"):
        parts = rest.split(":")
        if len(parts) != 2:
            raise ParseError(f"expected {kind}:SEED:INDEX, got {text!r}")
        try:
            seed, index = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"seed and index must be integers in {text!r}") from exc
        if index < 0:
            raise ParseError(f"index must be >= 0 in {text!r}")
        sampler = states.random_pure if kind == "random" else states.random_weighted_graph
        psi = sampler(seed, index + 1)[index]
        return psi.label, states.pure_to_density(psi)
    raise ParseError(
        f"unknown state spec {text!r}; use one of {sorted(NAMED_STATES)}, "
        "file:PATH, random:SEED:INDEX, graph:SEED:INDEX")


@dataclass
class RunManifest:
    """Reproducibility record emitted alongside every output."""

    command: str
    parameters: dict
    seed: int | None
    settings: dict
    version: str
    results: list

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _settings_from_args(args):
    return SdpSettings(gap_tol=args.gap_tol, feas_tol=args.gap_tol)


def _grid_from_args(args):
    if args.steps < 2:
        raise ParseError(f"--steps must be >= 2, got {args.steps}")
    if args.tmax <= 0:
        raise ParseError(f"--tmax must be > 0, got {args.tmax}")
    if args.gamma < 0:
        raise ParseError(f"--gamma must be >= 0, got {args.gamma}")
    return dynamics.TimeGrid(args.gamma * np.linspace(0.0, args.tmax, args.steps))


def _ensemble_states(kind, seed, n):
    if n < 1:
        raise ParseError(f"--n must be >= 1, got {n}")
    if kind == "random":
        return states.random_pure(seed, n)
    if kind == "graph":
        return states.random_weighted_graph(seed, n)
    raise ParseError(f"--kind must be random or graph, got {kind!r}")


def cmd_gmn(args):
    label, rho = parse_state_spec(args.state)
    settings = _settings_from_args(args)
    res = genuine_negativity(rho, settings)
    if args.witness:
        dump = {
            "dim": DIM,
            "re": res.witness.real.tolist(),
            "im": res.witness.imag.tolist(),
        }
        with open(args.witness, "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=2)
    header = ["value", "objective", "duality_gap", "status"]
    rows = [[res.value, res.objective, res.duality_gap, res.status.value]]
    meta = [{"label": label, "status": res.status.value, "duality_gap": res.duality_gap}]
    params = {"state": args.state, "gap_tol": args.gap_tol, "witness": args.witness}
    return header, rows, meta, params, None


def cmd_evolve(args):
    label, rho = parse_state_spec(args.state)
    if args.t < 0:
        raise ParseError(f"--t must be >= 0, got {args.t}")
    out = channel.evolve(rho, channel.ChannelParams(gamma=args.gamma, t=args.t))
    payload = {"dim": DIM, "re": out.mat.real.tolist(), "im": out.mat.imag.tolist()}
    params = {"state": args.state, "gamma": args.gamma, "t": args.t}
    meta = [{"label": label, "gt": args.gamma * args.t}]
    return None, None, meta, params, payload


def cmd_sweep(args):
    label, rho = parse_state_spec(args.state)
    settings = _settings_from_args(args)
    grid = _grid_from_args(args)
    series = dynamics.sweep(rho, grid, settings, label=label)
    header = ["gt", "E", "eta"]
    rows = [[gt, e, eta] for gt, e, eta in
            zip(grid.gt_values, series.e_values, series.eta_values)]
    meta = [{"label": label, "gt": float(gt), "status": "optimal", "duality_gap": float(g)}
            for gt, g in zip(grid.gt_values, series.gaps)]
    params = {"state": args.state, "gamma": args.gamma, "tmax": args.tmax,
              "steps": args.steps, "gap_tol": args.gap_tol}
    return header, rows, meta, params, None


def cmd_ensemble(args):
    settings = _settings_from_args(args)
    grid = _grid_from_args(args)
    members = _ensemble_states(args.kind, args.seed, args.n)
    series, stats = dynamics.ensemble_sweep(members, grid, settings, jobs=args.jobs)
    header = ["gt", "mean_eta", "ci_low", "ci_high", "n_effective"]
    rows = [[gt, stats.mean[k], stats.ci_low[k], stats.ci_high[k], int(stats.n_effective[k])]
            for k, gt in enumerate(grid.gt_values)]
    meta = [{"label": s.state_label, "status": "optimal", "max_duality_gap": float(s.gaps.max())}
            for s in series]
    if args.per_state:
        per = {
            "gt": [float(x) for x in grid.gt_values],
            "states": [{"label": s.state_label,
                        "E": [float(e) for e in s.e_values],
                        "eta": [None if math.isnan(x) else float(x) for x in s.eta_values]}
                       for s in series],
        }
        with open(args.per_state, "w", encoding="utf-8") as fh:
            json.dump(per, fh, indent=2)
    params = {"kind": args.kind, "n": args.n, "seed": args.seed, "gamma": args.gamma,
              "tmax": args.tmax, "steps": args.steps, "gap_tol": args.gap_tol,
              "jobs": args.jobs, "per_state": args.per_state}
    return header, rows, meta, params, None


def cmd_asymptotic(args):
    settings = _settings_from_args(args)
    if args.state:
        label, rho = parse_state_spec(args.state)
        res = genuine_negativity(channel.asymptotic_map(rho), settings)
        values = [(label, res.value, res.duality_gap)]
    else:
        members = _ensemble_states(args.kind, args.seed, args.n)
        values = dynamics.asymptotic_ensemble(members, settings, jobs=args.jobs)
    header = ["index", "E_infinity"]
    rows = [[k, v] for k, (_, v, _) in enumerate(values)]
    meta = [{"label": lab, "status": "optimal", "duality_gap": float(gap)}
            for lab, _, gap in values]
    evals = [v for _, v, _ in values]
    summary = {"min": min(evals), "mean": sum(evals) / len(evals)}
    params = {"state": args.state, "kind": args.kind, "n": args.n, "seed": args.seed,
              "gap_tol": args.gap_tol, "jobs": args.jobs}
    return header, rows, meta, params, summary


def _render_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else
                              str(x) if isinstance(x, int) else _fmt(x)
                              for x in row))
    return "\n".join(lines) + "\n"


def _render_json(command, header, rows, summary, manifest):
    clean = [[None if isinstance(x, float) and math.isnan(x) else x for x in row]
             for row in rows]
    doc = {"command": command, "columns": header, "rows": clean}
    if summary is not None:
        doc["summary"] = summary
    doc["manifest"] = json.loads(manifest.to_json())
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "gmn": cmd_gmn,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "ensemble": cmd_ensemble,
    "asymptotic": cmd_asymptotic,
}


def run_command(command, args):
    """Execute one subcommand; returns (header, rows, manifest, payload, summary)."""
    header, rows, meta, params, extra = COMMANDS[command](args)
    manifest = RunManifest(
        command=command,
        parameters=params,
        seed=getattr(args, "seed", None),
        settings=asdict(_settings_from_args(args)),
        version=__version__,
        results=meta,
    )
    return header, rows, manifest, extra


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gmn3q",
        description="Genuine multipartite negativity of three qubits under collective dephasing.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, state=False, grid=False, ensemble=False):
        if state:
            p.add_argument("--state", required=True,
                           help="named state, file:PATH, random:SEED:INDEX, graph:SEED:INDEX")
        p.add_argument("--gap-tol", type=float, default=1e-8,
                       help="duality-gap certification tolerance (default 1e-8)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", default=None, help="write output here instead of stdout")
        p.add_argument("--manifest", metavar="PATH", default=None,
                       help="write the run manifest here (default: OUT.manifest.json when --out is set)")
        if grid:
            p.add_argument("--gamma", type=float, default=1.0, help="dephasing rate (default 1.0)")
            p.add_argument("--tmax", type=float, default=2.0, help="final time (default 2.0)")
            p.add_argument("--steps", type=int, default=41, help="grid points (default 41)")
        if ensemble:
            p.add_argument("--kind", choices=("random", "graph"), default="random")
            p.add_argument("--n", type=int, default=100, help="ensemble size (default 100)")
            p.add_argument("--seed", type=int, default=1, help="ensemble seed (default 1)")
            p.add_argument("--jobs", type=int, default=1, help="parallel solver processes (default 1)")

    p_gmn = sub.add_parser("gmn", help="genuine multipartite negativity of one state")
    common(p_gmn, state=True)
    p_gmn.add_argument("--witness", metavar="PATH", default=None,
                       help="dump the optimal witness matrix to this JSON file")

    p_evolve = sub.add_parser("evolve", help="collective dephasing of one state, written as a state file")
    p_evolve.add_argument("--state", required=True)
    p_evolve.add_argument("--gamma", type=float, default=1.0)
    p_evolve.add_argument("--t", type=float, required=True, help="evolution time")
    p_evolve.add_argument("--gap-tol", type=float, default=1e-8, help=argparse.SUPPRESS)
    p_evolve.add_argument("--format", choices=("json",), default="json")
    p_evolve.add_argument("--out", metavar="PATH", default=None)
    p_evolve.add_argument("--manifest", metavar="PATH", default=None)

    p_sweep = sub.add_parser("sweep", help="E and eta across a gt grid for one state")
    common(p_sweep, state=True, grid=True)

    p_ens = sub.add_parser("ensemble", help="pointwise eta statistics over a seeded ensemble")
    common(p_ens, grid=True, ensemble=True)
    p_ens.add_argument("--per-state", metavar="PATH", default=None,
                       help="also dump every member's E and eta series to this JSON file")

    p_asym = sub.add_parser("asymptotic", help="E at t = infinity for an ensemble or one state")
    common(p_asym, ensemble=True)
    p_asym.add_argument("--state", default=None,
                        help="evaluate this single state instead of an ensemble")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        header, rows, manifest, extra = run_command(args.command, args)
        if args.command == "evolve":
            text = json.dumps(extra, indent=2) + "\n"
            summary = None
        else:
            summary = extra if args.command == "asymptotic" else None
            if args.format == "json":
                text = _render_json(args.command, header, rows, summary, manifest)
            else:
                text = _render_csv(header, rows)
        _emit(text, args.out)
        if args.command == "asymptotic" and args.format == "csv" and summary:
            sys.stderr.write(f"min={_fmt(summary['min'])} mean={_fmt(summary['mean'])}\n")
        manifest_path = args.manifest or (args.out + ".manifest.json" if args.out else None)
        if manifest_path:
            with open(manifest_path, "w", encoding="utf-8") as fh:
                fh.write(manifest.to_json())
    except _INVALID_INPUT as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except (SolverFailure, InfeasibleNumerics) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3
    return 0


def replay(manifest_path):
    """Re-run a recorded manifest; returns (header, rows) for comparison."""
    with open(manifest_path, "r", encoding="utf-8") as fh:
        man = json.load(fh)
    argv = [man["command"]]
    for key, val in man["parameters"].items():
        if val is None:
            continue
        flag = "--" + key.replace("_", "-")
        argv.extend([flag, str(val)])
    args = build_parser().parse_args(argv)
    header, rows, _, extra = run_command(man["command"], args)
    return header, rows if rows is not None else extra


if __name__ == "__main__":
    sys.exit(main())

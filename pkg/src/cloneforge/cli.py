"""Command-line front end: protocol runs, condition checks, blank bounds,
parameter sweeps, and a demo; JSON/CSV reports are deterministic byte-for-byte
given the same configuration and seed.

Exit codes: 0 success/pass, 1 usage or I/O error, 2 protocol fidelity
deviation, 3 condition-battery failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import MuWeights, blank_bound_report, entropy_gap, gamma_min_bound
from .conditions import ConditionReport, run_battery
from .groups import FiniteGroup, group_from_name
from .protocol import maximally_entangled_blank, protocol_report
from .states import BipartitePureState, ShiftedSetSpec, build_group_shifted

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-9

__all__ = ["main"]


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2), which collides with our codes
        raise CliError(message)


@dataclass
class RunConfig:
    command: str
    group: FiniteGroup
    copies: int
    weights: np.ndarray | None
    shift_side: str
    tol: float
    seed: int
    out: str | None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _group_payload(group: FiniteGroup) -> dict:
    return {"label": group.label, "order": group.order, "cayley": group.cayley.tolist()}


def _write_report(payload: dict, out: str | None) -> None:
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _resolve_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return float(args.tol)
    env = os.environ.get("CLONEFORGE_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise CliError(f"CLONEFORGE_TOL is not a number: {env!r}") from exc
    return DEFAULT_TOL


def _load_group(args) -> FiniteGroup:
    if getattr(args, "group_file", None):
        try:
            data = json.loads(Path(args.group_file).read_text(encoding="utf-8"))
            return FiniteGroup.from_table(np.asarray(data["cayley"], dtype=np.int64),
                                          label=str(data.get("label", "custom")))
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load group file: {exc}") from exc
    if not getattr(args, "group", None):
        raise CliError("one of --group or --group-file is required")
    try:
        return group_from_name(args.group)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _parse_weights(text: str, dim: int) -> np.ndarray:
    if text == "uniform":
        return np.full(dim, 1.0 / dim)
    try:
        values = np.array([float(tok) for tok in text.split(",")], dtype=float)
    except ValueError as exc:
        raise CliError(f"cannot parse weights {text!r}") from exc
    if values.size != dim:
        raise CliError(f"need {dim} weights, got {values.size}")
    if np.any(values <= 0.0):
        raise CliError("weights must be strictly positive")
    return values / values.sum()


def _parse_gamma(text: str, dim: int) -> np.ndarray:
    if text == "uniform":
        return np.full(dim, 1.0 / dim)
    try:
        values = np.array([float(tok) for tok in text.split(",")], dtype=float)
    except ValueError as exc:
        raise CliError(f"cannot parse gamma {text!r}") from exc
    if values.size != dim or np.any(values < 0.0):
        raise CliError(f"gamma needs {dim} nonnegative entries")
    return values / values.sum()


def _parse_phases(path: str | None, order: int) -> np.ndarray | None:
    if not path:
        return None
    try:
        data = np.asarray(json.loads(Path(path).read_text(encoding="utf-8")), dtype=float)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load phases file: {exc}") from exc
    if data.shape != (order, order):
        raise CliError(f"phases must be a {order}x{order} matrix")
    return data


def _parse_blank(text: str | None, dim: int) -> BipartitePureState | None:
    if text is None or text == "uniform":
        return None
    if text.startswith("@"):
        states = _load_state_set(text[1:])
        if len(states) != 1:
            raise CliError("blank file must contain exactly one state")
        return states[0]
    gamma = _parse_gamma(text, dim)
    return BipartitePureState(np.diag(np.sqrt(gamma)).astype(np.complex128))


def _matrix_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("state matrices must be rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_set_payload(states: list[BipartitePureState]) -> dict:
    """JSON-ready payload in the state-set schema consumed by check-set."""
    return {
        "dims": list(states[0].dims),
        "states": [
            [[[float(z.real), float(z.imag)] for z in row] for row in s.dual]
            for s in states
        ],
    }


def _load_state_set(path: str) -> list[BipartitePureState]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        dims = tuple(int(x) for x in data["dims"])
        states = []
        for rows in data["states"]:
            dual = _matrix_from_json(rows)
            if dual.shape != dims:
                raise ValueError(f"state shape {dual.shape} does not match dims {dims}")
            states.append(BipartitePureState(dual))
    except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load state set: {exc}") from exc
    if not states:
        raise CliError("state set is empty")
    return states


def _mu_for(args, spec: ShiftedSetSpec):
    text = getattr(args, "mu", "inverse-weights") or "inverse-weights"
    if text == "inverse-weights":
        return "inverse_weights", None, 0
    if text == "uniform":
        return "uniform", None, 0
    if text.startswith("sampled"):
        k = 1000
        if ":" in text:
            try:
                k = int(text.split(":", 1)[1])
            except ValueError as exc:
                raise CliError(f"bad sample count in {text!r}") from exc
        return "sampled", None, k
    if text.startswith("@"):
        try:
            values = np.asarray(json.loads(Path(text[1:]).read_text(encoding="utf-8")), dtype=float)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load mu file: {exc}") from exc
        return "custom", MuWeights(values), 0
    raise CliError(f"unknown mu strategy {text!r}")


def cmd_clone_sim(args) -> int:
    group = _load_group(args)
    copies = args.copies
    dim = group.order * copies
    weights = _parse_weights(args.weights, dim)
    phases = _parse_phases(args.phases, group.order)
    try:
        spec = ShiftedSetSpec(group, weights, copies=copies, phases=phases,
                              shift_side=args.shift_side)
        blank = _parse_blank(args.blank, dim)
        report = protocol_report(spec, blank)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    tol = _resolve_tol(args)
    ok = report.min_fidelity >= 1.0 - tol
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "clone-sim",
        "group": _group_payload(group),
        "copies": copies,
        "shift_side": spec.shift_side,
        "weights": spec.weight_vector,
        "phase_warning": report.phase_warning,
        "blank_schmidt": report.blank_schmidt,
        "per_branch": report.rows,
        "min_fidelity": report.min_fidelity,
        "input_independence_gap": report.input_independence_gap,
        "tolerance": tol,
        "seed": args.seed,
        "status": "ok" if ok else "fidelity_deviation",
    }
    _write_report(payload, args.out)
    return 0 if ok else 2


def _battery_payload(report: ConditionReport, dims) -> dict:
    closure = report.group_closure
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "check-set",
        "dims": list(dims),
        "num_states": len(report.majorization_compat.verdicts),
        "full_rank": {
            "passed": report.full_rank.passed,
            "min_singular_values": report.full_rank.min_singular_values,
            "blank_min_singular": report.full_rank.blank_min_singular,
            "witness": report.full_rank.witness,
        },
        "equal_gconcurrence": {
            "passed": report.entanglement_equality.passed,
            "values": report.entanglement_equality.g_concurrences,
        },
        "equal_det": {
            "passed": report.entanglement_equality.det_passed,
            "values": report.entanglement_equality.det_magnitudes,
        },
        "majorization_compat": {
            "passed": report.majorization_compat.passed,
            "verdicts": report.majorization_compat.verdicts,
            "witness": list(report.majorization_compat.witness)
            if report.majorization_compat.witness else None,
        },
        "spectrum_condition": {
            "passed": all(s.passed for s in report.spectrum) if report.spectrum else report.full_rank.passed,
            "pairs": [{"pair": list(s.pair), "passed": s.passed} for s in report.spectrum],
        },
        "group_closure": {
            "passed": closure.ok,
            "group": _group_payload(closure.group) if closure.ok else None,
            "extended_size": len(closure.states),
            "failure": closure.failure,
        },
        "divisibility": None,
        "character_check": None,
        "qubit_form": None,
        "overall": report.overall,
        "failed_checks": report.failed_checks,
        "verdict": "consistent with necessary conditions" if report.overall
        else "violates necessary conditions",
    }
    if report.divisibility is not None:
        payload["divisibility"] = {
            "passed": report.divisibility.divides,
            "n_t": report.divisibility.n_t,
        }
        payload["character_check"] = {
            "passed": report.divisibility.character_passed,
            "traces": report.divisibility.traces,
        }
    if report.qubit_form is not None:
        q = report.qubit_form
        payload["qubit_form"] = {
            "accepted": q.accepted,
            "lambda": q.lam,
            "branch": q.branch,
            "theta": q.theta,
            "reason": q.reason,
        }
    return payload


def cmd_check_set(args) -> int:
    states = _load_state_set(args.input)
    blank = None
    if args.blank and args.blank != "uniform":
        blank = _parse_blank(args.blank, states[0].dims[0])
    report = run_battery(states, blank=blank)
    _write_report(_battery_payload(report, states[0].dims), args.out)
    return 0 if report.overall else 3


def cmd_blank_bounds(args) -> int:
    group = _load_group(args)
    copies = args.copies
    dim = group.order * copies
    weights = _parse_weights(args.weights, dim)
    gamma = _parse_gamma(args.gamma, dim)
    try:
        spec = ShiftedSetSpec(group, weights, copies=copies)
        strategy, mu, samples = _mu_for(args, spec)
        report = blank_bound_report(spec, gamma, strategy, mu=mu,
                                    samples=samples or 1000, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "blank-bounds",
        "group": _group_payload(group),
        "copies": copies,
        "weights": spec.weight_vector,
        "blank_gamma": report.blank_gamma,
        "mu_strategy": report.mu_strategy,
        "alpha": report.alpha,
        "beta": report.beta,
        "majorization_verdict": report.majorization_verdict.value,
        "majorization_passed": report.majorization_passed,
        "gamma_min_lower": report.gamma_min_lower,
        "q": report.q,
        "shannon_q": report.shannon_q,
        "entropy_lambda": report.entropy_lambda,
        "gap": report.gap,
        "entropy_base": report.entropy_base,
        "monotone_bounds": {
            "entropy": report.monotone.entropy,
            "g_concurrence": report.monotone.g_concurrence,
        },
        "seed": args.seed,
    }
    _write_report(payload, args.out)
    return 0


def _grid_step(text: str) -> float:
    named = {"coarse": 0.1, "fine": 0.05}
    if text in named:
        return named[text]
    if text.startswith("step:"):
        try:
            return float(text.split(":", 1)[1])
        except ValueError as exc:
            raise CliError(f"bad grid step in {text!r}") from exc
    raise CliError(f"unknown grid {text!r}")


def _compositions(total: int, parts: int):
    """Positive integer compositions of `total` into `parts`, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(1, total - parts + 2):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def cmd_sweep(args) -> int:
    group = _load_group(args)
    d = group.order
    step = _grid_step(args.grid)
    if not 0.0 < step < 1.0:
        raise CliError("degenerate grid: step must be in (0, 1)")
    total = round(1.0 / step)
    if abs(total * step - 1.0) > 1e-9:
        raise CliError("degenerate grid: step must divide 1")
    if total < d:
        raise CliError("degenerate grid: no interior points at this step")
    lines = ["".join([",".join(f"l{i}" for i in range(d)), ",gamma_min_lower,entropy_gap"])]
    for comp in _compositions(total, d):
        weights = np.array(comp, dtype=float) / total
        spec = ShiftedSetSpec(group, weights)
        bound = gamma_min_bound(spec, "inverse_weights")
        gap = entropy_gap(spec).gap
        cells = [repr(float(w)) for w in weights] + [repr(float(bound.value)), repr(float(gap))]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def cmd_demo(args) -> int:
    z2 = group_from_name("Z2")
    s3 = group_from_name("S3")
    z3 = group_from_name("Z3")

    spec2 = ShiftedSetSpec(z2, np.array([0.7, 0.3]))
    rep2 = protocol_report(spec2)
    rng = np.random.default_rng(args.seed)
    w6 = 0.01 + rng.dirichlet(np.ones(6)) * (1 - 0.06)
    spec6 = ShiftedSetSpec(s3, w6 / w6.sum())
    rep6 = protocol_report(spec6)

    bound2 = gamma_min_bound(spec2, "inverse_weights").value
    spec3 = ShiftedSetSpec(z3, np.array([0.5, 0.3, 0.2]))
    bound3 = gamma_min_bound(spec3, "inverse_weights").value
    gap2 = entropy_gap(spec2)

    print(f"cloning Z2-shifted pair, weights (0.7, 0.3): min fidelity {rep2.min_fidelity:.12f}")
    print(f"cloning S3-shifted family, random weights:  min fidelity {rep6.min_fidelity:.12f}")
    print(f"blank gamma_min bound at D=2: {bound2!r} (exact 1/2)")
    print(f"blank gamma_min bound at D=3: {bound3!r} (exact 1/3)")
    print(f"entropy floor for the blank at D=2, weights (0.7, 0.3): "
          f"H(q) = {gap2.shannon_q:.5f} > H(lambda) = {gap2.entropy_lambda:.5f} "
          f"(gap {gap2.gap:.5f})")
    if args.out:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "demo",
            "clone_min_fidelity": {"Z2": rep2.min_fidelity, "S3": rep6.min_fidelity},
            "gamma_min_bounds": {"D2": bound2, "D3": bound3},
            "entropy_gap_Z2": {"q": gap2.q, "shannon_q": gap2.shannon_q,
                               "entropy_lambda": gap2.entropy_lambda, "gap": gap2.gap},
            "seed": args.seed,
        }
        _write_report(payload, args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cloneforge",
                     description="local-cloning protocol simulation, condition checks, "
                                 "and blank-state entanglement bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights=True):
        p.add_argument("--group", help="group name, e.g. Z4, Z2xZ2, S3, D4, Q8")
        p.add_argument("--group-file", help="JSON file with an explicit cayley table")
        p.add_argument("--copies", type=int, default=1)
        if weights:
            p.add_argument("--weights", required=True,
                           help="'uniform' or comma-separated positive values")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override (or env CLONEFORGE_TOL)")
        p.add_argument("--out", default=None, help="report path (default stdout)")

    p = sub.add_parser("clone-sim", help="run the cloning protocol for every input")
    common(p)
    p.add_argument("--shift-side", choices=["A", "B"], default="B")
    p.add_argument("--blank", default=None, help="'uniform', gamma list, or @state-file")
    p.add_argument("--phases", default=None, help="@-prefixed JSON phase matrix")
    p.set_defaults(func=cmd_clone_sim)

    p = sub.add_parser("check-set", help="run the necessary-condition battery on a state set")
    p.add_argument("--input", required=True, help="state-set JSON file")
    p.add_argument("--blank", default=None, help="optional blank gamma list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check_set)

    p = sub.add_parser("blank-bounds", help="compute blank entanglement lower bounds")
    common(p)
    p.add_argument("--gamma", default="uniform", help="blank Schmidt vector")
    p.add_argument("--mu", default="inverse-weights",
                   help="uniform | inverse-weights | sampled[:K] | @file")
    p.set_defaults(func=cmd_blank_bounds)

    p = sub.add_parser("sweep", help="CSV sweep of bounds over a weight grid")
    p.add_argument("--group", help="group name")
    p.add_argument("--group-file", help="JSON file with an explicit cayley table")
    p.add_argument("--grid", default="coarse", help="coarse | fine | step:<v>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demo", help="reproduce the headline results in one run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 the check failed (or a zero-probability outcome was
requested), 2 the input could not be parsed or validated. Data goes to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import amplifier, catalog, linalg as la, modelfile, reduction
from .errors import MeasurementError, ZeroProbabilityOutcome
from .model import check_transduction, object_distribution, outcome_distribution

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _outcome(a: float) -> str:
    return f"{a:+.12g}"


def _emit(args, payload: dict[str, Any], table: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(table) + "\n")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def load_model(ref: str) -> modelfile.ModelFile:
    """Catalog name or path to a model file."""
    if Path(ref).exists() or ref.endswith(".json"):
        return modelfile.load(ref)
    return modelfile.ModelFile(catalog.by_name(ref))


def parse_state(text: str, dim: int) -> np.ndarray:
    named = text.strip().lower()
    if named in ("zero", "one") and dim >= 2:
        return catalog.basis(dim, 0 if named == "zero" else 1)
    if named in ("plus", "minus"):
        if dim != 2:
            raise UsageError(f"state {named!r} is defined for dim 2 only, object has dim {dim}")
        sign = 1 if named == "plus" else -1
        return np.array([1, sign], dtype=complex) / np.sqrt(2)
    if named == "uniform":
        return np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    try:
        vec = np.array([complex(tok.strip().replace(" ", "")) for tok in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse state {text!r}") from None
    if vec.shape != (dim,):
        raise UsageError(f"state has {vec.size} entries, object has dim {dim}")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise UsageError("state vector is zero")
    if abs(norm - 1) > 1e-6:
        _warn(f"state norm {norm:.8g} deviates from 1; normalizing")
    return vec / norm


def parse_operator(text: str, dim: int, hermitian: bool = True) -> np.ndarray:
    """Named operator (sigmax, sigmay, sigmaz, identity, diag:v1,v2,...) or JSON file."""
    key = text.strip().lower()
    if key == "identity":
        return np.eye(dim, dtype=complex)
    if key.startswith("diag:"):
        try:
            vals = [float(t) for t in key[5:].split(",")]
        except ValueError:
            raise UsageError(f"cannot parse {text!r}") from None
        if len(vals) != dim:
            raise UsageError(f"{text!r} has {len(vals)} entries, need {dim}")
        return np.diag(vals).astype(complex)
    if key in catalog.NAMED_UNITARIES and key != "hadamard":
        if dim != 2:
            raise UsageError(f"{key} is a 2x2 operator, object has dim {dim}")
        return catalog.NAMED_UNITARIES[key]
    path = Path(text)
    if not path.exists():
        raise UsageError(f"unknown operator {text!r}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        m = np.array([[complex(re_, im) for re_, im in row] for row in data], dtype=complex)
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: cannot parse operator ({exc})") from None
    if m.shape != (dim, dim):
        raise UsageError(f"{path}: operator has shape {m.shape}, need ({dim}, {dim})")
    if hermitian and not la.is_hermitian(m):
        raise UsageError(f"{path}: operator not Hermitian")
    return m


def _model_ref(args) -> str:
    ref = args.model or args.path
    if not ref:
        raise UsageError("no model given (use --model NAME or a model file path)")
    return ref


def _matrix_json(m) -> list:
    return modelfile.encode_matrix(m)


def _matrix_rows(m) -> list[str]:
    out = []
    for row in np.asarray(m):
        out.append("  [" + ", ".join(_cfmt(z) for z in row) + "]")
    return out


def _cfmt(z: complex) -> str:
    z = complex(z)
    re_, im = (0.0 if abs(z.real) < 5e-13 else z.real), (0.0 if abs(z.imag) < 5e-13 else z.imag)
    if im == 0:
        return f"{re_:.6g}"
    return f"{re_:.6g}{im:+.6g}j"


def _verdict(flag: bool) -> str:
    return "PASS" if flag else "FAIL"


def _dist_json(dist) -> list[dict]:
    return [{"outcome": a, "probability": p} for a, p in dist.items()]


def cmd_validate(args) -> int:
    mf = load_model(_model_ref(args))
    tol = args.tol if args.tol is not None else 1e-8
    rep = check_transduction(mf.process, tol)
    payload = {
        "command": "validate",
        "holds": rep.holds,
        "noise_norm": rep.noise_norm,
        "pvm_distance": rep.pvm_distance,
        "tol": tol,
        "outcome_matching": [{"measured": a, "probe": b} for a, b in rep.outcome_matching.items()],
        "unmatched_probe": list(rep.unmatched_probe),
    }
    table = [
        f"{'transduction':<14}{'PASS' if rep.holds else 'FAIL'}",
        f"{'noise_norm':<14}{rep.noise_norm:.3e}",
        f"{'pvm_distance':<14}{rep.pvm_distance:.3e}",
        f"{'tol':<14}{tol:.1e}",
    ]
    for a, b in rep.outcome_matching.items():
        table.append(f"{'outcome':<14}{_outcome(a)} -> {'unmatched' if b is None else _outcome(b)}")
    _emit(args, payload, table)
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_probs(args) -> int:
    mf = load_model(_model_ref(args))
    psi = parse_state(args.state, mf.process.dim_s)
    dist = outcome_distribution(mf.process, psi)
    payload = {"command": "probs", "state": modelfile.encode_vector(psi),
               "distribution": _dist_json(dist)}
    _emit(args, payload, [f"{_outcome(a)} {_fmt(p)}" for a, p in dist.items()])
    return EXIT_OK


def _outcome_arg(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid outcome {text!r}") from None


def cmd_reduce(args) -> int:
    mf = load_model(_model_ref(args))
    psi = parse_state(args.state, mf.process.dim_s)
    try:
        rho = reduction.posterior_state(mf.process, psi, args.outcome)
    except ZeroProbabilityOutcome as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    prior = reduction.prior_state(mf.process, psi)
    payload = {"command": "reduce", "outcome": args.outcome, "posterior": _matrix_json(rho),
               "prior": _matrix_json(prior)}
    table = [f"posterior for outcome {_outcome(args.outcome)}:"] + _matrix_rows(rho)
    table += ["prior:"] + _matrix_rows(prior)
    _emit(args, payload, table)
    return EXIT_OK


def cmd_instrument(args) -> int:
    mf = load_model(_model_ref(args))
    tol = args.tol if args.tol is not None else 1e-8
    inst = reduction.extract_instrument(mf.process)
    completeness = inst.completeness_error()
    min_eigs = [float(np.linalg.eigvalsh(br.choi).min()) for br in inst]
    ok = completeness <= tol and all(e >= -la.TOL_PSD for e in min_eigs)
    payload = {
        "command": "instrument",
        "completeness_error": completeness,
        "completely_positive": all(e >= -la.TOL_PSD for e in min_eigs),
        "outcomes": [{"outcome": br.outcome, "kraus": [_matrix_json(k) for k in br.kraus],
                      "choi": _matrix_json(br.choi), "choi_min_eigenvalue": e}
                     for br, e in zip(inst, min_eigs)],
    }
    table = []
    for br, e in zip(inst, min_eigs):
        table.append(f"outcome {_outcome(br.outcome)}: {len(br.kraus)} Kraus operator(s), "
                     f"min Choi eigenvalue {e:.3e}")
        for i, k in enumerate(br.kraus):
            table.append(f" K{i}:")
            table += _matrix_rows(k)
        table.append(" Choi:")
        table += _matrix_rows(br.choi)
    table.append(f"completeness error {completeness:.3e}: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, table)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_joint(args) -> int:
    mf = load_model(_model_ref(args))
    mp = mf.process
    tol = args.tol if args.tol is not None else 1e-8
    psi = parse_state(args.state, mp.dim_s)
    x_obs = la.spectral_decompose(parse_operator(args.x_observable, mp.dim_s))
    if args.hamiltonian is not None:
        h = parse_operator(args.hamiltonian, mp.dim_s)
    elif mf.evolution is not None:
        h = mf.evolution.hamiltonian
    else:
        h = np.zeros((mp.dim_s, mp.dim_s), dtype=complex)
    delay = args.delay if args.delay is not None else (mf.evolution.delay if mf.evolution else 0.0)
    hbar = args.hbar if args.hbar is not None else (mf.evolution.hbar if mf.evolution else 1.0)
    evo = reduction.EvolutionSpec(h, delay, hbar)
    rep = reduction.bayes_check(mp, psi, evo, x_obs, tol)
    payload = {
        "command": "joint",
        "delay": delay,
        "hbar": hbar,
        "bayes_residual": rep.max_discrepancy,
        "passed": rep.passed,
        "skipped_outcomes": list(rep.skipped),
        "rows": [{"a": r.a, "x": r.x, "joint": r.joint, "conditional": r.conditional,
                  "from_posterior": r.from_posterior} for r in rep.rows],
    }
    table = [f"{'a':>8} {'x':>8} {'joint':>16} {'conditional':>16} {'posterior':>16}"]
    for r in rep.rows:
        table.append(f"{_outcome(r.a):>8} {_outcome(r.x):>8} {_fmt(r.joint):>16} "
                     f"{_fmt(r.conditional):>16} {_fmt(r.from_posterior):>16}")
    table.append(f"Bayes residual {rep.max_discrepancy:.3e}: {'PASS' if rep.passed else 'FAIL'}")
    _emit(args, payload, table)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_consecutive(args) -> int:
    m1, m2 = load_model(args.m1).process, load_model(args.m2).process
    tol = args.tol if args.tol is not None else 1e-8
    psi = parse_state(args.state, m1.dim_s)
    full = reduction.consecutive_joint(m1, m2, psi)
    piped = reduction.consecutive_via_reduction(m1, m2, psi)
    residual = max(abs(full[k] - piped[k]) for k in full)
    ok = residual <= tol
    payload = {
        "command": "consecutive",
        "residual": residual,
        "passed": ok,
        "joint": [{"a": a, "b": b, "probability": p, "via_reduction": piped[(a, b)]}
                  for (a, b), p in full.items()],
    }
    table = [f"{'a':>8} {'b':>8} {'probability':>16}"]
    table += [f"{_outcome(a):>8} {_outcome(b):>8} {_fmt(p):>16}" for (a, b), p in full.items()]
    table.append(f"reduction pipeline residual {residual:.3e}: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, table)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_amplify(args) -> int:
    mf = load_model(_model_ref(args))
    mp = mf.process
    tol = args.tol if args.tol is not None else 1e-9
    psi = parse_state(args.state, mp.dim_s)
    spec = mf.amplifier_spec()
    if spec.conjugate_gain is None:
        spec = amplifier.AmplifierSpec(probe=spec.probe, gain=spec.gain,
                                       conjugate_gain=amplifier.GainSymbol(spec.gain.name + "'"),
                                       conjugate_probe=spec.conjugate_probe)
    rep = amplifier.readout_equivalence(mp, spec, psi, tol)
    if spec.conjugate_probe is not None:
        comm = amplifier.macro_commutativity(spec)
    else:
        comm = amplifier.macro_commutativity(spec, -1j * args.hbar * np.eye(mp.dim_a))
    meter_ok = rep.readout_exact and rep.meter_matches_probe
    ok = meter_ok and comm.passed and (rep.meter_matches_object or not rep.transduction_holds)
    payload = {
        "command": "amplify",
        "readout_exact": rep.readout_exact,
        "meter_distribution": _dist_json(rep.meter_distribution),
        "object_distribution": _dist_json(rep.object_distribution),
        "meter_vs_probe": rep.meter_vs_probe,
        "meter_vs_object": rep.meter_vs_object,
        "meter_matches_object": rep.meter_matches_object,
        "transduction_holds": rep.transduction_holds,
        "commutator": [[str(h) for h in row] for row in comm.commutator.entries],
        "commutator_supplied": comm.supplied,
        "commutator_infinitesimal": comm.all_infinitesimal,
        "commutator_scaling_exact": comm.scaling_exact,
        "passed": ok,
    }
    table = [
        f"readout identity {'exact' if rep.readout_exact else 'BROKEN'}; "
        f"meter dist = A dist: {_verdict(rep.meter_matches_object)}",
        "meter distribution: " + ", ".join(
            f"{_outcome(a)}: {_fmt(p)}" for a, p in rep.meter_distribution.items()),
        f"meter vs probe {rep.meter_vs_probe:.3e}, meter vs object {rep.meter_vs_object:.3e}",
        f"[C, C'] = {comm.commutator[0, 0]} (diagonal entry); "
        f"infinitesimal: {_verdict(comm.all_infinitesimal)}; "
        f"scaling exact: {_verdict(comm.scaling_exact)}",
    ]
    _emit(args, payload, table)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--tol", type=float, default=None, help="check tolerance")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("path", nargs="?", help="model file")
    model.add_argument("--model", help="catalog name (cnot, shift:3, nonproj:hadamard, swap) "
                                       "or model file")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", default="uniform",
                       help="plus, minus, zero, one, uniform, or comma-separated amplitudes")

    parser = argparse.ArgumentParser(prog="measproc",
                                     description="Discrete quantum measuring processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common, model], help="check transduction")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("probs", parents=[common, model, state], help="outcome distribution")
    p.set_defaults(func=cmd_probs)
    p = sub.add_parser("reduce", parents=[common, model, state], help="posterior state")
    p.add_argument("--outcome", type=_outcome_arg, required=True, help="probe eigenvalue")
    p.set_defaults(func=cmd_reduce)
    p = sub.add_parser("instrument", parents=[common, model], help="Kraus and Choi dump")
    p.set_defaults(func=cmd_instrument)
    p = sub.add_parser("joint", parents=[common, model, state],
                       help="joint/conditional probabilities and Bayes residual")
    p.add_argument("--x-observable", default="identity",
                   help="identity, sigmax, sigmay, sigmaz, diag:v1,v2,..., or a JSON matrix file")
    p.add_argument("--hamiltonian", default=None,
                   help="object Hamiltonian, same forms as --x-observable")
    p.add_argument("--delay", type=float, default=None, help="evolution time t'")
    p.add_argument("--hbar", type=float, default=None)
    p.set_defaults(func=cmd_joint)
    p = sub.add_parser("consecutive", parents=[common, state], help="two measurements in a row")
    p.add_argument("--m1", required=True, help="first model (catalog name or file)")
    p.add_argument("--m2", required=True, help="second model (catalog name or file)")
    p.set_defaults(func=cmd_consecutive)
    p = sub.add_parser("amplify", parents=[common, model, state],
                       help="meter readout and macroscopic commutativity")
    p.add_argument("--hbar", type=float, default=1.0)
    p.set_defaults(func=cmd_amplify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, MeasurementError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

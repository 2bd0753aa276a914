"""Command-line interface.

Every subcommand prints a single-line JSON run report on stdout and, when
``--out`` is given, writes its primary artifact there atomically.

Exit codes: 0 ok, 1 domain failure, 2 usage or parse error.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import io
from .definetti import Mixture, simulate_tomography
from .exceptions import QbsicError, SchemaError
from .qbrep import (
    PathLabel,
    conditional_matrix,
    general_rule,
    GeneralizedParams,
    prob_to_rho,
    rho_to_prob,
    unitary_ground,
    urgleichung,
    urgleichung_unitary,
    validity_check,
)
from .qcore import cnot, computational_povm, ket, projector, random_density, random_pure, random_unitary, wigner_cycle
from .scenarios import cega_table, epr_joint, exhaustive_search, max_entangled, parity_check, random_eigenbasis
from .sic import SIC_TOL, frame_potential, frame_potential_bound, orbit, search_fiducial, verify_sic

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class DomainFailure(Exception):
    """A subcommand ran but its assertions did not hold."""


def _sic_for(args, d):
    if getattr(args, "fiducial", None):
        fid = io.validate_schema(args.fiducial, "fiducial")
        if fid.d != d:
            raise SchemaError(f"d: fiducial has d={fid.d}, need {d}")
    else:
        result = search_fiducial(d, args.restarts, args.max_iter, args.seed, SIC_TOL)
        if not result.success:
            raise DomainFailure(f"could not find a SIC in d={d}")
        fid = result.fiducial
    sic = orbit(fid)
    if not verify_sic(sic, SIC_TOL).passed:
        raise DomainFailure("fiducial does not certify as a SIC")
    return sic


def _load_state(args):
    """Probability vector from ``--state uniform`` / ``--in``; returns (d, p)."""
    if args.state == "uniform" or (args.state is None and args.input is None):
        if args.d is None:
            raise SchemaError("d: --d is required with the uniform state")
        return args.d, np.full(args.d ** 2, 1.0 / args.d ** 2)
    path = args.input if args.state is None else args.state
    return io.validate_schema(path, "probvector")


def cmd_find_sic(args):
    result = search_fiducial(args.d, args.restarts, args.max_iter, args.seed, args.tol)
    fp = frame_potential(result.fiducial)
    metrics = {
        "residual": result.best_residual,
        "frame_potential": fp,
        "frame_potential_gap": abs(fp - frame_potential_bound(args.d)),
        **{k: v for k, v in result.report.to_dict().items() if k != "tolerance"},
    }
    metrics["passed"] = bool(metrics["passed"])
    return metrics, io.encode_fiducial(result.fiducial), result.success


def cmd_verify_sic(args):
    fid = io.validate_schema(args.input, "fiducial")
    report = verify_sic(orbit(fid), args.tol)
    return report.to_dict(), report.to_dict(), report.passed


def cmd_rho2p(args):
    rho = io.validate_schema(args.input, "matrix")
    sic = _sic_for(args, rho.shape[0])
    p = rho_to_prob(rho, sic)
    return {"d": sic.d, "p": p.tolist()}, io.encode_probvector(p, sic.d), True


def cmd_p2rho(args):
    d, p = io.validate_schema(args.input, "probvector")
    sic = _sic_for(args, d)
    rho = prob_to_rho(p, sic)
    v = validity_check(p, sic, args.tol)
    return {"min_eigenvalue": v.min_eigenvalue, "valid": v.valid}, io.encode_matrix(rho), True


def cmd_validity(args):
    d, p = io.validate_schema(args.input, "probvector")
    sic = _sic_for(args, d)
    v = validity_check(p, sic, args.tol)
    out = {"valid": v.valid, "min_eigenvalue": v.min_eigenvalue}
    return out, out, v.valid


def cmd_urgleichung(args):
    d, p = _load_state(args)
    sic = _sic_for(args, d)
    if args.ground == "basis":
        ground = computational_povm(d)
        res = urgleichung(p, conditional_matrix(sic, ground), d, sic=sic, ground=ground,
                          tol=args.tol)
        ltp, q = res.ltp, res.q_of_d
    else:
        u = np.eye(d) if args.ground == "sic" else io.validate_schema(args.ground, "matrix")
        q = urgleichung_unitary(p, u, sic)
        ltp = conditional_matrix(sic, unitary_ground(sic, u)) @ p
    metrics = {"ltp": ltp.tolist(), "q": q.tolist()}
    artifact = {**metrics, "d": d, "ground": args.ground,
                "labels": {"ltp": PathLabel.E2.value, "q": PathLabel.E1.value}}
    return metrics, artifact, True


def cmd_evolve(args):
    d, p = _load_state(args)
    sic = _sic_for(args, d)
    if args.unitary:
        u = io.validate_schema(args.unitary, "matrix")
    else:
        u = random_unitary(d, np.random.default_rng(args.seed))
    q = urgleichung_unitary(p, u, sic)
    return {"q": q.tolist()}, io.encode_probvector(q, d), True


def cmd_general_rule(args):
    params = GeneralizedParams.from_qd(args.q, args.d)
    if args.input:
        _, r = io.validate_schema(args.input, "conditional")
        p = _load_distribution(args.p)
    else:
        rng = np.random.default_rng(args.seed)
        p = rng.dirichlet(np.ones(params.n))
        r = rng.dirichlet(np.ones(args.d), size=params.n).T
    out = general_rule(params, p, r)
    metrics = {"q": params.q, "d": params.d, "n": params.n, "alpha": params.alpha,
               "beta": params.beta, "Q": out.tolist()}
    return metrics, {**metrics, "p": p.tolist(), "r": r.tolist()}, True


def _load_distribution(path):
    if path is None:
        raise SchemaError("p: --p is required with --in")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"<root>: {exc}") from exc
    p = io._real_list(io._require(doc, "p", ""), "p")
    if abs(p.sum() - 1.0) > io.PROB_SUM_TOL:
        raise SchemaError(f"p: sum deviates from 1 (sum = {p.sum():.15g})")
    return p


def cmd_ks_check(args):
    table = io.validate_schema(args.input, "table") if args.input else cega_table()
    parity = parity_check(table)
    search = exhaustive_search(table)
    metrics = {
        "required_true": parity.required_true,
        "parity_forced": parity.parity_forced,
        "contradiction": parity.contradiction,
        "satisfying_count": search.satisfying_count,
        "assignments_checked": search.total,
    }
    consistent = not parity.contradiction or search.satisfying_count == 0
    return metrics, {**metrics, **table.to_dict()}, consistent


def cmd_epr(args):
    rng = np.random.default_rng(args.seed)
    pair = max_entangled(args.d)
    diag_dev = offdiag = 0.0
    joints = []
    for _ in range(args.samples):
        joint = epr_joint(random_eigenbasis(args.d, rng), pair)
        off = ~np.eye(args.d, dtype=bool)
        diag_dev = max(diag_dev, float(np.max(np.abs(np.diag(joint) - 1.0 / args.d))))
        offdiag = max(offdiag, float(joint[off].sum()))
        joints.append(joint.tolist())
    metrics = {"max_diagonal_deviation": diag_dev, "max_offdiagonal_mass": offdiag}
    ok = diag_dev <= args.tol and offdiag <= args.tol
    return metrics, {**metrics, "d": args.d, "joints": joints}, ok


def cmd_wigner(args):
    df, ds = (int(x) for x in args.dims.lower().split("x"))
    rng = np.random.default_rng(args.seed)
    distances = [
        wigner_cycle(random_density(df, rng), random_pure(ds, rng),
                     random_unitary(df * ds, rng)).reversal_distance
        for _ in range(args.samples)
    ]
    plus = (ket(0, 2) + ket(1, 2)) / np.sqrt(2)
    bell = wigner_cycle(projector(ket(0, 2)), plus, cnot())
    marg = max(float(np.max(np.abs(bell.friend_marginal - np.eye(2) / 2))),
               float(np.max(np.abs(bell.system_marginal - np.eye(2) / 2))))
    metrics = {"max_reversal_distance": max(distances), "cnot_marginal_deviation": marg}
    ok = metrics["max_reversal_distance"] <= args.tol and marg <= args.tol
    return metrics, {**metrics, "dims": [df, ds], "distances": distances}, ok


def cmd_definetti_sim(args):
    if args.input:
        mixture = io.validate_schema(args.input, "mixture")
    else:
        mixture = Mixture(np.array([0.5, 0.5]),
                          np.array([projector(ket(0, 2)), projector(ket(1, 2))]))
    sic = _sic_for(args, mixture.d)
    traj = simulate_tomography(args.truth, mixture, sic.effects, args.samples, args.seed)
    metrics = {"final_posterior": traj[-1].tolist(), "truth": args.truth,
               "posterior_on_truth": float(traj[-1][args.truth])}
    return metrics, traj.tolist(), True


COMMANDS = {
    "find-sic": cmd_find_sic,
    "verify-sic": cmd_verify_sic,
    "rho2p": cmd_rho2p,
    "p2rho": cmd_p2rho,
    "validity": cmd_validity,
    "urgleichung": cmd_urgleichung,
    "evolve": cmd_evolve,
    "general-rule": cmd_general_rule,
    "ks-check": cmd_ks_check,
    "epr": cmd_epr,
    "wigner": cmd_wigner,
    "definetti-sim": cmd_definetti_sim,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="qbsic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help, tol=SIC_TOL, d=False, search=False, inp=False, d_required=False):
        p = sub.add_parser(name, help=help)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--out", help="artifact path (JSON)")
        if d:
            p.add_argument("--d", type=int, required=d_required)
        if inp:
            p.add_argument("--in", dest="input", help="input JSON file")
        if search:
            p.add_argument("--restarts", type=int, default=10)
            p.add_argument("--max-iter", type=int, default=2000)
            p.add_argument("--fiducial", help="fiducial JSON; searched for if omitted")
        return p

    add("find-sic", "search for a SIC fiducial", d=True, search=True, d_required=True)
    add("verify-sic", "certify a fiducial file", inp=True)
    add("rho2p", "density matrix -> SIC probabilities", inp=True, search=True)
    add("p2rho", "SIC probabilities -> operator", inp=True, search=True)
    add("validity", "is a SIC probability vector a quantum state?", inp=True, search=True)
    p = add("urgleichung", "Born rule from cascaded probabilities", d=True, inp=True,
            search=True)
    p.add_argument("--state", help="'uniform' or a probability-vector file")
    p.add_argument("--ground", default="basis",
                   help="'basis', 'sic', or a unitary matrix file")
    p = add("evolve", "unitary evolution in the SIC picture", tol=1e-12, d=True, inp=True,
            search=True)
    p.add_argument("--state", help="'uniform' or a probability-vector file")
    p.add_argument("--unitary", help="unitary matrix file; random if omitted")
    p = add("general-rule", "evaluate the q-family rule", d=True, inp=True, d_required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", help='distribution file {"p": [...]}, used with --in')
    add("ks-check", "parity and exhaustive check of a KS table", inp=True)
    p = add("epr", "transpose correlations of a maximally entangled pair", tol=1e-12, d=True)
    p.set_defaults(d=4)
    p.add_argument("--samples", type=int, default=50)
    p = add("wigner", "entangle and reverse friend + system", tol=1e-12)
    p.add_argument("--dims", default="2x2")
    p.add_argument("--samples", type=int, default=100)
    p = add("definetti-sim", "Bayesian tomography over a discrete prior", inp=True,
            search=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--truth", type=int, default=0)
    return parser


def execute(args):
    """Run one parsed command; return (exit code, run report)."""
    start = time.perf_counter()
    report = {"subcommand": args.subcommand, "seed": args.seed, "tolerance": args.tol,
              "artifacts": [], "metrics": {}}
    try:
        metrics, artifact, ok = COMMANDS[args.subcommand](args)
        report["metrics"] = metrics
        if args.out:
            io.write_json(args.out, artifact)
            report["artifacts"].append(args.out)
        code = EXIT_OK if ok else EXIT_FAILED
    except SchemaError as exc:
        report["error"] = str(exc)
        code = EXIT_USAGE
    except (QbsicError, DomainFailure) as exc:
        report["error"] = str(exc)
        code = EXIT_FAILED
    report["status"] = "ok" if code == EXIT_OK else "failed"
    report["wall_time_ms"] = round(1000 * (time.perf_counter() - start), 3)
    return code, report


def main(argv=None):
    args = build_parser().parse_args(argv)
    code, report = execute(args)
    print(io.dumps(report))
    if "error" in report:
        print(f"qbsic {args.subcommand}: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

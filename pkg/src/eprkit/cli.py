"""Command-line front end.

Subcommands: epr, teleport, luders, chain, modular, verify, random.  Each
emits a single JSON report on stdout (or to --out) and a short human summary
on stderr.  Reports carry no timestamps, so identical invocations with the
same seed are byte-identical.

Exit codes: 0 success, 2 invalid input, 3 residual beyond tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import antilinear as al
from . import bipartite as bp
from . import modular as md
from . import teleport as tp
from . import verify as vf
from .errors import EprkitError, FactorizationFailure, ParseError, ToleranceExceeded
from .formats import (
    antilinear_to_json,
    bipartite_from_json,
    bipartite_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
)
from .linalg import partial_trace, psd_sqrt
from .sampling import complex_normal, random_state, random_unit_vector, rng_for

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOLERANCE = 3

PROBE_COUNT = 8  # seeded probe vectors per residual check


def _emit(report: dict, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _say(msg: str):
    print(msg, file=sys.stderr)


def _load_state(path, what: str) -> bp.BipartiteVector:
    return bipartite_from_json(load_json(path), what)


def _check(residuals: dict, tolerance: float):
    worst = max(residuals, key=residuals.get)
    if residuals[worst] > tolerance:
        raise ToleranceExceeded(
            f"residual {worst} = {residuals[worst]:.3e} exceeds tolerance {tolerance:.0e}"
        )


def cmd_epr(args) -> int:
    psi = _load_state(args.state, "state")
    tolerance = args.tolerance if args.tolerance is not None else 1e-10
    pair = bp.epr_maps(psi)
    omega_a = bp.reduced(psi, "a")
    omega_b = bp.reduced(psi, "b")

    rng = rng_for(args.seed, 1)
    dense = np.outer(psi.to_vector(), np.conj(psi.to_vector()))
    projection = pairing = inner = 0.0
    for _ in range(PROBE_COUNT):
        phi_a = random_unit_vector(rng, psi.dim_a)
        phi_b = random_unit_vector(rng, psi.dim_b)
        image = al.apply(pair.s_ba, phi_a)
        projection = max(
            projection,
            float(np.linalg.norm(bp.project_rank1(psi, phi_a).coeff - np.outer(phi_a, image))),
        )
        target = complex(np.vdot(np.kron(phi_a, phi_b), psi.to_vector()))
        pairing = max(
            pairing,
            abs(complex(np.vdot(phi_b, image)) - target),
            abs(complex(np.vdot(phi_a, al.apply(pair.s_ab, phi_b))) - target),
        )
        raw = complex_normal(rng, psi.dim_a, psi.dim_b)
        chi = bp.BipartiteVector(raw / np.linalg.norm(raw))
        inner = max(inner, abs(bp.inner_via_trace(chi, psi) - complex(np.vdot(chi.coeff, psi.coeff))))
    reduction = max(
        float(np.linalg.norm(omega_a - partial_trace(dense, psi.dim_a, psi.dim_b, "a"))),
        float(np.linalg.norm(omega_b - partial_trace(dense, psi.dim_a, psi.dim_b, "b"))),
    )
    residuals = {
        "projection": projection,
        "pairing": pairing,
        "inner_trace": inner,
        "reduction": reduction,
    }
    report = {
        "s_ba": antilinear_to_json(pair.s_ba),
        "s_ab": antilinear_to_json(pair.s_ab),
        "omega_a": matrix_to_json(omega_a),
        "omega_b": matrix_to_json(omega_b),
        "norm_sq": psi.norm() ** 2,
        "residuals": residuals,
    }
    _emit(report, args.out)
    _say(f"state ({psi.dim_a}x{psi.dim_b}), max residual {max(residuals.values()):.3e}")
    _check(residuals, tolerance)
    return EXIT_OK


def cmd_teleport(args) -> int:
    psi = _load_state(args.psi, "psi_ab")
    phi = _load_state(args.phi, "phi_bc")
    tolerance = args.tolerance if args.tolerance is not None else 1e-9
    tm = tp.teleport_map(psi, phi)
    tn, fid = tp.trace_norm_fidelity(tm)
    bound = tp.success_bound(tm)
    rng = rng_for(args.seed, 2)
    oracle_residual = 0.0
    for _ in range(PROBE_COUNT):
        v = random_unit_vector(rng, psi.dim_a)
        oracle_residual = max(
            oracle_residual,
            float(np.linalg.norm(tm.t @ v - tp.teleport_oracle(psi, phi, v))),
        )
    report = {
        "t": matrix_to_json(tm.t),
        "trace_norm": tn,
        "fidelity": fid,
        "op_bound": bound,
        "oracle_residual": oracle_residual,
    }
    _emit(report, args.out)
    _say(
        f"teleport map {tm.t.shape[0]}x{tm.t.shape[1]}: trace norm {tn:.6f}, "
        f"fidelity {fid:.6f}, bound {bound:.6f}, oracle residual {oracle_residual:.3e}"
    )
    _check({"oracle": oracle_residual, "trace_vs_fidelity": abs(tn - fid)}, tolerance)
    return EXIT_OK


def cmd_luders(args) -> int:
    spec = load_json(args.channel)
    tolerance = args.tolerance if args.tolerance is not None else 1e-9
    if "psis" in spec:
        psis = [bipartite_from_json(p, f"psis[{k}]") for k, p in enumerate(spec["psis"])]
    elif "psi_ab" in spec:
        psis = [bipartite_from_json(spec["psi_ab"], "psi_ab")]
    else:
        raise ParseError("channel spec needs 'psis' (list) or 'psi_ab'")
    if "phi_bc" not in spec:
        raise ParseError("channel spec needs 'phi_bc'")
    phi = bipartite_from_json(spec["phi_bc"], "phi_bc")
    ch = tp.luders_channel(psis, phi)
    op_bound, trace_bound = tp.luders_bounds(ch)

    rng = rng_for(args.seed, 3)
    decoupling = 0.0
    for _ in range(PROBE_COUNT):
        v = random_unit_vector(rng, ch.psis[0].dim_a)
        dense = tp.luders_project(ch, v)
        factored = np.zeros_like(dense)
        for psi_k, t_k in zip(ch.psis, ch.maps):
            factored += np.kron(psi_k.to_vector(), t_k @ v)
        decoupling = max(decoupling, float(np.linalg.norm(dense - factored)))

    report = {
        "maps": [matrix_to_json(t) for t in ch.maps],
        "rank": ch.rank,
        "ancilla_norm_sq": ch.ancilla_norm_sq,
        "op_bound": op_bound,
        "trace_bound": trace_bound,
        "decoupling_residual": decoupling,
    }
    if args.nu:
        nu = matrix_from_json(load_json(args.nu), "nu")
        report["output"] = matrix_to_json(tp.luders_apply(ch, nu))
    _emit(report, args.out)
    _say(
        f"channel of rank {ch.rank}: op bound {op_bound:.6f} "
        f"(ancilla norm sq {ch.ancilla_norm_sq:.6f}), decoupling residual {decoupling:.3e}"
    )
    _check({"decoupling": decoupling, "op_bound_excess": max(0.0, op_bound - ch.ancilla_norm_sq)}, tolerance)
    return EXIT_OK


def cmd_chain(args) -> int:
    spec = load_json(args.chain)
    tolerance = args.tolerance if args.tolerance is not None else 1e-10
    if "stages" not in spec or not isinstance(spec["stages"], list):
        raise ParseError("chain spec needs a 'stages' list")
    stages = [bipartite_from_json(s, f"stages[{k}]") for k, s in enumerate(spec["stages"])]
    t_ea = tp.chain_teleport(stages)
    rng = rng_for(args.seed, 4)
    oracle_residual = 0.0
    for _ in range(PROBE_COUNT):
        v = random_unit_vector(rng, stages[0].dim_a)
        out = tp.chain_oracle(v, [stages[1], stages[3]], [stages[0], stages[2]])
        oracle_residual = max(oracle_residual, float(np.linalg.norm(t_ea @ v - out)))
    report = {"t": matrix_to_json(t_ea), "oracle_residual": oracle_residual}
    _emit(report, args.out)
    _say(f"chain map {t_ea.shape[0]}x{t_ea.shape[1]}, oracle residual {oracle_residual:.3e}")
    _check({"oracle": oracle_residual}, tolerance)
    return EXIT_OK


def cmd_modular(args) -> int:
    phi = _load_state(args.phi, "phi")
    psi = _load_state(args.psi, "psi")
    tolerance = args.tolerance if args.tolerance is not None else 1e-9
    triple = md.tomita_S(phi, psi)
    d = psi.dim_a
    defining = 0.0
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d), dtype=np.complex128)
            e_ij[i, j] = 1.0
            lhs = triple.s((e_ij @ psi.coeff).reshape(-1))
            rhs = (e_ij.conj().T @ phi.coeff).reshape(-1)
            defining = max(defining, float(np.linalg.norm(lhs - rhs)))
    reconstruction = float(
        np.linalg.norm(triple.s.mat - triple.j.mat @ np.conj(psd_sqrt(triple.delta)))
    )
    j_twisted = md.lift_operators(psi, phi).j
    phase_match = float(np.linalg.norm(triple.j.mat - j_twisted.mat))
    lhs = triple.s.mat @ np.conj(np.kron(np.eye(d), psd_sqrt(bp.reduced(psi, "b"))))
    rhs = j_twisted.mat @ np.conj(np.kron(psd_sqrt(bp.reduced(phi, "a")), np.eye(d)))
    intertwine = float(np.linalg.norm(lhs - rhs))
    residuals = {
        "defining": defining,
        "reconstruction": reconstruction,
        "phase_match": phase_match,
        "intertwine": intertwine,
    }
    report = {
        "S": antilinear_to_json(triple.s),
        "Delta": matrix_to_json(triple.delta),
        "J": antilinear_to_json(triple.j),
        "residuals": residuals,
    }
    _emit(report, args.out)
    _say(f"modular triple on {d}x{d}, max residual {max(residuals.values()):.3e}")
    _check(residuals, tolerance)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = vf.run_all(
        seed=args.seed,
        dims=args.dims,
        trials=args.trials,
        tolerance=args.tolerance,
        jobs=args.jobs,
    )
    report = {
        "seed": args.seed,
        "dims": list(args.dims),
        "trials": args.trials,
        "results": [
            {
                "identity": r.name,
                "residual": r.residual,
                "tolerance": r.tolerance,
                "pass": r.passed,
            }
            for r in results
        ],
        "pass": all(r.passed for r in results),
    }
    _emit(report, args.out)
    width = max(len(r.name) for r in results)
    for r in results:
        _say(f"{'ok  ' if r.passed else 'FAIL'} {r.name:<{width}}  {r.residual:.3e}  (tol {r.tolerance:.0e})")
    _say(f"{sum(r.passed for r in results)}/{len(results)} identities within tolerance")
    vf.check_all(results)
    return EXIT_OK


def cmd_random(args) -> int:
    if len(args.dims) != 2:
        raise ParseError("random needs exactly two dimensions, e.g. --dims 2 2")
    psi = random_state(args.dims, args.seed, entangled=args.entangled)
    _emit(bipartite_to_json(psi), args.out)
    _say(f"random state ({psi.dim_a}x{psi.dim_b}), seed {args.seed}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprkit",
        description="Antilinear maps of bipartite states, teleportation channels, modular operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tolerance_default_doc: str):
        p.add_argument("--seed", type=int, default=42, help="seed for probe vectors (default 42)")
        p.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help=f"residual tolerance (default {tolerance_default_doc})",
        )
        p.add_argument("--out", default=None, help="write the JSON report to this file")

    p = sub.add_parser("epr", help="induced maps, reductions, and residuals of one state")
    p.add_argument("state", help="bipartite vector JSON file")
    common(p, "1e-10")
    p.set_defaults(func=cmd_epr)

    p = sub.add_parser("teleport", help="channel matrix, norms, fidelity, oracle residual")
    p.add_argument("psi", help="measured vector psi_ab JSON file")
    p.add_argument("phi", help="ancilla phi_bc JSON file")
    common(p, "1e-9")
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("luders", help="higher-rank measurement channel and its bounds")
    p.add_argument("channel", help="channel spec JSON file with 'psis' or 'psi_ab', and 'phi_bc'")
    p.add_argument("--nu", default=None, help="optional operator JSON file to push through the channel")
    common(p, "1e-9")
    p.set_defaults(func=cmd_luders)

    p = sub.add_parser("chain", help="five-subsystem distributed channel")
    p.add_argument("chain", help="chain spec JSON file with a 4-element 'stages' list")
    common(p, "1e-10")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("modular", help="modular operators S, Delta, J of a state pair")
    p.add_argument("phi", help="target state phi JSON file")
    p.add_argument("psi", help="completely entangled state psi JSON file")
    common(p, "1e-9")
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("verify", help="run every identity suite on seeded random instances")
    common(p, "per identity")
    p.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4], help="dimensions to sample")
    p.add_argument("--trials", type=int, default=100, help="trials per suite (default 100)")
    p.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="run independent trial chunks on this many threads; the report is identical",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="emit a seeded random bipartite vector")
    common(p, "unused")
    p.add_argument("--dims", type=int, nargs="+", default=[2, 2], help="dim_a dim_b")
    p.add_argument(
        "--entangled",
        action="store_true",
        help="rejection-sample until both reductions have full rank",
    )
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if (
        getattr(args, "trials", 1) < 1
        or getattr(args, "jobs", 1) < 1
        or (args.tolerance is not None and args.tolerance <= 0)
    ):
        _say("error: trials and jobs must be >= 1 and tolerance positive")
        return EXIT_INVALID
    if any(d < 1 for d in getattr(args, "dims", [1])):
        _say("error: dimensions must be positive")
        return EXIT_INVALID
    try:
        return args.func(args)
    except (ToleranceExceeded, FactorizationFailure) as exc:
        _say(f"error: {exc}")
        return EXIT_TOLERANCE
    except EprkitError as exc:
        _say(f"error: {exc}")
        return EXIT_INVALID
    except OSError as exc:
        _say(f"error: {exc}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

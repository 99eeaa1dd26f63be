"""Command-line front end.

Subcommands: ``distance``, ``coreset``, ``cluster``, ``median1``,
``verify`` and ``generate``.  Every command is deterministic given
``--seed``; omitting it draws one from entropy and prints it.  Floats are
printed with 17 significant digits so outputs round-trip exactly.

Exit codes: 0 success, 2 invalid input, 3 capacity exceeded,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .clustering import cost, kl_median_constant_factor
from .coreset import build_coreset
from .curves import load_dataset, save_dataset, save_weighted_set
from .errors import CapacityError, InvalidInputError, VerificationError
from .generator import synthetic_clusters
from .frechet import frechet_distance
from .median1 import Median1Config, one_median_5eps
from .verify import SUITES, run_suites

logger = logging.getLogger("curvemedian")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    seed = int(np.random.SeedSequence().entropy % (2**63))
    print(f"seed: {seed}")
    return seed


def _load(args):
    return load_dataset(args.input, format=args.format)


def _write_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def _curve_payload(curve):
    return {
        "id": curve.id,
        "vertices": [[float(x) for x in v] for v in curve.vertices],
    }


def cmd_distance(args) -> int:
    a = load_dataset(args.files[0], format=args.format)
    b = load_dataset(args.files[1], format=args.format)
    if len(a) != 1 or len(b) != 1:
        raise InvalidInputError("distance expects exactly one curve per file")
    print(_fmt(frechet_distance(a[0], b[0])))
    return EXIT_OK


def cmd_coreset(args) -> int:
    ds = _load(args)
    seed = _resolve_seed(args)
    ws = build_coreset(
        ds,
        args.k,
        args.ell,
        args.epsilon,
        args.delta,
        args.coreset_size,
        seed,
        mode=args.mode,
        threads=args.threads,
    )
    out = Path(args.output)
    save_weighted_set(ws, out)
    sidecar = {
        "seed": seed,
        "n": len(ds),
        "k": args.k,
        "ell": args.ell,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "sample_size": len(ws),
        "Gamma": ws.profile.total_gamma,
        "Lambda": ws.profile.total_lambda,
        "alpha_hat": ws.profile.alpha,
        "k_prime": ws.profile.k_prime,
        "profile_hash": ws.profile.content_hash(),
    }
    _write_json(out.with_suffix(out.suffix + ".meta.json"), sidecar)
    print(f"coreset of {len(ws)} entries written to {out}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    ds = _load(args)
    seed = _resolve_seed(args)
    result = kl_median_constant_factor(
        ds, args.k, args.ell, args.delta, seed, mode=args.mode, threads=args.threads
    )
    payload = {
        "k": args.k,
        "ell": args.ell,
        "mode": args.mode,
        "seed": seed,
        "approx_factor": result.approx_factor,
        "total_cost": result.total_cost,
        "cluster_costs": [float(c) for c in result.cluster_costs],
        "assignment": [int(i) for i in result.assignment],
        "centers": [_curve_payload(c) for c in result.centers],
    }
    _write_json(args.output, payload)
    return EXIT_OK


def cmd_median1(args) -> int:
    ds = _load(args)
    seed = _resolve_seed(args)
    cfg = Median1Config(
        epsilon=args.epsilon,
        delta=args.delta,
        ell=args.ell,
        rng_seed=seed,
        candidate_cap=args.candidate_cap,
        coreset_size=args.coreset_size,
        threads=args.threads,
    )
    winner, trace = one_median_5eps(ds, cfg)
    payload = {
        "seed": seed,
        "winner": _curve_payload(winner),
        "full_cost": cost(ds, [winner], threads=args.threads),
        "trace": trace.to_dict(),
    }
    _write_json(args.output, payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else [args.suite]
    passed, checks = run_suites(names, fast=not args.full)
    payload = {"passed": passed, "checks": checks}
    _write_json(args.output, payload)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        extra = ""
        if c["measured"] is not None and c["bound"] is not None:
            extra = f" (measured {_fmt(c['measured'])}, bound {_fmt(c['bound'])})"
        print(f"[{status}] {c['suite']}/{c['name']}{extra}")
    if not passed:
        raise VerificationError("one or more verification checks failed")
    return EXIT_OK


def cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    lo, hi = (args.complexity, args.complexity) if args.max_complexity is None else (
        args.complexity,
        args.max_complexity,
    )
    ds, labels = synthetic_clusters(
        args.clusters,
        args.per_cluster,
        (lo, hi),
        args.d,
        separation=args.separation,
        noise=args.noise,
        seed=seed,
    )
    save_dataset(ds, args.output, format=args.format)
    print(f"wrote {len(ds)} curves ({args.clusters} clusters) to {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="curvemedian",
        description="Median clustering of polygonal curves under the Frechet distance",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, input_file=True):
        if input_file:
            sp.add_argument("--input", required=True, help="dataset file")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    sp = sub.add_parser("distance", help="Frechet distance between two single-curve files")
    sp.add_argument("files", nargs=2)
    sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("coreset", help="build a weighted coreset")
    common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--coreset-size", type=int, default=None)
    sp.add_argument("--mode", choices=("exhaustive", "local_search"), default="exhaustive")
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_coreset)

    sp = sub.add_parser("cluster", help="constant-factor k median clustering")
    common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--mode", choices=("exhaustive", "local_search"), default="exhaustive")
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("median1", help="accelerated (5+eps)-approximate 1-median")
    common(sp)
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--delta", type=float, default=0.2)
    sp.add_argument("--coreset-size", type=int, default=None)
    sp.add_argument("--candidate-cap", type=int, default=5 * 10**9)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_median1)

    sp = sub.add_parser("verify", help="run oracle verification suites")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--full", action="store_true", help="run the slower full-size checks")
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", help="generate a synthetic clustered dataset")
    sp.add_argument("--clusters", type=int, default=3)
    sp.add_argument("--per-cluster", type=int, default=10)
    sp.add_argument("--complexity", type=int, default=4)
    sp.add_argument("--max-complexity", type=int, default=None)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--separation", type=float, default=10.0)
    sp.add_argument("--noise", type=float, default=0.1)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sp.add_argument("--output", required=True)
    sp.set_defaults(func=cmd_generate)

    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CORESET_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

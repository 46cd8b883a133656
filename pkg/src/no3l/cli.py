"""Command-line entry point: ``no3l <subcommand> ...``.

Reports go to stdout as JSON (or CSV rows with ``--csv``), diagnostics to
stderr. Exit status: 0 ok, 1 domain error or failed verification, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import __version__
from .census import compare_asymptotic, count_triples_brute, count_triples_fast
from .heuristic import conjecture_constants, estimate_report
from .montecarlo import independence_gap, sample_triple_collinearity
from .solver import SolverConfig, count_maximum_solutions, solve
from .verify import verify_witness


class DomainError(Exception):
    pass


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("NO3L_THREADS")
    if env:
        try:
            t = int(env)
        except ValueError:
            raise DomainError(f"NO3L_THREADS must be an integer, got {env!r}") from None
        if t < 1:
            raise DomainError("NO3L_THREADS must be >= 1")
        return t
    return 1


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _sweep(text: str) -> list[float]:
    """Parse ``k=LO:HI:STEP`` into an inclusive list of k values."""
    try:
        name, rng = text.split("=", 1)
        lo, hi, step = (float(v) for v in rng.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like k=1.0:2.0:0.1, got {text!r}") from None
    if name != "k" or step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad sweep {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=None,
                        help="worker count (default: $NO3L_THREADS or 1)")

    p = argparse.ArgumentParser(prog="no3l", description="No-three-in-line numerics toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("census", parents=[common], help="exact collinear-triple count t_n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--brute", action="store_true", help="use the O(n^6) oracle and cross-check")
    c.add_argument("--compare", action="store_true", help="add the (3/pi^2) n^4 ln n comparison")
    c.add_argument("--brute-cap", type=int, default=14)

    s = sub.add_parser("solve", parents=[common], help="search for a maximum no-3-in-line set")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--target", default="2n", help="'2n', 'max' (prove optimality) or an integer")
    s.add_argument("--time-budget", type=float, default=60.0, help="seconds; 0 disables")
    s.add_argument("--node-budget", type=_positive_int, default=None)
    s.add_argument("--symmetry-breaking", action="store_true")
    s.add_argument("--out", help="write the witness here")

    v = sub.add_parser("verify", parents=[common], help="check a witness file")
    v.add_argument("path")

    k = sub.add_parser("count", parents=[common], help="count maximum solutions exhaustively")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--cap", type=int, default=5)

    e = sub.add_parser("estimate", parents=[common], help="heuristic estimate at (n, k)")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=float, required=True)
    e.add_argument("--slack", type=float, default=1.0, help="constant C of the +-C*n bracket")
    e.add_argument("--no-exact", action="store_true", help="skip the census behind p_triple_exact")
    fmt = e.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true")

    sub.add_parser("constants", parents=[common], help="both conjectured density constants")

    mc = sub.add_parser("mc", help="Monte Carlo experiments")
    mcs = mc.add_subparsers(dest="mc_command", required=True)
    ms = mcs.add_parser("survival", parents=[common], help="survival of random kn-subsets")
    ms.add_argument("--n", type=int, required=True)
    grp = ms.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=float)
    grp.add_argument("--sweep", type=_sweep, help="k=LO:HI:STEP, one row per k")
    ms.add_argument("--samples", type=_positive_int, required=True)
    ms.add_argument("--seed", type=int, required=True)
    ms.add_argument("--csv", action="store_true")
    mt = mcs.add_parser("triples", parents=[common], help="collinearity of random triples")
    mt.add_argument("--n", type=int, required=True)
    mt.add_argument("--samples", type=_positive_int, required=True)
    mt.add_argument("--seed", type=int, required=True)
    return p


def _census(args, threads: int) -> dict:
    if args.brute:
        t = count_triples_brute(args.n, cap=args.brute_cap).value
        fast = count_triples_fast(args.n, threads=threads).value
        out = {"n": args.n, "t": str(t), "method": "brute", "t_fast": str(fast), "agrees": t == fast}
    else:
        t = count_triples_fast(args.n, threads=threads).value
        out = {"n": args.n, "t": str(t), "method": "fast"}
    if args.compare:
        cmp = compare_asymptotic(args.n, threads=threads)
        out.update(main_term=cmp.main_term, ratio=cmp.ratio)
    return out


def _solve(args, threads: int) -> dict:
    target: Optional[int] = None
    exhaustive = False
    if args.target == "max":
        exhaustive = True
    elif args.target == "2n":
        target = 2 * args.n
    else:
        try:
            target = int(args.target)
        except ValueError:
            raise DomainError(f"--target must be '2n', 'max' or an integer, got {args.target!r}") from None
    cfg = SolverConfig(
        node_budget=args.node_budget,
        time_budget=args.time_budget or None,
        target_size=target,
        exhaustive=exhaustive,
        symmetry_breaking=args.symmetry_breaking,
        thread_count=threads,
    )
    r = solve(args.n, cfg)
    if args.out:
        r.witness.write(args.out)
    return {
        "n": r.n,
        "best_size": r.best_size,
        "witness": [list(p) for p in r.witness],
        "proven_optimal": r.proven_optimal,
        "nodes_explored": r.nodes_explored,
        "elapsed_ms": round(r.elapsed * 1000.0, 3),
    }


def _verify(args) -> dict:
    try:
        v = verify_witness(args.path)
    except OSError as exc:
        raise DomainError(f"cannot read {args.path}: {exc.strerror}") from None
    return {
        "path": args.path,
        "n": v.n,
        "size": v.size,
        "valid": v.ok,
        "reason": v.reason,
        "triple": [list(p) for p in v.triple] if v.triple else None,
    }


def _estimate_row(n, k, slack, exact) -> dict:
    d = estimate_report(n, k, slack=slack, exact=exact).to_dict()
    d["survival_bracket"] = list(d["survival_bracket"])
    d["count_log10_bracket"] = list(d["count_log10_bracket"])
    return d


def _constants() -> dict:
    c = conjecture_constants()
    return {"k_corrected": f"{c.k_corrected:.12f}", "k_original": f"{c.k_original:.12f}"}


def _csv_text(rows: list[dict]) -> str:
    flat = []
    for r in rows:
        f = {}
        for key, val in r.items():
            if isinstance(val, (list, tuple)):
                for i, x in enumerate(val):
                    f[f"{key}_{'lo' if i == 0 else 'hi'}"] = x
            else:
                f[key] = val
        flat.append(f)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def _params(args) -> dict:
    skip = {"command", "mc_command", "json", "csv"}
    out = {}
    for key, val in vars(args).items():
        if key not in skip and val is not None:
            out[key] = val
    return out


def _emit(payload, manifest: dict, as_csv: bool) -> None:
    if as_csv:
        rows = payload if isinstance(payload, list) else [payload]
        for r in rows:
            r["tool_version"] = manifest["tool_version"]
            r.setdefault("seed", manifest["seed"])
        sys.stdout.write(_csv_text(rows))
        return
    if isinstance(payload, list):
        doc = {"rows": payload, "manifest": manifest}
    else:
        doc = dict(payload, manifest=manifest)
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)  # usage errors exit 2
    name = args.command if args.command != "mc" else f"mc {args.mc_command}"
    started = _now()
    status = 0
    as_csv = bool(getattr(args, "csv", False))
    try:
        threads = _threads(args)
        if args.command == "census":
            payload = _census(args, threads)
        elif args.command == "solve":
            payload = _solve(args, threads)
        elif args.command == "verify":
            payload = _verify(args)
            status = 0 if payload["valid"] else 1
        elif args.command == "count":
            payload = {"n": args.n, "count": str(count_maximum_solutions(args.n, cap=args.cap))}
        elif args.command == "estimate":
            payload = _estimate_row(args.n, args.k, args.slack, not args.no_exact)
        elif args.command == "constants":
            payload = _constants()
        elif args.mc_command == "survival":
            ks = args.sweep if args.sweep is not None else [args.k]
            rows = [independence_gap(args.n, k, args.samples, args.seed, threads).to_dict() for k in ks]
            payload = rows if args.sweep is not None else rows[0]
        else:
            payload = sample_triple_collinearity(args.n, args.samples, args.seed, threads).to_dict()
    except (DomainError, ValueError, OverflowError) as exc:
        print(f"no3l {name}: error: {exc}", file=sys.stderr)
        return 1
    manifest = {
        "subcommand": name,
        "parameters": _params(args),
        "seed": getattr(args, "seed", None),
        "threads": threads,
        "tool_version": __version__,
        "started": started,
        "finished": _now(),
    }
    _emit(payload, manifest, as_csv)
    if status:
        print(f"no3l verify: invalid witness: {payload['reason']}", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(dispatch())

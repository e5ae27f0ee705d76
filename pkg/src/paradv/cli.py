"""Command line front end: ``paradv bound | simulate | sweep``.

Exit codes: 0 on success, 2 on rejected parameters, 1 on internal errors.
Set ``PARADV_WORKERS`` to bound the thread pool used for tuple sweeps.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction

from . import report
from .adversary import counting_adversary, default_workers
from .errors import ParameterError
from .model import CountingSpec, build_counting_instance, format_fraction, parse_fraction
from .simulator import (
    grover_success,
    parallel_disjoint_counters,
    phase_estimation_count,
    progress_trace,
    random_schedule,
)

log = logging.getLogger("paradv")


def parse_int_range(text: str) -> list[int]:
    """``"1,2,4"``, ``"1..3"`` or a mix such as ``"1..2,8"``."""
    out: list[int] = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return sorted(set(out))


def parse_eps_list(text: str) -> list[Fraction]:
    return sorted({parse_fraction(s) for s in text.split(",") if s.strip()})


def _rational(text: str) -> Fraction:
    if "/" not in text:
        raise argparse.ArgumentTypeError(f"epsilon must be a rational literal a/b, got {text!r}")
    return parse_fraction(text)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_bound(args) -> int:
    rep = report.bound_report(args.n, args.k, args.eps, args.p, args.mode, args.workers)
    print(rep.render())
    _write(args.out, report.dumps(rep.to_record()))
    return 0


def cmd_simulate(args) -> int:
    record: dict = {"subcommand": args.what}
    if args.what == "grover":
        marked = parse_int_range(args.marked)
        prob = grover_success(args.n, marked, args.iters)
        record.update(n=args.n, marked=marked, iterations=args.iters, success=report.sig12(prob))
        print(f"success={prob:.9f}")
    elif args.what == "count":
        spec = CountingSpec(args.n, args.eps)
        est = phase_estimation_count(spec, args.k, args.tbits)
        khat, pk = est.mode()
        record.update(epsilon=format_fraction(spec.epsilon), **est.to_record())
        print(f"khat={khat} p={pk:.9f} queries={est.queries} success={est.success_prob:.9f}")
    elif args.what == "pcount":
        spec = CountingSpec(args.n, args.eps)
        res = parallel_disjoint_counters(spec, args.k, args.p, args.tbits, args.seed, args.trials)
        record.update(epsilon=format_fraction(spec.epsilon),
                      generator="numpy.random.default_rng(PCG64)", **res.to_record())
        print(
            f"depth={res.depth} total_queries={res.total_queries} "
            f"exact_success={res.exact_success_prob:.9f} empirical_success={res.empirical_success_rate:.9f} "
            f"variance={res.empirical_variance:.9g}"
        )
    elif args.what == "progress":
        inst = build_counting_instance(args.n, args.k, args.eps)
        gamma = counting_adversary(inst)
        sch = random_schedule(args.n, args.p, args.T, args.seed)
        tr = progress_trace(gamma, sch, args.workers)
        record.update(instance={"n": args.n, "K": args.k, "epsilon": format_fraction(inst.epsilon)},
                      schedule=sch.description, trace=tr.to_record())
        print(
            f"W0={tr.W[0]:.9f} WT={tr.W[-1]:.9f} max_step={max(tr.deltas, default=0.0):.9f} "
            f"step_bound={tr.step_bound:.9f} step_bound_ok={str(tr.step_bound_ok).lower()}"
        )
    _write(args.out, report.dumps(record))
    return 0


def cmd_sweep(args) -> int:
    points = [
        (n, k, e, p)
        for n in parse_int_range(args.n)
        for k in parse_int_range(args.k)
        for e in parse_eps_list(args.eps)
        for p in parse_int_range(args.p)
    ]
    rows = []
    for n, k, e, p in points:
        try:
            rep = report.bound_report(n, k, e, p, "all", args.workers)
        except ParameterError as exc:
            log.warning("skipping n=%d K=%d eps=%s p=%d: %s: %s",
                        n, k, format_fraction(e), p, type(exc).__name__, exc)
            continue
        rows.append(report.SweepRow.from_report(rep))
    if not rows:
        print("error: no valid sweep points", file=sys.stderr)
        return 2
    text = report.sweep_csv(rows)
    if args.out:
        _write(args.out, text)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paradv", description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=None,
                    help="thread pool size (default: $PARADV_WORKERS or CPU count)")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="closed-form, enumerated and spectral bounds for one instance")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--eps", type=_rational, required=True)
    b.add_argument("--p", type=int, default=1)
    b.add_argument("--mode", choices=report.MODES, default="all")
    b.add_argument("--out", help="write the JSON report here")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("simulate", help="statevector experiments")
    s.add_argument("what", choices=("grover", "count", "pcount", "progress"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--eps", type=_rational, default=Fraction(1, 2))
    s.add_argument("--p", type=int, default=1)
    s.add_argument("--marked", default="0")
    s.add_argument("--iters", type=int, default=1)
    s.add_argument("--tbits", type=int, default=3)
    s.add_argument("--T", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--out", help="write the experiment record here")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="CSV table of bounds over a parameter grid")
    w.add_argument("--n", required=True, help='e.g. "2,3" or "2..3"')
    w.add_argument("--k", required=True)
    w.add_argument("--eps", required=True, help='comma-separated rationals, e.g. "1/1,1/2"')
    w.add_argument("--p", default="1")
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    if args.workers is None:
        args.workers = default_workers()
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

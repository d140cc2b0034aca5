"""Command-line front end: ``oplab run <suite>`` and ``oplab check-matrix PATH``."""

import argparse
import json
import sys
from pathlib import Path

from .completion import criterion_from_matrix
from .errors import OplabError
from .linalg import is_contraction, is_upper_triangular, matrix_from_json
from .report import to_plain
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2


def check_matrix(path, tolerance=1e-10):
    """Contraction verdict for the matrix stored at ``path``, plus the 3x3
    criterion when the matrix is 3x3 upper triangular."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OplabError(f"cannot read {path}: {exc}") from exc
    m = matrix_from_json(text)
    verdict = is_contraction(m, tolerance)
    out = {"shape": list(m.shape), "contraction": verdict.to_dict()}
    if m.shape == (3, 3) and is_upper_triangular(m):
        crit = criterion_from_matrix(m, tol=tolerance)
        out["criterion_3x3"] = crit.to_dict()
    else:
        out["criterion_3x3"] = None
        out["note"] = "3x3 criterion applies only to 3x3 upper-triangular input"
    return verdict, out


def _parser():
    p = argparse.ArgumentParser(prog="oplab", description="Randomized checks of Schur-class inequalities.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a named verification suite")
    run.add_argument("suite", choices=sorted(SUITES))
    run.add_argument("--trials", type=int, default=1000)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol", type=float, default=1e-10)
    run.add_argument("--degree", type=int, default=6)
    run.add_argument("--out", default=None, help="write the JSON summary here")
    run.add_argument("--reports", action="store_true", help="keep per-trial reports in the JSON")
    run.add_argument("--json", action="store_true", help="print the JSON summary on stdout")

    chk = sub.add_parser("check-matrix", help="test one matrix from a JSON file")
    chk.add_argument("path")
    chk.add_argument("--tol", type=float, default=1e-10)
    chk.add_argument("--json", action="store_true")

    sub.add_parser("list", help="list suite names")
    return p


def _cmd_run(args):
    cfg = SuiteConfig(args.suite, trials=args.trials, seed=args.seed, tolerance=args.tol,
                      output_path=args.out, degree_cap=args.degree, keep_reports=args.reports)
    summary = run_suite(cfg)
    if args.json:
        print(summary.to_json())
    else:
        print(f"{summary.suite}: {summary.trials_run} trials, {summary.failures} failures, "
              f"worst slack {summary.worst_slack:.3e}, {summary.equality_hits} equality hits, "
              f"{summary.wall_time_ms:.0f} ms")
    return EXIT_OK if summary.failures == 0 else EXIT_FAILURES


def _cmd_check(args):
    verdict, out = check_matrix(args.path, args.tol)
    crit = out["criterion_3x3"]
    failed = not verdict.is_contraction
    if args.json:
        print(json.dumps(to_plain(out), sort_keys=True, indent=2))
    else:
        word = "contraction" if verdict.is_contraction else "not a contraction"
        print(f"{word}: norm {verdict.norm:.15g}, margin {verdict.margin:.3e}")
        if crit is None:
            print(out["note"])
        else:
            print(f"3x3 criterion ({crit['branch']} branch): "
                  f"{'contraction' if crit['is_contraction'] else 'not a contraction'}")
            for key, slack in sorted(crit["conditions"].items()):
                print(f"  {key}: slack {slack + 0.0:.3e}")
            if crit.get("flagged"):
                print("  warning: |w2| lies in the boundary band and the two branches disagree")
    return EXIT_FAILURES if failed else EXIT_OK


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "list":
            print("\n".join(sorted(SUITES)))
            return EXIT_OK
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_check(args)
    except (OplabError, ValueError, OSError) as exc:
        print(f"oplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Run the verification suites over the default parameter grid.

Usage:
    python3 scripts/verify_grid.py
    python3 scripts/verify_grid.py --suite ortho --wmax 5
    python3 scripts/verify_grid.py --n 3 --k 2 --ell 2 --m 1

Prints one line per check and a final summary; exits 1 when anything fails.
MVOP_THREADS caps the worker pool for the grid run.
"""

import argparse
import sys
import time
from dataclasses import dataclass

from mvop.params import Params
from mvop.report import SUITES, run_grid, run_suite


@dataclass
class Config:
    suite: str
    wmax: int
    params: Params | None


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--suite", choices=SUITES, default="all")
    ap.add_argument("--wmax", type=int, default=4)
    ap.add_argument("--n", type=int)
    ap.add_argument("--k", type=int)
    ap.add_argument("--ell", type=int)
    ap.add_argument("--m", type=int)
    args = ap.parse_args(argv)
    params = None
    if args.n is not None:
        params = Params.integer(args.n, args.k, args.ell, args.m)
    return Config(suite=args.suite, wmax=args.wmax, params=params)


def main(argv=None) -> int:
    cfg = parse_args(argv)
    t0 = time.perf_counter()
    if cfg.params is None:
        reports = run_grid(None, cfg.suite, cfg.wmax)
    else:
        reports = [run_suite(cfg.params, cfg.suite, cfg.wmax)]
    elapsed = time.perf_counter() - t0

    npass = ntot = 0
    for rep in reports:
        where = " ".join(f"{k}={v}" for k, v in rep.params.items())
        for c in rep.checks:
            ntot += 1
            npass += c.status == "pass"
            tag = "PASS" if c.status == "pass" else "FAIL"
            print(f"[{tag}] {where} :: {c.name} max_resid={c.max_residual:.3g} "
                  f"tol={c.tolerance:.0e}")
    print(f"summary: {npass}/{ntot} checks passed on {len(reports)} "
          f"parameter set(s) in {elapsed:.2f}s")
    return 0 if npass == ntot else 1


if __name__ == "__main__":
    sys.exit(main())

"""Run limit suites and write their reports as JSON.

    python3 scripts/run_limit_suites.py                       # every suite
    python3 scripts/run_limit_suites.py kpz_fixed bessel3 --n 20000 --out reports/
"""
import argparse
import pathlib
import time

from kpzmarkov import io
from kpzmarkov.limits import SUITE_NAMES, LimitSuite, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("suites", nargs="*", default=list(SUITE_NAMES))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in args.suites:
        t0 = time.perf_counter()
        rep = run_suite(LimitSuite(name, seed=args.seed, n=args.n))
        dt = time.perf_counter() - t0
        io.write_atomic(str(out / f"{name}.json"), io.dumps_json(rep.to_dict()))
        print(f"{name:20s} {'PASS' if rep.passed else 'FAIL'}  {dt:6.1f} s")
        for c in rep.checks:
            series = " ".join(f"{v:.3g}" for v in c.series)
            print(f"    {'ok  ' if c.passed else 'FAIL'} {c.name:40s} {c.statistic:.4g} "
                  f"(tol {c.tolerance:.3g}) {series}")
        failed += not rep.passed
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Run the valuation/limit verification grid and write a JSON report.

Defaults match the CLI: every eligible inert prime up to 12 per level,
per-prime depth chosen so K * p^(2m+1) stays under the precision ceiling.
The full default grid takes a minute or two; pass --m-max 1 for a quick run.
"""

import argparse
import json
import sys
import time

from qmod.cli import RunConfig, _parse_primes, run_grid
from qmod.verify import DEFAULT_CACHE


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", default="27,32,36,64,144",
                    help="comma separated catalog levels")
    ap.add_argument("--primes", default="auto:12")
    ap.add_argument("--m-max", type=int, default=None, dest="m_max")
    ap.add_argument("--K", type=int, default=20)
    ap.add_argument("--out", default="qmod_report.json")
    args = ap.parse_args()

    primes, bound = _parse_primes(args.primes)
    cfg = RunConfig(
        command="verify",
        levels=tuple(int(x) for x in args.levels.split(",")),
        primes=primes,
        prime_bound=bound,
        m_max=args.m_max,
        K=args.K,
    ).validate()

    t0 = time.perf_counter()
    reports, skipped = run_grid(cfg, DEFAULT_CACHE)
    elapsed = time.perf_counter() - t0

    npass = sum(1 for r in reports if r.passed)
    payload = {
        "reports": [r.to_json_dict() for r in reports],
        "skipped": skipped,
        "summary": {"passed": npass, "total": len(reports),
                    "skipped": len(skipped)},
    }
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for r in reports:
        if not r.passed:
            print(f"FAIL {r.check_id} {r.params}: expected {r.expected}, "
                  f"got {r.actual}")
    print(f"PASSED {npass}/{len(reports)} (skipped {len(skipped)}) "
          f"in {elapsed:.1f}s -> {args.out}")
    return 0 if npass == len(reports) else 1


if __name__ == "__main__":
    sys.exit(main())

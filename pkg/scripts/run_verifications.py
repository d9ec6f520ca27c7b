"""Run seeded verification batches for every construction and save JSON reports."""

import argparse
import json
from pathlib import Path

from boundedgames.verify import KINDS, run_verification


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kinds", nargs="+", default=list(KINDS), choices=KINDS)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--playouts", type=int, default=50)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = False
    for kind in args.kinds:
        report = run_verification(kind, args.seed, args.count, {"playouts": args.playouts})
        (out / f"{kind}.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
        s = report.summary()
        print(f"{kind:11s} pass {s['pass']:5d}  fail {s['fail']:3d}  unknown {s['unknown']:3d}")
        failed |= not report.ok
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()

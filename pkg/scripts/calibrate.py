"""Calibrate the Avoider-Enforcer and Client-Waiter outcome mappings.

Sweeps (convention x first player x player mapping) for AE on the n=1
family and the ClientWin mapping for CW on the one-pair family, printing
the outcome tallies behind each verdict.
"""

import argparse

from boundedgames.generators import ae_n1_family, psat_n1_family
from boundedgames.verify import (MONOTONE, STRICT, CalibrationError, calibrate_ae_convention,
                                 calibrate_cw_mapping)


def show(title, fn):
    print(f"== {title}")
    try:
        cfg = fn()
        print(f"   frozen: {cfg}")
    except CalibrationError as exc:
        print(f"   {exc}; survivors: {exc.survivors}")
        for k, v in sorted(exc.table.items()):
            print(f"   {k:45s} {v}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--skip-monotone", action="store_true", help="the monotone sweep takes ~1 min")
    args = ap.parse_args()
    ae = ae_n1_family()
    show(f"AE strict, {len(ae)} formulas", lambda: calibrate_ae_convention(ae, STRICT))
    if not args.skip_monotone:
        show(f"AE monotone, {len(ae)} formulas", lambda: calibrate_ae_convention(ae, MONOTONE))
    cw = psat_n1_family()
    show(f"CW, {len(cw)} instances", lambda: calibrate_cw_mapping(cw))


if __name__ == "__main__":
    main()

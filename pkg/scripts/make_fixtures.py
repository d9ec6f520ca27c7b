"""Regenerate tests/fixtures/manifest.json (family sizes, digests, oracle tallies).

Run after an intentional change to a canonical family; the test suite
compares freshly generated families against this manifest.
"""

import json
from collections import Counter
from pathlib import Path

from boundedgames.games import MB, Convention, solve_positional
from boundedgames.generators import (ae_n1_family, alternating_family, family_digest,
                                     hypergraph_family, psat_n1_family, qbf2_family)
from boundedgames.qbf import solve_paired_sat, solve_qbf_oracle

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "manifest.json"


def entry(items, solve):
    return {
        "count": len(items),
        "sha256": family_digest(items),
        "oracle": dict(sorted(Counter(solve(x) for x in items).items())),
    }


def main():
    qbf = lambda f: solve_qbf_oracle(f).winner
    manifest = {
        "qbf2": entry(qbf2_family(), qbf),
        "ae_n1": entry(ae_n1_family(), qbf),
        "alternating_n2": entry(alternating_family(2, 2), qbf),
        "psat_n1": entry(psat_n1_family(), lambda i: solve_paired_sat(i).winner),
        "hypergraph_6_3": entry(hypergraph_family(6, 3),
                                lambda h: solve_positional(h, Convention(MB)).winner),
    }
    OUT.write_text(json.dumps(manifest, indent=2) + "\n")
    for name, e in manifest.items():
        print(f"{name:16s} {e['count']:6d}  {e['oracle']}")


if __name__ == "__main__":
    main()

import json
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundedgames.formula import (EXISTS, FORALL, degree_profile, emit_psat, emit_qdimacs,
                                  parse_psat, parse_qdimacs)
from boundedgames.games import MB, Convention, solve_positional
from boundedgames.generators import (ALT_EXISTS, ALT_FORALL, ae_n1_family, alternating_family,
                                     family_digest, fingerprint, gen_random_hypergraph,
                                     gen_random_paired_sat, gen_random_qbf, hypergraph_family,
                                     psat_n1_family, qbf2_family)
from boundedgames.hypergraph import emit_hypergraph, parse_hypergraph
from boundedgames.qbf import solve_paired_sat, solve_qbf_oracle

MANIFEST = json.loads((Path(__file__).parent / "fixtures" / "manifest.json").read_text())


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32), st.integers(1, 20), st.integers(0, 20), st.integers(1, 4),
       st.integers(1, 4))
def test_random_qbf_bounds_and_determinism(seed, n, m, rank, deg):
    if m > n * deg:
        with pytest.raises(ValueError):
            gen_random_qbf(seed, n, m, rank, deg)
        return
    f = gen_random_qbf(seed, n, m, rank, deg)
    prof = degree_profile(f.matrix)
    assert len(f.clauses) == m and prof.rank <= rank and prof.max_degree <= deg
    assert all(len({abs(l) for l in c}) == len(c) for c in f.clauses)
    assert emit_qdimacs(gen_random_qbf(seed, n, m, rank, deg)) == emit_qdimacs(f)


def test_quantifier_patterns():
    f = gen_random_qbf(1, 4, 2, quantifier_pattern=ALT_EXISTS)
    assert [q for _, q in f.prefix] == [EXISTS, FORALL, EXISTS, FORALL]
    g = gen_random_qbf(1, 3, 2, quantifier_pattern=ALT_FORALL)
    assert [q for _, q in g.prefix] == [FORALL, EXISTS, FORALL]
    with pytest.raises(ValueError):
        gen_random_qbf(1, 3, 2, quantifier_pattern="ee")


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32), st.integers(1, 6), st.integers(0, 10))
def test_random_paired_sat(seed, k, m):
    if m > k * 3:
        with pytest.raises(ValueError):
            gen_random_paired_sat(seed, k, m)
        return
    inst = gen_random_paired_sat(seed, k, m)
    assert inst.pairs == tuple((2 * i - 1, 2 * i) for i in range(1, k + 1))
    assert all(any(abs(l) % 2 for l in c) for c in inst.clauses)
    assert degree_profile(inst.matrix).max_degree <= 3
    assert emit_psat(gen_random_paired_sat(seed, k, m)) == emit_psat(inst)


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32), st.integers(1, 10), st.integers(0, 8), st.integers(1, 5))
def test_random_hypergraph(seed, n, m, rank):
    h = gen_random_hypergraph(seed, n, m, rank)
    assert len(h.edges) == m and h.rank <= rank and h.num_vertices == n
    assert gen_random_hypergraph(seed, n, m, rank) == h


def test_round_trip_1000_seeds():
    for seed in range(1000):
        n = 1 + seed % 12
        f = gen_random_qbf(seed, n, seed % (3 * n + 1), 3, 3)
        assert parse_qdimacs(emit_qdimacs(f)) == f
        inst = gen_random_paired_sat(seed, 1 + seed % 4, seed % (3 + 3 * (seed % 4)))
        assert parse_psat(emit_psat(inst)) == inst
        h = gen_random_hypergraph(seed, 1 + seed % 8, seed % 5, 4)
        assert parse_hypergraph(emit_hypergraph(h)) == h


def test_fingerprint_is_stable():
    f = gen_random_qbf(7, 5, 4)
    assert fingerprint(f) == fingerprint(parse_qdimacs(emit_qdimacs(f)))
    assert len(fingerprint(f)) == 16


def _qbf(f):
    return solve_qbf_oracle(f).winner


@pytest.mark.parametrize("name, make, solve", [
    ("qbf2", qbf2_family, _qbf),
    ("ae_n1", ae_n1_family, _qbf),
    ("alternating_n2", lambda: alternating_family(2, 2), _qbf),
    ("psat_n1", psat_n1_family, lambda i: solve_paired_sat(i).winner),
    ("hypergraph_6_3", lambda: hypergraph_family(6, 3),
     lambda h: solve_positional(h, Convention(MB)).winner),
])
def test_family_matches_frozen_manifest(name, make, solve):
    items = make()
    frozen = MANIFEST[name]
    assert len(items) == frozen["count"]
    assert family_digest(items) == frozen["sha256"]
    assert dict(Counter(solve(x) for x in items)) == frozen["oracle"]


def test_qbf2_family_is_in_class():
    for f in qbf2_family():
        assert degree_profile(f.matrix).max_degree <= 2 and len(f.prefix) == 3


def test_hypergraph_family_small_counts():
    # classes of 2-vertex hypergraphs with <= 1 edge: none, {}, {1}, {1,2}
    assert len(hypergraph_family(2, 1)) == 4

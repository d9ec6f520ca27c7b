"""Seeded instance generators and the canonical small families."""

from __future__ import annotations

import hashlib
import json
import random
from itertools import combinations, combinations_with_replacement, permutations, product

from .formula import (EXISTS, FORALL, PairedSatInstance, QbfFormula, emit_psat, emit_qdimacs,
                      make_clause)
from .hypergraph import Hypergraph, emit_hypergraph

ALT_EXISTS = "alt-e"
ALT_FORALL = "alt-a"
RANDOM = "random"


def _quantifiers(pattern: str, n: int, rng: random.Random) -> list[str]:
    if pattern == ALT_EXISTS:
        return [EXISTS if i % 2 == 0 else FORALL for i in range(n)]
    if pattern == ALT_FORALL:
        return [FORALL if i % 2 == 0 else EXISTS for i in range(n)]
    if pattern == RANDOM:
        return [rng.choice((EXISTS, FORALL)) for _ in range(n)]
    if len(pattern) == n and set(pattern) <= {EXISTS, FORALL}:
        return list(pattern)
    raise ValueError(f"bad quantifier pattern {pattern!r} for {n} variables")


def _random_sets(rng: random.Random, n: int, m: int, rank: int, max_degree: int,
                 min_size: int) -> list[list[int]]:
    """m subsets of 1..n, sizes in [min_size, rank], no element in > max_degree sets."""
    if not 0 <= min_size <= rank:
        raise ValueError("need 0 <= min_size <= rank")
    if m * min_size > n * max_degree or (min_size > n and m):
        raise ValueError(f"infeasible: {m} sets of size >= {min_size} "
                         f"over {n} elements with degree <= {max_degree}")
    load = [0] * (n + 1)
    avail = list(range(1, n + 1)) if max_degree > 0 else []
    where = {v: i for i, v in enumerate(avail)}
    capacity = len(avail) * max_degree
    out = []
    for j in range(m):
        # leave room for the remaining sets' minimum demand
        spare = capacity - (m - j - 1) * min_size
        size = min(rng.randint(min_size, rank), len(avail), max(spare, min_size))
        if size < min_size:
            raise ValueError("generator ran out of degree capacity")
        vs = sorted(rng.sample(avail, size))
        for v in vs:
            load[v] += 1
            capacity -= 1
            if load[v] == max_degree:
                i, last = where.pop(v), avail.pop()
                if last != v:
                    avail[i] = last
                    where[last] = i
        out.append(vs)
    return out


def gen_random_qbf(seed: int, num_vars: int, num_clauses: int, rank: int = 3,
                   max_degree: int = 3, quantifier_pattern: str = RANDOM,
                   min_size: int = 1) -> QbfFormula:
    """Random QBF with clause size <= rank and variable degree <= max_degree."""
    rng = random.Random(seed)
    quants = _quantifiers(quantifier_pattern, num_vars, rng)
    sets = _random_sets(rng, num_vars, num_clauses, rank, max_degree, min_size)
    clauses = [[v if rng.random() < 0.5 else -v for v in s] for s in sets]
    return QbfFormula.build(list(zip(range(1, num_vars + 1), quants)), clauses, num_vars)


def gen_random_paired_sat(seed: int, num_pairs: int, num_clauses: int, rank: int = 3,
                          max_degree: int = 3, allow_falsifier_only: bool = False
                          ) -> PairedSatInstance:
    """Pairs (2i-1, 2i); clauses over all 2n variables."""
    rng = random.Random(seed)
    n = 2 * num_pairs
    pairs = [(2 * i - 1, 2 * i) for i in range(1, num_pairs + 1)]
    if allow_falsifier_only:
        sets = _random_sets(rng, n, num_clauses, rank, max_degree, 1)
    else:
        sets = _anchored_sets(rng, num_pairs, num_clauses, rank, max_degree)
    clauses = [[v if rng.random() < 0.5 else -v for v in s] for s in sets]
    return PairedSatInstance.build(pairs, clauses, n)


def _anchored_sets(rng: random.Random, k: int, m: int, rank: int, max_degree: int):
    """Like _random_sets over 1..2k, but every set holds an odd (Satisfier) element."""
    if m > k * max_degree:
        raise ValueError("infeasible: every clause needs a Satisfier variable")
    load = [0] * (2 * k + 1)
    out = []
    for j in range(m):
        odd_left = sum(max_degree - load[v] for v in range(1, 2 * k + 1, 2))
        odd_spare = odd_left - 1 - (m - j - 1)  # extra odd claims this set may make
        anchor = rng.choice([v for v in range(1, 2 * k + 1, 2) if load[v] < max_degree])
        pool = [v for v in range(1, 2 * k + 1) if v != anchor and load[v] < max_degree]
        rng.shuffle(pool)
        vs = [anchor]
        want = rng.randint(1, rank)
        for v in pool:
            if len(vs) >= want:
                break
            if v % 2:
                if odd_spare <= 0:
                    continue
                odd_spare -= 1
            vs.append(v)
        for v in vs:
            load[v] += 1
        out.append(sorted(vs))
    return out


def gen_random_hypergraph(seed: int, num_vertices: int, num_edges: int, rank: int = 3,
                          max_degree: int | None = None, min_size: int = 1) -> Hypergraph:
    rng = random.Random(seed)
    sets = _random_sets(rng, num_vertices, num_edges, rank, max_degree or num_edges, min_size)
    return Hypergraph.build(sets, num_vertices)


# -- canonical families -------------------------------------------------------

def _clause_types(num_vars: int, sizes, tautologies: bool = False) -> list[tuple[int, ...]]:
    lits = [s * v for v in range(1, num_vars + 1) for s in (1, -1)]
    out = set()
    for k in sizes:
        for combo in combinations(lits, k):
            if not tautologies and len({abs(l) for l in combo}) < k:
                continue
            out.add(make_clause(combo))
    return sorted(out, key=lambda c: (len(c), [(abs(l), l) for l in c]))


def _degree_ok(clauses, max_degree: int) -> bool:
    load: dict[int, int] = {}
    for c in clauses:
        for l in c:
            load[abs(l)] = load.get(abs(l), 0) + 1
    return all(d <= max_degree for d in load.values())


def qbf2_family() -> list[QbfFormula]:
    """Exhaustive: 3 variables, every quantifier pattern, <= 3 clauses of size <= 2, degree <= 2.

    Tautological 2-clauses are included; variables absent from the
    matrix stay in the prefix.
    """
    types = _clause_types(3, (0, 1, 2), tautologies=True)
    out = []
    for quants in product((EXISTS, FORALL), repeat=3):
        prefix = list(zip((1, 2, 3), quants))
        for k in range(4):
            for combo in combinations_with_replacement(types, k):
                if _degree_ok(combo, 2):
                    out.append(QbfFormula.build(prefix, [list(c) for c in combo], 3))
    return out


def ae_n1_family() -> list[QbfFormula]:
    """E x1 A x2 with <= 3 clauses of size 1-2 over distinct variables."""
    types = _clause_types(2, (1, 2))
    prefix = [(1, EXISTS), (2, FORALL)]
    return [QbfFormula.build(prefix, [list(c) for c in combo], 2)
            for k in range(4) for combo in combinations_with_replacement(types, k)]


def alternating_family(rounds: int, max_clauses: int, sizes=(1, 2, 3),
                       max_degree: int = 3) -> list[QbfFormula]:
    """E x1 A y1 ... E xn A yn with <= max_clauses clauses (degree-bounded)."""
    n = 2 * rounds
    types = _clause_types(n, [s for s in sizes if s <= n])
    prefix = [(v, EXISTS if v % 2 else FORALL) for v in range(1, n + 1)]
    out = []
    for k in range(max_clauses + 1):
        for combo in combinations_with_replacement(types, k):
            if _degree_ok(combo, max_degree):
                out.append(QbfFormula.build(prefix, [list(c) for c in combo], n))
    return out


def psat_n1_family() -> list[PairedSatInstance]:
    """One pair (1, 2), <= 3 clauses, none over variable 2 alone."""
    types = [c for c in _clause_types(2, (1, 2)) if any(abs(l) == 1 for l in c)]
    return [PairedSatInstance.build([(1, 2)], [list(c) for c in combo], 2)
            for k in range(4) for combo in combinations_with_replacement(types, k)]


def hypergraph_family(max_vertices: int, max_edges: int) -> list[Hypergraph]:
    """All hypergraphs on vertex set 1..max_vertices with <= max_edges
    hyperedges (possibly empty), one representative per relabelling class.

    Representatives are the lexicographically first multiset (as sorted
    bitmask tuples) of each class.
    """
    n = max_vertices
    perm_tables = []
    for p in permutations(range(n)):
        table = []
        for m in range(1 << n):
            img = 0
            for i in range(n):
                if m >> i & 1:
                    img |= 1 << p[i]
            table.append(img)
        perm_tables.append(table)
    out = []
    for k in range(max_edges + 1):
        seen = set()
        for combo in combinations_with_replacement(range(1 << n), k):
            if combo in seen:
                continue
            for t in perm_tables:
                seen.add(tuple(sorted(t[m] for m in combo)))
            edges = [[i + 1 for i in range(n) if m >> i & 1] for m in combo]
            out.append(Hypergraph(n, tuple(tuple(e) for e in edges)))
    return out


def fingerprint(obj) -> str:
    """Short sha256 of the canonical text encoding of an instance."""
    if isinstance(obj, QbfFormula):
        text = emit_qdimacs(obj)
    elif isinstance(obj, PairedSatInstance):
        text = emit_psat(obj)
    elif isinstance(obj, Hypergraph):
        text = emit_hypergraph(obj)
    else:
        text = json.dumps(obj, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def family_digest(items) -> str:
    h = hashlib.sha256()
    for it in items:
        h.update(fingerprint(it).encode())
    return h.hexdigest()

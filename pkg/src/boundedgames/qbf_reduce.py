"""Formula-to-formula reductions.

``normalize_3qbf`` + ``to_3qbf3`` turn any 3-QBF into an equivalent
3-uniform 3-regular one; ``pad_alternation`` inserts unused variables so
the prefix alternates; ``qbf_to_paired_sat`` builds the Paired-SAT game
with XOR links between consecutive rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (EXISTS, FORALL, PairedSatInstance, QbfFormula, clause_vars,
                      degree_profile)
from .qbf import PreconditionError

EXISTS_FIRST = "exists-first"
FORALL_FIRST = "forall-first"


def normalize_3qbf(formula: QbfFormula) -> tuple[QbfFormula, dict]:
    """Drop unused variables, pad clauses to size 3, triplicate clauses.

    Kept variables are renumbered ``1..k`` in prefix order; each padding
    slot gets its own fresh universal, appended to the end of the prefix
    and occurring positively in one (triplicated) clause.
    """
    for j, c in enumerate(formula.clauses):
        if len(c) > 3:
            raise PreconditionError(f"clause {j} has size {len(c)} > 3")
        if len(clause_vars(c)) != len(c):
            raise PreconditionError(f"clause {j} repeats a variable")
    used = formula.matrix.variables()
    kept = [(v, q) for v, q in formula.prefix if v in used]
    dropped = [v for v, _ in formula.prefix if v not in used]
    var_map = {v: i for i, (v, _) in enumerate(kept, start=1)}
    prefix = [(var_map[v], q) for v, q in kept]
    nxt = len(prefix) + 1
    padded, padding = [], []
    for j, c in enumerate(formula.clauses):
        lits = [(1 if l > 0 else -1) * var_map[abs(l)] for l in c]
        fresh = list(range(nxt, nxt + 3 - len(lits)))
        nxt += len(fresh)
        if fresh:
            padding.append({"clause": j, "vars": fresh})
        prefix.extend((z, FORALL) for z in fresh)
        padded.append(lits + fresh)
    clauses = [c for c in padded for _ in range(3)]
    out = QbfFormula.build(prefix, clauses, nxt - 1)
    provenance = {
        "var_map": {str(k): v for k, v in var_map.items()},
        "dropped": dropped,
        "padding": padding,
        "copies": 3,
    }
    return out, provenance


@dataclass
class VariableSplitMap:
    """Per source variable: chain variables, link universals, host clauses."""

    chains: dict[int, list[int]] = field(default_factory=dict)
    universals: dict[int, list[int]] = field(default_factory=dict)
    hosts: dict[int, list[int]] = field(default_factory=dict)
    link_clauses: dict[int, list[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            str(v): {
                "chain": self.chains[v],
                "universals": self.universals[v],
                "host_clauses": self.hosts[v],
                "link_clauses": self.link_clauses[v],
            }
            for v in self.chains
        }


def _check_normalized(formula: QbfFormula):
    prof = degree_profile(formula.matrix, [v for v, _ in formula.prefix])
    for j, c in enumerate(formula.clauses):
        if len(c) != 3 or len(clause_vars(c)) != 3:
            raise PreconditionError(f"clause {j} is not a 3-clause over distinct variables")
    for v, d in prof.degrees.items():
        if d == 0:
            raise PreconditionError(f"variable {v} occurs in no clause")
        if d % 3:
            raise PreconditionError(f"variable {v} has degree {d}, not a multiple of 3")


def to_3qbf3(formula: QbfFormula) -> tuple[QbfFormula, VariableSplitMap]:
    """Split every variable of degree 3k into a 3k-cycle of equal copies.

    Prefix ``Q x`` becomes ``Q x_1, E x_2..x_3k, A y_1..y_k``; occurrence j
    (in clause order) is renamed to ``x_j`` with its polarity, and link
    clauses ``x_j | -x_{j+1} | y_{ceil(j/3)}`` close the cycle.
    """
    _check_normalized(formula)
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(formula.clauses):
        for pos, lit in enumerate(c):
            occurrences.setdefault(abs(lit), []).append((ci, pos))

    smap = VariableSplitMap()
    prefix = []
    rename: dict[tuple[int, int], int] = {}
    nxt = 1
    for v, q in formula.prefix:
        occ = occurrences[v]
        k = len(occ) // 3
        chain = list(range(nxt, nxt + 3 * k))
        ys = list(range(nxt + 3 * k, nxt + 4 * k))
        nxt += 4 * k
        prefix.append((chain[0], q))
        prefix.extend((x, EXISTS) for x in chain[1:])
        prefix.extend((y, FORALL) for y in ys)
        for x, slot in zip(chain, occ):
            rename[slot] = x
        smap.chains[v] = chain
        smap.universals[v] = ys
        smap.hosts[v] = [ci for ci, _ in occ]

    clauses = []
    for ci, c in enumerate(formula.clauses):
        clauses.append([(1 if l > 0 else -1) * rename[(ci, pos)] for pos, l in enumerate(c)])
    for v, _ in formula.prefix:
        chain, ys = smap.chains[v], smap.universals[v]
        n = len(chain)
        links = []
        for j in range(n):
            links.append(len(clauses))
            clauses.append([chain[j], -chain[(j + 1) % n], ys[j // 3]])
        smap.link_clauses[v] = links
    return QbfFormula.build(prefix, clauses, nxt - 1), smap


def pad_alternation(formula: QbfFormula, pattern: str = EXISTS_FIRST,
                    require_even: bool = False) -> QbfFormula:
    """Insert fresh unused variables until quantifiers strictly alternate."""
    if pattern not in (EXISTS_FIRST, FORALL_FIRST):
        raise ValueError(f"unknown pattern {pattern!r}")
    expected = EXISTS if pattern == EXISTS_FIRST else FORALL
    flip = {EXISTS: FORALL, FORALL: EXISTS}
    nxt = formula.num_vars + 1
    prefix = []
    for v, q in formula.prefix:
        while q != expected:
            prefix.append((nxt, expected))
            nxt += 1
            expected = flip[expected]
        prefix.append((v, q))
        expected = flip[expected]
    if require_even and len(prefix) % 2:
        prefix.append((nxt, expected))
        nxt += 1
    if nxt == formula.num_vars + 1:
        return formula
    return QbfFormula.build(prefix, formula.clauses, nxt - 1)


def is_alternating(formula: QbfFormula, pattern: str = EXISTS_FIRST) -> bool:
    first = EXISTS if pattern == EXISTS_FIRST else FORALL
    second = FORALL if first == EXISTS else EXISTS
    return all(q == (first if i % 2 == 0 else second) for i, (_, q) in enumerate(formula.prefix))


def xor3(a: int, b: int, c: int) -> list[list[int]]:
    """Four clauses true exactly when an odd number of a, b, c hold."""
    return [[a, b, c], [-a, -b, c], [-a, b, -c], [a, -b, -c]]


@dataclass
class PairedSatMap:
    exists_vars: list[int]
    forall_vars: list[int]
    y0: int
    z: list[int]
    t: list[int]
    xor_blocks: list[list[int]]

    def to_json(self) -> dict:
        return {
            "exists": self.exists_vars,
            "forall": self.forall_vars,
            "y0": self.y0,
            "z": self.z,
            "t": self.t,
            "xor_blocks": self.xor_blocks,
        }


def qbf_to_paired_sat(formula: QbfFormula) -> tuple[PairedSatInstance, PairedSatMap]:
    """Paired-SAT instance for a prefix E x1 A y1 ... E xn A yn.

    Pairs: (z0, y0), (x1, t1), (z1, y1), ..., (xn, tn), (zn, yn); matrix is
    the source matrix plus XOR(y_{i-1}, t_i, z_i) for i = 1..n.  Source
    variables keep their ids; new ones are numbered after them.
    """
    if len(formula.prefix) % 2 or not is_alternating(formula, EXISTS_FIRST):
        raise PreconditionError("prefix must be E x1 A y1 ... E xn A yn")
    if not formula.is_closed():
        raise PreconditionError("prefix must bind every variable")
    prof = degree_profile(formula.matrix)
    if prof.max_degree > 3:
        bad = max(prof.degrees, key=prof.degrees.get)
        raise PreconditionError(f"variable {bad} has degree {prof.degrees[bad]} > 3")
    xs = [v for v, _ in formula.prefix[0::2]]
    ys = [v for v, _ in formula.prefix[1::2]]
    n = len(xs)
    base = formula.num_vars
    y0 = base + 1
    z = list(range(base + 2, base + 3 + n))
    t = list(range(base + 3 + n, base + 3 + 2 * n))
    yy = [y0] + ys
    pairs = [(z[0], y0)]
    for i in range(n):
        pairs.append((xs[i], t[i]))
        pairs.append((z[i + 1], yy[i + 1]))
    clauses = list(formula.clauses)
    blocks = []
    for i in range(1, n + 1):
        start = len(clauses)
        clauses.extend(xor3(yy[i - 1], t[i - 1], z[i]))
        blocks.append(list(range(start, start + 4)))
    inst = PairedSatInstance.build(pairs, clauses, base + 2 + 2 * n)
    return inst, PairedSatMap(xs, ys, y0, z, t, blocks)

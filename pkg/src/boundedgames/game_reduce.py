"""Bounded-degree gadget constructions for positional games.

* ``qbf3_to_avoider_enforcer`` -- alternating 3-QBF-3 to an AE board.
* ``paired_sat_to_client_waiter`` -- Paired SAT to a CW board on 8n vertices.
* ``mb_to_bounded_degree`` -- rank <= 6 MB board to rank 12, max degree 5.
* ``mb_to_maker_maker`` -- MB board to an equivalent MM board.

Each constructor returns the hypergraph and a trace mapping source
entities to the vertices / hyperedges created for them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Optional

from .formula import PairedSatInstance, QbfFormula, clause_vars, degree_profile
from .hypergraph import Hypergraph
from .qbf import PreconditionError
from .qbf_reduce import EXISTS_FIRST, is_alternating


class _Builder:
    def __init__(self):
        self.labels: dict[int, str] = {}
        self.edges: list[tuple[int, ...]] = []

    def vertex(self, label: str) -> int:
        v = len(self.labels) + 1
        self.labels[v] = label
        return v

    def edge(self, vs) -> int:
        self.edges.append(tuple(vs))
        return len(self.edges) - 1

    def build(self) -> Hypergraph:
        return Hypergraph(len(self.labels), tuple(self.edges), tuple(self.labels.items()))


# -- Avoider-Enforcer ---------------------------------------------------------

@dataclass
class AeTrace:
    literal: dict[int, tuple[int, int]]      # prefix position p -> (x_p, ~x_p)
    u: dict[int, int]                        # u-index -> vertex
    gadget_edges: dict[int, dict[str, int]]  # i -> name -> edge id
    clause_edges: list[int]                  # D_j edge ids
    variables: list[int]                     # prefix position p -> formula variable

    def to_json(self) -> dict:
        return {
            "literal": {str(p): list(v) for p, v in self.literal.items()},
            "u": {str(k): v for k, v in self.u.items()},
            "gadget_edges": {str(i): d for i, d in self.gadget_edges.items()},
            "clause_edges": self.clause_edges,
            "variables": self.variables,
        }


def ae_companion(p: int) -> int:
    """u-index joined to a literal of the p-th variable in its clause edge."""
    return 3 * p + 1 if p % 2 == 0 else 3 * p + 2


def _ae_gadget(i: int):
    """The eight per-round hyperedges as (name, members) over symbolic ids."""
    x = lambda p: ("x", p)
    nx = lambda p: ("nx", p)
    u = lambda k: ("u", k)
    return [
        ("A", [x(2 * i), nx(2 * i), u(6 * i + 1), u(6 * i + 3)]),
        ("B", [x(2 * i - 1), nx(2 * i - 1), u(6 * i - 1)]),
        ("C+6i", [u(6 * i), u(6 * i + 1), u(6 * i + 3), x(2 * i)]),
        ("C-6i", [u(6 * i), u(6 * i + 1), u(6 * i + 3), nx(2 * i)]),
        ("C+6i-2", [u(6 * i - 2), u(6 * i - 1), u(6 * i + 1), x(2 * i)]),
        ("C-6i-2", [u(6 * i - 2), u(6 * i - 1), u(6 * i + 1), nx(2 * i)]),
        ("C+6i-4", [u(6 * i - 4), u(6 * i - 3), u(6 * i - 1), x(2 * i - 1)]),
        ("C-6i-4", [u(6 * i - 4), u(6 * i - 3), u(6 * i - 1), nx(2 * i - 1)]),
    ]


def qbf3_to_avoider_enforcer(formula: QbfFormula) -> tuple[Hypergraph, AeTrace]:
    if len(formula.prefix) % 2 or not is_alternating(formula, EXISTS_FIRST):
        raise PreconditionError("prefix must alternate E, A, ..., E, A")
    prof = degree_profile(formula.matrix)
    if prof.max_degree > 3:
        raise PreconditionError(f"max degree {prof.max_degree} > 3")
    for j, c in enumerate(formula.clauses):
        if len(c) > 3:
            raise PreconditionError(f"clause {j} has size {len(c)} > 3")
        if len(clause_vars(c)) != len(c):
            raise PreconditionError(f"clause {j} repeats a variable")
    position = {v: p for p, (v, _) in enumerate(formula.prefix, start=1)}
    n = len(formula.prefix) // 2

    gadgets = {i: _ae_gadget(i) for i in range(1, n + 1)}
    clause_sym = []
    for c in formula.clauses:
        members = []
        for lit in c:
            p = position[abs(lit)]
            members.append(("x", p) if lit > 0 else ("nx", p))
            members.append(("u", ae_companion(p)))
        clause_sym.append(members)
    u_indices = sorted({k for g in gadgets.values() for _, ms in g for t, k in ms if t == "u"}
                       | {k for ms in clause_sym for t, k in ms if t == "u"})

    b = _Builder()
    literal = {}
    for p in range(1, 2 * n + 1):
        literal[p] = (b.vertex(f"x{p}"), b.vertex(f"~x{p}"))
    u = {k: b.vertex(f"u{k}") for k in u_indices}

    def resolve(sym):
        t, k = sym
        if t == "u":
            return u[k]
        return literal[k][0 if t == "x" else 1]

    gadget_edges = {}
    for i, g in gadgets.items():
        gadget_edges[i] = {name: b.edge(map(resolve, ms)) for name, ms in g}
    clause_edges = [b.edge(map(resolve, ms)) for ms in clause_sym]
    trace = AeTrace(literal, u, gadget_edges, clause_edges, [v for v, _ in formula.prefix])
    return b.build(), trace


# -- Client-Waiter ------------------------------------------------------------

S_NAMES = ("s0", "sT", "sF", "s1")
F_NAMES = ("f0", "fT", "fT'", "fF")


@dataclass
class CwTrace:
    blocks: dict[int, dict[str, int]]     # pair index -> vertex name -> id
    block_edges: list[int]
    pair_edges: list[int]
    clause_edges: dict[int, list[int]]    # clause index -> edge ids

    def to_json(self) -> dict:
        return {
            "blocks": {str(i): d for i, d in self.blocks.items()},
            "block_edges": self.block_edges,
            "pair_edges": self.pair_edges,
            "clause_edges": {str(j): e for j, e in self.clause_edges.items()},
        }


def falsifier_only_clause(inst: PairedSatInstance) -> Optional[int]:
    """Index of a clause over second-pair variables only (Falsifier wins), if any."""
    second = inst.second_vars()
    for j, c in enumerate(inst.clauses):
        if clause_vars(c) <= second:
            return j
    return None


def paired_sat_to_client_waiter(inst: PairedSatInstance) -> tuple[Hypergraph, CwTrace]:
    j = falsifier_only_clause(inst)
    if j is not None:
        raise PreconditionError(f"clause {j} has only Falsifier variables: FalsifierWin outright")
    prof = degree_profile(inst.matrix)
    if prof.max_degree > 7:
        raise PreconditionError(f"max degree {prof.max_degree} > 7")
    if prof.rank > 3:
        raise PreconditionError(f"clause of size {prof.rank} > 3")

    b = _Builder()
    blocks = {}
    for i in range(1, len(inst.pairs) + 1):
        blocks[i] = {name: b.vertex(f"{name}_{i}") for name in S_NAMES + F_NAMES}
    block_edges, pair_edges = [], []
    for i, g in blocks.items():
        for names in (S_NAMES, F_NAMES):
            for trio in combinations(names, 3):
                block_edges.append(b.edge(g[n] for n in trio))
    for i, g in blocks.items():
        for names in (("s0", "sT", "f0", "fT"), ("s0", "fF", "fT", "sF"),
                      ("s0", "fF", "sT", "fT'"), ("s0", "sF", "f0", "fT'")):
            pair_edges.append(b.edge(g[n] for n in names))

    role = {}
    for i, (a, c) in enumerate(inst.pairs, start=1):
        role[a] = ("first", i)
        role[c] = ("second", i)

    def options(lit):
        kind, i = role[abs(lit)]
        g = blocks[i]
        if kind == "first":
            return [{g["s0"], g["sT"]}] if lit > 0 else [{g["s0"], g["sF"]}]
        return [{g["f0"], g["fT"]}, {g["f0"], g["fT'"]}] if lit > 0 else [{g["fF"]}]

    clause_edges = {}
    for j, c in enumerate(inst.clauses):
        ids = []
        for choice in product(*(options(l) for l in c)):
            ids.append(b.edge(sorted(set().union(*choice))))
        clause_edges[j] = ids
    return b.build(), CwTrace(blocks, block_edges, pair_edges, clause_edges)


# -- Maker-Breaker, bounded degree -------------------------------------------

@dataclass
class MbGadgetTrace:
    source: Hypergraph
    hypergraph: Hypergraph
    stripped: list[int]
    x: dict[int, int]                                   # source vertex -> x
    root_ab: dict[tuple[int, int], tuple[int, int]]     # (u, eps) -> (a, b)
    nodes: dict[tuple[int, int], list[tuple[int, int]]]  # (u, eps) -> heap-ordered (v, w)
    node_ab: dict[tuple[int, int], list[Optional[tuple[int, int]]]]
    leaves: dict[tuple[int, int], list[int]]            # (u, eps) -> heap indices of leaves
    big: dict[tuple[int, tuple[int, ...]], int]         # (source edge, eps vector) -> edge id
    gadget_of: dict[int, tuple[int, int]] = field(default_factory=dict)  # vertex -> (u, side)

    def sweep_order(self, u: int, eps: int) -> list[int]:
        """Tree vertices root to leaves, v before w at every node."""
        return [x for vw in self.nodes[(u, eps)] for x in vw]

    def to_json(self) -> dict:
        return {
            "stripped": self.stripped,
            "x": {str(u): v for u, v in self.x.items()},
            "trees": {
                f"{u}:{e}": {
                    "root_ab": list(self.root_ab[(u, e)]),
                    "nodes": [list(p) for p in self.nodes[(u, e)]],
                    "node_ab": [list(p) if p else None for p in self.node_ab[(u, e)]],
                    "leaves": self.leaves[(u, e)],
                }
                for (u, e) in self.nodes
            },
            "big": {f"{j}:{''.join(map(str, eps))}": eid for (j, eps), eid in self.big.items()},
        }


def mb_to_bounded_degree(h: Hypergraph, max_rank: int = 6) -> tuple[Hypergraph, MbGadgetTrace]:
    """Replace every vertex by an x-vertex and two binary trees of pairs.

    Each source hyperedge e of size r yields 2^r big hyperedges, one per
    choice of tree per member; every (big hyperedge, member) slot owns its
    own leaf pair.  Trees are heap-shaped with one leaf per slot.
    """
    if h.rank > max_rank:
        raise PreconditionError(f"rank {h.rank} > {max_rank}")
    stripped = h.isolated()
    verts = [v for v in range(1, h.num_vertices + 1) if v not in stripped]

    slots: dict[tuple[int, int], list[tuple[int, int]]] = {(u, e): [] for u in verts for e in (1, 2)}
    variants = []
    for j, edge in enumerate(h.edges):
        for eps in product((1, 2), repeat=len(edge)):
            k = len(variants)
            variants.append((j, eps))
            for pos, u in enumerate(edge):
                slots[(u, eps[pos])].append((k, pos))

    b = _Builder()
    x, root_ab, nodes, node_ab, leaves, gadget_of = {}, {}, {}, {}, {}, {}
    leaf_pair: dict[tuple[int, int], tuple[int, int]] = {}
    for u in verts:
        x[u] = b.vertex(f"x{u}")
        gadget_of[x[u]] = (u, 0)
        for eps in (1, 2):
            L = len(slots[(u, eps)])
            a, bb = b.vertex(f"a{u}^{eps}"), b.vertex(f"b{u}^{eps}")
            root_ab[(u, eps)] = (a, bb)
            pairs, abs_ = [], []
            for j in range(2 * L - 1):
                pairs.append((b.vertex(f"v{u}^{eps}_{j}"), b.vertex(f"w{u}^{eps}_{j}")))
            abs_.append(None)
            for j in range(1, 2 * L - 1):
                abs_.append((b.vertex(f"a{u}^{eps}_{j}"), b.vertex(f"b{u}^{eps}_{j}")))
            nodes[(u, eps)] = pairs
            node_ab[(u, eps)] = abs_
            leaves[(u, eps)] = list(range(L - 1, 2 * L - 1))
            for slot, j in zip(slots[(u, eps)], leaves[(u, eps)]):
                leaf_pair[slot] = pairs[j]
            gadget_of[a] = gadget_of[bb] = (u, eps)
            for vw in pairs:
                for t in vw:
                    gadget_of[t] = (u, eps)
            for ab in abs_[1:]:
                for t in ab:
                    gadget_of[t] = (u, eps)

    for u in verts:
        for eps in (1, 2):
            v0, w0 = nodes[(u, eps)][0]
            a, bb = root_ab[(u, eps)]
            b.edge((x[u], a, v0))
            b.edge((x[u], bb, w0))
            pairs, abs_ = nodes[(u, eps)], node_ab[(u, eps)]
            for j in range(1, len(pairs)):
                pv, pw = pairs[(j - 1) // 2]
                cv, cw = pairs[j]
                ca, cb = abs_[j]
                b.edge((pv, pw, cv, ca))
                b.edge((pv, pw, cw, cb))
    big = {}
    for k, (j, eps) in enumerate(variants):
        members = []
        for pos in range(len(h.edges[j])):
            members.extend(leaf_pair[(k, pos)])
        big[(j, eps)] = b.edge(members)
    out = b.build()
    return out, MbGadgetTrace(h, out, stripped, x, root_ab, nodes, node_ab, leaves, big, gadget_of)


@dataclass
class Pairing:
    pairs: list[tuple[int, int]]
    singletons: set[int]

    def covers(self, edge) -> bool:
        e = set(edge)
        return bool(e & self.singletons) or any(a in e and b in e for a, b in self.pairs)

    def uncovered(self, h: Hypergraph) -> list[int]:
        return [j for j, e in enumerate(h.edges) if not self.covers(e)]

    def is_disjoint(self) -> bool:
        seen = list(self.singletons) + [v for p in self.pairs for v in p]
        return len(seen) == len(set(seen))


def breaker_pairing(trace: MbGadgetTrace, breaker_x_choices) -> Pairing:
    """Breaker's pairing once every x-vertex has been claimed.

    For x_u held by Breaker: x_u itself plus (v, w) at every node of both
    trees.  For x_u held by Maker: (v, a) and (w, b) at every node, where
    (a, b) are the vertices completing the node's hyperedges towards its
    parent (the root's towards x_u).
    """
    choices = set(breaker_x_choices)
    pairs, singles = [], set()
    for u in trace.x:
        if u in choices:
            singles.add(trace.x[u])
            for eps in (1, 2):
                pairs.extend(trace.nodes[(u, eps)])
        else:
            for eps in (1, 2):
                ab = [trace.root_ab[(u, eps)]] + trace.node_ab[(u, eps)][1:]
                for (v, w), (a, b) in zip(trace.nodes[(u, eps)], ab):
                    pairs.append((v, a))
                    pairs.append((w, b))
    return Pairing(pairs, singles)


# -- forcing playout ----------------------------------------------------------

GREEDY, RANDOM = "greedy-block", "random"


@dataclass
class PlayoutRecord:
    winner: Optional[str]
    moves: list[tuple[str, int]]
    defect: Optional[str] = None
    seed: int = 0
    policy: str = RANDOM

    @property
    def maker_won(self) -> bool:
        return self.winner == "MakerWin"


class _Board:
    def __init__(self, h: Hypergraph):
        self.h = h
        self.owner: dict[int, str] = {}
        self.incident: dict[int, list[int]] = {v: [] for v in range(1, h.num_vertices + 1)}
        for j, e in enumerate(h.edges):
            for v in e:
                self.incident[v].append(j)
        self.mcount = [0] * len(h.edges)
        self.blocked = [False] * len(h.edges)
        self.free = list(range(1, h.num_vertices + 1))
        self.where = {v: i for i, v in enumerate(self.free)}
        self.threats: set[int] = set()
        self.maker_won = any(not e for e in h.edges)

    def _take(self, v):
        i = self.where.pop(v)
        last = self.free.pop()
        if last != v:
            self.free[i] = last
            self.where[last] = i

    def claim(self, v: int, who: str):
        if v in self.owner:
            raise ValueError(f"vertex {v} already claimed")
        self.owner[v] = who
        self._take(v)
        self.threats.discard(v)
        for j in self.incident[v]:
            if who == "B":
                self.blocked[j] = True
                continue
            self.mcount[j] += 1
            if self.blocked[j]:
                continue
            size = len(self.h.edges[j])
            if self.mcount[j] == size:
                self.maker_won = True
            elif self.mcount[j] == size - 1:
                for t in self.h.edges[j]:
                    if t not in self.owner:
                        self.threats.add(t)

    def open_threats(self) -> list[int]:
        return sorted(t for t in self.threats if t not in self.owner)


def _breaker_policy(name, rng: random.Random):
    if callable(name):
        return name
    if name == RANDOM:
        return lambda board: rng.choice(board.free)

    def greedy(board: _Board):
        forced = board.open_threats()
        if forced:
            return forced[0]
        best, best_score = [], -1
        for v in board.free:
            score = sum(2 ** board.mcount[j] for j in board.incident[v] if not board.blocked[j])
            if score > best_score:
                best, best_score = [v], score
            elif score == best_score:
                best.append(v)
        return rng.choice(sorted(best))

    if name == GREEDY:
        return greedy
    raise ValueError(f"unknown breaker policy {name!r}")


def maker_forcing_playout(trace: MbGadgetTrace, source_strategy: Callable, breaker_policy,
                          seed: int = 0, max_moves: Optional[int] = None) -> PlayoutRecord:
    """Play the gadget board with Maker simulating a source strategy.

    Maker claims x_u for each source move u.  When Breaker first touches an
    untouched gadget, that is his source move.  When he touches a gadget
    whose x Maker holds, Maker sweeps the other tree root to leaves, v then
    w at each node; each claim threatens one hyperedge, so an ignored reply
    is claimed and wins.  Spare tempi become extra source moves; once the
    source game is decided Maker sweeps her remaining gadgets.

    ``breaker_policy`` is ``"random"``, ``"greedy-block"`` or a callable
    taking the board and returning a free vertex.
    """
    h = trace.hypergraph
    board = _Board(h)
    rng = random.Random(seed)
    policy = _breaker_policy(breaker_policy, rng)
    record = PlayoutRecord(None, [], seed=seed, policy=getattr(breaker_policy, "__name__",
                                                                str(breaker_policy)))
    src = trace.source
    owner: dict[int, str] = {}          # source vertex -> first toucher
    swept: dict[int, int] = {}          # source vertex -> swept side
    entered: dict[int, set] = {}        # source vertex -> sides Breaker touched
    src_m: set[int] = set()
    src_b: set[int] = set()
    queue: list[int] = []

    def source_done():
        if any(set(e) <= src_m for e in src.edges):
            return True
        return len(src_m) + len(src_b) == len(trace.x)

    def maker_choice():
        threats = board.open_threats()
        if threats:
            return threats[0]
        while queue:
            v = queue.pop(0)
            if v not in board.owner:
                return v
            if board.owner[v] == "B":
                raise _Defect(f"sweep vertex {v} already held by Breaker")
        if not source_done():
            u = source_strategy(frozenset(src_m), frozenset(src_b))
            if u is None or u not in trace.x or u in owner:
                raise _Defect(f"source strategy gave no usable move ({u})")
            owner[u] = "M"
            src_m.add(u)
            return trace.x[u]
        for u in sorted(src_m):
            if u not in swept:
                side = 2 if 1 in entered.get(u, ()) else 1
                swept[u] = side
                queue.extend(trace.sweep_order(u, side))
                return maker_choice()
        if not board.free:
            raise _Defect("board exhausted")
        return board.free[0]

    def after_breaker(y):
        u, side = trace.gadget_of[y]
        if u not in owner:
            owner[u] = "B"
            src_b.add(u)
            return
        entered.setdefault(u, set()).add(side)
        if owner[u] == "M" and u not in swept and not queue:
            swept[u] = 3 - side
            queue.extend(trace.sweep_order(u, 3 - side))

    limit = max_moves or h.num_vertices + 1
    try:
        if board.maker_won:
            record.winner = "MakerWin"
            return record
        while len(record.moves) < limit:
            v = maker_choice()
            board.claim(v, "M")
            record.moves.append(("M", v))
            if board.maker_won:
                record.winner = "MakerWin"
                return record
            if not board.free:
                raise _Defect("board exhausted without a Maker win")
            y = policy(board)
            board.claim(y, "B")
            record.moves.append(("B", y))
            after_breaker(y)
            if not board.free:
                raise _Defect("board exhausted without a Maker win")
        raise _Defect("move limit reached")
    except _Defect as exc:
        record.defect = str(exc)
        record.winner = "BreakerWin" if not board.free else None
        return record


class _Defect(Exception):
    pass


# -- Maker-Maker ---------------------------------------------------------------

def mb_to_maker_maker(h: Hypergraph) -> tuple[Hypergraph, dict]:
    """Add x_i to hyperedge e_i and a new hyperedge {x_i, y_i}."""
    n = h.num_vertices
    labels = dict(h.labels)
    edges, pair_edges, xs, ys = [], [], [], []
    for i, e in enumerate(h.edges, start=1):
        xi, yi = n + 2 * i - 1, n + 2 * i
        labels[xi], labels[yi] = f"x{i}", f"y{i}"
        xs.append(xi)
        ys.append(yi)
        edges.append(tuple(e) + (xi,))
        pair_edges.append((xi, yi))
    out = Hypergraph(n + 2 * len(h.edges), tuple(edges + pair_edges), tuple(labels.items()))
    return out, {"x": xs, "y": ys, "pair_edges": list(range(len(edges), 2 * len(edges)))}

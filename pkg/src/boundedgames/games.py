"""Positional games on hypergraphs: rules, exact solvers, strategies.

Conventions (role 0 / role 1):

* Maker-Breaker     -- maker / breaker; maker wins by filling a hyperedge.
* Maker-Maker       -- first / second; first to fill a hyperedge wins,
                       exhaustion is a draw.
* Avoider-Enforcer  -- avoider / enforcer (strict: one vertex per turn);
                       avoider loses as soon as he fills a hyperedge.
* Client-Waiter     -- client / waiter; waiter offers two free vertices,
                       client keeps one, waiter gets the other.

Solvers work on vertex bitsets (bit ``v - 1`` for vertex ``v``) with a
transposition table keyed on the claim sets and the side to move.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .hypergraph import Hypergraph
from .qbf import BudgetExceeded

MB = "maker-breaker"
MM = "maker-maker"
AE = "avoider-enforcer"
CW = "client-waiter"
KINDS = (MB, MM, AE, CW)
ALIASES = {"mb": MB, "mm": MM, "ae": AE, "cw": CW}

ROLES = {
    MB: ("maker", "breaker"),
    MM: ("first", "second"),
    AE: ("avoider", "enforcer"),
    CW: ("client", "waiter"),
}

MAKER_WIN, BREAKER_WIN = "MakerWin", "BreakerWin"
FIRST_WIN, DRAW, SECOND_WIN = "FirstWin", "Draw", "SecondWin"
AVOIDER_WIN, ENFORCER_WIN = "AvoiderWin", "EnforcerWin"
CLIENT_WIN, WAITER_WIN = "ClientWin", "WaiterWin"

WIN_LABEL = {
    "maker": MAKER_WIN, "breaker": BREAKER_WIN,
    "first": FIRST_WIN, "second": SECOND_WIN,
    "avoider": AVOIDER_WIN, "enforcer": ENFORCER_WIN,
    "client": CLIENT_WIN, "waiter": WAITER_WIN,
}

DEFAULT_BUDGET = 2_000_000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class IllegalMove(ValueError):
    pass


@dataclass(frozen=True)
class Convention:
    kind: str
    first_player: Optional[str] = None
    lone_vertex_rule: str = "client"

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown convention {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        roles = ROLES[kind]
        first = self.first_player
        if kind == MM or first is None:
            first = roles[0]
        if kind == CW:
            first = "waiter"
        if first not in roles:
            raise ValueError(f"{first!r} is not a player of {kind}")
        object.__setattr__(self, "first_player", first)
        if self.lone_vertex_rule not in ("client", "waiter"):
            raise ValueError("lone_vertex_rule must be 'client' or 'waiter'")

    @property
    def roles(self) -> tuple[str, str]:
        return ROLES[self.kind]

    @property
    def first_index(self) -> int:
        return self.roles.index(self.first_player)


@dataclass(frozen=True)
class GameOutcome:
    winner: Optional[str]
    exact: bool
    nodes_explored: int

    def to_record(self) -> dict:
        return {"winner": self.winner, "exact": self.exact, "nodes": self.nodes_explored}


@dataclass(frozen=True)
class GamePosition:
    """Claim sets for role 0 and role 1, side to move, pending CW offer."""

    hypergraph: Hypergraph
    claims: tuple[frozenset, frozenset]
    to_move: int
    offer: Optional[tuple[int, ...]] = None

    @property
    def free(self) -> list[int]:
        taken = self.claims[0] | self.claims[1]
        return [v for v in range(1, self.hypergraph.num_vertices + 1) if v not in taken]


def initial_position(h: Hypergraph, conv: Convention) -> GamePosition:
    return GamePosition(h, (frozenset(), frozenset()), conv.first_index)


def _fills(claimed: frozenset, h: Hypergraph) -> bool:
    return any(claimed.issuperset(e) for e in h.edges)


def status(pos: GamePosition, conv: Convention) -> Optional[str]:
    """Winner label if the game is over, else None."""
    h = pos.hypergraph
    c0, c1 = pos.claims
    free = bool(pos.free)
    if conv.kind == MB:
        if _fills(c0, h):
            return MAKER_WIN
        return None if free else BREAKER_WIN
    if conv.kind == MM:
        if _fills(c0, h):
            return FIRST_WIN
        if _fills(c1, h):
            return SECOND_WIN
        return None if free else DRAW
    if conv.kind == AE:
        if _fills(c0, h):
            return ENFORCER_WIN
        return None if free else AVOIDER_WIN
    if _fills(c0, h):
        return CLIENT_WIN
    return None if free else WAITER_WIN


def settled(pos: GamePosition, conv: Convention) -> Optional[str]:
    """Winner label once no continuation can change the result."""
    st = status(pos, conv)
    if st is not None:
        return st
    h = pos.hypergraph
    c0, c1 = pos.claims
    if conv.kind == MM:
        if all(e & c0 and e & c1 for e in map(set, h.edges)):
            return DRAW
        return None
    # MB/AE/CW: the role-0 player can only still fill edges free of role 1
    if all(set(e) & c1 for e in h.edges):
        return {MB: BREAKER_WIN, AE: AVOIDER_WIN, CW: WAITER_WIN}[conv.kind]
    return None


def legal_moves(pos: GamePosition, conv: Convention) -> list:
    """Vertices for MB/MM/AE; for CW, offers (waiter) or picks (client).

    A CW offer is a pair of free vertices, or a 1-tuple when exactly one
    free vertex is left (it is then assigned by the lone-vertex rule).
    """
    if status(pos, conv) is not None:
        return []
    free = pos.free
    if conv.kind != CW:
        return free
    if pos.offer is not None:
        return list(pos.offer)
    if len(free) == 1:
        return [(free[0],)]
    return list(combinations(free, 2))


def play_move(pos: GamePosition, conv: Convention, move) -> GamePosition:
    if status(pos, conv) is not None:
        raise IllegalMove("game is over")
    free = set(pos.free)
    claims = list(pos.claims)
    if conv.kind != CW:
        if move not in free:
            raise IllegalMove(f"vertex {move} is not free")
        claims[pos.to_move] = claims[pos.to_move] | {move}
        return GamePosition(pos.hypergraph, tuple(claims), 1 - pos.to_move)
    if pos.offer is None:
        offer = tuple(move)
        if len(offer) == 1 and len(free) == 1 and offer[0] in free:
            who = 0 if conv.lone_vertex_rule == "client" else 1
            claims[who] = claims[who] | {offer[0]}
            return GamePosition(pos.hypergraph, tuple(claims), 1)
        if len(offer) != 2 or offer[0] == offer[1] or not set(offer) <= free:
            raise IllegalMove(f"offer {offer} must be two distinct free vertices")
        return GamePosition(pos.hypergraph, pos.claims, 0, tuple(sorted(offer)))
    if move not in pos.offer:
        raise IllegalMove(f"client must pick from offer {pos.offer}")
    other = pos.offer[1] if move == pos.offer[0] else pos.offer[0]
    claims = [pos.claims[0] | {move}, pos.claims[1] | {other}]
    return GamePosition(pos.hypergraph, tuple(claims), 1)


# -- solvers ------------------------------------------------------------------

def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << (v - 1)
    return m


def _bits(m: int):
    while m:
        low = m & -m
        yield low
        m ^= low


class Solver:
    """Exact budgeted solver for one board under one convention.

    ``prune`` restricts MB/MM moves to vertices of hyperedges that can
    still be filled: in these conventions an extra claimed vertex never
    hurts its owner, so claiming a dead vertex is dominated.
    """

    def __init__(self, h: Hypergraph, conv: Convention, node_budget: int = DEFAULT_BUDGET,
                 use_tt: bool = True, prune: bool = True):
        self.h = h
        self.conv = conv
        self.budget = node_budget
        self.use_tt = use_tt
        self.prune = prune
        self.edges = [_mask(e) for e in h.edges]
        self.full = (1 << h.num_vertices) - 1
        self.memo: dict = {}
        self.nodes = 0
        self.has_empty = any(not e for e in h.edges)

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded

    # Maker-Breaker: True iff maker wins
    def mb(self, mk: int, br: int, maker_turn: bool) -> bool:
        key = (mk, br, maker_turn)
        if self.use_tt and key in self.memo:
            return self.memo[key]
        self._tick()
        live = [e for e in self.edges if not e & br]
        free = self.full & ~(mk | br)
        moves = 0
        for e in live:
            moves |= e
        moves &= free
        if moves and not self.prune:
            moves = free
        if not moves:
            out = False
        elif maker_turn:
            out = False
            if any((e & ~mk) & ((e & ~mk) - 1) == 0 for e in live):
                out = True
            else:
                for b in _bits(moves):
                    if self.mb(mk | b, br, False):
                        out = True
                        break
        else:
            out = True
            for b in _bits(moves):
                if not self.mb(mk, br | b, True):
                    out = False
                    break
        if self.use_tt:
            self.memo[key] = out
        return out

    # Maker-Maker: value for the side to move, in {1, 0, -1}
    def mm(self, cur: int, opp: int) -> int:
        key = (cur, opp)
        if self.use_tt and key in self.memo:
            return self.memo[key]
        self._tick()
        free = self.full & ~(cur | opp)
        mine = [e for e in self.edges if not e & opp]
        if any((e & ~cur) & ((e & ~cur) - 1) == 0 for e in mine):
            out = 1
        else:
            moves = 0
            for e in mine:
                moves |= e
            for e in self.edges:
                if not e & cur:
                    moves |= e
            moves &= free
            if not self.prune and moves:
                moves = free
            out = 0 if not moves else -1
            for b in _bits(moves):
                val = -self.mm(opp, cur | b)
                if val > out:
                    out = val
                    if out == 1:
                        break
        if self.use_tt:
            self.memo[key] = out
        return out

    # Avoider-Enforcer (strict): True iff avoider wins
    def ae(self, av: int, en: int, avoider_turn: bool) -> bool:
        key = (av, en, avoider_turn)
        if self.use_tt and key in self.memo:
            return self.memo[key]
        self._tick()
        free = self.full & ~(av | en)
        live = [e for e in self.edges if not e & en]
        if not free or not live:
            out = True
        elif avoider_turn:
            out = False
            for b in _bits(free):
                na = av | b
                if any(e & ~na == 0 for e in live):
                    continue
                if self.ae(na, en, False):
                    out = True
                    break
        else:
            out = True
            for b in _bits(free):
                if not self.ae(av, en | b, True):
                    out = False
                    break
        if self.use_tt:
            self.memo[key] = out
        return out

    # Client-Waiter, waiter to offer: True iff client wins
    def cw(self, cl: int, wa: int) -> bool:
        key = (cl, wa)
        if self.use_tt and key in self.memo:
            return self.memo[key]
        self._tick()
        free = self.full & ~(cl | wa)
        live = [e for e in self.edges if not e & wa]
        if not live or not free:
            out = False
        elif free & (free - 1) == 0:
            out = self.conv.lone_vertex_rule == "client" and any(e & ~(cl | free) == 0 for e in live)
        else:
            hot = 0
            for e in live:
                rest = e & ~cl
                if rest & (rest - 1) == 0:
                    hot |= rest
            safe = free & ~hot
            out = True
            if safe & (safe - 1):
                verts = list(_bits(safe))
                for i, a in enumerate(verts):
                    for b in verts[i + 1:]:
                        if not self.cw(cl | a, wa | b) and not self.cw(cl | b, wa | a):
                            out = False
                            break
                    if not out:
                        break
        if self.use_tt:
            self.memo[key] = out
        return out

    def _cw_client_wins_after_pick(self, cl: int, wa: int) -> bool:
        if any(e & ~cl == 0 for e in self.edges if not e & wa):
            return True
        return self.cw(cl, wa)

    # -- entry points ---------------------------------------------------------

    def value_at(self, pos: GamePosition) -> str:
        """Winner label under optimal play from ``pos`` (may raise BudgetExceeded)."""
        st = status(pos, self.conv)
        if st is not None:
            return st
        c0, c1 = _mask(pos.claims[0]), _mask(pos.claims[1])
        kind = self.conv.kind
        if kind == MB:
            return MAKER_WIN if self.mb(c0, c1, pos.to_move == 0) else BREAKER_WIN
        if kind == MM:
            cur, opp = (c0, c1) if pos.to_move == 0 else (c1, c0)
            val = self.mm(cur, opp)
            if val == 0:
                return DRAW
            return FIRST_WIN if (val == 1) == (pos.to_move == 0) else SECOND_WIN
        if kind == AE:
            return AVOIDER_WIN if self.ae(c0, c1, pos.to_move == 0) else ENFORCER_WIN
        if pos.offer is None:
            return CLIENT_WIN if self.cw(c0, c1) else WAITER_WIN
        a, b = (_mask([v]) for v in pos.offer)
        wins = self._cw_client_wins_after_pick(c0 | a, c1 | b) or \
            self._cw_client_wins_after_pick(c0 | b, c1 | a)
        return CLIENT_WIN if wins else WAITER_WIN

    def solve(self) -> GameOutcome:
        if self.has_empty:
            label = {MB: MAKER_WIN, MM: FIRST_WIN, AE: ENFORCER_WIN, CW: CLIENT_WIN}[self.conv.kind]
            return GameOutcome(label, True, 0)
        try:
            label = self.value_at(initial_position(self.h, self.conv))
        except BudgetExceeded:
            return GameOutcome(None, False, self.nodes)
        return GameOutcome(label, True, self.nodes)


def solve_positional(h: Hypergraph, conv: Convention, node_budget: int = DEFAULT_BUDGET,
                     use_tt: bool = True, prune: bool = True) -> GameOutcome:
    return Solver(h, conv, node_budget, use_tt, prune).solve()


# -- strategies ---------------------------------------------------------------

class StrategyError(ValueError):
    pass


@dataclass
class StrategyNode:
    """One position of a strategy tree.

    At the owner's turn ``move`` is set and ``children`` has one entry; at
    the opponent's turn ``children`` covers every legal move.  Leaves carry
    the settled ``result``.
    """

    to_move: int
    move: object = None
    children: dict = field(default_factory=dict)
    result: Optional[str] = None
    offer: Optional[tuple] = None

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children.values())

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children.values():
            yield from c.leaves()


def _acceptable(conv: Convention, role: str, root_label: str) -> set[str]:
    if conv.kind == MM and root_label == DRAW:
        return {DRAW, WIN_LABEL[role]}
    return {WIN_LABEL[role]}


def extract_strategy(h: Hypergraph, conv: Convention, for_player: str,
                     node_budget: int = DEFAULT_BUDGET) -> StrategyNode:
    """Strategy tree realizing the solved outcome for ``for_player``.

    Raises StrategyError when ``for_player`` loses (or cannot secure the
    draw in Maker-Maker), or when the solve is not exact.
    """
    if for_player not in conv.roles:
        raise StrategyError(f"{for_player!r} does not play {conv.kind}")
    solver = Solver(h, conv, node_budget)
    outcome = solver.solve()
    if not outcome.exact:
        raise StrategyError("solve exceeded the node budget")
    good = _acceptable(conv, for_player, outcome.winner)
    if outcome.winner not in good:
        raise StrategyError(f"{for_player} does not win: outcome is {outcome.winner}")
    me = conv.roles.index(for_player)

    def build(pos: GamePosition) -> StrategyNode:
        done = settled(pos, conv)
        if done is not None:
            return StrategyNode(pos.to_move, result=done, offer=pos.offer)
        node = StrategyNode(pos.to_move, offer=pos.offer)
        if pos.to_move == me:
            for m in legal_moves(pos, conv):
                child = play_move(pos, conv, m)
                if solver.value_at(child) in good:
                    node.move = m
                    node.children[m] = build(child)
                    return node
            raise StrategyError("no move preserves the solved outcome")
        for m in legal_moves(pos, conv):
            node.children[m] = build(play_move(pos, conv, m))
        return node

    try:
        return build(initial_position(h, conv))
    except BudgetExceeded:
        raise StrategyError("strategy extraction exceeded the node budget") from None


def replay_strategy(tree: StrategyNode, h: Hypergraph, conv: Convention, for_player: str) -> set[str]:
    """Play the tree against every opponent reply; return the leaf results.

    Raises StrategyError on an illegal or missing move.
    """
    me = conv.roles.index(for_player)
    results: set[str] = set()

    def walk(node: StrategyNode, pos: GamePosition):
        done = settled(pos, conv)
        if not node.children:
            if done is None:
                raise StrategyError("strategy stops at an unsettled position")
            results.add(done)
            return
        moves = legal_moves(pos, conv)
        if pos.to_move == me:
            if node.move not in moves:
                raise StrategyError(f"illegal strategy move {node.move}")
            walk(node.children[node.move], play_move(pos, conv, node.move))
        else:
            if set(node.children) != set(moves):
                raise StrategyError("strategy does not answer every opponent move")
            for m in moves:
                walk(node.children[m], play_move(pos, conv, m))

    walk(tree, initial_position(h, conv))
    return results


def solver_strategy(h: Hypergraph, node_budget: int = DEFAULT_BUDGET):
    """Maker-Breaker maker policy backed by the exact solver.

    Returns ``f(maker_vertices, breaker_vertices) -> vertex | None`` giving
    a winning maker move from any position with maker to move (None when
    maker has no winning move).  Works for positions off the main line,
    e.g. after breaker passes.  Moves are drawn from live hyperedges when
    possible, so isolated vertices are never chosen.
    """
    conv = Convention(MB)
    solver = Solver(h, conv, node_budget)

    def choose(maker, breaker):
        mk, br = _mask(maker), _mask(breaker)
        free = [v for v in range(1, h.num_vertices + 1) if v not in maker and v not in breaker]
        # claims outside live hyperedges are dominated (no better than a pass)
        live = {v for e in h.edges if not set(e) & set(breaker) for v in e}
        for v in [v for v in free if v in live] or free:
            nm = mk | (1 << (v - 1))
            if any(e & ~nm == 0 for e in solver.edges) or solver.mb(nm, br, False):
                return v
        return None

    return choose

"""Shared strategies and naive reference evaluators.

The reference evaluators here are deliberately independent of the
package's solvers: full-assignment QBF evaluation and memo-free minimax
over the public move API.
"""

from itertools import product

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from boundedgames.formula import EXISTS, FORALL, QbfFormula
from boundedgames.games import (CW, DRAW, MM, WIN_LABEL, initial_position, legal_moves,
                                play_move, status)
from boundedgames.hypergraph import Hypergraph

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def brute_qbf(formula: QbfFormula) -> bool:
    """Truth value by expanding the full prefix (no residual tricks)."""
    order = [v for v, _ in formula.prefix]
    quant = dict(formula.prefix)

    def sat(assign):
        return all(any(assign[abs(l)] == (l > 0) for l in c) for c in formula.clauses)

    def go(i, assign):
        if i == len(order):
            return sat(assign)
        v = order[i]
        vals = [go(i + 1, {**assign, v: b}) for b in (False, True)]
        return any(vals) if quant[v] == EXISTS else all(vals)

    return go(0, {})


def brute_paired_sat(inst) -> bool:
    """Satisfier picks a pair and its first value, Falsifier the second."""
    def sat(assign):
        return all(any(assign[abs(l)] == (l > 0) for l in c) for c in inst.clauses)

    def go(remaining, assign):
        if not remaining:
            return sat(assign)
        for k, (a, b) in enumerate(remaining):
            rest = remaining[:k] + remaining[k + 1:]
            for va in (False, True):
                if all(go(rest, {**assign, a: va, b: vb}) for vb in (False, True)):
                    return True
        return False

    return go(list(inst.pairs), {})


def brute_game(h: Hypergraph, conv) -> str:
    """Memo-free minimax over legal_moves/play_move/status."""
    roles = conv.roles

    def rank(label, me):
        mine = WIN_LABEL[roles[me]]
        if label == mine:
            return 2
        return 1 if label == DRAW else 0

    def go(pos):
        st_ = status(pos, conv)
        if st_ is not None:
            return st_
        me = pos.to_move
        best = None
        for m in legal_moves(pos, conv):
            r = go(play_move(pos, conv, m))
            if best is None or rank(r, me) > rank(best, me):
                best = r
                if rank(r, me) == 2:
                    break
        return best

    if any(not e for e in h.edges):
        return {"maker-breaker": "MakerWin", "maker-maker": "FirstWin",
                "avoider-enforcer": "EnforcerWin", "client-waiter": "ClientWin"}[conv.kind]
    return go(initial_position(h, conv))


@st.composite
def qbf_formulas(draw, max_vars=6, max_clauses=6, max_size=3, allow_empty=True):
    n = draw(st.integers(0, max_vars))
    order = draw(st.permutations(list(range(1, n + 1))))
    quants = draw(st.lists(st.sampled_from((EXISTS, FORALL)), min_size=n, max_size=n))
    clauses = []
    if n:
        lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
        clauses = draw(st.lists(st.lists(lit, min_size=0 if allow_empty else 1, max_size=max_size),
                                max_size=max_clauses))
    return QbfFormula.build(list(zip(order, quants)), clauses, n)


@st.composite
def qbf2_formulas(draw, max_vars=8):
    """Degree <= 2 by construction: each variable gets at most two slots."""
    n = draw(st.integers(0, max_vars))
    order = draw(st.permutations(list(range(1, n + 1))))
    quants = draw(st.lists(st.sampled_from((EXISTS, FORALL)), min_size=n, max_size=n))
    slots = []
    for v in range(1, n + 1):
        for _ in range(draw(st.integers(0, 2))):
            slots.append(v if draw(st.booleans()) else -v)
    slots = draw(st.permutations(slots))
    clauses, i = [], 0
    while i < len(slots):
        k = draw(st.integers(1, 3))
        clauses.append(slots[i:i + k])
        i += k
    # occasionally an empty clause
    if draw(st.integers(0, 9)) == 0:
        clauses.insert(draw(st.integers(0, len(clauses))), [])
    formula = QbfFormula.build(list(zip(order, quants)), clauses, n)
    # clauses holding both polarities of v count once; degree stays <= 2
    return formula


@st.composite
def hypergraphs(draw, max_vertices=6, max_edges=4, max_size=None, allow_empty=False):
    n = draw(st.integers(1, max_vertices))
    size = max_size or n
    edges = draw(st.lists(st.sets(st.integers(1, n), min_size=0 if allow_empty else 1,
                                  max_size=min(size, n)), max_size=max_edges))
    return Hypergraph.build([sorted(e) for e in edges], n)


def all_assignments(vars_):
    for bits in product((False, True), repeat=len(vars_)):
        yield dict(zip(vars_, bits))


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

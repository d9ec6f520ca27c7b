"""QBF game solvers.

* :func:`solve_qbf_oracle` -- exact memoized game-tree search, any formula.
* :func:`solve_qbf2` -- rule-based decider for formulas of maximum degree 2.
* :func:`solve_paired_sat` -- exact search for the Paired-SAT game.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .formula import (EXISTS, FORALL, CnfMatrix, PairedSatInstance, QbfFormula,
                      clause_vars, degree_profile, is_tautology, make_clause)

SATISFIER_WIN = "SatisfierWin"
FALSIFIER_WIN = "FalsifierWin"

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(Exception):
    pass


class PreconditionError(ValueError):
    """Input outside the domain of a procedure or reduction."""


@dataclass(frozen=True)
class QbfOutcome:
    winner: Optional[str]
    exact: bool
    nodes_explored: int

    @property
    def value(self) -> Optional[bool]:
        """Truth value of the formula, ``None`` when the budget ran out."""
        if self.winner is None:
            return None
        return self.winner == SATISFIER_WIN

    @classmethod
    def decided(cls, value: bool, nodes: int = 0) -> "QbfOutcome":
        return cls(SATISFIER_WIN if value else FALSIFIER_WIN, True, nodes)


def _assign(residual: frozenset, lit: int):
    """Residual clause set after making ``lit`` true; None if a clause dies."""
    out = []
    for c in residual:
        if lit in c:
            continue
        if -lit in c:
            c = c - {-lit}
            if not c:
                return None
        out.append(c)
    return frozenset(out)


def _residual_vars(residual):
    vs = set()
    for c in residual:
        vs.update(abs(l) for l in c)
    return vs


def solve_qbf_oracle(formula: QbfFormula, node_budget: int = DEFAULT_BUDGET) -> QbfOutcome:
    """Exact minimax over the prefix order.

    Memo key: (position in prefix, set of unsatisfied residual clauses).
    Prefix variables absent from the residual are skipped; their value
    cannot influence the result.
    """
    order = formula.prefix
    residual = frozenset(frozenset(c) for c in formula.clauses)
    if frozenset() in residual:
        return QbfOutcome.decided(False)
    memo: dict = {}
    nodes = 0

    def sat_wins(i, res):
        nonlocal nodes
        if not res:
            return True
        live = _residual_vars(res)
        while order[i][0] not in live:
            i += 1
        key = (i, res)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded
        v, q = order[i]
        results = (_branch(i, res, v), _branch(i, res, -v))
        if q == EXISTS:
            out = any(r() for r in results)
        else:
            out = all(r() for r in results)
        memo[key] = out
        return out

    def _branch(i, res, lit):
        def run():
            child = _assign(res, lit)
            return child is not None and sat_wins(i + 1, child)
        return run

    try:
        value = sat_wins(0, residual)
    except BudgetExceeded:
        return QbfOutcome(None, False, nodes)
    return QbfOutcome.decided(value, nodes)


# -- QBF-2 rules ------------------------------------------------------------

class Rule(enum.Enum):
    R1 = "R1_TautologyRemoval"
    R2 = "R2_UniversalElimination"
    R3 = "R3_PureExistential"
    R4 = "R4_ExistentialResolution"
    R0 = "R0_UnusedVariable"


CONTINUE, TRUE, FALSE = "continue", "true", "false"


@dataclass(frozen=True)
class RuleApplication:
    rule: Rule
    variable: Optional[int]
    clauses: tuple  # affected clauses, as they stood before the step
    verdict: str
    resolvent: Optional[tuple] = None
    formula: Optional[QbfFormula] = None

    def key(self):
        """Comparable identity of the step, ignoring the snapshot."""
        return (self.rule, self.variable, self.clauses, self.verdict, self.resolvent)

    def to_line(self) -> str:
        parts = [self.rule.value]
        if self.variable is not None:
            parts.append(f"var={self.variable}")
        parts.append("clauses=" + ";".join(" ".join(map(str, c)) or "()" for c in self.clauses))
        if self.resolvent is not None:
            parts.append("resolvent=" + (" ".join(map(str, self.resolvent)) or "()"))
        parts.append(f"verdict={self.verdict}")
        return " ".join(parts)


def _check_degree_two(formula: QbfFormula):
    prof = degree_profile(formula.matrix)
    for v, d in prof.degrees.items():
        if d > 2:
            raise PreconditionError(f"variable {v} has degree {d} > 2")


def apply_rule(formula: QbfFormula) -> RuleApplication:
    """Apply exactly one reduction rule to a degree-2 formula.

    Precedence: tautology removal anywhere, then the innermost prefix
    variable decides between R0 (unused), R2 (universal), R3 (pure
    existential) and R4 (existential resolution).
    """
    _check_degree_two(formula)
    clauses = list(formula.clauses)
    if any(not c for c in clauses):
        raise PreconditionError("formula contains an empty clause (already False)")
    if not clauses and not formula.prefix:
        raise PreconditionError("nothing left to reduce")
    prefix = list(formula.prefix)

    def result(rule, var, affected, new_clauses, new_prefix, resolvent=None):
        if any(not c for c in new_clauses):
            verdict = FALSE
        elif not new_clauses and not new_prefix:
            verdict = TRUE
        else:
            verdict = CONTINUE
        f = QbfFormula(tuple(new_prefix), CnfMatrix(formula.num_vars, tuple(new_clauses)))
        return RuleApplication(rule, var, tuple(affected), verdict, resolvent, f)

    for j, c in enumerate(clauses):
        if is_tautology(c):
            return result(Rule.R1, None, [c], clauses[:j] + clauses[j + 1:], prefix)

    v, q = prefix[-1]
    rest = prefix[:-1]
    occ = [j for j, c in enumerate(clauses) if v in clause_vars(c)]
    affected = [clauses[j] for j in occ]
    if not occ:
        return result(Rule.R0, v, [], clauses, rest)
    if q == FORALL:
        new = [make_clause(l for l in c if abs(l) != v) if j in occ else c
               for j, c in enumerate(clauses)]
        return result(Rule.R2, v, affected, new, rest)
    signs = {l > 0 for j in occ for l in clauses[j] if abs(l) == v}
    if len(signs) == 1:
        new = [c for j, c in enumerate(clauses) if j not in occ]
        return result(Rule.R3, v, affected, new, rest)
    if len(occ) != 2:
        raise PreconditionError(f"mixed existential {v} with degree {len(occ)}")
    i, j = occ
    resolvent = make_clause([l for l in clauses[i] if abs(l) != v]
                            + [l for l in clauses[j] if abs(l) != v])
    new = list(clauses)
    new[i] = resolvent
    del new[j]
    return result(Rule.R4, v, affected, new, rest, resolvent)


def solve_qbf2(formula: QbfFormula, snapshots: bool = False
               ) -> tuple[QbfOutcome, list[RuleApplication]]:
    """Decide a QBF of maximum degree 2 by exhaustive rule application.

    Incremental implementation of :func:`apply_rule` iteration; each step
    touches only the clauses of one variable.  With ``snapshots`` every
    trace entry also carries the resulting formula (quadratic cost).
    """
    _check_degree_two(formula)
    trace: list[RuleApplication] = []
    if any(not c for c in formula.clauses):
        return QbfOutcome.decided(False), trace
    if not formula.clauses and not formula.prefix:
        return QbfOutcome.decided(True), trace

    # cid -> [order key, literal set]; a resolvent inherits the smaller key
    clauses: dict[int, list] = {}
    occ: dict[int, set[int]] = {}
    tauts: list[int] = []
    for cid, c in enumerate(formula.clauses):
        clauses[cid] = [cid, set(c)]
        for l in c:
            occ.setdefault(abs(l), set()).add(cid)
        if is_tautology(c):
            tauts.append(cid)
    tauts.reverse()
    next_cid = len(clauses)
    prefix = list(formula.prefix)

    def frozen(cid):
        return make_clause(clauses[cid][1])

    def drop(cid, skip=None):
        for l in clauses[cid][1]:
            if abs(l) != skip:
                occ[abs(l)].discard(cid)
        del clauses[cid]

    def record(rule, var, affected, verdict, resolvent=None):
        snap = None
        if snapshots:
            body = tuple(make_clause(lits) for _, lits in sorted(clauses.values(), key=lambda e: e[0]))
            snap = QbfFormula(tuple(prefix), CnfMatrix(formula.num_vars, body))
        trace.append(RuleApplication(rule, var, tuple(affected), verdict, resolvent, snap))

    steps_left = len(prefix) + len(clauses) + 1
    while True:
        steps_left -= 1
        assert steps_left >= 0, "rule application did not shrink the formula"
        if tauts:
            cid = tauts.pop()
            affected = [frozen(cid)]
            drop(cid)
            verdict = CONTINUE if clauses or prefix else TRUE
            record(Rule.R1, None, affected, verdict)
            if verdict == TRUE:
                return QbfOutcome.decided(True), trace
            continue
        v, q = prefix.pop()
        cids = sorted(occ.pop(v, ()), key=lambda c: clauses[c][0])
        affected = [frozen(c) for c in cids]
        if not cids:
            verdict = CONTINUE if clauses or prefix else TRUE
            record(Rule.R0, v, affected, verdict)
            if verdict == TRUE:
                return QbfOutcome.decided(True), trace
            continue
        if q == FORALL:
            emptied = False
            for cid in cids:
                lits = clauses[cid][1]
                lits.discard(v)
                lits.discard(-v)
                emptied = emptied or not lits
            record(Rule.R2, v, affected, FALSE if emptied else CONTINUE)
            if emptied:
                return QbfOutcome.decided(False), trace
            continue
        signs = {l > 0 for c in affected for l in c if abs(l) == v}
        if len(signs) == 1:
            for cid in cids:
                drop(cid, skip=v)
            verdict = CONTINUE if clauses or prefix else TRUE
            record(Rule.R3, v, affected, verdict)
            if verdict == TRUE:
                return QbfOutcome.decided(True), trace
            continue
        ci, cj = cids
        key = clauses[ci][0]
        lits = {l for l in clauses[ci][1] | clauses[cj][1] if abs(l) != v}
        drop(ci, skip=v)
        drop(cj, skip=v)
        cid = next_cid
        next_cid += 1
        clauses[cid] = [key, lits]
        for l in lits:
            occ.setdefault(abs(l), set()).add(cid)
        resolvent = make_clause(lits)
        verdict = FALSE if not lits else CONTINUE
        record(Rule.R4, v, affected, verdict, resolvent)
        if not lits:
            return QbfOutcome.decided(False), trace
        if is_tautology(resolvent):
            tauts.append(cid)


# -- Paired SAT -------------------------------------------------------------

def solve_paired_sat(inst: PairedSatInstance, node_budget: int = DEFAULT_BUDGET) -> QbfOutcome:
    """Exact search: Satisfier picks a pair and values its first variable,
    Falsifier values the second.

    Pairs whose variables no longer occur in the residual are dropped from
    the state (they can be played in any order without effect).
    """
    pairs = inst.pairs
    residual = frozenset(frozenset(c) for c in inst.clauses)
    if frozenset() in residual:
        return QbfOutcome.decided(False)
    memo: dict = {}
    nodes = 0

    def sat_wins(remaining, res):
        nonlocal nodes
        if not res:
            return True
        live = _residual_vars(res)
        rel = frozenset(p for p in remaining if pairs[p][0] in live or pairs[p][1] in live)
        key = (rel, res)
        hit = memo.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded
        out = False
        for p in sorted(rel):
            a, b = pairs[p]
            rest = rel - {p}
            for la in (a, -a):
                r1 = _assign(res, la)
                if r1 is None:
                    continue
                r2 = _assign(r1, b)
                if r2 is None or not sat_wins(rest, r2):
                    continue
                r3 = _assign(r1, -b)
                if r3 is None or not sat_wins(rest, r3):
                    continue
                out = True
                break
            if out:
                break
        memo[key] = out
        return out

    try:
        value = sat_wins(frozenset(range(len(pairs))), residual)
    except BudgetExceeded:
        return QbfOutcome(None, False, nodes)
    return QbfOutcome.decided(value, nodes)

"""Verification harness: structural bounds, oracle equivalence, calibration.

Every check produces a :class:`CheckRecord` with status ``pass``,
``fail`` or ``unknown`` (a budget ran out; never counted as a failure).
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Optional

from .formula import PairedSatInstance, QbfFormula, check_class, degree_profile
from .game_reduce import (falsifier_only_clause, maker_forcing_playout, mb_to_bounded_degree,
                          mb_to_maker_maker, paired_sat_to_client_waiter,
                          qbf3_to_avoider_enforcer, breaker_pairing, GREEDY, RANDOM as RANDOM_POLICY)
from .games import (AE, AVOIDER_WIN, BREAKER_WIN, CLIENT_WIN, CW, DRAW, ENFORCER_WIN, FIRST_WIN,
                    MAKER_WIN, MB, MM, SECOND_WIN, WAITER_WIN, Convention, Solver,
                    initial_position, legal_moves, play_move, settled, solve_positional,
                    solver_strategy)
from .generators import (ALT_EXISTS, fingerprint, gen_random_hypergraph, gen_random_paired_sat,
                         gen_random_qbf)
from .hypergraph import Hypergraph
from .qbf import (FALSIFIER_WIN, SATISFIER_WIN, BudgetExceeded, solve_paired_sat,
                  solve_qbf2, solve_qbf_oracle)
from .qbf_reduce import (EXISTS_FIRST, normalize_3qbf, pad_alternation, qbf_to_paired_sat,
                         to_3qbf3)

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"

KINDS = ("qbf2", "3qbf3", "psat", "ae", "cw", "mb_bounded", "mm")

STRICT, MONOTONE = "strict", "monotone"


@dataclass(frozen=True)
class AeConfig:
    convention: str
    first_player: str
    satisfier_role: str  # the AE role whose win means the formula is true

    def expected(self, qbf_winner: str) -> str:
        other = "enforcer" if self.satisfier_role == "avoider" else "avoider"
        role = self.satisfier_role if qbf_winner == SATISFIER_WIN else other
        return AVOIDER_WIN if role == "avoider" else ENFORCER_WIN


@dataclass(frozen=True)
class CwConfig:
    lone_vertex_rule: str
    client_role: str  # Paired-SAT player whose win corresponds to ClientWin

    def expected(self, psat_winner: str) -> str:
        return CLIENT_WIN if psat_winner == self.client_role else WAITER_WIN


# Frozen by scripts/calibrate.py on the n=1 families.  No (convention,
# first player, mapping) setting of the AE game is consistent with the
# QBF oracle on that family, so nothing is frozen for AE.
FROZEN_AE: Optional[AeConfig] = None
FROZEN_CW: Optional[CwConfig] = CwConfig(lone_vertex_rule="client", client_role=FALSIFIER_WIN)


class CalibrationError(RuntimeError):
    def __init__(self, message: str, survivors: list, table: dict):
        super().__init__(message)
        self.survivors = survivors
        self.table = table


@dataclass
class CheckRecord:
    check: str
    fingerprint: str
    status: str
    expected: object = None
    observed: object = None
    nodes: int = 0
    elapsed: Optional[float] = None
    detail: Optional[str] = None


@dataclass
class VerificationReport:
    kind: str
    records: list[CheckRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def add(self, rec: CheckRecord):
        self.records.append(rec)

    def extend(self, other: "VerificationReport"):
        self.records.extend(other.records)

    def summary(self) -> dict:
        c = Counter(r.status for r in self.records)
        return {PASS: c[PASS], FAIL: c[FAIL], UNKNOWN: c[UNKNOWN]}

    @property
    def ok(self) -> bool:
        return self.summary()[FAIL] == 0

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == FAIL]

    def to_json(self, timings: bool = False) -> dict:
        recs = sorted(self.records, key=lambda r: (r.fingerprint, r.check))
        out = []
        for r in recs:
            d = asdict(r)
            if not timings:
                d.pop("elapsed")
            out.append(d)
        return {
            "kind": self.kind,
            "seed": self.seed,
            "config": self.config,
            "summary": self.summary(),
            "records": out,
        }


def frozen_config_block() -> dict:
    return {
        "ae": asdict(FROZEN_AE) if FROZEN_AE else None,
        "cw": asdict(FROZEN_CW) if FROZEN_CW else None,
    }


# -- calibration ----------------------------------------------------------------

def monotone_ae_winner(h: Hypergraph, first_player: str, node_budget: int = 2_000_000) -> str:
    """Avoider-Enforcer, monotone rules: each turn claims one or more vertices."""
    if any(not e for e in h.edges):
        return ENFORCER_WIN
    full = (1 << h.num_vertices) - 1
    edges = [sum(1 << (v - 1) for v in e) for e in h.edges]
    memo: dict = {}
    nodes = 0

    def avoider_wins(av: int, en: int, avoider_turn: bool) -> bool:
        nonlocal nodes
        key = (av, en, avoider_turn)
        if key in memo:
            return memo[key]
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded
        free = full & ~(av | en)
        if not free:
            res = True
        else:
            res = not avoider_turn
            sub = free
            while sub:
                if avoider_turn:
                    na = av | sub
                    if all(na & e != e for e in edges) and avoider_wins(na, en, False):
                        res = True
                        break
                elif not avoider_wins(av, en | sub, True):
                    res = False
                    break
                sub = (sub - 1) & free
        memo[key] = res
        return res

    return AVOIDER_WIN if avoider_wins(0, 0, first_player == "avoider") else ENFORCER_WIN


def ae_winner(h: Hypergraph, convention: str, first_player: str, node_budget: int) -> Optional[str]:
    if convention == STRICT:
        return solve_positional(h, Convention(AE, first_player), node_budget).winner
    if convention == MONOTONE:
        try:
            return monotone_ae_winner(h, first_player, node_budget)
        except BudgetExceeded:
            return None
    raise ValueError(f"unknown AE convention {convention!r}")


def calibrate_ae_convention(sample: list[QbfFormula], convention: str = STRICT,
                            node_budget: int = 2_000_000) -> AeConfig:
    """Return the unique (first player, mapping) setting consistent with the oracle.

    Raises CalibrationError when none or several settings survive; the
    error carries the per-setting tallies.
    """
    candidates = [AeConfig(convention, fp, sat) for fp in ("avoider", "enforcer")
                  for sat in ("avoider", "enforcer")]
    alive = set(candidates)
    table: dict = {}
    for f in sample:
        truth = solve_qbf_oracle(f).winner
        h, _ = qbf3_to_avoider_enforcer(f)
        for fp in ("avoider", "enforcer"):
            w = ae_winner(h, convention, fp, node_budget)
            if w is None:
                continue
            key = f"{fp} first: {truth} -> {w}"
            table[key] = table.get(key, 0) + 1
            for cfg in candidates:
                if cfg.first_player == fp and cfg.expected(truth) != w:
                    alive.discard(cfg)
    survivors = [c for c in candidates if c in alive]
    if len(survivors) == 1:
        return survivors[0]
    if not survivors:
        raise CalibrationError(f"no consistent {convention} AE configuration", survivors, table)
    raise CalibrationError(f"{len(survivors)} configurations survive; sample under-determined",
                           survivors, table)


def calibrate_cw_mapping(sample: list[PairedSatInstance], lone_vertex_rule: str = "client",
                         node_budget: int = 2_000_000) -> CwConfig:
    candidates = [CwConfig(lone_vertex_rule, r) for r in (SATISFIER_WIN, FALSIFIER_WIN)]
    alive = set(candidates)
    table: dict = {}
    conv = Convention(CW, lone_vertex_rule=lone_vertex_rule)
    for inst in sample:
        truth = solve_paired_sat(inst).winner
        h, _ = paired_sat_to_client_waiter(inst)
        w = solve_positional(h, conv, node_budget).winner
        if w is None:
            continue
        key = f"{truth} -> {w}"
        table[key] = table.get(key, 0) + 1
        alive = {c for c in alive if c.expected(truth) == w}
    survivors = [c for c in candidates if c in alive]
    if len(survivors) != 1:
        raise CalibrationError(f"{len(survivors)} CW mappings survive", survivors, table)
    return survivors[0]


# -- per-kind checks ------------------------------------------------------------

class _Checker:
    def __init__(self, report: VerificationReport, fp: str, timings: bool):
        self.report = report
        self.fp = fp
        self.timings = timings
        self.t0 = time.perf_counter()

    def add(self, check, ok, expected=None, observed=None, nodes=0, detail=None, status=None):
        elapsed = round(time.perf_counter() - self.t0, 6) if self.timings else None
        st = status or (PASS if ok else FAIL)
        self.report.add(CheckRecord(check, self.fp, st, expected, observed, nodes, elapsed, detail))

    def bound(self, check, value, limit, op="<="):
        ok = value <= limit if op == "<=" else value == limit
        self.add(check, ok, f"{op} {limit}", value)


def _oracle(formula: QbfFormula, budget: int):
    try:
        return solve_qbf_oracle(formula, budget)
    except BudgetExceeded:
        return None


def _check_qbf2(c: _Checker, f: QbfFormula, cfg: dict):
    out, trace = solve_qbf2(f)
    ref = _oracle(f, cfg["budget"])
    if ref is None or not ref.exact:
        c.add("qbf2-vs-oracle", None, status=UNKNOWN, detail="oracle budget")
        return
    c.add("qbf2-vs-oracle", out.winner == ref.winner, ref.winner, out.winner, ref.nodes_explored,
          detail=f"{len(trace)} rule steps")


def _check_3qbf3(c: _Checker, f: QbfFormula, cfg: dict):
    norm, _ = normalize_3qbf(f)
    out, smap = to_3qbf3(norm)
    ok, violations = check_class(out, 3, 3, require_uniform=True, require_regular=True)
    c.add("3qbf3-class", ok, "3-uniform 3-regular", violations[:3] or "ok")
    a, b = _oracle(f, cfg["budget"]), _oracle(out, cfg["budget"])
    if a is None or b is None:
        c.add("3qbf3-outcome", None, status=UNKNOWN, detail="oracle budget")
    else:
        c.add("3qbf3-outcome", a.winner == b.winner, a.winner, b.winner, b.nodes_explored)


def _check_psat(c: _Checker, f: QbfFormula, cfg: dict):
    f = pad_alternation(f, EXISTS_FIRST, require_even=True)
    inst, _ = qbf_to_paired_sat(f)
    prof = degree_profile(inst.matrix)
    c.bound("psat-max-degree", prof.max_degree, 7)
    c.bound("psat-rank", prof.rank, 3)
    ref = _oracle(f, cfg["budget"])
    try:
        got = solve_paired_sat(inst, cfg["budget"])
    except BudgetExceeded:
        got = None
    if ref is None or got is None:
        c.add("psat-outcome", None, status=UNKNOWN, detail="budget")
    else:
        c.add("psat-outcome", ref.winner == got.winner, ref.winner, got.winner, got.nodes_explored)


def _check_ae(c: _Checker, f: QbfFormula, cfg: dict):
    f = pad_alternation(f, EXISTS_FIRST, require_even=True)
    h, trace = qbf3_to_avoider_enforcer(f)
    c.bound("ae-rank", h.rank, 6)
    c.bound("ae-max-degree", h.max_degree, 8)
    c.bound("ae-gadget-edges", len(h.edges), 4 * len(f.prefix) + len(f.clauses), "==")
    ae = cfg.get("ae")
    if ae is None:
        c.add("ae-outcome", None, status=UNKNOWN, detail="refused: no frozen AE configuration")
        return
    ref = _oracle(f, cfg["budget"])
    w = ae_winner(h, ae.convention, ae.first_player, cfg["budget"]) if ref else None
    if ref is None or w is None:
        c.add("ae-outcome", None, status=UNKNOWN, detail="budget")
    else:
        c.add("ae-outcome", ae.expected(ref.winner) == w, ae.expected(ref.winner), w)


def _check_cw(c: _Checker, inst: PairedSatInstance, cfg: dict):
    if falsifier_only_clause(inst) is not None:
        got = solve_paired_sat(inst, cfg["budget"])
        c.add("cw-short-circuit", got.winner == FALSIFIER_WIN, FALSIFIER_WIN, got.winner)
        return
    h, trace = paired_sat_to_client_waiter(inst)
    n = len(inst.pairs)
    c.bound("cw-rank", h.rank, 6)
    c.bound("cw-max-degree", h.max_degree, 35)
    c.bound("cw-vertices", h.num_vertices, 8 * n, "==")
    c.bound("cw-block-pair-edges", len(trace.block_edges) + len(trace.pair_edges), 12 * n, "==")
    cw = cfg.get("cw")
    if cw is None:
        c.add("cw-outcome", None, status=UNKNOWN, detail="refused: no frozen CW configuration")
        return
    if n > cfg["cw_max_pairs"]:
        c.add("cw-outcome", None, status=UNKNOWN, detail=f"{n} pairs: beyond exact range")
        return
    try:
        ref = solve_paired_sat(inst, cfg["budget"])
    except BudgetExceeded:
        ref = None
    got = solve_positional(h, Convention(CW, lone_vertex_rule=cw.lone_vertex_rule), cfg["game_budget"])
    if ref is None or not got.exact:
        c.add("cw-outcome", None, status=UNKNOWN, nodes=got.nodes_explored, detail="budget")
    else:
        c.add("cw-outcome", cw.expected(ref.winner) == got.winner, cw.expected(ref.winner),
              got.winner, got.nodes_explored)


def breaker_source_play(h: Hypergraph, node_budget: int) -> tuple[set, set]:
    """One full source game: Breaker plays solver-optimal moves, Maker the
    lowest free vertex.  Returns (maker set, breaker set)."""
    conv = Convention(MB)
    solver = Solver(h, conv, node_budget)
    pos = initial_position(h, conv)
    while settled(pos, conv) is None and pos.free:
        moves = legal_moves(pos, conv)
        if pos.to_move == 0:
            move = moves[0]
        else:
            move = next((m for m in moves
                         if solver.value_at(play_move(pos, conv, m)) == BREAKER_WIN), moves[0])
        pos = play_move(pos, conv, move)
    # the rest of the board is irrelevant; hand leftovers to Maker
    maker = set(pos.claims[0]) | set(pos.free)
    return maker, set(pos.claims[1])


def _check_mb(c: _Checker, h: Hypergraph, cfg: dict):
    out, trace = mb_to_bounded_degree(h)
    c.bound("mb-max-degree", out.max_degree, 5)
    c.bound("mb-rank", out.rank, 12)
    c.bound("mb-big-edges", len(trace.big), sum(2 ** len(e) for e in h.edges), "==")
    leaf_ok = all(len(trace.leaves[(u, eps)]) == sum(2 ** (len(e) - 1) for e in h.edges if u in e)
                  for (u, eps) in trace.leaves)
    c.add("mb-leaf-counts", leaf_ok)
    src = solve_positional(h, Convention(MB), cfg["game_budget"])
    if not src.exact:
        c.add("mb-strategy", None, status=UNKNOWN, detail="source solve budget")
        return
    if src.winner == BREAKER_WIN:
        _, br = breaker_source_play(h, cfg["game_budget"])
        br &= set(trace.x)
        hits = all(set(e) & br for e in h.edges)
        pairing = breaker_pairing(trace, br)
        gaps = pairing.uncovered(out)
        c.add("mb-pairing", hits and not gaps and pairing.is_disjoint(), 0, len(gaps),
              detail=f"breaker x-set {sorted(br)}")
        return
    strat = solver_strategy(h, cfg["game_budget"])
    bad = []
    for k in range(cfg["playouts"]):
        policy = RANDOM_POLICY if k % 2 == 0 else GREEDY
        rec = maker_forcing_playout(trace, strat, policy, seed=cfg["seed"] * 100_003 + k)
        if not rec.maker_won:
            bad.append((k, policy, rec.defect))
    c.add("mb-playouts", not bad, cfg["playouts"], cfg["playouts"] - len(bad),
          detail=str(bad[:3]) if bad else None)


MM_MAP = {MAKER_WIN: FIRST_WIN, BREAKER_WIN: DRAW}


def _check_mm(c: _Checker, h: Hypergraph, cfg: dict):
    out, tr = mb_to_maker_maker(h)
    # each hyperedge grows by one and gains a 2-edge partner; nothing is added to an empty board
    c.bound("mm-rank", out.rank, max(h.rank + 1, 2) if h.edges else 0, "==")
    c.bound("mm-max-degree", out.max_degree, max(h.max_degree, 2) if h.edges else 0, "==")
    c.bound("mm-vertices", out.num_vertices, h.num_vertices + 2 * len(h.edges), "==")
    c.bound("mm-edges", len(out.edges), 2 * len(h.edges), "==")
    a = solve_positional(h, Convention(MB), cfg["game_budget"])
    b = solve_positional(out, Convention(MM), cfg["game_budget"])
    if b.winner == SECOND_WIN:
        c.add("mm-no-second-win", False, "not SecondWin", b.winner)
    if not (a.exact and b.exact):
        c.add("mm-outcome", None, status=UNKNOWN, detail="budget")
    else:
        c.add("mm-outcome", MM_MAP[a.winner] == b.winner, MM_MAP[a.winner], b.winner,
              b.nodes_explored)


_CHECKS = {"qbf2": _check_qbf2, "3qbf3": _check_3qbf3, "psat": _check_psat, "ae": _check_ae,
           "cw": _check_cw, "mb_bounded": _check_mb, "mm": _check_mm}


def default_config(**overrides) -> dict:
    cfg = {"budget": 5_000_000, "game_budget": 2_000_000, "playouts": 200, "seed": 0,
           "cw_max_pairs": 2,
           "ae": FROZEN_AE, "cw": FROZEN_CW}
    cfg.update(overrides)
    return cfg


def verify_reduction(kind: str, source, config: Optional[dict] = None,
                     timings: bool = False) -> VerificationReport:
    if kind not in _CHECKS:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    cfg = default_config(**(config or {}))
    report = VerificationReport(kind, config=frozen_config_block())
    _CHECKS[kind](_Checker(report, fingerprint(source), timings), source, cfg)
    return report


# -- seeded batches ---------------------------------------------------------------

def random_source(kind: str, seed: int):
    """Seeded source instance sized for the exact oracles."""
    rng = random.Random(seed)
    if kind == "qbf2":
        n = rng.randint(1, 14)
        return gen_random_qbf(seed, n, rng.randint(0, n), rank=2, max_degree=2, min_size=0)
    if kind == "3qbf3":
        return gen_random_qbf(seed, rng.randint(1, 3), rng.randint(1, 3), rank=3, max_degree=3)
    if kind in ("psat", "ae"):
        rounds = rng.randint(1, 3)
        return gen_random_qbf(seed, 2 * rounds, rng.randint(1, 2 * rounds), rank=3,
                              max_degree=3, quantifier_pattern=ALT_EXISTS)
    if kind == "cw":
        pairs = rng.randint(1, 3)
        return gen_random_paired_sat(seed, pairs, rng.randint(1, 2 * pairs), rank=3, max_degree=7)
    if kind == "mb_bounded":
        n = rng.randint(2, 8)
        return gen_random_hypergraph(seed, n, rng.randint(1, 3), rank=min(6, n))
    if kind == "mm":
        n = rng.randint(2, 6)
        return gen_random_hypergraph(seed, n, rng.randint(1, 3), rank=min(4, n))
    raise ValueError(f"unknown kind {kind!r}")


def calibration_record(kind: str) -> CheckRecord:
    """The frozen configuration must exist before equivalence checks run."""
    frozen = FROZEN_AE if kind == "ae" else FROZEN_CW
    if frozen is None:
        return CheckRecord(f"{kind}-calibration", "-", FAIL, "frozen configuration", None,
                           detail="calibration found no consistent configuration")
    return CheckRecord(f"{kind}-calibration", "-", PASS, "frozen configuration", asdict(frozen))


def run_verification(kind: str, seed: int, count: int, config: Optional[dict] = None,
                     timings: bool = False) -> VerificationReport:
    cfg = default_config(seed=seed, **(config or {}))
    report = VerificationReport(kind, config=frozen_config_block(), seed=seed)
    if kind in ("ae", "cw"):
        report.add(calibration_record(kind))
    for i in range(count):
        s = seed * 1_000_003 + i
        report.extend(verify_reduction(kind, random_source(kind, s), dict(cfg, seed=s), timings))
    return report

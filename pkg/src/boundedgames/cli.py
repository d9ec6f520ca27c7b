"""Command-line entry point: solve, reduce, verify, gen, stats, play.

Exit codes: 0 success, 1 logical failure, 2 usage or parse error,
3 budget exhausted without an answer.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .formula import (ParseError, check_class, degree_profile, emit_psat, emit_qdimacs,
                      parse_psat, parse_qdimacs)
from .game_reduce import (mb_to_bounded_degree, mb_to_maker_maker, paired_sat_to_client_waiter,
                          qbf3_to_avoider_enforcer)
from .games import (ALIASES, CW, DRAW, MM, WIN_LABEL, Convention, IllegalMove, Solver,
                    initial_position, legal_moves, play_move, solve_positional, status)
from .generators import RANDOM, gen_random_hypergraph, gen_random_paired_sat, gen_random_qbf
from .hypergraph import emit_hypergraph, parse_hypergraph
from .qbf import (BudgetExceeded, PreconditionError, SATISFIER_WIN, solve_paired_sat,
                  solve_qbf2, solve_qbf_oracle)
from .qbf_reduce import (EXISTS_FIRST, normalize_3qbf, pad_alternation, qbf_to_paired_sat,
                         to_3qbf3)
from .verify import KINDS as VERIFY_KINDS, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

REDUCE_KINDS = ("3qbf3", "ae", "psat", "cw", "mb_bounded", "mm")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _detect(text: str) -> str:
    for line in text.splitlines():
        toks = line.split()
        if toks and toks[0] == "p" and len(toks) > 1:
            return toks[1]
    raise ParseError("no 'p' header line")


def cmd_solve(args) -> int:
    text = _read(args.file)
    if args.game:
        conv = Convention(args.game, args.first)
        out = solve_positional(parse_hypergraph(text), conv, args.budget)
        if not out.exact:
            print("UNKNOWN (node budget exhausted)")
            return EXIT_BUDGET
        print(out.winner)
        return EXIT_OK
    if args.psat:
        try:
            out = solve_paired_sat(parse_psat(text), args.budget)
        except BudgetExceeded:
            print("UNKNOWN (node budget exhausted)")
            return EXIT_BUDGET
        print(out.winner)
        return EXIT_OK
    f = parse_qdimacs(text)
    use_rules = not args.oracle and degree_profile(f.matrix).max_degree <= 2
    try:
        if use_rules:
            out, trace = solve_qbf2(f)
            if args.trace:
                for step in trace:
                    print(step.to_line())
        else:
            out = solve_qbf_oracle(f, args.budget)
    except BudgetExceeded:
        print("UNKNOWN (node budget exhausted)")
        return EXIT_BUDGET
    print("TRUE" if out.winner == SATISFIER_WIN else "FALSE")
    return EXIT_OK


def cmd_reduce(args) -> int:
    text = _read(args.inp)
    kind = args.kind
    if kind in ("3qbf3", "ae", "psat"):
        f = parse_qdimacs(text)
        if kind == "3qbf3":
            norm, prov = normalize_3qbf(f)
            out, smap = to_3qbf3(norm)
            result, trace = emit_qdimacs(out), {"normalize": prov, "split": smap.to_json()}
        else:
            padded = pad_alternation(f, EXISTS_FIRST, require_even=True)
            trace = {"padded_prefix": [list(p) for p in padded.prefix]}
            if kind == "ae":
                h, tr = qbf3_to_avoider_enforcer(padded)
                result = emit_hypergraph(h)
            else:
                inst, tr = qbf_to_paired_sat(padded)
                result = emit_psat(inst)
            trace.update(tr.to_json())
    elif kind == "cw":
        h, tr = paired_sat_to_client_waiter(parse_psat(text))
        result, trace = emit_hypergraph(h), tr.to_json()
    else:
        src = parse_hypergraph(text)
        if kind == "mb_bounded":
            h, tr = mb_to_bounded_degree(src)
            trace = tr.to_json()
        else:
            h, trace = mb_to_maker_maker(src)
        result = emit_hypergraph(h)
    _write(args.out, result)
    if args.trace:
        _write(args.trace, _dump(trace))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = {"budget": args.budget, "game_budget": args.budget, "playouts": args.playouts}
    report = run_verification(args.kind, args.seed, args.count, cfg, timings=args.timings)
    _write(args.out, _dump(report.to_json(timings=args.timings)))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_gen(args) -> int:
    try:
        if args.what == "qbf":
            text = emit_qdimacs(gen_random_qbf(args.seed, args.vars, args.clauses, args.rank,
                                               args.degree, args.pattern, args.min_size))
        elif args.what == "psat":
            text = emit_psat(gen_random_paired_sat(args.seed, args.pairs, args.clauses,
                                                   args.rank, args.degree))
        else:
            text = emit_hypergraph(gen_random_hypergraph(args.seed, args.vertices, args.edges,
                                                         args.rank, args.degree, args.min_size))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, text)
    return EXIT_OK


def cmd_stats(args) -> int:
    text = _read(args.file)
    kind = _detect(text)
    if kind == "pos":
        h = parse_hypergraph(text)
        stats = dict(h.stats(), format="pos", isolated=len(h.isolated()))
    elif kind == "psat":
        inst = parse_psat(text)
        prof = degree_profile(inst.matrix)
        stats = {"format": "psat", "variables": inst.matrix.num_vars, "pairs": len(inst.pairs),
                 "clauses": len(inst.clauses), "rank": prof.rank, "max_degree": prof.max_degree}
    else:
        f = parse_qdimacs(text)
        prof = degree_profile(f.matrix)
        blocks = sum(1 for i, (_, q) in enumerate(f.prefix) if i == 0 or q != f.prefix[i - 1][1])
        stats = {"format": "qdimacs", "variables": f.num_vars, "clauses": len(f.clauses),
                 "rank": prof.rank, "max_degree": prof.max_degree, "quantifier_blocks": blocks,
                 "is_3qbf3": check_class(f, 3, 3, True, True)[0]}
    _write(None, _dump(stats))
    return EXIT_OK


def _parse_move(conv, pos, text):
    nums = tuple(int(t) for t in text.replace(",", " ").split())
    if conv.kind == CW and pos.offer is None:
        return nums
    if len(nums) != 1:
        raise ValueError("enter one vertex")
    return nums[0]


def cmd_play(args, stdin=None) -> int:
    stdin = stdin or sys.stdin
    h = parse_hypergraph(_read(args.file))
    conv = Convention(args.game, args.first)
    me = conv.roles.index(args.role) if args.role else conv.first_index
    solver = Solver(h, conv, args.budget)
    pos = initial_position(h, conv)
    print(f"{conv.kind}: you play {conv.roles[me]}; {len(h.edges)} hyperedges on "
          f"{h.num_vertices} vertices")
    while status(pos, conv) is None:
        moves = legal_moves(pos, conv)
        if pos.to_move == me:
            what = "offer two vertices" if conv.kind == CW and pos.offer is None else "vertex"
            sys.stdout.write(f"free {pos.free}  your move ({what}): ")
            sys.stdout.flush()
            line = stdin.readline()
            if not line:
                print()
                return EXIT_OK
            try:
                move = _parse_move(conv, pos, line)
                pos = play_move(pos, conv, move)
            except (ValueError, IllegalMove) as exc:
                print(f"illegal: {exc}")
            continue
        try:
            best = moves[0]
            for m in moves:
                if solver.value_at(play_move(pos, conv, m)) in _good_for(conv, pos.to_move):
                    best = m
                    break
        except BudgetExceeded:
            print("solver budget exhausted")
            return EXIT_BUDGET
        print(f"solver plays {best}")
        pos = play_move(pos, conv, best)
    print(f"result: {status(pos, conv)}")
    return EXIT_OK


def _good_for(conv, role_index):
    labels = {WIN_LABEL[conv.roles[role_index]]}
    if conv.kind == MM:
        labels.add(DRAW)
    return labels


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boundedgames", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    games = sorted(set(ALIASES) | set(ALIASES.values()))

    s = sub.add_parser("solve", help="solve a QBF, Paired-SAT instance or positional game")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--qbf", action="store_true", help="QDIMACS input")
    g.add_argument("--psat", action="store_true", help="Paired-SAT input")
    g.add_argument("--game", choices=games, help="hypergraph input, this convention")
    s.add_argument("file")
    s.add_argument("--first", help="first player (MB / AE)")
    s.add_argument("--budget", type=int, default=5_000_000)
    s.add_argument("--oracle", action="store_true", help="force the game-tree oracle")
    s.add_argument("--trace", action="store_true", help="print the rule trace (degree <= 2)")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="apply one construction")
    r.add_argument("--kind", required=True, choices=REDUCE_KINDS)
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out", default="-")
    r.add_argument("--trace")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="seeded verification batch; JSON report")
    v.add_argument("--kind", required=True, choices=VERIFY_KINDS)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=20)
    v.add_argument("--budget", type=int, default=2_000_000)
    v.add_argument("--playouts", type=int, default=200)
    v.add_argument("--timings", action="store_true")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="seeded random instance")
    gen.add_argument("what", choices=("qbf", "psat", "hypergraph"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--vars", type=int, default=6)
    gen.add_argument("--pairs", type=int, default=2)
    gen.add_argument("--vertices", type=int, default=6)
    gen.add_argument("--clauses", type=int, default=4)
    gen.add_argument("--edges", type=int, default=3)
    gen.add_argument("--rank", type=int, default=3)
    gen.add_argument("--degree", type=int, default=3)
    gen.add_argument("--min-size", type=int, default=1)
    gen.add_argument("--pattern", default=RANDOM, help="alt-e, alt-a, random or e.g. 'eaea'")
    gen.add_argument("--out", default="-")
    gen.set_defaults(func=cmd_gen)

    st = sub.add_parser("stats", help="structural statistics of an instance file")
    st.add_argument("file")
    st.set_defaults(func=cmd_stats)

    pl = sub.add_parser("play", help="play against the exact solver")
    pl.add_argument("--game", required=True, choices=games)
    pl.add_argument("file")
    pl.add_argument("--first")
    pl.add_argument("--role", help="your role (default: the first player)")
    pl.add_argument("--budget", type=int, default=2_000_000)
    pl.set_defaults(func=cmd_play)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

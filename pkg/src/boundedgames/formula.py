"""CNF / QBF / Paired-SAT instances, structural metrics and text formats.

Literals are signed ints in the DIMACS convention: ``v`` is the positive
literal of variable ``v`` and ``-v`` its negation.  A clause is a tuple of
distinct literals sorted by variable id (negative before positive when a
clause holds both polarities of one variable).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

EXISTS = "e"
FORALL = "a"


class ParseError(ValueError):
    """Malformed QDIMACS / Paired-SAT text."""


def make_clause(literals: Iterable[int]) -> tuple[int, ...]:
    lits = set()
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise ValueError("0 is not a literal")
        lits.add(lit)
    return tuple(sorted(lits, key=lambda l: (abs(l), l)))


def is_tautology(clause: Sequence[int]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


def clause_vars(clause: Sequence[int]) -> set[int]:
    return {abs(l) for l in clause}


@dataclass(frozen=True)
class CnfMatrix:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        cl = tuple(make_clause(c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for c in cl:
            for lit in c:
                if abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} exceeds num_vars={self.num_vars}")

    def __len__(self):
        return len(self.clauses)

    def variables(self) -> set[int]:
        return {abs(l) for c in self.clauses for l in c}


@dataclass(frozen=True)
class QbfFormula:
    """Quantifier prefix (outermost first) over a CNF matrix.

    ``prefix`` is a tuple of ``(var, quantifier)`` with quantifier in
    ``{"e", "a"}``.  Every variable occurring in the matrix must be bound.
    Reductions may leave ids in ``1..num_vars`` unbound once a variable has
    been eliminated; parsed formulas always bind the full range.
    """

    prefix: tuple[tuple[int, str], ...]
    matrix: CnfMatrix

    def __post_init__(self):
        prefix = tuple((int(v), q) for v, q in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        seen = set()
        for v, q in prefix:
            if q not in (EXISTS, FORALL):
                raise ValueError(f"bad quantifier {q!r}")
            if not 1 <= v <= self.matrix.num_vars:
                raise ValueError(f"prefix variable {v} out of range")
            if v in seen:
                raise ValueError(f"variable {v} quantified twice")
            seen.add(v)
        missing = self.matrix.variables() - seen
        if missing:
            raise ValueError(f"unbound variables in matrix: {sorted(missing)}")

    @classmethod
    def build(cls, prefix: Iterable[tuple[int, str]], clauses: Iterable[Iterable[int]],
              num_vars: int | None = None) -> "QbfFormula":
        prefix = tuple(prefix)
        clauses = tuple(make_clause(c) for c in clauses)
        if num_vars is None:
            ids = [v for v, _ in prefix] + [abs(l) for c in clauses for l in c]
            num_vars = max(ids, default=0)
        return cls(prefix, CnfMatrix(num_vars, clauses))

    @property
    def num_vars(self) -> int:
        return self.matrix.num_vars

    @property
    def clauses(self) -> tuple[tuple[int, ...], ...]:
        return self.matrix.clauses

    def quantifier(self, var: int) -> str:
        for v, q in self.prefix:
            if v == var:
                return q
        raise KeyError(var)

    def is_closed(self) -> bool:
        """True when the prefix binds every id in ``1..num_vars``."""
        return len(self.prefix) == self.num_vars

    def compact(self) -> tuple["QbfFormula", dict[int, int]]:
        """Renumber bound variables 1..k in prefix order."""
        mapping = {v: i for i, (v, _) in enumerate(self.prefix, start=1)}
        clauses = [[(1 if l > 0 else -1) * mapping[abs(l)] for l in c] for c in self.clauses]
        prefix = [(mapping[v], q) for v, q in self.prefix]
        return QbfFormula.build(prefix, clauses, len(mapping)), mapping


@dataclass(frozen=True)
class PairedSatInstance:
    """CNF matrix plus ordered (first, second) variable pairs.

    First elements are valued by Satisfier, second elements by Falsifier.
    """

    matrix: CnfMatrix
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        used = [v for p in pairs for v in p]
        if len(set(used)) != len(used):
            raise ValueError("a variable occurs in more than one pair position")
        if sorted(used) != list(range(1, self.matrix.num_vars + 1)):
            raise ValueError("pairs must cover variables 1..num_vars exactly once")

    @classmethod
    def build(cls, pairs, clauses, num_vars=None) -> "PairedSatInstance":
        pairs = tuple(pairs)
        if num_vars is None:
            num_vars = 2 * len(pairs)
        return cls(CnfMatrix(num_vars, tuple(make_clause(c) for c in clauses)), pairs)

    @property
    def clauses(self):
        return self.matrix.clauses

    def second_vars(self) -> set[int]:
        return {b for _, b in self.pairs}


@dataclass(frozen=True)
class DegreeProfile:
    degrees: dict[int, int]
    max_degree: int
    rank: int
    clause_sizes: tuple[int, ...]

    def is_k_uniform(self, k: int) -> bool:
        return all(s == k for s in self.clause_sizes)

    def is_k_regular(self, k: int) -> bool:
        return all(d == k for d in self.degrees.values())


def degree_profile(matrix: CnfMatrix, variables: Iterable[int] | None = None) -> DegreeProfile:
    """Per-variable clause-occurrence counts, max degree and rank.

    Degrees are reported for ``variables`` (default ``1..num_vars``); a
    clause holding both polarities of a variable counts once for it.
    """
    counts: Counter[int] = Counter()
    for c in matrix.clauses:
        counts.update(clause_vars(c))
    if variables is None:
        variables = range(1, matrix.num_vars + 1)
    degrees = {v: counts.get(v, 0) for v in variables}
    sizes = tuple(len(c) for c in matrix.clauses)
    return DegreeProfile(
        degrees=degrees,
        max_degree=max(counts.values(), default=0),
        rank=max(sizes, default=0),
        clause_sizes=sizes,
    )


def check_class(formula: QbfFormula, max_rank: int, max_degree: int,
                require_uniform: bool = False, require_regular: bool = False
                ) -> tuple[bool, list[str]]:
    """Membership test for r-QBF-d, optionally exact (uniform / regular).

    Returns ``(ok, violations)``; each violation names the clause index or
    variable responsible.
    """
    prof = degree_profile(formula.matrix, sorted(v for v, _ in formula.prefix))
    violations = []
    for j, c in enumerate(formula.clauses):
        if len(c) > max_rank:
            violations.append(f"clause {j} {list(c)} has size {len(c)} > {max_rank}")
        elif require_uniform and len(c) != max_rank:
            violations.append(f"clause {j} {list(c)} has size {len(c)} != {max_rank}")
    for v, d in prof.degrees.items():
        if d > max_degree:
            violations.append(f"variable {v} has degree {d} > {max_degree}")
        elif require_regular and d != max_degree:
            violations.append(f"variable {v} has degree {d} != {max_degree}")
    return not violations, violations


# -- text formats -----------------------------------------------------------

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer token") from None


def _terminated(nums, lineno):
    if not nums or nums[-1] != 0:
        raise ParseError(f"line {lineno}: missing terminating 0")
    body = nums[:-1]
    if 0 in body:
        raise ParseError(f"line {lineno}: 0 inside a clause")
    return body


def _header(lines, kind, arity):
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    toks = line.split()
    if len(toks) != 2 + arity or toks[0] != "p" or toks[1] != kind:
        raise ParseError(f"line {lineno}: expected 'p {kind}' header with {arity} counts")
    nums = _ints(toks[2:], lineno)
    if any(n < 0 for n in nums):
        raise ParseError(f"line {lineno}: negative count in header")
    return nums


def _clause_line(nums, lineno, n):
    body = _terminated(nums, lineno)
    for lit in body:
        if abs(lit) > n:
            raise ParseError(f"line {lineno}: literal {lit} out of range (n={n})")
    return make_clause(body)


def parse_qdimacs(text: str) -> QbfFormula:
    """Parse QDIMACS text; free variables become outermost existentials."""
    lines = _data_lines(text)
    n, m = _header(lines, "cnf", 2)
    blocks: list[tuple[int, str]] = []
    bound: set[int] = set()
    clauses = []
    for lineno, line in lines:
        toks = line.split()
        if toks[0] in (EXISTS, FORALL):
            if clauses:
                raise ParseError(f"line {lineno}: quantifier line after clauses")
            for v in _terminated(_ints(toks[1:], lineno), lineno):
                if not 1 <= v <= n:
                    raise ParseError(f"line {lineno}: quantified variable {v} out of range")
                if v in bound:
                    raise ParseError(f"line {lineno}: variable {v} quantified twice")
                bound.add(v)
                blocks.append((v, toks[0]))
        else:
            clauses.append(_clause_line(_ints(toks, lineno), lineno, n))
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    free = [(v, EXISTS) for v in range(1, n + 1) if v not in bound]
    return QbfFormula(tuple(free + blocks), CnfMatrix(n, tuple(clauses)))


def _clause_text(c) -> str:
    return " ".join(str(l) for l in c) + (" 0" if c else "0")


def emit_qdimacs(formula: QbfFormula) -> str:
    out = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    run_q, run = None, []
    for v, q in formula.prefix:
        if q != run_q and run:
            out.append(f"{run_q} " + " ".join(map(str, run)) + " 0")
            run = []
        run_q = q
        run.append(v)
    if run:
        out.append(f"{run_q} " + " ".join(map(str, run)) + " 0")
    out.extend(_clause_text(c) for c in formula.clauses)
    return "\n".join(out) + "\n"


def parse_psat(text: str) -> PairedSatInstance:
    """Parse ``p psat <n> <m> <k>`` text: k ``d a b 0`` lines, then clauses."""
    lines = _data_lines(text)
    n, m, k = _header(lines, "psat", 3)
    pairs, clauses = [], []
    for lineno, line in lines:
        toks = line.split()
        if toks[0] == "d":
            if clauses:
                raise ParseError(f"line {lineno}: pair line after clauses")
            body = _terminated(_ints(toks[1:], lineno), lineno)
            if len(body) != 2:
                raise ParseError(f"line {lineno}: pair line needs exactly two variables")
            if not all(1 <= v <= n for v in body):
                raise ParseError(f"line {lineno}: pair variable out of range")
            pairs.append(tuple(body))
        else:
            clauses.append(_clause_line(_ints(toks, lineno), lineno, n))
    if len(pairs) != k or len(clauses) != m:
        raise ParseError(f"header declares {k} pairs / {m} clauses, found {len(pairs)} / {len(clauses)}")
    try:
        return PairedSatInstance(CnfMatrix(n, tuple(clauses)), tuple(pairs))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def emit_psat(inst: PairedSatInstance) -> str:
    out = [f"p psat {inst.matrix.num_vars} {len(inst.clauses)} {len(inst.pairs)}"]
    out.extend(f"d {a} {b} 0" for a, b in inst.pairs)
    out.extend(_clause_text(c) for c in inst.clauses)
    return "\n".join(out) + "\n"

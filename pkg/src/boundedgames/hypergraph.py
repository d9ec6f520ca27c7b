"""Hypergraph boards and the ``p pos`` text format."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .formula import ParseError


@dataclass(frozen=True)
class Hypergraph:
    """Vertices ``1..num_vertices``; hyperedges form a multiset (ordered)."""

    num_vertices: int
    edges: tuple[tuple[int, ...], ...] = ()
    labels: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        edges = []
        for j, e in enumerate(self.edges):
            e = tuple(int(v) for v in e)
            if len(set(e)) != len(e):
                raise ValueError(f"hyperedge {j} repeats a vertex")
            for v in e:
                if not 1 <= v <= self.num_vertices:
                    raise ValueError(f"hyperedge {j}: vertex {v} out of range")
            edges.append(tuple(sorted(e)))
        object.__setattr__(self, "edges", tuple(edges))
        labels = tuple(sorted((int(v), str(t)) for v, t in self.labels))
        for v, _ in labels:
            if not 1 <= v <= self.num_vertices:
                raise ValueError(f"label for vertex {v} out of range")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def build(cls, edges: Iterable[Iterable[int]], num_vertices: int | None = None,
              labels=None) -> "Hypergraph":
        edges = [tuple(e) for e in edges]
        if num_vertices is None:
            num_vertices = max((v for e in edges for v in e), default=0)
        return cls(num_vertices, tuple(edges), tuple((labels or {}).items()))

    @property
    def rank(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def degrees(self) -> dict[int, int]:
        cnt = Counter(v for e in self.edges for v in e)
        return {v: cnt.get(v, 0) for v in range(1, self.num_vertices + 1)}

    @property
    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)

    def isolated(self) -> list[int]:
        return [v for v, d in self.degrees().items() if d == 0]

    def label(self, v: int) -> str:
        return dict(self.labels).get(v, str(v))

    def stats(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "hyperedges": len(self.edges),
            "rank": self.rank,
            "max_degree": self.max_degree,
        }


def parse_hypergraph(text: str) -> Hypergraph:
    header = None
    edges, labels = [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "c":
            if len(toks) >= 3 and toks[1] == "label":
                try:
                    labels[int(toks[2])] = " ".join(toks[3:])
                except ValueError:
                    raise ParseError(f"line {lineno}: bad label line") from None
            continue
        if header is None:
            if len(toks) != 4 or toks[:2] != ["p", "pos"]:
                raise ParseError(f"line {lineno}: expected 'p pos <n> <m>' header")
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError(f"line {lineno}: bad header counts") from None
            continue
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token") from None
        if nums[-1] != 0 or 0 in nums[:-1]:
            raise ParseError(f"line {lineno}: hyperedge line must end with a single 0")
        e = nums[:-1]
        if len(set(e)) != len(e):
            raise ParseError(f"line {lineno}: duplicate vertex in hyperedge")
        if any(not 1 <= v <= header[0] for v in e):
            raise ParseError(f"line {lineno}: vertex id out of range (n={header[0]})")
        edges.append(tuple(e))
    if header is None:
        raise ParseError("missing 'p pos' header")
    n, m = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} hyperedges, found {len(edges)}")
    for v in labels:
        if not 1 <= v <= n:
            raise ParseError(f"label for vertex {v} out of range")
    return Hypergraph(n, tuple(edges), tuple(labels.items()))


def emit_hypergraph(h: Hypergraph) -> str:
    out = [f"p pos {h.num_vertices} {len(h.edges)}"]
    out.extend(f"c label {v} {t}" for v, t in h.labels)
    for e in h.edges:
        out.append(" ".join(map(str, e)) + (" 0" if e else "0"))
    return "\n".join(out) + "\n"

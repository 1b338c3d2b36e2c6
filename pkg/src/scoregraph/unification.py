"""Merging same-catalog constraint graphs by per-pair voting.

Every input graph is totally ordered, so it defines a relation for every
element pair through transitivity. Votes are tallied per pair, opposing
less/greater votes cancel into equal votes, and pairs are applied to an
initially empty graph in descending priority (maximum vote count). A tie
between equal and a direction marks the pair disputed; an application that
conflicts with earlier, higher-priority relations marks it contradictory.
The unified graph is acyclic but not guaranteed totally ordered.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .graph import (
    ConstraintGraph,
    Degree,
    Edge,
    Relation,
    TotalOrderError,
)


class UnificationInputError(ValueError):
    """Input graphs are unusable: mismatched nodes or not totally ordered."""


class PairOutcome(Enum):
    PENDING = "pending"
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    DISPUTED = "disputed"
    CONTRADICTORY = "contradictory"


@dataclass(frozen=True)
class VoteTally:
    """Votes for one canonical pair (x < y lexicographically).

    ``less`` counts graphs judging x less significant than y.
    """

    x: str
    y: str
    less: int = 0
    equal: int = 0
    greater: int = 0
    outcome: PairOutcome = PairOutcome.PENDING

    @property
    def priority(self) -> int:
        return max(self.less, self.equal, self.greater)

    @property
    def total(self) -> int:
        return self.less + self.equal + self.greater

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "less": self.less,
            "equal": self.equal,
            "greater": self.greater,
            "priority": self.priority,
            "outcome": self.outcome.value,
        }


@dataclass(frozen=True)
class UnificationReport:
    disputed: int
    contradictory: int
    applied: int
    pairs: tuple[VoteTally, ...]

    def to_json_dict(self) -> dict:
        return {
            "disputed": self.disputed,
            "contradictory": self.contradictory,
            "applied": self.applied,
            "pairs": [t.to_json_dict() for t in self.pairs],
        }


def enumerate_pairs(elements: int | Sequence[str]) -> list[tuple]:
    """Canonical unordered pairs: (n^2 - n) / 2 of them for n elements."""
    if isinstance(elements, int):
        n = elements
        if n < 2:
            raise ValueError("need at least 2 elements to form pairs")
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    ids = sorted(elements)
    if len(ids) < 2:
        raise ValueError("need at least 2 elements to form pairs")
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate element ids")
    return [(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]


def _check_inputs(graphs: Sequence[ConstraintGraph]) -> list[dict[str, int]]:
    """Validate node sets and total ordering; return per-graph rank maps."""
    if not graphs:
        raise UnificationInputError("need at least one input graph")
    nodes = graphs[0].nodes
    ranks: list[dict[str, int]] = []
    for i, g in enumerate(graphs):
        if g.nodes != nodes:
            raise UnificationInputError(f"graph {i} has a different node set")
        if g.catalog_ref != graphs[0].catalog_ref:
            raise UnificationInputError(f"graph {i} belongs to a different catalog")
        try:
            sets = g.ordered_sets()
        except TotalOrderError as exc:
            raise UnificationInputError(f"graph {i} is not totally ordered") from exc
        rank: dict[str, int] = {}
        for pos, es in enumerate(sets):
            for m in es.members:
                rank[m] = pos
        ranks.append(rank)
    return ranks


def tally_votes(graphs: Sequence[ConstraintGraph]) -> list[VoteTally]:
    """One tally per canonical pair; each graph casts exactly one vote."""
    ranks = _check_inputs(graphs)
    tallies: list[VoteTally] = []
    for x, y in enumerate_pairs(graphs[0].nodes):
        less = equal = greater = 0
        for rank in ranks:
            rx, ry = rank[x], rank[y]
            if rx < ry:
                less += 1
            elif rx == ry:
                equal += 1
            else:
                greater += 1
        tallies.append(VoteTally(x, y, less, equal, greater))
    return tallies


def adjust_votes(tally: VoteTally) -> VoteTally:
    """Consolidate each opposing less/greater vote pair into one equal vote."""
    m = min(tally.less, tally.greater)
    return replace(
        tally, less=tally.less - m, greater=tally.greater - m, equal=tally.equal + m
    )


class _UnifiedBuilder:
    """Union-find over equivalency sets plus a DAG of applied directions."""

    def __init__(self, nodes: Sequence[str]) -> None:
        self._parent: dict[str, str] = {n: n for n in nodes}
        self._out: dict[str, set[str]] = defaultdict(set)
        self._in: dict[str, set[str]] = defaultdict(set)

    def find(self, x: str) -> str:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def _reaches(self, start: str, goal: str) -> bool:
        stack = [start]
        seen = {start}
        while stack:
            u = stack.pop()
            for v in self._out[u]:
                if v == goal:
                    return True
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    def relation(self, x: str, y: str) -> Relation:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return Relation.EQUAL
        if self._reaches(ry, rx):
            return Relation.GREATER
        if self._reaches(rx, ry):
            return Relation.LESS
        return Relation.UNORDERED

    def add_greater(self, x: str, y: str) -> None:
        """Record x more significant than y (edge rep(y) -> rep(x))."""
        rx, ry = self.find(x), self.find(y)
        self._out[ry].add(rx)
        self._in[rx].add(ry)

    def merge(self, x: str, y: str) -> None:
        """Merge the sets of x and y; the smaller id becomes representative."""
        rx, ry = self.find(x), self.find(y)
        keep, drop = (rx, ry) if rx < ry else (ry, rx)
        self._parent[drop] = keep
        for v in self._out.pop(drop, set()):
            self._in[v].discard(drop)
            if v != keep:
                self._out[keep].add(v)
                self._in[v].add(keep)
        for u in self._in.pop(drop, set()):
            self._out[u].discard(drop)
            if u != keep:
                self._out[u].add(keep)
                self._in[keep].add(u)

    def sets(self) -> dict[str, list[str]]:
        groups: dict[str, list[str]] = defaultdict(list)
        for n in self._parent:
            groups[self.find(n)].append(n)
        return groups

    def edges(self) -> list[tuple[str, str]]:
        return sorted((u, v) for u, outs in self._out.items() for v in outs)


def unify(
    graphs: Sequence[ConstraintGraph], provenance: str = ""
) -> tuple[ConstraintGraph, UnificationReport]:
    """Merge graphs by priority-ordered voting.

    Every pair ends as applied (its winning relation), disputed, or
    contradictory; the three counts always sum to (n^2 - n) / 2. Applied
    directions materialize as degree-1 edges only when they actually extend
    the order; call assign_unified_degrees afterwards to restore degree-2
    labels from the inputs.
    """
    tallies = [adjust_votes(t) for t in tally_votes(graphs)]
    tallies.sort(key=lambda t: (-t.priority, t.x, t.y))
    builder = _UnifiedBuilder(graphs[0].nodes)

    resolved: list[VoteTally] = []
    disputed = contradictory = applied = 0
    for t in tallies:
        votes = {
            PairOutcome.LESS: t.less,
            PairOutcome.EQUAL: t.equal,
            PairOutcome.GREATER: t.greater,
        }
        best = max(votes.values())
        winners = [rel for rel, v in votes.items() if v == best]
        if len(winners) > 1:
            outcome = PairOutcome.DISPUTED
            disputed += 1
        else:
            winner = winners[0]
            current = builder.relation(t.x, t.y)
            if winner is PairOutcome.EQUAL:
                if current is Relation.EQUAL:
                    outcome = winner
                elif current is Relation.UNORDERED:
                    builder.merge(t.x, t.y)
                    outcome = winner
                else:
                    outcome = PairOutcome.CONTRADICTORY
            else:
                wanted = Relation.GREATER if winner is PairOutcome.GREATER else Relation.LESS
                if current is wanted:
                    outcome = winner
                elif current is Relation.UNORDERED:
                    if winner is PairOutcome.GREATER:
                        builder.add_greater(t.x, t.y)
                    else:
                        builder.add_greater(t.y, t.x)
                    outcome = winner
                else:
                    outcome = PairOutcome.CONTRADICTORY
            if outcome is PairOutcome.CONTRADICTORY:
                contradictory += 1
            else:
                applied += 1
        resolved.append(replace(t, outcome=outcome))

    edges: list[Edge] = [Edge(u, v, Degree.GREATER) for u, v in builder.edges()]
    for rep, members in sorted(builder.sets().items()):
        for m in members:
            if m != rep:
                edges.append(Edge(rep, m, Degree.EQUAL))
    unified = ConstraintGraph(
        graphs[0].catalog_ref, graphs[0].nodes, edges, provenance=provenance
    )
    report = UnificationReport(disputed, contradictory, applied, tuple(resolved))
    return unified, report


def assign_unified_degrees(
    graphs: Sequence[ConstraintGraph], unified: ConstraintGraph
) -> ConstraintGraph:
    """Re-label unified edges with degree 2 where the inputs support it.

    For an edge u -> v, the voters are the input graphs that judge v more
    significant than u; the edge is degree 2 when at least half of them
    witness the pair through a path containing a degree-2 edge.
    """
    edges: list[Edge] = []
    for e in unified.edges:
        if e.degree is Degree.EQUAL:
            edges.append(e)
            continue
        voters = [g for g in graphs if g.relation_of(e.dst, e.src) is Relation.GREATER]
        strong = sum(1 for g in voters if g.has_degree2_witness(e.src, e.dst))
        degree = Degree.MUCH_GREATER if voters and 2 * strong >= len(voters) else Degree.GREATER
        edges.append(Edge(e.src, e.dst, degree))
    return ConstraintGraph(
        unified.catalog_ref, unified.nodes, edges, provenance=unified.provenance
    )


def unify_with_degrees(
    graphs: Sequence[ConstraintGraph], provenance: str = ""
) -> tuple[ConstraintGraph, UnificationReport]:
    """unify() followed by degree reattachment from the input graphs."""
    unified, report = unify(graphs, provenance=provenance)
    return assign_unified_degrees(graphs, unified), report

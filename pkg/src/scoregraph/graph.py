"""Degree-labeled constraint DAGs over equivalency sets.

Nodes are catalog elements. A degree-0 edge attaches a member to its
equivalency-set representative (star shape, one representative per set).
Degree-1 and degree-2 edges encode "greater" / "much greater" judgments and
always point from the less significant endpoint to the more significant one,
so any score assignment must satisfy score(dst) >= score(src) + dist(degree).
Relation queries between elements are answered on the representative level
using edge transitivity.
"""

from __future__ import annotations

import heapq
import json
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from typing import Iterable, Mapping

FORMAT_VERSION = 1


class GraphError(ValueError):
    """Base error for invalid graph structure or queries."""


class CatalogMismatchError(GraphError):
    """An element id is not part of the graph's node set."""


class CycleError(GraphError):
    """The degree>=1 edges would form a directed cycle."""


class TotalOrderError(GraphError):
    """The operation requires a totally ordered graph."""


class SchemaError(GraphError):
    """A serialized graph does not match the expected schema or version."""


class Degree(IntEnum):
    """Strength of a judgment: 0 equal, 1 greater, 2 much greater."""

    EQUAL = 0
    GREATER = 1
    MUCH_GREATER = 2


class Relation(Enum):
    """Result of comparing two elements through the graph."""

    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNORDERED = "unordered"

    def flipped(self) -> "Relation":
        if self is Relation.LESS:
            return Relation.GREATER
        if self is Relation.GREATER:
            return Relation.LESS
        return self


@dataclass(frozen=True, order=True)
class Edge:
    src: str
    dst: str
    degree: Degree


@dataclass(frozen=True)
class EquivalencySet:
    """One representative plus all elements judged equal to it."""

    representative: str
    members: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class LongestPath:
    path: tuple[str, ...]
    totally_ordered: bool


class ConstraintGraph:
    """Immutable validated constraint graph.

    Construction canonicalizes node and edge order, checks the star shape of
    equivalency sets, and rejects degree>=1 cycles, duplicate edges, and
    degree>=1 edges inside one equivalency set.
    """

    __slots__ = (
        "catalog_ref",
        "provenance",
        "_nodes",
        "_edges",
        "_rep",
        "_members",
        "_adj",
        "_reach",
    )

    def __init__(
        self,
        catalog_ref: str,
        nodes: Iterable[str],
        edges: Iterable[Edge | tuple],
        provenance: str = "",
    ) -> None:
        self.catalog_ref = catalog_ref
        self.provenance = provenance

        node_list = sorted(set(nodes))
        for n in node_list:
            if not isinstance(n, str) or not n:
                raise GraphError(f"element ids must be non-empty strings, got {n!r}")
        self._nodes: tuple[str, ...] = tuple(node_list)
        node_set = set(node_list)

        norm: list[Edge] = []
        for e in edges:
            if not isinstance(e, Edge):
                src, dst, deg = e
                e = Edge(src, dst, Degree(deg))
            elif not isinstance(e.degree, Degree):
                e = Edge(e.src, e.dst, Degree(e.degree))
            norm.append(e)

        seen_pairs: set[tuple[str, str]] = set()
        for e in norm:
            if e.src not in node_set or e.dst not in node_set:
                raise CatalogMismatchError(f"edge {e.src}->{e.dst} references unknown element")
            if e.src == e.dst:
                raise GraphError(f"self edge on {e.src}")
            if (e.src, e.dst) in seen_pairs:
                raise GraphError(f"duplicate edge {e.src}->{e.dst}")
            seen_pairs.add((e.src, e.dst))
        self._edges: tuple[Edge, ...] = tuple(sorted(norm, key=lambda e: (e.src, e.dst)))

        # Equivalency sets from degree-0 edges: representative -> members.
        rep: dict[str, str] = {}
        for e in self._edges:
            if e.degree is not Degree.EQUAL:
                continue
            if e.dst in rep:
                raise GraphError(f"{e.dst} has more than one degree-0 parent")
            rep[e.dst] = e.src
        for member, parent in rep.items():
            if parent in rep:
                raise GraphError(f"degree-0 edges must form a star, {parent} is itself a member")
        self._rep: dict[str, str] = {n: rep.get(n, n) for n in self._nodes}

        members: dict[str, list[str]] = defaultdict(list)
        for n in self._nodes:
            members[self._rep[n]].append(n)
        self._members: dict[str, tuple[str, ...]] = {
            r: tuple(sorted(ms)) for r, ms in members.items()
        }

        # Lifted degree>=1 adjacency between representatives.
        adj: dict[str, list[tuple[str, Degree]]] = defaultdict(list)
        lifted_seen: set[tuple[str, str, Degree]] = set()
        for e in self._edges:
            if e.degree is Degree.EQUAL:
                continue
            ru, rv = self._rep[e.src], self._rep[e.dst]
            if ru == rv:
                raise GraphError(
                    f"degree>=1 edge {e.src}->{e.dst} connects members of one equivalency set"
                )
            key = (ru, rv, e.degree)
            if key not in lifted_seen:
                lifted_seen.add(key)
                adj[ru].append((rv, e.degree))
        self._adj: dict[str, tuple[tuple[str, Degree], ...]] = {
            r: tuple(sorted(adj.get(r, ()))) for r in self._members
        }
        self._reach: dict[str, frozenset[str]] | None = None

        self._check_acyclic()

    # -- structure ---------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __len__(self) -> int:
        return len(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstraintGraph):
            return NotImplemented
        return self.canonical_bytes() == other.canonical_bytes()

    def __hash__(self) -> int:
        return hash(self.canonical_bytes())

    def __repr__(self) -> str:
        return (
            f"ConstraintGraph(catalog_ref={self.catalog_ref!r}, "
            f"nodes={len(self._nodes)}, edges={len(self._edges)})"
        )

    def representative(self, x: str) -> str:
        try:
            return self._rep[x]
        except KeyError:
            raise CatalogMismatchError(f"unknown element {x!r}") from None

    def members_of(self, x: str) -> tuple[str, ...]:
        return self._members[self.representative(x)]

    def representatives(self) -> tuple[str, ...]:
        return tuple(sorted(self._members))

    def equivalency_sets(self) -> tuple[EquivalencySet, ...]:
        return tuple(
            EquivalencySet(r, self._members[r]) for r in self.representatives()
        )

    def rep_edges(self) -> tuple[Edge, ...]:
        """Degree>=1 edges lifted to representatives, one edge per pair.

        Parallel lifted edges collapse to the highest degree, which carries
        the binding separation constraint.
        """
        best: dict[tuple[str, str], Degree] = {}
        for u, nbrs in self._adj.items():
            for v, d in nbrs:
                if best.get((u, v), Degree.EQUAL) < d:
                    best[(u, v)] = d
        return tuple(Edge(u, v, d) for (u, v), d in sorted(best.items()))

    # -- relations ---------------------------------------------------------

    def _reach_sets(self) -> dict[str, frozenset[str]]:
        if self._reach is None:
            order = self._topo_order()
            reach: dict[str, frozenset[str]] = {}
            for u in reversed(order):
                acc: set[str] = set()
                for v, _ in self._adj[u]:
                    acc.add(v)
                    acc |= reach[v]
                reach[u] = frozenset(acc)
            self._reach = reach
        return self._reach

    def relation_of(self, x: str, y: str) -> Relation:
        """Compare x against y: GREATER means x is more significant."""
        rx, ry = self.representative(x), self.representative(y)
        if rx == ry:
            return Relation.EQUAL
        reach = self._reach_sets()
        if rx in reach[ry]:
            return Relation.GREATER
        if ry in reach[rx]:
            return Relation.LESS
        return Relation.UNORDERED

    def has_degree2_witness(self, lo: str, hi: str) -> bool:
        """True if some path rep(lo) -> rep(hi) contains a degree-2 edge."""
        start, goal = self.representative(lo), self.representative(hi)
        if start == goal:
            return False
        stack: list[tuple[str, bool]] = [(start, False)]
        seen: set[tuple[str, bool]] = set()
        while stack:
            u, got2 = stack.pop()
            for v, d in self._adj[u]:
                state = (v, got2 or d is Degree.MUCH_GREATER)
                if v == goal and state[1]:
                    return True
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
        return False

    # -- internals ---------------------------------------------------------

    def _topo_order(self) -> list[str]:
        indeg: dict[str, int] = {r: 0 for r in self._members}
        for u, nbrs in self._adj.items():
            for v, _ in nbrs:
                indeg[v] += 1
        heap = [r for r, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order: list[str] = []
        while heap:
            u = heapq.heappop(heap)
            order.append(u)
            for v, _ in self._adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(heap, v)
        return order

    def _check_acyclic(self) -> None:
        if len(self._topo_order()) != len(self._members):
            raise CycleError("degree>=1 edges form a cycle between equivalency sets")

    def topological_representatives(self) -> tuple[str, ...]:
        """Deterministic topological order of representatives."""
        return tuple(self._topo_order())

    # -- ordering ----------------------------------------------------------

    def ordered_sets(self) -> tuple[EquivalencySet, ...]:
        """Equivalency sets in ascending significance; requires total order."""
        lp = longest_representative_path(self)
        if not lp.totally_ordered:
            raise TotalOrderError("graph does not totally order its equivalency sets")
        return tuple(EquivalencySet(r, self._members[r]) for r in lp.path)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "formatVersion": FORMAT_VERSION,
            "catalogRef": self.catalog_ref,
            "nodes": list(self._nodes),
            "edges": [
                {"from": e.src, "to": e.dst, "degree": int(e.degree)} for e in self._edges
            ],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ConstraintGraph":
        if not isinstance(data, Mapping):
            raise SchemaError("graph document must be a JSON object")
        version = data.get("formatVersion")
        if version != FORMAT_VERSION:
            raise SchemaError(f"unsupported graph formatVersion {version!r}")
        try:
            edges = [
                Edge(e["from"], e["to"], Degree(e["degree"])) for e in data["edges"]
            ]
            return cls(
                data["catalogRef"],
                data["nodes"],
                edges,
                provenance=data.get("provenance", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise SchemaError(f"malformed graph document: {exc}") from exc

    def canonical_bytes(self) -> bytes:
        return json.dumps(
            self.to_json_dict(), sort_keys=True, separators=(",", ":")
        ).encode("utf-8")

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.canonical_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "ConstraintGraph":
        try:
            data = json.loads(Path(path).read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not a JSON document: {exc}") from exc
        return cls.from_json_dict(data)


def longest_representative_path(g: ConstraintGraph) -> LongestPath:
    """Maximum-length degree>=1 path over representatives.

    Among equally long paths the lexicographically smallest id sequence is
    returned, so identical graphs always yield identical paths. The graph is
    totally ordered when the path visits every representative.
    """
    reps = g.representatives()
    if not reps:
        return LongestPath((), True)
    adj = {r: sorted({v for v, _ in g._adj[r]}) for r in reps}
    order = g.topological_representatives()
    length: dict[str, int] = {}
    for u in reversed(order):
        length[u] = 1 + max((length[v] for v in adj[u]), default=0)
    best = max(length.values())
    cur = min(r for r in reps if length[r] == best)
    path = [cur]
    remaining = best - 1
    while remaining:
        cur = min(v for v in adj[cur] if length[v] == remaining)
        path.append(cur)
        remaining -= 1
    return LongestPath(tuple(path), len(path) == len(reps))


def reduce_redundant_edges(g: ConstraintGraph) -> ConstraintGraph:
    """Drop degree>=1 edges whose constraint is implied by a parallel path.

    A degree-1 edge is redundant when another degree>=1 path connects the
    same representatives. A degree-2 edge is redundant only when such a path
    itself contains a degree-2 edge; two degree-1 hops are kept alongside a
    degree-2 shortcut because they do not dominate it for every distance
    mapping. Relations are unchanged and implied separations never shrink.
    """
    deg0 = [e for e in g.edges if e.degree is Degree.EQUAL]
    strict = [e for e in g.edges if e.degree is not Degree.EQUAL]
    kept = list(strict)

    def witness(exclude: Edge) -> bool:
        start = g.representative(exclude.src)
        goal = g.representative(exclude.dst)
        adj: dict[str, list[tuple[str, Degree]]] = defaultdict(list)
        for e in kept:
            if e is exclude:
                continue
            adj[g.representative(e.src)].append((g.representative(e.dst), e.degree))
        need2 = exclude.degree is Degree.MUCH_GREATER
        stack: list[tuple[str, bool]] = [(start, False)]
        seen: set[tuple[str, bool]] = set()
        while stack:
            u, got2 = stack.pop()
            for v, d in adj.get(u, ()):
                state = (v, got2 or d is Degree.MUCH_GREATER)
                if v == goal and (state[1] or not need2):
                    return True
                if state not in seen:
                    seen.add(state)
                    stack.append(state)
        return False

    for e in strict:
        if witness(e):
            kept.remove(e)

    return ConstraintGraph(g.catalog_ref, g.nodes, deg0 + kept, provenance=g.provenance)

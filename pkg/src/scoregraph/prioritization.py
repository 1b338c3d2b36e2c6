"""Ranked equivalency sets from a constraint graph.

A totally ordered graph ranks trivially: walk the longest representative
path. Unified graphs may leave some sets off that path; those are merged into
an on-path set by the equidistant rule. An off-path ancestor of the path is
placed at the on-path set whose distance from the last path node matches its
own; an off-path descendant symmetrically from the first path node. Distance
is the longest degree>=1 path length in edges. Every such placement is
surfaced, never hidden.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .graph import ConstraintGraph, longest_representative_path


@dataclass(frozen=True)
class RankedSet:
    """One output rank: the on-path set plus any heuristically merged elements."""

    members: tuple[str, ...]
    placed_by_heuristic: tuple[str, ...] = ()

    @property
    def size_label(self) -> str:
        label = str(len(self.members))
        if self.placed_by_heuristic:
            label += f"+{len(self.placed_by_heuristic)}"
        return label


def _longest_dist_from(adj: dict[str, list[str]], order: list[str], start: str) -> dict[str, int]:
    """Longest-path edge counts from start to every reachable node."""
    dist = {start: 0}
    for u in order:
        if u not in dist:
            continue
        for v in adj[u]:
            if dist.get(v, -1) < dist[u] + 1:
                dist[v] = dist[u] + 1
    return dist


def prioritize(g: ConstraintGraph) -> list[RankedSet]:
    """Equivalency sets in decreasing significance.

    Off-path representatives are merged into an on-path set by the
    equidistant rule and reported in placed_by_heuristic together with their
    members. If the equidistant index ever falls outside the path it is
    clamped to the nearest end; a representative unrelated to the whole path
    is placed at the least significant end.
    """
    lp = longest_representative_path(g)
    path = list(lp.path)
    if not path:
        return []
    index_of = {rep: i for i, rep in enumerate(path)}
    placements: dict[str, list[str]] = defaultdict(list)

    if not lp.totally_ordered:
        reps = g.representatives()
        adj: dict[str, list[str]] = {r: [] for r in reps}
        radj: dict[str, list[str]] = {r: [] for r in reps}
        for e in g.rep_edges():
            adj[e.src].append(e.dst)
            radj[e.dst].append(e.src)
        order = list(g.topological_representatives())
        last, first = path[-1], path[0]
        # Longest distances measured against the path ends, in both directions.
        up_to_last = _longest_dist_from(radj, list(reversed(order)), last)
        down_from_first = _longest_dist_from(adj, order, first)
        m = len(path) - 1
        for rep in reps:
            if rep in index_of:
                continue
            if rep in up_to_last:  # ancestor of the path's last node
                idx = m - up_to_last[rep]
            elif rep in down_from_first:  # descendant of the path's first node
                idx = down_from_first[rep]
            else:
                idx = 0
            idx = min(max(idx, 0), m)
            placements[path[idx]].extend(g.members_of(rep))

    ranked = [
        RankedSet(
            members=g.members_of(rep),
            placed_by_heuristic=tuple(sorted(placements.get(rep, ()))),
        )
        for rep in reversed(path)
    ]
    return ranked


def format_ranked_sets(ranked: list[RankedSet]) -> str:
    """Set sizes in rank order, heuristic additions marked "+x"."""
    return "[" + ", ".join(rs.size_label for rs in ranked) + "]"


def ranked_sets_json(ranked: list[RankedSet]) -> dict:
    return {
        "sets": [
            {
                "members": list(rs.members),
                "placedByHeuristic": list(rs.placed_by_heuristic),
                "label": rs.size_label,
            }
            for rs in ranked
        ],
        "rendering": format_ranked_sets(ranked),
    }

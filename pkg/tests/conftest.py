"""Shared builders and independent oracles used across the test suite.

The oracles here deliberately avoid the library's own graph machinery:
representative maps are rebuilt from raw edges, reachability by plain DFS,
and unification by a full consistency recheck per pair, so they can serve as
ground truth for the implementations under test.
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Mapping, Sequence

from scoregraph.graph import ConstraintGraph, Degree, Edge


def elements(n: int, prefix: str = "e") -> list[str]:
    return [f"{prefix}{i:03d}" for i in range(n)]


def weak_order_graph(
    sets: Sequence[Sequence[str]],
    degrees: Sequence[Degree] | None = None,
    catalog_ref: str = "cat",
    provenance: str = "",
) -> ConstraintGraph:
    """Totally ordered graph: sets ascending significance, first member is rep."""
    nodes: list[str] = []
    edges: list[Edge] = []
    reps = [s[0] for s in sets]
    for s in sets:
        nodes.extend(s)
        for m in s[1:]:
            edges.append(Edge(s[0], m, Degree.EQUAL))
    if degrees is None:
        degrees = [Degree.GREATER] * (len(reps) - 1)
    for i in range(len(reps) - 1):
        edges.append(Edge(reps[i], reps[i + 1], degrees[i]))
    return ConstraintGraph(catalog_ref, nodes, edges, provenance=provenance)


def random_ranks(rng: random.Random, ids: Sequence[str], tie_prob: float) -> dict[str, int]:
    """Hidden weak order: a shuffle where each element may tie its predecessor."""
    order = list(ids)
    rng.shuffle(order)
    ranks: dict[str, int] = {}
    rank = 0
    for i, e in enumerate(order):
        if i > 0 and rng.random() >= tie_prob:
            rank += 1
        ranks[e] = rank
    return ranks


def groups_of(ranks: Mapping[str, int]) -> list[frozenset[str]]:
    """Equivalency sets of a weak order, ascending significance."""
    by_rank: dict[int, set[str]] = defaultdict(set)
    for e, r in ranks.items():
        by_rank[r].add(e)
    return [frozenset(by_rank[r]) for r in sorted(by_rank)]


def graph_from_ranks(
    ranks: Mapping[str, int],
    rng: random.Random | None = None,
    deg2_prob: float = 0.0,
    catalog_ref: str = "cat",
) -> ConstraintGraph:
    """Chain-shaped totally ordered graph straight from a weak order."""
    sets = [sorted(g) for g in groups_of(ranks)]
    degrees = None
    if rng is not None and deg2_prob > 0:
        degrees = [
            Degree.MUCH_GREATER if rng.random() < deg2_prob else Degree.GREATER
            for _ in range(len(sets) - 1)
        ]
    return weak_order_graph(sets, degrees, catalog_ref=catalog_ref)


def random_dag_graph(
    rng: random.Random,
    n_reps: int,
    edge_prob: float = 0.35,
    deg2_prob: float = 0.3,
    max_members: int = 2,
    catalog_ref: str = "cat",
) -> ConstraintGraph:
    """Random DAG over representatives plus random equivalency members."""
    reps = [f"r{i:02d}" for i in range(n_reps)]
    order = reps[:]
    rng.shuffle(order)
    edges: list[Edge] = []
    for i in range(n_reps):
        for j in range(i + 1, n_reps):
            if rng.random() < edge_prob:
                deg = Degree.MUCH_GREATER if rng.random() < deg2_prob else Degree.GREATER
                edges.append(Edge(order[i], order[j], deg))
    nodes = list(reps)
    for r in reps:
        for k in range(rng.randint(0, max_members)):
            member = f"{r}m{k}"
            nodes.append(member)
            edges.append(Edge(r, member, Degree.EQUAL))
    return ConstraintGraph(catalog_ref, nodes, edges)


def random_feasible_instance(rng: random.Random):
    """(graph, config) with grid-aligned, guaranteed-feasible distances."""
    from scoregraph.scoring import ScoringConfig, d2_limit, path_frontier

    g = random_dag_graph(rng, rng.randint(2, 10), edge_prob=0.4, deg2_prob=0.35)
    frontier = path_frontier(g)
    worst = max((a + b for a, b in frontier), default=0)
    if worst == 0:
        d1 = round(rng.uniform(0.1, 2.0), 1)
    else:
        cap = 10.0 / worst
        if cap < 0.1:
            return None
        d1 = round(rng.uniform(0.1, min(2.0, cap)), 1)
        d1 = max(0.1, min(d1, int(cap * 10) / 10))
    lim = d2_limit(g, 0, 10, d1)
    if lim is None or lim < d1:
        return None
    d2 = round(rng.uniform(d1, min(lim, 4.0)), 1)
    d2 = max(d1, min(d2, int(lim * 10) / 10))
    return g, ScoringConfig(0, 10, d1, d2, decimals=1)


# -- independent graph oracles -------------------------------------------------


def naive_rep_map(g: ConstraintGraph) -> dict[str, str]:
    rep = {n: n for n in g.nodes}
    for e in g.edges:
        if e.degree is Degree.EQUAL:
            rep[e.dst] = e.src
    return rep


def naive_strict_adjacency(g: ConstraintGraph) -> dict[str, list[tuple[str, Degree]]]:
    rep = naive_rep_map(g)
    adj: dict[str, list[tuple[str, Degree]]] = defaultdict(list)
    for e in g.edges:
        if e.degree is not Degree.EQUAL:
            adj[rep[e.src]].append((rep[e.dst], e.degree))
    return adj


def naive_separation(
    g: ConstraintGraph, x: str, y: str, dist: Mapping[Degree, float]
) -> float | None:
    """Max over all rep(x)->rep(y) paths of summed distances, by enumeration."""
    rep = naive_rep_map(g)
    adj = naive_strict_adjacency(g)
    goal = rep[y]
    best: list[float | None] = [None]

    def dfs(u: str, acc: float) -> None:
        if u == goal and acc > 0:
            if best[0] is None or acc > best[0]:
                best[0] = acc
            return
        for v, d in adj.get(u, ()):
            dfs(v, acc + dist[d])

    dfs(rep[x], 0.0)
    return best[0]


def naive_relation(g: ConstraintGraph, x: str, y: str) -> str:
    rep = naive_rep_map(g)
    if rep[x] == rep[y]:
        return "equal"
    one = {Degree.GREATER: 1.0, Degree.MUCH_GREATER: 1.0}
    if naive_separation(g, y, x, one) is not None:
        return "greater"
    if naive_separation(g, x, y, one) is not None:
        return "less"
    return "unordered"


# -- independent unification oracle ---------------------------------------------


def _unique_chain_order(g: ConstraintGraph) -> list[str]:
    """Total set order by repeatedly peeling the unique zero-indegree rep."""
    adj = naive_strict_adjacency(g)
    reps = sorted(set(naive_rep_map(g).values()))
    indeg = {r: 0 for r in reps}
    for u, outs in adj.items():
        for v, _ in outs:
            indeg[v] += 1
    out: list[str] = []
    remaining = set(reps)
    while remaining:
        zero = [r for r in remaining if indeg[r] == 0]
        assert len(zero) == 1, "input graph is not totally ordered"
        u = zero[0]
        out.append(u)
        remaining.discard(u)
        for v, _ in adj.get(u, ()):
            indeg[v] -= 1
    return out


def brute_force_unify_relations(graphs: Sequence[ConstraintGraph]) -> dict[tuple[str, str], str]:
    """Reference voting unification: full consistency recheck per application.

    Returns the relation ('less'/'equal'/'greater'/'unordered') for every
    canonical pair of the final merged order.
    """
    nodes = sorted(graphs[0].nodes)
    ranks: list[dict[str, int]] = []
    for g in graphs:
        rep = naive_rep_map(g)
        pos = {r: i for i, r in enumerate(_unique_chain_order(g))}
        ranks.append({n: pos[rep[n]] for n in nodes})

    pairs = [(nodes[i], nodes[j]) for i in range(len(nodes)) for j in range(i + 1, len(nodes))]
    tallies = []
    for x, y in pairs:
        less = sum(1 for r in ranks if r[x] < r[y])
        equal = sum(1 for r in ranks if r[x] == r[y])
        greater = sum(1 for r in ranks if r[x] > r[y])
        m = min(less, greater)
        less, greater, equal = less - m, greater - m, equal + m
        tallies.append((x, y, less, equal, greater))
    tallies.sort(key=lambda t: (-max(t[2], t[3], t[4]), t[0], t[1]))

    applied: list[tuple[str, str, str]] = []  # (x, y, rel)

    def consistent(candidate: list[tuple[str, str, str]]) -> bool:
        parent = {n: n for n in nodes}

        def find(a: str) -> str:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x, y, rel in candidate:
            if rel == "equal":
                parent[find(x)] = find(y)
        adj: dict[str, set[str]] = defaultdict(set)
        for x, y, rel in candidate:
            rx, ry = find(x), find(y)
            if rel == "equal":
                continue
            if rx == ry:
                return False
            if rel == "greater":
                adj[ry].add(rx)
            else:
                adj[rx].add(ry)
        # cycle check by DFS coloring
        color: dict[str, int] = {}

        def has_cycle(u: str) -> bool:
            color[u] = 1
            for v in adj.get(u, ()):
                c = color.get(v, 0)
                if c == 1 or (c == 0 and has_cycle(v)):
                    return True
            color[u] = 2
            return False

        return not any(color.get(u, 0) == 0 and has_cycle(u) for u in list(adj))

    for x, y, less, equal, greater in tallies:
        votes = {"less": less, "equal": equal, "greater": greater}
        best = max(votes.values())
        winners = [k for k, v in votes.items() if v == best]
        if len(winners) > 1:
            continue
        candidate = applied + [(x, y, winners[0])]
        if consistent(candidate):
            applied = candidate

    # final relation matrix from the applied constraints
    parent = {n: n for n in nodes}

    def find(a: str) -> str:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, y, rel in applied:
        if rel == "equal":
            parent[find(x)] = find(y)
    adj: dict[str, set[str]] = defaultdict(set)
    for x, y, rel in applied:
        if rel == "equal":
            continue
        if rel == "greater":
            adj[find(y)].add(find(x))
        else:
            adj[find(x)].add(find(y))

    def reaches(a: str, b: str) -> bool:
        stack, seen = [a], {a}
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v == b:
                    return True
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    out: dict[tuple[str, str], str] = {}
    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx == ry:
            out[(x, y)] = "equal"
        elif reaches(ry, rx):
            out[(x, y)] = "greater"
        elif reaches(rx, ry):
            out[(x, y)] = "less"
        else:
            out[(x, y)] = "unordered"
    return out

"""Consistency measurements between totally ordered constraint graphs.

Two graphs over the same elements are compared pairwise (how many element
pairs they relate differently, and how many point in opposite directions) and
as orderings. For the ordering distance each graph's set order is expanded to
a full element order, arranging members inside a tied set to match the other
graph as closely as possible; both the adjacent-swap (Kendall) distance and
the Spearman footrule are reported, since either may be the figure a reader
expects. Random-permutation baselines put the numbers in context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import ConstraintGraph


class MetricsInputError(ValueError):
    """Graphs cannot be compared: node sets differ or order is partial."""


@dataclass(frozen=True)
class PairwiseInconsistency:
    total: int
    differing: int
    opposing: int


@dataclass(frozen=True)
class OrderingDistance:
    adjacent_swaps: int
    footrule: int


@dataclass(frozen=True)
class RandomBaseline:
    mean_adjacent_swaps: float
    mean_footrule: float


def _set_ranks(g: ConstraintGraph) -> dict[str, int]:
    try:
        sets = g.ordered_sets()
    except Exception as exc:
        raise MetricsInputError(str(exc)) from exc
    return {m: i for i, es in enumerate(sets) for m in es.members}


def _check_same_nodes(g1: ConstraintGraph, g2: ConstraintGraph) -> None:
    if g1.nodes != g2.nodes:
        raise MetricsInputError("graphs must share an identical node set")


def pairwise_inconsistency(g1: ConstraintGraph, g2: ConstraintGraph) -> PairwiseInconsistency:
    """Count element pairs the two graphs relate differently."""
    _check_same_nodes(g1, g2)
    r1, r2 = _set_ranks(g1), _set_ranks(g2)
    nodes = g1.nodes
    total = differing = opposing = 0
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            total += 1
            a = _cmp(r1[nodes[i]], r1[nodes[j]])
            b = _cmp(r2[nodes[i]], r2[nodes[j]])
            if a != b:
                differing += 1
                if a * b == -1:
                    opposing += 1
    return PairwiseInconsistency(total, differing, opposing)


def _cmp(a: int, b: int) -> int:
    return (a > b) - (a < b)


def _expanded_order(g: ConstraintGraph, other: ConstraintGraph) -> list[str]:
    """Element order of g, ties arranged to follow the other graph."""
    other_rank = _set_ranks(other)
    order: list[str] = []
    for es in g.ordered_sets():
        order.extend(sorted(es.members, key=lambda m: (other_rank[m], m)))
    return order


def _inversions(seq: Sequence[int]) -> int:
    """Merge-sort inversion count, the adjacent-swap distance."""
    a = list(seq)
    buf = a[:]
    count = 0
    width = 1
    n = len(a)
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    j += 1
                    count += mid - i
                k += 1
            buf[k:hi] = a[i:mid] if i < mid else a[j:hi]
        a, buf = buf, a
        width *= 2
    return count


def ordering_distance(g1: ConstraintGraph, g2: ConstraintGraph) -> OrderingDistance:
    """Adjacent-swap and footrule distance between the expanded orders.

    The tie arrangement is symmetric in the two roles, so the result does not
    depend on the argument order.
    """
    _check_same_nodes(g1, g2)
    o1 = _expanded_order(g1, g2)
    o2 = _expanded_order(g2, g1)
    pos2 = {e: i for i, e in enumerate(o2)}
    seq = [pos2[e] for e in o1]
    swaps = _inversions(seq)
    footrule = sum(abs(i - pos2[e]) for i, e in enumerate(o1))
    return OrderingDistance(swaps, footrule)


def random_baseline(n: int, samples: int, seed: int = 0) -> RandomBaseline:
    """Monte-Carlo mean distances between independent uniform permutations."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    swap_total = 0
    foot_total = 0
    remaining = samples
    chunk = max(1, min(2000, samples))
    while remaining > 0:
        b = min(chunk, remaining)
        p = np.argsort(rng.random((b, n)), axis=1)
        q = np.argsort(rng.random((b, n)), axis=1)
        disc = (p[:, iu] < p[:, ju]) != (q[:, iu] < q[:, ju])
        swap_total += int(disc.sum())
        foot_total += int(np.abs(p - q).sum())
        remaining -= b
    return RandomBaseline(swap_total / samples, foot_total / samples)

"""Rational score generation over a constraint graph.

A scoring system is rational when every degree>=1 edge u -> v satisfies
score(v) - score(u) >= dist(degree) and all scores stay inside the configured
range. Bounds are computed with two linear passes: a forward pass gives each
set the lowest score any rational system can assign it, a backward pass the
highest. The suggested score is the mean of the two, which is itself rational
whenever both bound assignments are, then rounded to the configured number of
decimals with any rounding damage repaired upward inside the bounds.
Operator-chosen pegs participate in both passes as fixed equalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import ConstraintGraph, Degree, Edge

EPS = 1e-9


class ScoringError(ValueError):
    """Base error for scoring configuration and feasibility problems."""


class InfeasibleConfigError(ScoringError):
    """No rational scoring system exists for this graph and configuration."""

    def __init__(self, message: str, edge: Edge | None = None) -> None:
        super().__init__(message)
        self.edge = edge


class InfeasiblePegError(InfeasibleConfigError):
    """A pegged value violates an edge constraint."""


class PegOutOfRangeError(ScoringError):
    """A requested peg lies outside the node's feasible interval."""

    def __init__(self, element: str, low: float, high: float, value: float) -> None:
        super().__init__(
            f"peg {value} for {element!r} is outside its feasible interval "
            f"[{low}, {high}]"
        )
        self.element = element
        self.low = low
        self.high = high
        self.value = value


@dataclass(frozen=True)
class ScoringConfig:
    min_score: float
    max_score: float
    dist1: float
    dist2: float
    decimals: int = 1
    pegs: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.min_score < self.max_score:
            raise ScoringError("min_score must be below max_score")
        if not 0 < self.dist1 <= self.dist2:
            raise ScoringError("distances must satisfy 0 < dist1 <= dist2")
        if self.decimals < 0:
            raise ScoringError("decimals must be >= 0")
        object.__setattr__(self, "pegs", dict(self.pegs))
        for element, value in self.pegs.items():
            if not self.min_score - EPS <= value <= self.max_score + EPS:
                raise ScoringError(
                    f"peg {value} for {element!r} is outside [{self.min_score}, {self.max_score}]"
                )

    def dist(self, degree: Degree) -> float:
        if degree is Degree.GREATER:
            return self.dist1
        if degree is Degree.MUCH_GREATER:
            return self.dist2
        return 0.0

    def with_pegs(self, extra: Mapping[str, float]) -> "ScoringConfig":
        merged = dict(self.pegs)
        merged.update(extra)
        return ScoringConfig(
            self.min_score, self.max_score, self.dist1, self.dist2, self.decimals, merged
        )

    def to_json_dict(self) -> dict:
        return {
            "min": self.min_score,
            "max": self.max_score,
            "dist1": self.dist1,
            "dist2": self.dist2,
            "decimals": self.decimals,
            "pegs": dict(self.pegs),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ScoringConfig":
        return cls(
            min_score=float(data["min"]),
            max_score=float(data["max"]),
            dist1=float(data["dist1"]),
            dist2=float(data["dist2"]),
            decimals=int(data.get("decimals", 1)),
            pegs={str(k): float(v) for k, v in (data.get("pegs") or {}).items()},
        )


@dataclass(frozen=True)
class SetScore:
    representative: str
    members: tuple[str, ...]
    low: float
    high: float
    chosen: float
    pegged: bool


@dataclass(frozen=True)
class ScoreAssignment:
    """Scores per equivalency set; members inherit their representative's."""

    sets: tuple[SetScore, ...]

    def by_representative(self) -> dict[str, SetScore]:
        return {s.representative: s for s in self.sets}

    def chosen_of(self, element: str) -> float:
        for s in self.sets:
            if element in s.members:
                return s.chosen
        raise KeyError(element)

    def chosen_map(self) -> dict[str, float]:
        return {s.representative: s.chosen for s in self.sets}

    def to_json_dict(self) -> dict:
        return {
            "perSet": [
                {
                    "representative": s.representative,
                    "members": list(s.members),
                    "min": s.low,
                    "max": s.high,
                    "chosen": s.chosen,
                    "pegged": s.pegged,
                }
                for s in self.sets
            ]
        }


@dataclass(frozen=True)
class Violation:
    kind: str  # "edge" or "range"
    src: str | None
    dst: str | None
    degree: int | None
    required: float
    actual: float

    def __str__(self) -> str:
        if self.kind == "edge":
            return (
                f"edge {self.src}->{self.dst} (degree {self.degree}) requires a gap of "
                f"{self.required}, got {self.actual}"
            )
        return f"score {self.actual} for {self.src!r} outside [{self.required} bound]"


@dataclass(frozen=True)
class CurveSample:
    d1: float
    d2_min: float
    d2_max: float


@dataclass(frozen=True)
class FeasibilityCurve:
    samples: tuple[CurveSample, ...]

    def to_csv(self) -> str:
        lines = ["d1,d2min,d2max"]
        lines += [f"{s.d1:.6g},{s.d2_min:.6g},{s.d2_max:.6g}" for s in self.samples]
        return "\n".join(lines) + "\n"


# -- helpers -----------------------------------------------------------------


def _normalized_pegs(g: ConstraintGraph, cfg: ScoringConfig) -> dict[str, float]:
    pegs: dict[str, float] = {}
    for element, value in cfg.pegs.items():
        rep = g.representative(element)
        if rep in pegs and abs(pegs[rep] - value) > EPS:
            raise ScoringError(
                f"conflicting pegs inside one equivalency set ({rep!r}): "
                f"{pegs[rep]} vs {value}"
            )
        pegs[rep] = value
    return pegs


def _adjacency(g: ConstraintGraph) -> tuple[dict[str, list[Edge]], dict[str, list[Edge]]]:
    out: dict[str, list[Edge]] = {r: [] for r in g.representatives()}
    inc: dict[str, list[Edge]] = {r: [] for r in g.representatives()}
    for e in g.rep_edges():
        out[e.src].append(e)
        inc[e.dst].append(e)
    return out, inc


def assign_min_scores(g: ConstraintGraph, cfg: ScoringConfig) -> dict[str, float]:
    """Lowest rational score per representative (forward pass).

    Sets without incoming edges sit at min_score; every other set sits at the
    maximum over its parents of parent + dist(degree). Pegged sets are fixed,
    and their descendants propagate from the pegged value.
    """
    pegs = _normalized_pegs(g, cfg)
    _, inc = _adjacency(g)
    low: dict[str, float] = {}
    for v in g.topological_representatives():
        base = cfg.min_score
        binding: Edge | None = None
        for e in inc[v]:
            candidate = low[e.src] + cfg.dist(e.degree)
            if candidate > base:
                base, binding = candidate, e
        if v in pegs:
            if pegs[v] < base - EPS:
                raise InfeasiblePegError(
                    f"peg {pegs[v]} for {v!r} violates edge "
                    f"{binding.src}->{binding.dst} requiring at least {base}",
                    edge=binding,
                )
            low[v] = pegs[v]
        else:
            low[v] = base
    return low


def assign_max_scores(g: ConstraintGraph, cfg: ScoringConfig) -> dict[str, float]:
    """Highest rational score per representative (backward pass)."""
    pegs = _normalized_pegs(g, cfg)
    out, _ = _adjacency(g)
    high: dict[str, float] = {}
    for v in reversed(g.topological_representatives()):
        cap = cfg.max_score
        binding: Edge | None = None
        for e in out[v]:
            candidate = high[e.dst] - cfg.dist(e.degree)
            if candidate < cap:
                cap, binding = candidate, e
        if v in pegs:
            if pegs[v] > cap + EPS:
                raise InfeasiblePegError(
                    f"peg {pegs[v]} for {v!r} violates edge "
                    f"{binding.src}->{binding.dst} capping it at {cap}",
                    edge=binding,
                )
            high[v] = pegs[v]
        else:
            high[v] = cap
    return high


def score_bounds(
    g: ConstraintGraph, cfg: ScoringConfig
) -> tuple[dict[str, float], dict[str, float]]:
    """(low, high) bound maps; raises InfeasibleConfigError when they cross."""
    low = assign_min_scores(g, cfg)
    high = assign_max_scores(g, cfg)
    for v in low:
        if low[v] > high[v] + EPS:
            raise InfeasibleConfigError(
                f"no rational system: set {v!r} needs at least {low[v]} but is "
                f"capped at {high[v]}"
            )
    return low, high


def is_feasible(g: ConstraintGraph, cfg: ScoringConfig) -> bool:
    try:
        score_bounds(g, cfg)
        return True
    except InfeasibleConfigError:
        return False


def _round_half_away(x: float, decimals: int) -> float:
    q = 10.0**decimals
    return math.copysign(math.floor(abs(x) * q + 0.5 + 1e-9), x) / q


def _ceil_to_grid(x: float, decimals: int) -> float:
    q = 10.0**decimals
    return math.ceil(x * q - 1e-9) / q


def _floor_to_grid(x: float, decimals: int) -> float:
    q = 10.0**decimals
    return math.floor(x * q + 1e-9) / q


def generate_scores(g: ConstraintGraph, cfg: ScoringConfig) -> ScoreAssignment:
    """Suggest one rational scoring system.

    Each set's score is the mean of its low and high bounds, rounded half
    away from zero to cfg.decimals. When rounding breaks an edge constraint
    the dependent score is nudged up by grid steps, falling back to the exact
    required value if no grid point fits below the set's high bound.
    """
    low, high = score_bounds(g, cfg)
    pegs = _normalized_pegs(g, cfg)
    _, inc = _adjacency(g)
    chosen: dict[str, float] = {}
    order = g.topological_representatives()
    for v in order:
        if v in pegs:
            chosen[v] = pegs[v]
            continue
        t = _round_half_away((low[v] + high[v]) / 2.0, cfg.decimals)
        if t > high[v] + EPS:
            t = _floor_to_grid(high[v], cfg.decimals)
        floor_v = max([low[v]] + [chosen[e.src] + cfg.dist(e.degree) for e in inc[v]])
        if t < floor_v - EPS:
            t = _ceil_to_grid(floor_v, cfg.decimals)
            if t > high[v] + EPS:
                t = floor_v
        chosen[v] = t

    sets = tuple(
        SetScore(
            representative=v,
            members=g.members_of(v),
            low=low[v],
            high=high[v],
            chosen=chosen[v],
            pegged=v in pegs,
        )
        for v in order
    )
    assignment = ScoreAssignment(sets)
    leftovers = validate_rational(g, cfg, assignment)
    if leftovers:
        raise InfeasibleConfigError(
            f"rounding produced {len(leftovers)} unrepairable violations at "
            f"{cfg.decimals} decimals: {leftovers[0]}"
        )
    return assignment


def validate_rational(
    g: ConstraintGraph,
    cfg: ScoringConfig,
    scores: ScoreAssignment | Mapping[str, float],
) -> list[Violation]:
    """All edge and range violations of a candidate scoring system."""
    if isinstance(scores, ScoreAssignment):
        values = scores.chosen_map()
    else:
        values = {g.representative(k): v for k, v in scores.items()}
    violations: list[Violation] = []
    for v in g.representatives():
        if v not in values:
            raise ScoringError(f"missing score for representative {v!r}")
        s = values[v]
        if not cfg.min_score - EPS <= s <= cfg.max_score + EPS:
            bound = cfg.min_score if s < cfg.min_score else cfg.max_score
            violations.append(Violation("range", v, None, None, bound, s))
    for e in g.rep_edges():
        gap = values[e.dst] - values[e.src]
        need = cfg.dist(e.degree)
        if gap < need - EPS:
            violations.append(Violation("edge", e.src, e.dst, int(e.degree), need, gap))
    return violations


def peg_and_regenerate(
    g: ConstraintGraph, cfg: ScoringConfig, pegs: Mapping[str, float]
) -> ScoreAssignment:
    """Fix additional scores and regenerate the rest.

    Each new peg must lie inside its node's current feasible interval as
    computed under cfg (including any pegs already present); out-of-range
    requests are rejected carrying that interval.
    """
    low, high = score_bounds(g, cfg)
    for element, value in pegs.items():
        rep = g.representative(element)
        if not low[rep] - EPS <= value <= high[rep] + EPS:
            raise PegOutOfRangeError(element, low[rep], high[rep], value)
    return generate_scores(g, cfg.with_pegs(pegs))


# -- feasible distance region -------------------------------------------------


def path_frontier(g: ConstraintGraph) -> list[tuple[int, int]]:
    """Pareto-maximal (degree-1 count, degree-2 count) over maximal paths.

    Every source-to-sink path in the representative DAG imposes
    a*dist1 + b*dist2 <= max_score - min_score; only the Pareto frontier of
    (a, b) pairs can bind. One forward pass with per-node pruning keeps the
    work quadratic in the number of sets.
    """
    out, inc = _adjacency(g)

    def prune(pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
        best: list[tuple[int, int]] = []
        for a, b in sorted(set(pairs), key=lambda p: (-p[0], -p[1])):
            if not any(a <= pa and b <= pb for pa, pb in best):
                best.append((a, b))
        return best

    ending: dict[str, list[tuple[int, int]]] = {}
    for v in g.topological_representatives():
        pairs: list[tuple[int, int]] = [] if inc[v] else [(0, 0)]
        for e in inc[v]:
            for a, b in ending[e.src]:
                pairs.append((a + 1, b) if e.degree is Degree.GREATER else (a, b + 1))
        ending[v] = prune(pairs)
    sink_pairs = [p for v, outs in out.items() if not outs for p in ending[v]]
    return prune(sink_pairs)


def d2_limit(
    g: ConstraintGraph, min_score: float, max_score: float, d1: float
) -> float | None:
    """Largest feasible dist(2) for the given dist(1), or None if none exists.

    With no degree-2 edges anywhere the limit is reported as the full score
    range. Pegs are not considered here.
    """
    r = max_score - min_score
    upper = r
    for a, b in path_frontier(g):
        if b == 0:
            if a * d1 > r + EPS:
                return None
        else:
            upper = min(upper, (r - a * d1) / b)
    if upper < d1 - EPS:
        return None
    return upper


def feasible_distances(
    g: ConstraintGraph, min_score: float, max_score: float, d1_step: float = 0.01
) -> FeasibilityCurve:
    """Sampled feasible (dist1, dist2) region.

    For each sampled d1 the minimum valid d2 is d1 itself and the maximum is
    closed-form from the path frontier; samples with no valid d2 are omitted,
    so an empty curve means no rational system exists at any sampled d1.
    """
    if d1_step <= 0:
        raise ScoringError("d1_step must be positive")
    r = max_score - min_score
    samples = []
    steps = int(math.floor(r / d1_step + EPS))
    for k in range(steps + 1):
        d1 = k * d1_step
        limit = d2_limit(g, min_score, max_score, d1)
        if limit is not None:
            samples.append(CurveSample(d1, d1, limit))
    return FeasibilityCurve(tuple(samples))

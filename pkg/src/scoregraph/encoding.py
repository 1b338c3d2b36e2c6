"""Oracle-driven elicitation of a constraint graph.

A session runs a modified binary insertion sort over catalog elements. The
comparison oracle is external: a human behind the HTTP service, or a scripted
weak order in tests and batch runs. The first probe of every insertion is a
seeded-random representative, which spreads edges through the graph instead
of clustering them around the midpoints; the remaining probes are plain
binary search. Every answer is appended to a replayable log, so a session can
be checkpointed after each answer and resumed or audited later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Mapping, Protocol, Sequence

from .graph import ConstraintGraph, Degree, Edge

LOG_FORMAT_VERSION = 1


class SessionError(ValueError):
    """Base error for session misuse."""


class IllegalAnswerError(SessionError):
    """Answer value not permitted by the session options."""


class SessionStateError(SessionError):
    """Operation invalid in the session's current state."""


class ReplayError(SessionError):
    """Answer log does not match the session it claims to describe."""


class Answer(Enum):
    MUCH_LESS = "much_less"
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    MUCH_GREATER = "much_greater"


class SessionState(Enum):
    AWAITING_ANSWER = "awaiting_answer"
    ADVANCING = "advancing"
    DONE = "done"


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit PRNG, identical on every platform and runtime."""

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Unbiased uniform draw from [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


@dataclass(frozen=True)
class SessionOptions:
    rng_seed: int = 0
    allow_equal: bool = True
    allow_degree2: bool = True
    insertion_order: tuple[str, ...] | None = None

    def permits(self, answer: Answer) -> bool:
        if answer is Answer.EQUAL:
            return self.allow_equal
        if answer in (Answer.MUCH_LESS, Answer.MUCH_GREATER):
            return self.allow_degree2
        return True

    def allowed_answers(self) -> tuple[Answer, ...]:
        return tuple(a for a in Answer if self.permits(a))

    def to_json_dict(self) -> dict:
        return {
            "rngSeed": self.rng_seed,
            "allowEqual": self.allow_equal,
            "allowDegree2": self.allow_degree2,
            "insertionOrder": list(self.insertion_order) if self.insertion_order else None,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SessionOptions":
        order = data.get("insertionOrder")
        return cls(
            rng_seed=int(data["rngSeed"]),
            allow_equal=bool(data.get("allowEqual", True)),
            allow_degree2=bool(data.get("allowDegree2", True)),
            insertion_order=tuple(order) if order else None,
        )


@dataclass(frozen=True)
class LoggedAnswer:
    new_element: str
    probe: str
    answer: Answer
    at: str


@dataclass(frozen=True)
class Question:
    new_element: str
    probe: str
    index: int


@dataclass
class _Pending:
    new_element: str
    lo: int
    hi: int
    probe_index: int
    staged: list[Edge] = field(default_factory=list)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def expected_max_answers(n: int) -> int:
    """Worst-case answer count for inserting n elements one by one."""
    total = 0
    for reps in range(1, n):
        total += 1 if reps == 1 else 1 + math.ceil(math.log2(reps))
    return total


class Session:
    """State of one expert's in-progress elicitation.

    One session has one logical writer. All state is a deterministic function
    of (options, insertion order, answers), which is what makes the answer
    log a sufficient checkpoint.
    """

    def __init__(
        self,
        catalog_ref: str,
        elements: Sequence[str],
        options: SessionOptions,
        provenance: str = "",
    ) -> None:
        if not elements:
            raise SessionError("element list must not be empty")
        if len(set(elements)) != len(elements):
            raise SessionError("element list contains duplicates")
        order = options.insertion_order or tuple(elements)
        if sorted(order) != sorted(elements):
            raise SessionError("insertion order must be a permutation of the elements")
        self.catalog_ref = catalog_ref
        self.options = options
        self.provenance = provenance
        self._order: tuple[str, ...] = tuple(order)
        self.sorted_reps: list[str] = []
        self._children: dict[str, list[str]] = {}
        self._strict_edges: dict[tuple[str, str], Degree] = {}
        self.answer_log: list[LoggedAnswer] = []
        self._pending: _Pending | None = None
        self._next_pos = 0
        self._rng = SplitMix64(options.rng_seed)
        self.state = SessionState.ADVANCING
        self._advance()

    # -- progress ------------------------------------------------------------

    @property
    def element_count(self) -> int:
        return len(self._order)

    @property
    def answered_count(self) -> int:
        return len(self.answer_log)

    @property
    def expected_max(self) -> int:
        return expected_max_answers(len(self._order))

    @property
    def done(self) -> bool:
        return self.state is SessionState.DONE

    # -- the oracle-facing protocol -------------------------------------------

    def next_question(self) -> Question:
        if self.state is not SessionState.AWAITING_ANSWER:
            raise SessionStateError(f"no question pending in state {self.state.value}")
        p = self._pending
        assert p is not None
        return Question(p.new_element, self.sorted_reps[p.probe_index], len(self.answer_log))

    def submit_answer(self, answer: Answer, at: str | None = None) -> "Session":
        if self.state is not SessionState.AWAITING_ANSWER:
            raise SessionStateError(f"cannot answer in state {self.state.value}")
        if not self.options.permits(answer):
            raise IllegalAnswerError(f"answer {answer.value} not permitted by session options")
        p = self._pending
        assert p is not None
        probe = self.sorted_reps[p.probe_index]
        self.answer_log.append(LoggedAnswer(p.new_element, probe, answer, at or _now()))

        if answer is Answer.EQUAL:
            # The new element joins the probe's set; no further comparisons
            # are made against it, and this insertion's earlier comparison
            # edges are re-pointed at the set representative.
            self._children[probe].append(p.new_element)
            self._commit(p.staged, alias={p.new_element: probe})
            self._pending = None
            self._advance()
            return self

        if answer in (Answer.GREATER, Answer.MUCH_GREATER):
            degree = Degree.MUCH_GREATER if answer is Answer.MUCH_GREATER else Degree.GREATER
            p.staged.append(Edge(probe, p.new_element, degree))
            p.lo = p.probe_index + 1
        else:
            degree = Degree.MUCH_GREATER if answer is Answer.MUCH_LESS else Degree.GREATER
            p.staged.append(Edge(p.new_element, probe, degree))
            p.hi = p.probe_index

        if p.lo >= p.hi:
            self.sorted_reps.insert(p.lo, p.new_element)
            self._children[p.new_element] = []
            self._commit(p.staged)
            self._pending = None
            self._advance()
        else:
            p.probe_index = (p.lo + p.hi - 1) // 2
        return self

    # -- internals -------------------------------------------------------------

    def _commit(self, staged: Iterable[Edge], alias: Mapping[str, str] | None = None) -> None:
        alias = alias or {}
        for e in staged:
            src = alias.get(e.src, e.src)
            dst = alias.get(e.dst, e.dst)
            key = (src, dst)
            if self._strict_edges.get(key, Degree.EQUAL) < e.degree:
                self._strict_edges[key] = e.degree

    def _advance(self) -> None:
        self.state = SessionState.ADVANCING
        while self._next_pos < len(self._order):
            element = self._order[self._next_pos]
            self._next_pos += 1
            if not self.sorted_reps:
                self.sorted_reps.append(element)
                self._children[element] = []
                continue
            n = len(self.sorted_reps)
            self._pending = _Pending(element, lo=0, hi=n, probe_index=self._rng.next_below(n))
            self.state = SessionState.AWAITING_ANSWER
            return
        self.state = SessionState.DONE

    # -- outputs ----------------------------------------------------------------

    def graph(self) -> ConstraintGraph:
        """Constraint graph over all fully inserted elements."""
        edges = [Edge(src, dst, deg) for (src, dst), deg in self._strict_edges.items()]
        nodes: list[str] = []
        for rep in self.sorted_reps:
            nodes.append(rep)
            for child in self._children[rep]:
                nodes.append(child)
                edges.append(Edge(rep, child, Degree.EQUAL))
        return ConstraintGraph(self.catalog_ref, nodes, edges, provenance=self.provenance)

    def ordered_sets(self) -> list[tuple[str, tuple[str, ...]]]:
        """(representative, members) in ascending significance."""
        return [
            (rep, tuple([rep] + self._children[rep])) for rep in self.sorted_reps
        ]

    def log_json_dict(self) -> dict:
        return {
            "formatVersion": LOG_FORMAT_VERSION,
            "catalogRef": self.catalog_ref,
            "provenance": self.provenance,
            "elements": list(self._order),
            "options": self.options.to_json_dict(),
            "answers": [
                {"a": la.new_element, "b": la.probe, "answer": la.answer.value, "at": la.at}
                for la in self.answer_log
            ],
        }


def start_session(
    catalog_ref: str,
    elements: Sequence[str],
    options: SessionOptions,
    provenance: str = "",
) -> Session:
    return Session(catalog_ref, elements, options, provenance=provenance)


def replay(log: Mapping) -> Session:
    """Rebuild a session from its answer log.

    The log is re-executed against a fresh session; every recorded question
    must match the one the session would ask, otherwise the log does not
    belong to these options and a ReplayError is raised. A truncated log
    yields a session paused at the exact next question.
    """
    if log.get("formatVersion") != LOG_FORMAT_VERSION:
        raise ReplayError(f"unsupported log formatVersion {log.get('formatVersion')!r}")
    try:
        options = SessionOptions.from_json_dict(log["options"])
        elements = list(log["elements"])
        answers = list(log["answers"])
        catalog_ref = log["catalogRef"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ReplayError(f"malformed session log: {exc}") from exc
    session = Session(catalog_ref, elements, options, provenance=log.get("provenance", ""))
    for i, entry in enumerate(answers):
        if session.done:
            raise ReplayError(f"log continues after the session completed (entry {i})")
        q = session.next_question()
        if (q.new_element, q.probe) != (entry["a"], entry["b"]):
            raise ReplayError(
                f"log entry {i} asks {entry['a']!r} vs {entry['b']!r} but the session "
                f"asks {q.new_element!r} vs {q.probe!r}"
            )
        try:
            answer = Answer(entry["answer"])
        except ValueError as exc:
            raise ReplayError(f"log entry {i} has unknown answer {entry['answer']!r}") from exc
        session.submit_answer(answer, at=entry.get("at"))
    return session


class ComparisonOracle(Protocol):
    def compare(self, new_element: str, probe: str) -> Answer: ...


@dataclass(frozen=True)
class WeakOrderOracle:
    """Scripted oracle answering from a hidden weak order.

    Elements with equal rank are equal; a rank gap of at least ``much_gap``
    (when set) upgrades the answer to much-less / much-greater.
    """

    ranks: Mapping[str, float]
    much_gap: float | None = None

    def compare(self, new_element: str, probe: str) -> Answer:
        try:
            delta = self.ranks[new_element] - self.ranks[probe]
        except KeyError as exc:
            raise SessionError(f"oracle has no rank for {exc.args[0]!r}") from exc
        if delta == 0:
            return Answer.EQUAL
        if self.much_gap is not None and abs(delta) >= self.much_gap:
            return Answer.MUCH_GREATER if delta > 0 else Answer.MUCH_LESS
        return Answer.GREATER if delta > 0 else Answer.LESS

    def to_json_dict(self) -> dict:
        return {"ranks": dict(self.ranks), "muchGap": self.much_gap}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "WeakOrderOracle":
        gap = data.get("muchGap")
        return cls(ranks=dict(data["ranks"]), much_gap=float(gap) if gap is not None else None)


def drive_session(session: Session, oracle: ComparisonOracle) -> Session:
    """Run a session to completion against a synchronous oracle."""
    while not session.done:
        q = session.next_question()
        session.submit_answer(oracle.compare(q.new_element, q.probe))
    return session

"""HTTP API over sessions, graphs, unification, scoring and prioritization.

The service is an analyst workbench, not an internet service: no auth, one
data directory. Sessions persist as answer logs (checkpointed atomically
after every answer, so a crash between answers loses nothing) and are rebuilt
by replay on demand. Graphs are stored content-addressed by the hash of their
canonical bytes. Answers are sequenced by index so a duplicate or stale
submission is rejected instead of double-recorded.
"""

from __future__ import annotations

import hashlib
import json
import os
import uuid
from pathlib import Path
from typing import Mapping

from fastapi import Body, FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from .catalogs import Catalog, CatalogError
from .encoding import (
    Answer,
    IllegalAnswerError,
    Session,
    SessionOptions,
    replay,
)
from .graph import ConstraintGraph, GraphError, SchemaError
from .prioritization import prioritize, ranked_sets_json
from .scoring import (
    PegOutOfRangeError,
    ScoringConfig,
    ScoringError,
    feasible_distances,
    generate_scores,
    peg_and_regenerate,
)
from .unification import UnificationInputError, unify_with_degrees

API_PREFIX = "/api/v1"


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class SessionStore:
    """One directory per session holding its replayable answer log."""

    def __init__(self, root: Path) -> None:
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Session] = {}

    def _log_path(self, sid: str) -> Path:
        return self.root / sid / "log.json"

    def create(
        self,
        catalog_ref: str,
        elements: list[str],
        options: SessionOptions,
        provenance: str = "",
    ) -> tuple[str, Session]:
        sid = uuid.uuid4().hex[:12]
        session = Session(catalog_ref, elements, options, provenance=provenance)
        self._cache[sid] = session
        self.checkpoint(sid)
        return sid, session

    def get(self, sid: str) -> Session:
        if sid in self._cache:
            return self._cache[sid]
        path = self._log_path(sid)
        if not path.exists():
            raise KeyError(sid)
        session = replay(json.loads(path.read_text("utf-8")))
        self._cache[sid] = session
        return session

    def ids(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if (p / "log.json").exists())

    def checkpoint(self, sid: str) -> None:
        session = self._cache[sid]
        path = self._log_path(sid)
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, json.dumps(session.log_json_dict(), indent=1).encode("utf-8"))

    def drop_cache(self) -> None:
        self._cache.clear()


class GraphStore:
    """Content-addressed graph files: id = sha256 of canonical bytes."""

    def __init__(self, root: Path) -> None:
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, graph: ConstraintGraph) -> str:
        data = graph.canonical_bytes()
        gid = hashlib.sha256(data).hexdigest()[:16]
        _atomic_write(self.root / f"{gid}.json", data)
        return gid

    def get(self, gid: str) -> ConstraintGraph:
        path = self.root / f"{gid}.json"
        if not path.exists():
            raise KeyError(gid)
        return ConstraintGraph.load(path)

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


def _error(status: int, message: str, **extra) -> HTTPException:
    return HTTPException(status_code=status, detail={"message": message, **extra})


def create_app(
    data_dir: str | Path,
    catalogs: Mapping[str, Catalog],
    ui_dir: str | Path | None = None,
) -> FastAPI:
    data_dir = Path(data_dir)
    sessions = SessionStore(data_dir / "sessions")
    graphs = GraphStore(data_dir / "graphs")
    app = FastAPI(title="scoregraph", openapi_url=f"{API_PREFIX}/openapi.json")
    app.state.sessions = sessions
    app.state.graphs = graphs
    app.state.catalogs = dict(catalogs)

    def get_session(sid: str) -> Session:
        try:
            return sessions.get(sid)
        except KeyError:
            raise _error(404, f"unknown session {sid!r}")

    def get_graph(gid: str) -> ConstraintGraph:
        try:
            return graphs.get(gid)
        except KeyError:
            raise _error(404, f"unknown graph {gid!r}")
        except (SchemaError, GraphError) as exc:
            raise _error(422, f"stored graph {gid!r} unreadable: {exc}")

    def get_catalog(ref: str) -> Catalog:
        try:
            return app.state.catalogs[ref]
        except KeyError:
            raise _error(404, f"unknown catalog {ref!r}")

    def session_summary(sid: str, session: Session) -> dict:
        return {
            "sessionId": sid,
            "state": session.state.value,
            "catalogRef": session.catalog_ref,
            "progress": {
                "answered": session.answered_count,
                "expectedMax": session.expected_max,
                "elements": session.element_count,
            },
        }

    def question_payload(sid: str, session: Session) -> dict:
        payload = session_summary(sid, session)
        if session.done:
            payload["question"] = None
            return payload
        q = session.next_question()
        catalog = app.state.catalogs.get(session.catalog_ref)
        rendering = (
            catalog.render_question(q.new_element, q.probe)
            if catalog is not None
            else {"kind": "custom", "new": {"id": q.new_element}, "probe": {"id": q.probe}}
        )
        payload["question"] = {
            "answerIndex": q.index,
            "newElement": q.new_element,
            "probe": q.probe,
            "rendering": rendering,
            "allowedAnswers": [a.value for a in session.options.allowed_answers()],
        }
        return payload

    # -- catalogs ----------------------------------------------------------

    @app.get(f"{API_PREFIX}/catalogs")
    def list_catalogs() -> list[dict]:
        return [
            {"ref": c.ref, "kind": c.kind, "size": len(c.elements)}
            for c in app.state.catalogs.values()
        ]

    @app.get(f"{API_PREFIX}/catalogs/{{ref}}")
    def show_catalog(ref: str) -> dict:
        return get_catalog(ref).to_json_dict()

    # -- sessions ----------------------------------------------------------

    @app.post(f"{API_PREFIX}/sessions", status_code=201)
    def create_session(body: dict = Body(...)) -> dict:
        catalog = get_catalog(body.get("catalogRef", ""))
        elements = body.get("elements")
        if elements is None:
            top = body.get("top")
            elements = list(catalog.elements[: int(top)] if top else catalog.elements)
        unknown = [e for e in elements if e not in catalog.elements]
        if unknown:
            raise _error(422, f"elements not in catalog: {unknown[:5]}")
        try:
            options = SessionOptions.from_json_dict(body.get("options") or {"rngSeed": 0})
            sid, session = sessions.create(
                catalog.ref, elements, options, provenance=body.get("provenance", "")
            )
        except (ValueError, KeyError) as exc:
            raise _error(422, f"invalid session request: {exc}")
        return question_payload(sid, session)

    @app.get(f"{API_PREFIX}/sessions")
    def list_sessions() -> list[dict]:
        out = []
        for sid in sessions.ids():
            try:
                out.append(session_summary(sid, sessions.get(sid)))
            except Exception:
                continue
        return out

    @app.get(f"{API_PREFIX}/sessions/{{sid}}")
    def show_session(sid: str) -> dict:
        return session_summary(sid, get_session(sid))

    @app.get(f"{API_PREFIX}/sessions/{{sid}}/question")
    def show_question(sid: str) -> dict:
        return question_payload(sid, get_session(sid))

    @app.post(f"{API_PREFIX}/sessions/{{sid}}/answers")
    def submit_answer(sid: str, body: dict = Body(...)) -> dict:
        session = get_session(sid)
        index = body.get("index")
        if index != session.answered_count:
            raise _error(
                409,
                f"answer index {index} out of sequence, expected {session.answered_count}",
                expectedIndex=session.answered_count,
            )
        if session.done:
            raise _error(409, "session is already done")
        try:
            answer = Answer(body.get("answer"))
        except ValueError:
            raise _error(422, f"unknown answer {body.get('answer')!r}")
        try:
            session.submit_answer(answer)
        except IllegalAnswerError as exc:
            raise _error(422, str(exc))
        sessions.checkpoint(sid)
        return question_payload(sid, session)

    @app.get(f"{API_PREFIX}/sessions/{{sid}}/log")
    def export_log(sid: str) -> dict:
        return get_session(sid).log_json_dict()

    @app.get(f"{API_PREFIX}/sessions/{{sid}}/graph")
    def export_graph(sid: str) -> dict:
        return get_session(sid).graph().to_json_dict()

    @app.post(f"{API_PREFIX}/sessions/{{sid}}/graph/save")
    def save_session_graph(sid: str) -> dict:
        gid = graphs.put(get_session(sid).graph())
        return {"graphId": gid}

    # -- graphs ------------------------------------------------------------

    @app.post(f"{API_PREFIX}/graphs", status_code=201)
    def upload_graph(body: dict = Body(...)) -> dict:
        try:
            graph = ConstraintGraph.from_json_dict(body)
        except GraphError as exc:
            raise _error(422, f"invalid graph: {exc}")
        return {"graphId": graphs.put(graph)}

    @app.get(f"{API_PREFIX}/graphs")
    def list_graphs() -> list[dict]:
        out = []
        for gid in graphs.ids():
            g = graphs.get(gid)
            out.append(
                {
                    "graphId": gid,
                    "catalogRef": g.catalog_ref,
                    "nodes": len(g.nodes),
                    "edges": len(g.edges),
                }
            )
        return out

    @app.get(f"{API_PREFIX}/graphs/{{gid}}")
    def show_graph(gid: str) -> dict:
        return get_graph(gid).to_json_dict()

    # -- analysis ------------------------------------------------------------

    @app.post(f"{API_PREFIX}/unify")
    def unify_graphs(body: dict = Body(...)) -> dict:
        gids = body.get("graphIds") or []
        if len(gids) < 2:
            raise _error(422, "unify needs at least two graphIds")
        inputs = [get_graph(gid) for gid in gids]
        try:
            unified, report = unify_with_degrees(inputs)
        except UnificationInputError as exc:
            raise _error(422, str(exc))
        gid = graphs.put(unified)
        return {
            "graphId": gid,
            "graph": unified.to_json_dict(),
            "report": report.to_json_dict(),
        }

    def parse_config(body: Mapping) -> ScoringConfig:
        try:
            return ScoringConfig.from_json_dict(body.get("config") or {})
        except (ScoringError, KeyError, TypeError, ValueError) as exc:
            raise _error(422, f"invalid scoring config: {exc}")

    @app.post(f"{API_PREFIX}/graphs/{{gid}}/scores")
    def score_graph(gid: str, body: dict = Body(...)) -> dict:
        graph = get_graph(gid)
        cfg = parse_config(body)
        try:
            assignment = generate_scores(graph, cfg)
        except ScoringError as exc:
            raise _error(422, str(exc))
        out = {"assignment": assignment.to_json_dict()}
        if body.get("includeCurve"):
            step = float(body.get("curveStep", 0.01))
            curve = feasible_distances(graph, cfg.min_score, cfg.max_score, step)
            out["curve"] = [
                {"d1": s.d1, "d2min": s.d2_min, "d2max": s.d2_max} for s in curve.samples
            ]
        return out

    @app.post(f"{API_PREFIX}/graphs/{{gid}}/pegs")
    def peg_graph(gid: str, body: dict = Body(...)) -> dict:
        graph = get_graph(gid)
        cfg = parse_config(body)
        pegs = {str(k): float(v) for k, v in (body.get("pegs") or {}).items()}
        try:
            assignment = peg_and_regenerate(graph, cfg, pegs)
        except PegOutOfRangeError as exc:
            raise _error(
                422,
                str(exc),
                element=exc.element,
                validMin=exc.low,
                validMax=exc.high,
            )
        except ScoringError as exc:
            raise _error(422, str(exc))
        return {"assignment": assignment.to_json_dict()}

    @app.get(f"{API_PREFIX}/graphs/{{gid}}/prioritization")
    def prioritize_graph(gid: str) -> dict:
        return ranked_sets_json(prioritize(get_graph(gid)))

    @app.get(f"{API_PREFIX}/graphs/{{gid}}/feasibility")
    def graph_feasibility(
        gid: str, min_score: float = 0.0, max_score: float = 10.0, step: float = 0.01
    ) -> dict:
        curve = feasible_distances(get_graph(gid), min_score, max_score, step)
        return {
            "samples": [
                {"d1": s.d1, "d2min": s.d2_min, "d2max": s.d2_max} for s in curve.samples
            ]
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def default_catalogs() -> dict[str, Catalog]:
    from .catalogs import builtin_catalog

    out: dict[str, Catalog] = {}
    for name in ("cvss-top65", "pf", "csf"):
        try:
            out[name] = builtin_catalog(name)
        except (CatalogError, FileNotFoundError):
            continue
    return out

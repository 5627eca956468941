"""HTTP API: debate management, classification, verification, assist.

State model: each debate carries a revision counter that bumps on every
mutation. Clients may send ``if_revision``; a stale value is rejected with
409 and nothing changes. Every acknowledged mutation is snapshotted to disk
(outline text + a small JSON manifest), so a restarted process serves the
last acknowledged state.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path
from typing import Callable, Optional, TypeVar, Union

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .backends import BackendRegistry
from .classify import classify, make_config
from .errors import (
    Adbl2Error,
    BackendError,
    EmptyTextError,
    UnknownArgumentError,
    UnknownParentError,
)
from .kialo import detect_domain, parse_kialo, read_title, serialize_kialo
from .model import DebateTree, RelationEdge, RelationType
from .verification import (
    EdgeVerificationFailure,
    assist_new_argument,
    verify_tree,
)

T = TypeVar("T")


class ApiError(Exception):
    """Error surfaced to HTTP clients; carries status, machine code, message."""

    def __init__(self, http_status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message
        self.extra = extra

    def body(self) -> dict:
        return {
            "http_status": self.http_status,
            "code": self.code,
            "message": self.message,
            **self.extra,
        }


class StoredDebate:
    """One debate plus its revision counter and write lock."""

    def __init__(self, debate_id: str, tree: DebateTree, revision: int = 1,
                 title: Optional[str] = None):
        self.debate_id = debate_id
        self.tree = tree
        self.revision = revision
        self.title = title
        self.lock = threading.RLock()


class DebateStore:
    """In-memory debates with snapshot-on-mutate persistence.

    The outline snapshot is the source of truth; the manifest keeps the
    revision, domain, and title. Argument ids are process-local and are
    reassigned when a snapshot is loaded.
    """

    def __init__(self, data_dir: Optional[Union[str, Path]] = None):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self._debates: dict[str, StoredDebate] = {}
        self._lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def _load(self) -> None:
        assert self.data_dir is not None
        for manifest_path in sorted(self.data_dir.glob("*.manifest.json")):
            with manifest_path.open("r", encoding="utf-8") as handle:
                manifest = json.load(handle)
            debate_id = manifest["debate_id"]
            snapshot = self.data_dir / f"{debate_id}.txt"
            tree, diagnostics = parse_kialo(snapshot.read_text(encoding="utf-8"))
            if tree is None:
                raise RuntimeError(
                    f"snapshot {snapshot} no longer parses: "
                    + "; ".join(d.render() for d in diagnostics)
                )
            tree.domain = manifest.get("domain")
            self._debates[debate_id] = StoredDebate(
                debate_id, tree,
                revision=int(manifest["revision"]),
                title=manifest.get("title"),
            )

    def _snapshot(self, debate: StoredDebate) -> None:
        if self.data_dir is None:
            return
        text = serialize_kialo(debate.tree, title=debate.title)
        manifest = {
            "debate_id": debate.debate_id,
            "revision": debate.revision,
            "domain": debate.tree.domain,
            "title": debate.title,
        }
        _atomic_write(self.data_dir / f"{debate.debate_id}.txt", text)
        _atomic_write(
            self.data_dir / f"{debate.debate_id}.manifest.json",
            json.dumps(manifest, ensure_ascii=False, indent=2) + "\n",
        )

    def create(self, tree: DebateTree, title: Optional[str] = None) -> StoredDebate:
        with self._lock:
            debate_id = uuid.uuid4().hex[:12]
            while debate_id in self._debates:
                debate_id = uuid.uuid4().hex[:12]
            debate = StoredDebate(debate_id, tree, title=title)
            self._debates[debate_id] = debate
        self._snapshot(debate)
        return debate

    def get(self, debate_id: str) -> StoredDebate:
        try:
            return self._debates[debate_id]
        except KeyError:
            raise ApiError(404, "unknown_debate", f"no debate {debate_id!r}") from None

    def debate_ids(self) -> list[str]:
        return sorted(self._debates)

    def mutate(
        self,
        debate_id: str,
        if_revision: Optional[int],
        action: Callable[[DebateTree], T],
    ) -> tuple[T, int]:
        """Run a mutation under the debate lock with a revision check."""
        debate = self.get(debate_id)
        with debate.lock:
            if if_revision is not None and if_revision != debate.revision:
                raise ApiError(
                    409, "stale_revision",
                    f"expected revision {debate.revision}, got {if_revision}",
                )
            result = action(debate.tree)
            debate.revision += 1
            self._snapshot(debate)
            return result, debate.revision


def _atomic_write(path: Path, content: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


# -- request bodies --------------------------------------------------------


class AddArgumentBody(BaseModel):
    parent_id: str
    text: str
    relation: str
    if_revision: Optional[int] = None


class EditTextBody(BaseModel):
    text: str
    if_revision: Optional[int] = None


class SetRelationBody(BaseModel):
    relation: str
    if_revision: Optional[int] = None


class ClassifyBody(BaseModel):
    parent_text: str
    child_text: str
    backend: Optional[str] = None
    technique: Optional[str] = None


class VerifyBody(BaseModel):
    backend: Optional[str] = None
    technique: Optional[str] = None
    confidence_floor: Optional[float] = None


class AssistBody(BaseModel):
    parent_id: str
    draft_text: str
    intended: str
    backend: Optional[str] = None
    technique: Optional[str] = None
    assist_threshold: Optional[float] = None


# -- serialization helpers --------------------------------------------------


def _edge_json(edge: RelationEdge) -> dict:
    return {"child": edge.child, "parent": edge.parent, "relation": edge.relation.value}


def _tree_json(debate: StoredDebate) -> dict:
    tree = debate.tree
    nodes = [
        {
            "id": arg_id,
            "text": tree.argument(arg_id).text,
            "depth": tree.depth(arg_id),
        }
        for arg_id in tree.iter_preorder()
    ]
    return {
        "debate_id": debate.debate_id,
        "revision": debate.revision,
        "title": debate.title,
        "domain": tree.domain,
        "root": tree.root,
        "nodes": nodes,
        "edges": [_edge_json(edge) for edge in tree.edges],
    }


def _diagnostic_json(diagnostic) -> dict:
    return {
        "line_number": diagnostic.line_number,
        "severity": diagnostic.severity.value,
        "code": diagnostic.code,
        "message": diagnostic.message,
    }


def _relation(value: str) -> RelationType:
    try:
        return RelationType.from_string(value)
    except ValueError as exc:
        raise ApiError(422, "invalid_relation", str(exc)) from None


def create_app(
    store: DebateStore,
    registry: Optional[BackendRegistry] = None,
    confidence_floor: float = 0.6,
    assist_threshold: float = 0.6,
    ui_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    """Wire the HTTP endpoints over a store and a backend registry."""
    registry = registry or BackendRegistry.builtin()
    app = FastAPI(title="assisted debate builder")
    # The web UI may be served from another origin (static file server).
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.http_status, content=exc.body())

    def config_from(backend: Optional[str], technique: Optional[str]):
        try:
            return make_config(registry, backend, technique)
        except ValueError as exc:
            raise ApiError(422, "invalid_technique", str(exc)) from None
        except BackendError as exc:
            raise ApiError(502, exc.code, str(exc)) from None

    def run(action: Callable[[], T]) -> T:
        """Translate domain errors into API errors."""
        try:
            return action()
        except (UnknownArgumentError, UnknownParentError) as exc:
            raise ApiError(404, exc.code, str(exc)) from None
        except EmptyTextError as exc:
            raise ApiError(422, exc.code, str(exc)) from None
        except BackendError as exc:
            raise ApiError(502, exc.code, str(exc)) from None
        except ValueError as exc:
            raise ApiError(422, "invalid_value", str(exc)) from None
        except Adbl2Error as exc:
            raise ApiError(422, exc.code, str(exc)) from None

    @app.post("/debates/import")
    async def import_debate(request: Request, domain: Optional[str] = Query(None)):
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ApiError(422, "invalid_encoding", "body must be UTF-8 text") from None
        tree, diagnostics = parse_kialo(text)
        payload = [_diagnostic_json(d) for d in diagnostics]
        if tree is None:
            raise ApiError(422, "parse_error", "import failed", diagnostics=payload)
        title = read_title(text)
        if domain:
            tree.domain = domain
        elif title:
            tree.domain = detect_domain(title)
        debate = store.create(tree, title=title)
        return {"debate_id": debate.debate_id, "revision": debate.revision,
                "diagnostics": payload}

    @app.get("/debates")
    async def list_debates():
        return {"debates": store.debate_ids()}

    @app.get("/debates/{debate_id}")
    async def get_debate(debate_id: str):
        return _tree_json(store.get(debate_id))

    @app.get("/debates/{debate_id}/export")
    async def export_debate(debate_id: str):
        debate = store.get(debate_id)
        return PlainTextResponse(serialize_kialo(debate.tree, title=debate.title))

    @app.post("/debates/{debate_id}/arguments")
    async def add_argument(debate_id: str, body: AddArgumentBody):
        relation = _relation(body.relation)
        argument_id, revision = run(lambda: store.mutate(
            debate_id, body.if_revision,
            lambda tree: tree.add_argument(body.parent_id, body.text, relation),
        ))
        return {"argument_id": argument_id, "revision": revision}

    @app.patch("/debates/{debate_id}/arguments/{argument_id}")
    async def edit_argument(debate_id: str, argument_id: str, body: EditTextBody):
        worklist, revision = run(lambda: store.mutate(
            debate_id, body.if_revision,
            lambda tree: tree.edit_argument_text(argument_id, body.text),
        ))
        return {"worklist": [_edge_json(edge) for edge in worklist], "revision": revision}

    @app.delete("/debates/{debate_id}/arguments/{argument_id}")
    async def delete_argument(
        debate_id: str, argument_id: str, if_revision: Optional[int] = Query(None),
    ):
        removed, revision = run(lambda: store.mutate(
            debate_id, if_revision,
            lambda tree: tree.remove_argument(argument_id),
        ))
        return {"removed": removed, "revision": revision}

    @app.post("/debates/{debate_id}/relations/{argument_id}")
    async def set_relation(debate_id: str, argument_id: str, body: SetRelationBody):
        relation = _relation(body.relation)
        previous, revision = run(lambda: store.mutate(
            debate_id, body.if_revision,
            lambda tree: tree.set_relation(argument_id, relation),
        ))
        return {"previous": previous.value, "revision": revision}

    @app.post("/classify")
    async def classify_pair(body: ClassifyBody):
        config = config_from(body.backend, body.technique)
        outcome = run(lambda: classify(config, body.parent_text, body.child_text))
        return {
            "p_attack": outcome.p_attack,
            "p_support": outcome.p_support,
            "predicted": outcome.predicted.value,
            "is_tie": outcome.is_tie,
            "backend_id": outcome.backend_id,
            "prompt_fingerprint": outcome.prompt_fingerprint,
        }

    @app.post("/debates/{debate_id}/verify")
    async def verify_debate(debate_id: str, body: VerifyBody):
        debate = store.get(debate_id)
        config = config_from(body.backend, body.technique)
        floor = body.confidence_floor if body.confidence_floor is not None else confidence_floor
        summary = run(lambda: verify_tree(debate.tree, config, floor))
        results = []
        for entry in summary.results:
            if isinstance(entry, EdgeVerificationFailure):
                results.append({**_edge_json(entry.edge), "error": entry.error})
            else:
                results.append({
                    **_edge_json(entry.edge),
                    "stored": entry.stored.value,
                    "predicted": entry.predicted.value,
                    "probability_of_stored": entry.probability_of_stored,
                    "status": entry.status.value,
                })
        return {
            "total": summary.total,
            "confirmed": summary.confirmed,
            "mismatched": summary.mismatched,
            "low_confidence": summary.low_confidence,
            "results": results,
            "revision": debate.revision,
        }

    @app.post("/debates/{debate_id}/assist")
    async def assist(debate_id: str, body: AssistBody):
        debate = store.get(debate_id)
        config = config_from(body.backend, body.technique)
        intended = _relation(body.intended)
        threshold = (
            body.assist_threshold if body.assist_threshold is not None else assist_threshold
        )
        feedback = run(lambda: assist_new_argument(
            debate.tree, body.parent_id, body.draft_text, intended, config, threshold,
        ))
        return {
            "draft_text": feedback.draft_text,
            "intended": feedback.intended.value,
            "p_intended": feedback.p_intended,
            "verdict": feedback.verdict.value,
            "suggestion": feedback.suggestion,
            "revision": debate.revision,
        }

    return app

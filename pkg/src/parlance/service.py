"""Wire protocol and HTTP service around interpreter sessions.

Every frame on the wire is a JSON object carrying a protocol version and a
"type" discriminator. One client frame always yields exactly one server
frame; malformed input yields an error frame, never a dropped connection.
The same frames flow over the WebSocket chat stream and the stateless REST
endpoints, so the schema below is the whole compatibility contract:

  client: create_session | user_message{session, text}
          | hint_query{session, partial_text} | select_option{session, label}
          | export_script{session} | list_env{session}
  server: session_created{session} | agent_turn{responses}
          | hints{ranked, pending} | env_snapshot{vars} | script{text}
          | error{code, text} | health{status, protocol}

Endpoints: POST /api/session, POST /api/message, GET /api/hints,
GET /api/env, GET /api/export, GET /api/health, and WS /ws.
"""

import json
import threading
import time
import uuid
from dataclasses import MISSING, dataclass, field, fields
from pathlib import Path

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse

from .config import Config
from .errors import EngineError, MalformedFrame, UnknownSession
from .intent import ExampleStore, train
from .pack import build_registry
from .session import (
    Ask,
    Error,
    OptionSynonyms,
    Say,
    Session,
    ShowHelp,
    ShowValue,
)
from .values import (
    ArrayV,
    CollectionV,
    PlotV,
    TextV,
    format_number,
    render_block,
)

PROTOCOL_VERSION = 1

PREVIEW_LIMIT = 5


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


@dataclass
class CreateSession:
    pass


@dataclass
class UserMessage:
    session: str
    text: str


@dataclass
class HintQuery:
    session: str
    partial_text: str


@dataclass
class SelectOption:
    session: str
    label: str


@dataclass
class ExportScript:
    session: str


@dataclass
class ListEnv:
    session: str


@dataclass
class SessionCreated:
    session: str


@dataclass
class AgentTurn:
    responses: list


@dataclass
class Hints:
    ranked: list
    pending: dict | None = None


@dataclass
class EnvSnapshot:
    vars: list


@dataclass
class Script:
    text: str


@dataclass
class ErrorMsg:
    code: str
    text: str


@dataclass
class Health:
    status: str = "ok"
    protocol: int = PROTOCOL_VERSION


_FRAME_TYPES = {
    "create_session": CreateSession,
    "user_message": UserMessage,
    "hint_query": HintQuery,
    "select_option": SelectOption,
    "export_script": ExportScript,
    "list_env": ListEnv,
    "session_created": SessionCreated,
    "agent_turn": AgentTurn,
    "hints": Hints,
    "env_snapshot": EnvSnapshot,
    "script": Script,
    "error": ErrorMsg,
    "health": Health,
}

_FRAME_NAMES = {cls: name for name, cls in _FRAME_TYPES.items()}

CLIENT_FRAMES = (CreateSession, UserMessage, HintQuery, SelectOption, ExportScript, ListEnv)

# wire field -> accepted runtime types
_FIELD_TYPES = {
    str: (str,),
    int: (int,),
    list: (list,),
    "dict | None": (dict, type(None)),
}


def _accepted(annotation):
    if annotation in _FIELD_TYPES:
        return _FIELD_TYPES[annotation]
    return _FIELD_TYPES[str(annotation)]


def frame_to_wire(frame) -> dict:
    name = _FRAME_NAMES.get(type(frame))
    if name is None:
        raise MalformedFrame("not a wire frame: %r" % (frame,))
    payload = {"v": PROTOCOL_VERSION, "type": name}
    for f in fields(frame):
        payload[f.name] = getattr(frame, f.name)
    return payload


def frame_from_wire(payload):
    if not isinstance(payload, dict):
        raise MalformedFrame("frame must be a JSON object")
    version = payload.get("v")
    if version != PROTOCOL_VERSION:
        raise MalformedFrame(
            "unsupported protocol version %r; this service speaks %d"
            % (version, PROTOCOL_VERSION)
        )
    name = payload.get("type")
    cls = _FRAME_TYPES.get(name)
    if cls is None:
        raise MalformedFrame("unknown frame type %r" % (name,))
    kwargs = {}
    for f in fields(cls):
        has_default = f.default is not MISSING or f.default_factory is not MISSING
        if f.name in payload:
            value = payload[f.name]
            if not isinstance(value, _accepted(f.type)):
                raise MalformedFrame(
                    "frame field '%s' has the wrong type" % f.name
                )
            kwargs[f.name] = value
        elif not has_default:
            raise MalformedFrame("frame is missing field '%s'" % f.name)
    return cls(**kwargs)


# ---------------------------------------------------------------------------
# Serialization of agent responses and values
# ---------------------------------------------------------------------------


def plot_record(spec) -> dict:
    return {
        "kind": spec.kind,
        "categories": list(spec.categories),
        "values": list(spec.values),
        "title": spec.title,
        "axes": {"x": spec.x_label, "y": spec.y_label},
    }


def value_preview(value, limit: int = PREVIEW_LIMIT) -> str:
    if isinstance(value, ArrayV):
        shown = [format_number(v) for v in value.values[:limit]]
        if len(value.values) > limit:
            shown.append("...")
        return "[%s] (%d values)" % (", ".join(shown), len(value.values))
    if isinstance(value, CollectionV):
        names = list(value.collection.names)
        shown = names[:limit] + (["..."] if len(names) > limit else [])
        return "<Collection: [%s]> (%d rows)" % (
            ", ".join(shown), value.collection.n_rows,
        )
    if isinstance(value, TextV):
        flat = " ".join(value.text.split())
        return flat if len(flat) <= 80 else flat[:77] + "..."
    return render_block(value)


def value_record(value) -> dict:
    record = {
        "type": value.type_name,
        "preview": value_preview(value),
        "block": render_block(value),
    }
    if isinstance(value, PlotV):
        record["plot"] = plot_record(value.spec)
    return record


def response_record(resp) -> dict:
    if isinstance(resp, Say):
        return {"kind": "say", "text": resp.text}
    if isinstance(resp, Ask):
        return {
            "kind": "ask",
            "prompt": resp.prompt,
            "expected": resp.expected,
            "options": list(resp.options),
        }
    if isinstance(resp, ShowValue):
        return {
            "kind": "show_value",
            "explanation": resp.explanation,
            "value": value_record(resp.value),
        }
    if isinstance(resp, ShowHelp):
        return {"kind": "show_help", "text": resp.text}
    if isinstance(resp, Error):
        return {"kind": "error", "text": resp.text}
    raise MalformedFrame("unknown agent response %r" % (resp,))


def env_records(session: Session) -> list:
    return [
        {"name": name, "type": value.type_name, "preview": value_preview(value)}
        for name, value in session.env.bindings.items()
    ]


# ---------------------------------------------------------------------------
# Session hub
# ---------------------------------------------------------------------------


@dataclass
class _Entry:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = 0.0


_EMPTY_SIDECAR = {"templates": [], "examples": [], "synonyms": []}


class SessionHub:
    """All live sessions plus the shared trained-model baseline.

    Sessions are independent: each gets its own registry copy and example
    store so template learning never leaks across users. Learned artifacts
    are merged into a sidecar file so a restarted hub starts warm.
    """

    def __init__(
        self,
        *,
        seed: int = 0,
        idle_timeout: float = 1800.0,
        sidecar: str | None = None,
        registry_factory=build_registry,
        clock=time.monotonic,
    ):
        self._registry_factory = registry_factory
        self._seed = seed
        self._idle_timeout = idle_timeout
        self._sidecar = sidecar
        self._clock = clock
        self._lock = threading.Lock()
        self._entries: dict[str, _Entry] = {}
        self._base_rows = list(ExampleStore.from_registry(registry_factory()).rows)
        self._base_model = train(ExampleStore(rows=list(self._base_rows)))
        self._persisted = self._read_sidecar()

    def _read_sidecar(self) -> dict:
        empty = {key: list(val) for key, val in _EMPTY_SIDECAR.items()}
        if self._sidecar is None or not Path(self._sidecar).exists():
            return empty
        raw = json.loads(Path(self._sidecar).read_text(encoding="utf-8"))
        for key in empty:
            empty[key] = list(raw.get(key, []))
        return empty

    def create_session(self) -> str:
        with self._lock:
            self._evict_locked()
            sid = uuid.uuid4().hex
            registry = self._registry_factory()
            store = ExampleStore(rows=list(self._base_rows))
            synonyms = OptionSynonyms()
            registry.load_learned_records(self._persisted["templates"])
            synonyms.load_records(self._persisted["synonyms"])
            if self._persisted["examples"]:
                store.load_records(self._persisted["examples"])
                model = train(store)
            else:
                model = self._base_model
            session = Session(
                registry,
                session_id=sid,
                store=store,
                intent=model,
                synonyms=synonyms,
                rng_seed=self._seed,
            )
            self._entries[sid] = _Entry(session, last_used=self._clock())
            return sid

    def session(self, sid: str) -> Session:
        return self._entry(sid).session

    def _entry(self, sid: str) -> _Entry:
        with self._lock:
            self._evict_locked()
            entry = self._entries.get(sid)
            if entry is None:
                raise UnknownSession("no session '%s'" % sid)
            entry.last_used = self._clock()
            return entry

    def _evict_locked(self) -> None:
        now = self._clock()
        stale = [
            sid for sid, entry in self._entries.items()
            if now - entry.last_used > self._idle_timeout
        ]
        for sid in stale:
            del self._entries[sid]

    def _persist(self, session: Session) -> None:
        if self._sidecar is None:
            return
        fresh = {
            "templates": session.registry.learned_records(),
            "examples": [
                r for r in session.store.records() if r["origin"] != "authored"
            ],
            "synonyms": session.synonyms.records(),
        }
        with self._lock:
            changed = False
            for key, records in fresh.items():
                seen = {
                    json.dumps(r, sort_keys=True) for r in self._persisted[key]
                }
                for record in records:
                    dumped = json.dumps(record, sort_keys=True)
                    if dumped not in seen:
                        self._persisted[key].append(record)
                        seen.add(dumped)
                        changed = True
            if changed:
                Path(self._sidecar).write_text(
                    json.dumps(self._persisted, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8",
                )

    # -- frame dispatch ------------------------------------------------------

    def dispatch(self, frame):
        if isinstance(frame, CreateSession):
            return SessionCreated(self.create_session())
        if isinstance(frame, (UserMessage, SelectOption)):
            text = frame.text if isinstance(frame, UserMessage) else frame.label
            entry = self._entry(frame.session)
            with entry.lock:
                responses = entry.session.handle_input(text)
                self._persist(entry.session)
            return AgentTurn([response_record(r) for r in responses])
        if isinstance(frame, HintQuery):
            entry = self._entry(frame.session)
            with entry.lock:
                ranked = entry.session.hints(frame.partial_text)
                pending = entry.session.pending_ask
            pending_record = None
            if pending is not None:
                pending_record = {
                    "prompt": pending.prompt,
                    "expected": pending.expected,
                    "options": list(pending.options),
                }
            return Hints(
                [
                    {"command_id": h.command_id, "hint_text": h.text, "score": h.score}
                    for h in ranked
                ],
                pending_record,
            )
        if isinstance(frame, ExportScript):
            entry = self._entry(frame.session)
            with entry.lock:
                return Script(entry.session.export())
        if isinstance(frame, ListEnv):
            entry = self._entry(frame.session)
            with entry.lock:
                return EnvSnapshot(env_records(entry.session))
        raise MalformedFrame("frame type is not a client request")


def handle_frame(hub: SessionHub, payload) -> dict:
    """Total frame handler: any input maps to exactly one reply frame."""
    try:
        frame = frame_from_wire(payload)
        reply = hub.dispatch(frame)
    except MalformedFrame as err:
        reply = ErrorMsg("malformed", str(err))
    except UnknownSession as err:
        reply = ErrorMsg("unknown_session", str(err))
    except EngineError as err:
        reply = ErrorMsg("engine_error", str(err))
    return frame_to_wire(reply)


# ---------------------------------------------------------------------------
# HTTP application
# ---------------------------------------------------------------------------


def _rest_frame(frame_type: str, body) -> dict:
    if isinstance(body, dict) and "type" not in body:
        merged = {"v": PROTOCOL_VERSION, "type": frame_type}
        merged.update(body)
        return merged
    return body


def create_app(config: Config | None = None, hub: SessionHub | None = None) -> FastAPI:
    config = config if config is not None else Config()
    if hub is None:
        hub = SessionHub(
            seed=config.seed,
            idle_timeout=config.idle_timeout,
            sidecar=config.sidecar,
        )
    app = FastAPI(title="parlance")
    app.state.hub = hub

    @app.get("/api/health")
    def health():
        return frame_to_wire(Health())

    @app.post("/api/session")
    def create_session():
        return handle_frame(hub, {"v": PROTOCOL_VERSION, "type": "create_session"})

    @app.post("/api/message")
    async def message(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = None
        reply = await run_in_threadpool(
            handle_frame, hub, _rest_frame("user_message", body)
        )
        return JSONResponse(reply)

    @app.get("/api/hints")
    def hints(session: str = "", q: str = ""):
        return handle_frame(hub, {
            "v": PROTOCOL_VERSION,
            "type": "hint_query",
            "session": session,
            "partial_text": q,
        })

    @app.get("/api/env")
    def env(session: str = ""):
        return handle_frame(hub, {
            "v": PROTOCOL_VERSION, "type": "list_env", "session": session,
        })

    @app.get("/api/export")
    def export(session: str = ""):
        return handle_frame(hub, {
            "v": PROTOCOL_VERSION, "type": "export_script", "session": session,
        })

    @app.websocket("/ws")
    async def chat(socket: WebSocket):
        await socket.accept()
        try:
            while True:
                raw = await socket.receive_text()
                try:
                    payload = json.loads(raw)
                except json.JSONDecodeError:
                    payload = None
                reply = await run_in_threadpool(handle_frame, hub, payload)
                await socket.send_json(reply)
        except WebSocketDisconnect:
            return

    return app


def serve(config: Config) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port)

"""Conversation-to-program transformation: each executed command extends an
abstract syntax tree, and export compiles the tree into a runnable script
with command source snippets at the top, saved results as assignments, and
nested commands as composed function calls.

History references render as generated `_r{k}` temporaries: the referenced
statement is rewritten into an assignment at export time so later lines can
name its value. Commands that draw randomness carry their captured seed as
an explicit trailing argument, which keeps exported scripts replayable.
"""

from __future__ import annotations

import ast as python_ast
import copy
from dataclasses import dataclass, field

from .errors import ArityMismatch, EngineError, MissingSnippet
from .values import (
    ArrayV,
    CollectionV,
    IntV,
    MetricV,
    RealV,
    TextV,
    UnitV,
    Value,
)


@dataclass(frozen=True)
class LiteralSrc:
    value: Value


@dataclass(frozen=True)
class VarRefSrc:
    name: str


@dataclass(frozen=True)
class HistoryRefSrc:
    index: int  # 1-based history turn


@dataclass(frozen=True)
class NestedSrc:
    call: "CallNode"


ArgSource = LiteralSrc | VarRefSrc | HistoryRefSrc | NestedSrc


@dataclass(frozen=True)
class CallNode:
    command_id: str
    args: tuple[ArgSource, ...]
    seed: int | None = None  # captured for commands that draw randomness


@dataclass
class AssignStmt:
    name: str
    source: ArgSource


@dataclass
class ExprStmt:
    call: CallNode


Stmt = AssignStmt | ExprStmt


def build_ast_node(cmd, sources: list[ArgSource], seed: int | None = None) -> CallNode:
    """Record a call; sources must line up with the command's slots."""
    if len(sources) != len(cmd.argument_types):
        raise ArityMismatch(
            f"{cmd.id} takes {len(cmd.argument_types)} arguments, "
            f"got {len(sources)}"
        )
    return CallNode(cmd.id, tuple(sources), seed)


@dataclass
class ConversationAst:
    """Statements in execution order plus provenance: which statement (or
    duplicated nested call) produced each history entry."""

    statements: list[Stmt] = field(default_factory=list)
    by_history: dict[int, int] = field(default_factory=dict)
    nested_calls: dict[int, CallNode] = field(default_factory=dict)
    preloaded: set[str] = field(default_factory=set)

    def record_call(self, call: CallNode, history_index: int) -> int:
        self.statements.append(ExprStmt(call))
        index = len(self.statements) - 1
        self.by_history[history_index] = index
        return index

    def record_nested(self, call: CallNode, history_index: int) -> None:
        self.nested_calls[history_index] = call

    def record_save(self, name: str, source: ArgSource, history_index: int) -> int:
        """Saving rewrites the referenced statement into an assignment when
        it can; otherwise the save becomes its own assignment line."""
        if isinstance(source, HistoryRefSrc):
            target = self.by_history.get(source.index)
            if target is not None:
                stmt = self.statements[target]
                if isinstance(stmt, ExprStmt):
                    self.statements[target] = AssignStmt(name, NestedSrc(stmt.call))
                    self.by_history[history_index] = target
                    return target
                source = VarRefSrc(stmt.name)
            else:
                nested = self.nested_calls.get(source.index)
                if nested is None:
                    raise EngineError(f"history {source.index} has no provenance")
                source = NestedSrc(nested)
        self.statements.append(AssignStmt(name, source))
        index = len(self.statements) - 1
        self.by_history[history_index] = index
        return index

    def source_for_history(self, history_index: int) -> ArgSource | None:
        """How a later command should reference this history entry."""
        if history_index in self.by_history:
            return HistoryRefSrc(history_index)
        nested = self.nested_calls.get(history_index)
        if nested is not None:
            return NestedSrc(nested)
        return None

    def snapshot(self) -> "ConversationAst":
        # Statement and source nodes are frozen or never field-mutated, so
        # copying the containers restores turn state without a deep copy.
        return ConversationAst(
            list(self.statements),
            dict(self.by_history),
            dict(self.nested_calls),
            set(self.preloaded),
        )


def _walk_sources(source: ArgSource):
    yield source
    if isinstance(source, NestedSrc):
        for arg in source.call.args:
            yield from _walk_sources(arg)


def _stmt_sources(stmt: Stmt):
    if isinstance(stmt, AssignStmt):
        yield from _walk_sources(stmt.source)
    else:
        for arg in stmt.call.args:
            yield from _walk_sources(arg)


def render_value_literal(value: Value) -> str:
    if isinstance(value, IntV):
        return str(value.value)
    if isinstance(value, RealV):
        return repr(value.value)
    if isinstance(value, TextV):
        return repr(value.text)
    if isinstance(value, ArrayV):
        return "[" + ", ".join(repr(x) for x in value.values) + "]"
    if isinstance(value, CollectionV):
        parts = []
        for name, col in value.collection.columns:
            cells = ", ".join(repr(c) for c in col.values)
            parts.append(f"{name!r}: [{cells}]")
        return "{" + ", ".join(parts) + "}"
    raise EngineError(f"no literal form for {value.type_name}")


class ScriptRenderer:
    """Reference renderer: snippet defs, then one line per statement."""

    def render(self, defs: list[str], lines: list[str]) -> str:
        return "\n".join([*defs, *lines]) + "\n"


REFERENCE_RENDERER = ScriptRenderer()


def export_script(ast: ConversationAst, registry, renderer=REFERENCE_RENDERER) -> str:
    statements = [copy.deepcopy(stmt) for stmt in ast.statements]
    stmt_by_history = dict(ast.by_history)

    # name every statement that later history references point at
    referenced = sorted({
        src.index
        for stmt in statements
        for src in _stmt_sources(stmt)
        if isinstance(src, HistoryRefSrc)
    })
    history_names: dict[int, str] = {}
    for hist in referenced:
        target = stmt_by_history.get(hist)
        if target is None:
            raise EngineError(f"history {hist} has no statement")
        stmt = statements[target]
        if isinstance(stmt, ExprStmt):
            statements[target] = AssignStmt(f"_r{hist}", NestedSrc(stmt.call))
            history_names[hist] = f"_r{hist}"
        else:
            history_names[hist] = stmt.name

    def render_source(source: ArgSource) -> str:
        if isinstance(source, LiteralSrc):
            return render_value_literal(source.value)
        if isinstance(source, VarRefSrc):
            return source.name
        if isinstance(source, HistoryRefSrc):
            return history_names[source.index]
        return render_call(source.call)

    def render_call(call: CallNode) -> str:
        args = ", ".join(render_source(arg) for arg in call.args)
        if call.seed is not None:
            args = f"{args}, seed={call.seed}" if args else f"seed={call.seed}"
        return f"{call.command_id}({args})"

    # validate reference ordering while rendering lines
    defined: set[str] = set(ast.preloaded)
    lines = []
    for position, stmt in enumerate(statements):
        for src in _stmt_sources(stmt):
            if isinstance(src, VarRefSrc) and src.name not in defined:
                raise EngineError(f"variable {src.name!r} referenced before assignment")
            if isinstance(src, HistoryRefSrc) and stmt_by_history[src.index] >= position:
                raise EngineError(f"history {src.index} referenced before it exists")
        if isinstance(stmt, AssignStmt):
            lines.append(f"{stmt.name} = {render_source(stmt.source)}")
            defined.add(stmt.name)
        else:
            lines.append(render_call(stmt.call))

    # snippets in first-use order, each command once
    defs = []
    seen: set[str] = set()

    def collect(call: CallNode) -> None:
        if call.command_id not in seen:
            seen.add(call.command_id)
            snippet = registry.get(call.command_id).source_snippet
            if not snippet.strip():
                raise MissingSnippet(f"{call.command_id} has no source snippet")
            defs.append(snippet.rstrip("\n"))
        for arg in call.args:
            if isinstance(arg, NestedSrc):
                collect(arg.call)

    for stmt in statements:
        if isinstance(stmt, AssignStmt):
            if isinstance(stmt.source, NestedSrc):
                collect(stmt.source.call)
        else:
            collect(stmt.call)

    return renderer.render(defs, lines)


def ast_to_data(ast: ConversationAst) -> dict:
    """Neutral serialized form: nested records of command id and sources."""

    def source_data(source: ArgSource) -> dict:
        if isinstance(source, LiteralSrc):
            return {"kind": "literal", "text": render_value_literal(source.value)}
        if isinstance(source, VarRefSrc):
            return {"kind": "var", "name": source.name}
        if isinstance(source, HistoryRefSrc):
            return {"kind": "history", "index": source.index}
        return {"kind": "nested", "call": call_data(source.call)}

    def call_data(call: CallNode) -> dict:
        data = {
            "command": call.command_id,
            "args": [source_data(a) for a in call.args],
        }
        if call.seed is not None:
            data["seed"] = call.seed
        return data

    out = []
    for stmt in ast.statements:
        if isinstance(stmt, AssignStmt):
            out.append({"assign": stmt.name, "source": source_data(stmt.source)})
        else:
            out.append({"call": call_data(stmt.call)})
    return {"statements": out}


def evaluate_script(text: str) -> object:
    """Run an exported script and return its final statement's value; the
    reference oracle for round-trip checks."""
    module = python_ast.parse(text)
    if not module.body:
        return None
    namespace: dict = {}
    last = module.body[-1]
    body = python_ast.Module(body=module.body[:-1], type_ignores=[])
    exec(compile(body, "<script>", "exec"), namespace)
    if isinstance(last, python_ast.Expr):
        tail = python_ast.Expression(body=last.value)
        return eval(compile(tail, "<script>", "eval"), namespace)
    tail_module = python_ast.Module(body=[last], type_ignores=[])
    exec(compile(tail_module, "<script>", "exec"), namespace)
    if isinstance(last, python_ast.Assign) and isinstance(
        last.targets[0], python_ast.Name
    ):
        return namespace[last.targets[0].id]
    return None

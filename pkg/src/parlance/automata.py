"""Conversation automata: explicit computation states that emit prompts,
consume user input, and transition dynamically.

A machine owns a set of states plus a rewritable transition table.  A state's
step returns Goto (move on), Suspend (ask and wait), or Done (a value).  Done
normally finishes the machine, but a dynamically installed "done" edge routes
the value onward instead; this is how a child command grafted by with_scope
hands its result back to the parent and how nested conversations unwind their
scope frames.

Machine definitions are immutable templates in callers' hands; an instance is
mutable and owned by exactly one session.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .errors import (
    DanglingTransition,
    DepthExceeded,
    EngineError,
    InputRequired,
    InputUnexpected,
    UnknownState,
)
from .values import Value

DONE_LABEL = "done"
NEXT_LABEL = "next"

_STEP_BUDGET = 10_000  # transitions per step() call; trips on runaway loops


@dataclass
class Goto:
    """Proceed to a state: a label routed through the transition table, or a
    state id used directly when no rewrite is installed."""

    target: str


@dataclass
class Done:
    value: Value


@dataclass
class Suspend:
    prompt: str


StepResult = Goto | Done | Suspend


@dataclass
class EmitPrompt:
    text: str


@dataclass
class Finished:
    value: Value


@dataclass
class Advanced:
    state: str


TurnOutcome = EmitPrompt | Finished | Advanced


class ScopeFrame:
    """Argument bindings for one nesting level; inner frames shadow outer."""

    def __init__(self, parent: "ScopeFrame | None" = None):
        self.bindings: dict[str, Value] = {}
        self.parent = parent

    def bind(self, name: str, value: Value) -> None:
        self.bindings[name] = value

    def lookup(self, name: str) -> Value | None:
        frame: ScopeFrame | None = self
        while frame is not None:
            if name in frame.bindings:
                return frame.bindings[name]
            frame = frame.parent
        return None

    def lookup_local(self, name: str) -> Value | None:
        """Innermost-frame-only lookup; nested commands must not inherit the
        parent's same-named argument bindings."""
        return self.bindings.get(name)


@dataclass
class StateNode:
    id: str
    step: Callable[["StepContext", str | None], StepResult]
    prompt: str | None = None
    expects_input: bool = False


class StepContext:
    """View handed to a state's step: innermost scope, emit buffer, and the
    value delivered along a routed done edge."""

    def __init__(self, machine: "MachineInstance"):
        self.machine = machine

    @property
    def scope(self) -> ScopeFrame:
        return self.machine.scope_stack[-1]

    def emit(self, item: Any) -> None:
        self.machine._output.append(item)

    def take_result(self) -> Value | None:
        value, self.machine._result_register = self.machine._result_register, None
        return value


class MachineInstance:
    def __init__(self, states: Iterable[StateNode], start: str, depth_cap: int = 64):
        self.states: dict[str, StateNode] = {}
        for node in states:
            self.add_state(node)
        if start not in self.states:
            raise UnknownState(f"start state {start!r} is not registered")
        self.current = start
        self.transitions: dict[tuple[str, str], str] = {}
        self.scope_stack: list[ScopeFrame] = [ScopeFrame()]
        self.depth_cap = depth_cap
        self.finished_value: Value | None = None
        self._awaiting_input = False
        self._finished = False
        self._result_register: Value | None = None
        self._output: list[Any] = []

    # -- construction & dynamic rewiring ------------------------------------

    def add_state(self, node: StateNode) -> None:
        if node.id in self.states:
            raise UnknownState(f"duplicate state id {node.id!r}")
        self.states[node.id] = node

    def set_transition(self, from_id: str, label: str, to_id: str) -> None:
        if from_id not in self.states:
            raise UnknownState(f"unknown source state {from_id!r}")
        if to_id not in self.states:
            raise UnknownState(f"unknown target state {to_id!r}")
        self.transitions[(from_id, label)] = to_id

    def with_scope(self, child_states: Iterable[StateNode]) -> "MachineInstance":
        """Graft child states that will run under a fresh innermost frame.

        The frame pops when a routed done edge fires, leaving the parent's
        frame untouched.  Callers wire the child's exit with set_transition.
        """
        if len(self.scope_stack) >= self.depth_cap:
            raise DepthExceeded(
                f"nesting deeper than {self.depth_cap} conversations; "
                "unwinding this command"
            )
        for node in child_states:
            self.add_state(node)
        self.scope_stack.append(ScopeFrame(parent=self.scope_stack[-1]))
        return self

    # -- stepping ------------------------------------------------------------

    @property
    def is_finished(self) -> bool:
        return self._finished

    @property
    def awaiting_input(self) -> bool:
        return self._awaiting_input

    def drain_output(self) -> list[Any]:
        out, self._output = self._output, []
        return out

    def step(self, input_text: str | None = None) -> TurnOutcome:
        """Advance until the machine suspends for input or finishes."""
        self._check_input_pre(input_text)
        for _ in range(_STEP_BUDGET):
            outcome = self._advance(input_text)
            input_text = None
            if not isinstance(outcome, Advanced):
                return outcome
        raise EngineError(f"machine exceeded {_STEP_BUDGET} transitions in one step")

    def step_once(self, input_text: str | None = None) -> TurnOutcome:
        """Single-transition variant; Advanced means the machine moved to a
        state that neither suspended nor finished."""
        self._check_input_pre(input_text)
        return self._advance(input_text)

    def _check_input_pre(self, input_text: str | None) -> None:
        if self._finished:
            raise EngineError("machine already finished")
        if self._awaiting_input:
            if input_text is None:
                raise InputRequired(f"state {self.current!r} expects input")
        elif input_text is not None:
            raise InputUnexpected(f"state {self.current!r} takes no input")

    def _advance(self, input_text: str | None) -> TurnOutcome:
        ctx = StepContext(self)
        node = self.states[self.current]
        if self._awaiting_input:
            self._awaiting_input = False
            result = node.step(ctx, input_text)
        elif node.expects_input:
            self._awaiting_input = True
            return EmitPrompt(node.prompt or "")
        else:
            if node.prompt:
                ctx.emit(node.prompt)
            result = node.step(ctx, None)

        if isinstance(result, Suspend):
            self._awaiting_input = True
            return EmitPrompt(result.prompt)
        if isinstance(result, Done):
            target = self.transitions.get((self.current, DONE_LABEL))
            if target is None:
                self._finished = True
                self.finished_value = result.value
                return Finished(result.value)
            if target not in self.states:
                raise DanglingTransition(f"done edge of {self.current!r} -> {target!r}")
            self._result_register = result.value
            if len(self.scope_stack) > 1:
                self.scope_stack.pop()
            self.current = target
            return Advanced(self.current)
        if isinstance(result, Goto):
            resolved = self.transitions.get((self.current, result.target), result.target)
            if resolved not in self.states:
                raise DanglingTransition(f"{self.current!r} -> {resolved!r}")
            self.current = resolved
            return Advanced(self.current)
        raise EngineError(f"state {self.current!r} returned {result!r}")


def linear_chain(nodes: list[StateNode], depth_cap: int = 64) -> MachineInstance:
    """Wire nodes in order with default "next" edges; last Done finishes."""
    machine = MachineInstance(nodes, start=nodes[0].id, depth_cap=depth_cap)
    for a, b in zip(nodes, nodes[1:]):
        machine.set_transition(a.id, NEXT_LABEL, b.id)
    return machine

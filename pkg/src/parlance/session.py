"""The interpreter session: one conversation's turn loop.

Each user turn either starts a command (top-1 of the intent classifier,
always, so the live hint and the executed command can never disagree) or
answers the question a suspended command machine asked. Commands run as
small automata: check each slot, ask for what's missing, run a conversion
dialogue for close-but-wrong-typed references, and finally execute the
body. An answer that parses as nothing else is classified as a nested
command grafted onto the same machine with a fresh scope; its result flows
back along a done edge into the waiting slot.

Every completed command appends to the history (nested ones too) and grows
the conversation AST, so "that" and exported scripts both work. Turns are
transactional: a failing body leaves bindings, history, and AST exactly as
they were when the turn began.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .astgen import (
    ArgSource,
    ConversationAst,
    HistoryRefSrc,
    LiteralSrc,
    NestedSrc,
    VarRefSrc,
    build_ast_node,
    export_script,
)
from .automata import (
    DONE_LABEL,
    EmitPrompt,
    Done,
    Finished,
    Goto,
    MachineInstance,
    StateNode,
    Suspend,
)
from .commands import ArgSpec, CommandSpec, first_match, render_title_hint
from .errors import CommandError, EmptyRegistry, EngineError
from .intent import ExampleStore, add_example, predict_topk, train
from .tokenizer import tokenize
from .types import (
    ConversionPlan,
    apply_conversion,
    article,
    plan_conversion,
    resolve_reference,
)
from .values import (
    IntV,
    RealV,
    TextV,
    Value,
    Environment,
    NamedRef,
    format_number,
    is_pronoun,
    normalize_name,
    render_block,
)

# ---------------------------------------------------------------------------
# Responses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Say:
    text: str


@dataclass(frozen=True)
class Ask:
    prompt: str
    expected: str
    options: tuple[str, ...] = ()


@dataclass(frozen=True)
class ShowValue:
    value: Value
    explanation: str = ""


@dataclass(frozen=True)
class ShowHelp:
    text: str


@dataclass(frozen=True)
class Error:
    text: str


AgentResponse = Say | Ask | ShowValue | ShowHelp | Error


# ---------------------------------------------------------------------------
# Option synonyms
# ---------------------------------------------------------------------------


class OptionSynonyms:
    """Learned phrase -> option label maps per (command, slot); last wins."""

    def __init__(self):
        self.by_slot: dict[tuple[str, str], dict[str, str]] = {}

    def record(self, cmd_id: str, slot: str, phrase: str, label: str) -> None:
        self.by_slot.setdefault((cmd_id, slot), {})[phrase] = label

    def for_slot(self, cmd_id: str, slot: str) -> dict[str, str]:
        return self.by_slot.get((cmd_id, slot), {})

    def records(self) -> list[dict]:
        return [
            {"command_id": c, "slot": s, "phrase": p, "label": l}
            for (c, s), phrases in self.by_slot.items()
            for p, l in phrases.items()
        ]

    def load_records(self, records) -> None:
        for r in records:
            self.record(r["command_id"], r["slot"], r["phrase"], r["label"])


def _contains_run(haystack: list[str], needle: list[str]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    for start in range(len(haystack) - len(needle) + 1):
        if haystack[start:start + len(needle)] == needle:
            return True
    return False


def _label_overlap_run(tokens: list[str], label: str) -> list[str]:
    """Longest contiguous run of utterance tokens drawn from the label's
    tokens; how the user phrased the option inside their request."""
    vocab = set(tokenize(label))
    best: list[str] = []
    run: list[str] = []
    for token in tokens:
        if token in vocab:
            run.append(token)
            if len(run) > len(best):
                best = list(run)
        else:
            run = []
    return best


# ---------------------------------------------------------------------------
# Activations
# ---------------------------------------------------------------------------


@dataclass
class PendingConversion:
    plan: ConversionPlan
    value: Value
    source: ArgSource


@dataclass
class Activation:
    """One command conversation in flight: what triggered it, what's been
    resolved, and where each argument came from."""

    cmd: CommandSpec
    prefix: str
    utterance: str
    tokens: list[str]
    novel: bool
    parent: tuple["Activation", str] | None = None
    spans: dict[str, str] = field(default_factory=dict)
    sources: dict[str, ArgSource] = field(default_factory=dict)
    pending: dict[str, PendingConversion] = field(default_factory=dict)
    children: dict[str, "Activation"] = field(default_factory=dict)
    call_node: object = None
    prelude_pending: bool = False


_YES = {"yes", "y", "yeah", "sure", "ok", "okay"}
_NO = {"no", "n", "nope"}
_ABORTS = {"never mind", "nevermind", "cancel"}
_HELP_LAST = {
    "can you tell me more about what you did",
    "tell me more about what you did",
    "tell me more",
    "what did you do",
}
_HELP_GENERAL = {"help", "what can you do"}

_RESULT_NOUNS = {
    "Array": "array",
    "Collection": "collection",
    "Model": "model",
    "Metric": "result",
    "Plot": "plot",
    "Int": "number",
    "Real": "number",
    "String": "text",
}


def _result_noun(value: Value) -> str:
    return _RESULT_NOUNS.get(value.type_name, "value")


def _surface_form(source: ArgSource) -> str | None:
    if isinstance(source, VarRefSrc):
        return source.name
    if isinstance(source, LiteralSrc):
        v = source.value
        if isinstance(v, (IntV, RealV)):
            return format_number(v.value)
        if isinstance(v, TextV):
            return v.text
    return None


@dataclass(frozen=True)
class Hint:
    """One live suggestion: the command, its title with captured spans
    braced, and the classifier score."""

    command_id: str
    text: str
    score: float


# ---------------------------------------------------------------------------
# The session
# ---------------------------------------------------------------------------


class Session:
    def __init__(
        self,
        registry,
        *,
        session_id: str = "local",
        store: ExampleStore | None = None,
        intent=None,
        synonyms: OptionSynonyms | None = None,
        rng_seed: int = 0,
    ):
        if len(registry) == 0:
            raise EmptyRegistry("cannot open a session over an empty registry")
        self.id = session_id
        self.registry = registry
        self.env = Environment()
        self.ast = ConversationAst()
        self.store = store if store is not None else ExampleStore.from_registry(registry)
        self.intent = intent if intent is not None else train(self.store)
        self.synonyms = synonyms if synonyms is not None else OptionSynonyms()
        self.rng_seed = rng_seed
        self.last_command: str | None = None
        self._pending_ask: Ask | None = None
        self._machine: MachineInstance | None = None
        self._ask_meta: dict[str, tuple[str, tuple[str, ...]]] = {}
        self._dyn_ask: tuple[str, tuple[str, ...]] | None = None
        self._activations = 0
        self._seeds_drawn = 0

    # -- public surface ------------------------------------------------------

    @property
    def machine_stack(self) -> list[MachineInstance]:
        return [self._machine] if self._machine is not None else []

    def preload(self, name: str, value: Value) -> None:
        """Bind data that exists before the conversation (demo datasets)."""
        self.env.bind(name, value)
        self.ast.preloaded.add(name)

    @property
    def pending_ask(self) -> Ask | None:
        """The question currently awaiting an answer, if any."""
        return self._pending_ask

    def handle_input(self, text: str) -> list[AgentResponse]:
        snap_env = self.env.snapshot()
        snap_ast = self.ast.snapshot()
        try:
            responses = self._dispatch(text)
        except (CommandError, EngineError) as err:
            self.env.restore(snap_env)
            self.ast = snap_ast
            self._drop_machine()
            self._pending_ask = None
            return [Error(str(err))]
        asks = [r for r in responses if isinstance(r, Ask)]
        self._pending_ask = asks[-1] if asks and self._machine is not None else None
        return responses

    def hints(self, text: str, k: int = 5) -> list[Hint]:
        tokens = tokenize(text)
        out = []
        for cmd_id, score in predict_topk(self.intent, text, k):
            cmd = self.registry.get(cmd_id)
            matched = first_match(cmd, tokens)
            spans = matched[1] if matched else {}
            out.append(Hint(cmd_id, render_title_hint(cmd, spans), score))
        return out

    def export(self) -> str:
        return export_script(self.ast, self.registry)

    # -- dispatch --------------------------------------------------------------

    def _dispatch(self, text: str) -> list[AgentResponse]:
        text = text.strip()
        if not text:
            return [Error("I didn't catch that; please try again.")]
        lowered = " ".join(tokenize(text))
        if lowered in _ABORTS:
            had_machine = self._machine is not None
            self._drop_machine()
            return [Say("Okay, never mind." if had_machine else "Okay.")]
        if self._machine is not None:
            return self._run(text)
        if lowered in _HELP_LAST:
            if self.last_command is None:
                return [Error("I have not run a command yet.")]
            cmd = self.registry.get(self.last_command)
            body = "\n".join(cmd.help_text) or cmd.title
            return [ShowHelp(body)]
        if lowered in _HELP_GENERAL:
            lines = ["Here is what I can do:"]
            lines += ["- " + cmd.title for cmd in self.registry]
            return [ShowHelp("\n".join(lines))]
        if "export" in tokenize(text):
            return [
                Say("Here is the conversation as a script:"),
                Say(self.export()),
            ]
        return self._start_command(text)

    def _start_command(self, text: str) -> list[AgentResponse]:
        tokens = tokenize(text)
        cmd_id = predict_topk(self.intent, text, 1)[0][0]
        cmd = self.registry.get(cmd_id)
        record = self._new_activation(cmd, text, tokens, parent=None)
        states, start = self._build_states(record)
        self._machine = MachineInstance(states, start=start)
        self._prebind(record, self._machine.scope_stack[-1])
        record.prelude_pending = bool(record.sources or record.pending)
        return self._run(None)

    def _run(self, input_text: str | None) -> list[AgentResponse]:
        machine = self._machine
        outcome = machine.step(input_text)
        responses = list(machine.drain_output())
        if isinstance(outcome, EmitPrompt):
            responses.append(self._wrap_ask(machine, outcome.text))
        else:
            self._drop_machine()
        return responses

    def _wrap_ask(self, machine: MachineInstance, prompt: str) -> Ask:
        meta = self._dyn_ask or self._ask_meta.get(machine.current) or ("", ())
        self._dyn_ask = None
        return Ask(prompt, meta[0], tuple(meta[1]))

    def _drop_machine(self) -> None:
        self._machine = None
        self._ask_meta.clear()
        self._dyn_ask = None

    def _next_seed(self) -> int:
        seed = self.rng_seed + self._seeds_drawn
        self._seeds_drawn += 1
        return seed

    # -- argument resolution ----------------------------------------------------

    def _new_activation(
        self, cmd: CommandSpec, text: str, tokens: list[str], parent
    ) -> Activation:
        self._activations += 1
        prefix = "%s#%d" % (cmd.id, self._activations)
        matched = first_match(cmd, tokens)
        record = Activation(
            cmd=cmd,
            prefix=prefix,
            utterance=text,
            tokens=list(tokens),
            novel=matched is None,
            parent=parent,
            spans=dict(matched[1]) if matched else {},
        )
        return record

    def _prebind(self, record: Activation, frame) -> None:
        for slot, span in record.spans.items():
            spec = record.cmd.argument_types[slot]
            kind, payload = self._resolve_slot_text(record, slot, spec, span)
            if kind == "bound":
                value, source = payload
                frame.bind(slot, value)
                record.sources[slot] = source
            elif kind == "convert":
                record.pending[slot] = payload

    def _resolve_slot_text(
        self, record: Activation, slot: str, spec: ArgSpec, text: str
    ):
        """One slot against one piece of text: ("bound", (value, source)),
        ("convert", PendingConversion), or ("miss", None)."""
        token = text.strip()
        if spec.options:
            label = self._match_option(record, slot, spec.options, token)
            if label is None:
                return "miss", None
            value = TextV(label)
            return "bound", (value, LiteralSrc(value))
        literal = spec.type.parse_literal(token)
        if literal is not None and spec.type.matches(literal):
            return "bound", (literal, LiteralSrc(literal))
        value = resolve_reference(token, self.env)
        if value is not None:
            source = self._reference_source(token, value)
            if spec.type.matches(value):
                return "bound", (value, source)
            plan = plan_conversion(spec.type, value)
            if plan is not None:
                return "convert", PendingConversion(plan, value, source)
        return "miss", None

    def _match_option(
        self, record: Activation, slot: str, options: tuple[str, ...], text: str
    ) -> str | None:
        canon = {" ".join(tokenize(label)): label for label in options}
        key = " ".join(tokenize(text))
        if key in canon:
            return canon[key]
        answer_tokens = tokenize(text)
        for phrase, label in self.synonyms.for_slot(record.cmd.id, slot).items():
            if label not in options:
                continue
            needle = phrase.split()
            if _contains_run(answer_tokens, needle) or _contains_run(record.tokens, needle):
                return label
        return None

    def _learn_option_phrase(self, record: Activation, slot: str, label: str) -> None:
        run = _label_overlap_run(record.tokens, label)
        if not run:
            return
        phrase = " ".join(run)
        if phrase == " ".join(tokenize(label)):
            return
        self.synonyms.record(record.cmd.id, slot, phrase, label)

    def _reference_source(self, token: str, value: Value) -> ArgSource:
        name = normalize_name(token)
        if self.env.lookup(NamedRef(name)) is not None:
            return VarRefSrc(name)
        if is_pronoun(token) and self.env.history:
            source = self.ast.source_for_history(len(self.env.history))
            if source is not None:
                return source
        return LiteralSrc(value)

    def _conversion_source(
        self, pc: PendingConversion, choice: str | None, converted: Value
    ) -> ArgSource:
        # A column choice is semantically a column-selection call, so the
        # script shows the selection rather than inlining the data.
        if choice is not None and "get_column" in self.registry.commands:
            if isinstance(pc.source, (VarRefSrc, HistoryRefSrc, NestedSrc)):
                col_cmd = self.registry.get("get_column")
                node = build_ast_node(
                    col_cmd, [LiteralSrc(TextV(choice)), pc.source]
                )
                return NestedSrc(node)
        return LiteralSrc(converted)

    # -- state construction -------------------------------------------------------

    def _build_states(self, record: Activation) -> tuple[list[StateNode], str]:
        cmd = record.cmd
        p = record.prefix
        slots = list(cmd.slots)
        exec_id = p + "/exec"
        states = []

        def next_id(i: int) -> str:
            return p + "/check/" + slots[i + 1] if i + 1 < len(slots) else exec_id

        for i, slot in enumerate(slots):
            spec = cmd.argument_types[slot]
            check_id = p + "/check/" + slot
            ask_id = p + "/ask/" + slot
            gate_id = p + "/gate/" + slot
            choice_id = p + "/choice/" + slot
            bind_id = p + "/bind/" + slot
            after = next_id(i)

            states.append(StateNode(
                check_id,
                self._make_check(record, slot, ask_id, gate_id, after),
            ))
            states.append(StateNode(
                ask_id,
                self._make_answer(record, slot, spec, gate_id, bind_id, after),
                prompt=spec.question_for(slot),
                expects_input=True,
            ))
            self._ask_meta[ask_id] = (spec.type.name, spec.options)
            states.append(StateNode(
                gate_id,
                self._make_gate(record, slot, spec, ask_id, choice_id, after),
            ))
            states.append(StateNode(
                choice_id,
                self._make_choice(record, slot, spec, after),
            ))
            states.append(StateNode(
                bind_id,
                self._make_bind(record, slot, spec, ask_id, after),
            ))

        states.append(StateNode(exec_id, self._make_exec(record)))
        start = p + "/check/" + slots[0] if slots else exec_id
        return states, start

    def _make_check(self, record, slot, ask_id, gate_id, after):
        def step(ctx, _text):
            if ctx.scope.lookup_local(slot) is not None:
                return Goto(after)
            if slot in record.pending:
                return Goto(gate_id)
            if record.prelude_pending:
                record.prelude_pending = False
                if record.cmd.confirm:
                    ctx.emit(Say("Sure, I can %s." % record.cmd.confirm))
            return Goto(ask_id)
        return step

    def _make_answer(self, record, slot, spec, gate_id, bind_id, after):
        def step(ctx, text):
            kind, payload = self._resolve_slot_text(record, slot, spec, text)
            if kind == "bound":
                value, source = payload
                if spec.options:
                    self._learn_option_phrase(record, slot, value.text)
                ctx.scope.bind(slot, value)
                record.sources[slot] = source
                return Goto(after)
            if kind == "convert":
                record.pending[slot] = payload
                return Goto(gate_id)
            if spec.options:
                ctx.emit(Error("Please pick one of: %s." % ", ".join(spec.options)))
                return Suspend(spec.question_for(slot))
            child_start = self._push_child(ctx, record, slot, text, bind_id)
            if child_start is not None:
                return Goto(child_start)
            ctx.emit(Error(
                "I couldn't interpret that as %s %s."
                % (article(spec.type.name), spec.type.name)
            ))
            return Suspend(spec.question_for(slot))
        return step

    def _make_gate(self, record, slot, spec, ask_id, choice_id, after):
        def step(ctx, text):
            pc = record.pending[slot]
            if text is None:
                self._dyn_ask = ("Confirm", ("yes", "no"))
                return Suspend(pc.plan.prompt)
            answer = " ".join(tokenize(text))
            if answer in _YES:
                if pc.plan.converter.needs_choice:
                    for line in pc.plan.converter.describe(pc.value):
                        ctx.emit(Say(line))
                    return Goto(choice_id)
                converted = apply_conversion(pc.plan, None, pc.value)
                del record.pending[slot]
                ctx.scope.bind(slot, converted)
                record.sources[slot] = self._conversion_source(pc, None, converted)
                return Goto(after)
            if answer in _NO:
                del record.pending[slot]
                return Goto(ask_id)
            ctx.emit(Error("Please answer yes or no."))
            self._dyn_ask = ("Confirm", ("yes", "no"))
            return Suspend(pc.plan.prompt)
        return step

    def _make_choice(self, record, slot, spec, after):
        def step(ctx, text):
            pc = record.pending[slot]
            if text is None:
                self._dyn_ask = (spec.type.name, pc.plan.options)
                return Suspend(pc.plan.converter.choice_question)
            answer = text.strip()
            chosen = next(
                (o for o in pc.plan.options if o.casefold() == answer.casefold()),
                None,
            )
            if chosen is None:
                ctx.emit(Error("Please pick one of: %s." % ", ".join(pc.plan.options)))
                self._dyn_ask = (spec.type.name, pc.plan.options)
                return Suspend(pc.plan.converter.choice_question)
            converted = apply_conversion(pc.plan, chosen, pc.value)
            del record.pending[slot]
            ctx.scope.bind(slot, converted)
            record.sources[slot] = self._conversion_source(pc, chosen, converted)
            ctx.emit(Say(pc.plan.converter.ack.format(choice=chosen)))
            return Goto(after)
        return step

    def _make_bind(self, record, slot, spec, ask_id, after):
        def step(ctx, _text):
            value = ctx.take_result()
            child = record.children.get(slot)
            if not spec.type.matches(value):
                ctx.emit(Error(
                    "That gave me %s %s, but I need %s %s."
                    % (
                        article(value.type_name), value.type_name,
                        article(spec.type.name), spec.type.name,
                    )
                ))
                return Goto(ask_id)
            ctx.scope.bind(slot, value)
            if child is not None and child.call_node is not None:
                record.sources[slot] = NestedSrc(child.call_node)
            else:
                record.sources[slot] = LiteralSrc(value)
            return Goto(after)
        return step

    def _make_exec(self, record):
        def step(ctx, _text):
            cmd = record.cmd
            args = {slot: ctx.scope.lookup_local(slot) for slot in cmd.slots}
            kwargs = {}
            seed = None
            if cmd.seeded:
                seed = self._next_seed()
                kwargs["seed"] = seed
            result = cmd.body(*[args[s] for s in cmd.slots], **kwargs)
            hist = self.env.append_history(result)
            sources = [record.sources[s] for s in cmd.slots]
            record.call_node = build_ast_node(cmd, sources, seed)
            if record.parent is None:
                if cmd.id == "save":
                    name = normalize_name(args["name"].text)
                    self.env.bind(name, args["value"])
                    self.ast.record_save(name, record.sources["value"], hist)
                else:
                    self.ast.record_call(record.call_node, hist)
                explanation = cmd.explanation(result, args) if cmd.explanation else None
                ctx.emit(ShowValue(result, explanation or ""))
            else:
                self.ast.record_nested(record.call_node, hist)
                ctx.emit(Say("Sure, I'm using this %s:" % _result_noun(result)))
                ctx.emit(Say(render_block(result)))
            self._finish_learning(record)
            self.last_command = cmd.id
            return Done(result)
        return step

    def _push_child(self, ctx, record, slot, text, bind_id) -> str | None:
        tokens = tokenize(text)
        cmd_id = predict_topk(self.intent, text, 1)[0][0]
        child_cmd = self.registry.get(cmd_id)
        if first_match(child_cmd, tokens) is None:
            return None
        child = self._new_activation(child_cmd, text, tokens, parent=(record, slot))
        states, start = self._build_states(child)
        self._machine.with_scope(states)
        self._machine.set_transition(child.prefix + "/exec", DONE_LABEL, bind_id)
        self._prebind(child, self._machine.scope_stack[-1])
        child.prelude_pending = bool(child.sources or child.pending)
        record.children[slot] = child
        return start

    # -- learning --------------------------------------------------------------

    def _finish_learning(self, record: Activation) -> None:
        if not record.novel:
            return
        resolved = {}
        for slot, source in record.sources.items():
            span = _surface_form(source)
            if span and _contains_run(record.tokens, tokenize(span)):
                resolved[slot] = span
        self.registry.learn(record.cmd.id, record.tokens, resolved)
        self.intent = add_example(
            self.store, record.utterance, record.cmd.id, self.store.command_ids()
        )

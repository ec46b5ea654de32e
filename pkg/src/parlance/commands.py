"""Command definitions: native functions annotated with conversational
metadata, plus word-by-word template matching for pulling argument spans out
of a request and template learning from requests that worked.

Matching aligns a template against the tokenized utterance. Literal words
must match exactly; each slot captures a nonempty contiguous span. Because
every alignment consumes the whole utterance, the total captured length is
fixed, so the tie-break that matters is giving earlier slots the shortest
feasible spans; a shortest-first search returns exactly that alignment.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import UnknownCommand
from .tokenizer import slot_name, tokenize
from .types import ConvType, Direct, parse_input
from .values import Value

_SLOT_PATTERN = re.compile(r"\{([a-z0-9_]+)\}")

SPAN_CAP = 6  # max tokens one slot may capture; bounds alignment search


@dataclass(frozen=True)
class Lit:
    word: str


@dataclass(frozen=True)
class Slot:
    name: str


TemplateToken = Lit | Slot


@dataclass(frozen=True)
class Template:
    tokens: tuple[TemplateToken, ...]
    origin: str = "authored"  # authored | learned

    @property
    def slot_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tokens if isinstance(t, Slot))

    def has_adjacent_slots(self) -> bool:
        return any(
            isinstance(a, Slot) and isinstance(b, Slot)
            for a, b in zip(self.tokens, self.tokens[1:])
        )

    def render(self) -> str:
        return " ".join(
            "{%s}" % t.name if isinstance(t, Slot) else t.word for t in self.tokens
        )


def parse_template(text: str, origin: str = "authored") -> Template:
    tokens: list[TemplateToken] = []
    seen: set[str] = set()
    for word in tokenize(text):
        name = slot_name(word)
        if name is None:
            tokens.append(Lit(word))
            continue
        if name in seen:
            raise ValueError(f"slot {{{name}}} repeats within template {text!r}")
        seen.add(name)
        tokens.append(Slot(name))
    if not tokens:
        raise ValueError("empty template")
    return Template(tuple(tokens), origin)


def match_template(tpl: Template, utterance: Sequence[str]) -> dict[str, str] | None:
    """Align template against tokens; None is NoMatch.

    Shortest-first search over slot spans (capped at SPAN_CAP) yields the
    alignment whose earlier slots are as short as feasible.
    """
    tokens = tpl.tokens
    n, m = len(tokens), len(utterance)
    spans: dict[str, str] = {}

    def walk(i: int, j: int) -> bool:
        if i == n:
            return j == m
        tok = tokens[i]
        if isinstance(tok, Lit):
            if j < m and utterance[j] == tok.word:
                return walk(i + 1, j + 1)
            return False
        # every remaining template token consumes at least one word
        longest = min(SPAN_CAP, m - j - (n - i - 1))
        for length in range(1, longest + 1):
            spans[tok.name] = " ".join(utterance[j:j + length])
            if walk(i + 1, j + length):
                return True
        spans.pop(tok.name, None)
        return False

    return dict(spans) if walk(0, 0) else None


@dataclass(frozen=True)
class ArgSpec:
    """One argument slot: its conversational type, an optional question that
    overrides the type's default clarification, and optional fixed option
    labels the interpreter offers (and learns phrasings for)."""

    type: ConvType
    question: str | None = None
    options: tuple[str, ...] = ()

    def question_for(self, name: str) -> str:
        return self.question or self.type.question_for(name)


@dataclass
class CommandSpec:
    """A native action plus the conversational metadata to reach it: a
    titled template, example phrasings, typed slots with questions, a
    user-facing explanation, and the source snippet codegen will emit."""

    id: str
    title: str
    examples: tuple[str, ...]
    argument_types: dict[str, ArgSpec]  # declaration order is body call order
    body: Callable[..., Value]
    help_text: tuple[str, ...] = ()
    explanation: Callable[[Value, dict[str, Value]], str | None] | None = None
    source_snippet: str = ""
    confirm: str = ""
    effectful: bool = False
    seeded: bool = False  # body takes a trailing seed= and must be replayable
    learned: list[Template] = field(default_factory=list)

    def __post_init__(self):
        self.examples = tuple(self.examples)
        self.help_text = tuple(self.help_text)
        title_tpl = parse_template(self.title)
        slots = set(self.argument_types)
        if set(title_tpl.slot_names) != slots:
            raise ValueError(
                f"{self.id}: title slots {title_tpl.slot_names} != "
                f"declared arguments {sorted(slots)}"
            )
        example_tpls = []
        for text in self.examples:
            tpl = parse_template(text)
            extra = set(tpl.slot_names) - slots
            if extra:
                raise ValueError(f"{self.id}: example {text!r} uses unknown {extra}")
            example_tpls.append(tpl)
        self._authored: tuple[Template, ...] = (title_tpl, *example_tpls)

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(self.argument_types)

    def templates(self) -> tuple[Template, ...]:
        return self._authored + tuple(self.learned)

    def question_for(self, slot: str) -> str:
        return self.argument_types[slot].question_for(slot)


def first_match(
    cmd: CommandSpec, utterance: Sequence[str]
) -> tuple[Template, dict[str, str]] | None:
    """First template (authored then learned) that aligns, with its spans."""
    for tpl in cmd.templates():
        spans = match_template(tpl, utterance)
        if spans is not None:
            return tpl, spans
    return None


def extract_arguments(
    cmd: CommandSpec, utterance: Sequence[str], env
) -> dict[str, Value]:
    """Parse the first matching template's spans into values.

    Spans that fail their slot type's parse are dropped; the interpreter
    asks for those instead of erroring.
    """
    matched = first_match(cmd, utterance)
    if matched is None:
        return {}
    _, spans = matched
    resolved: dict[str, Value] = {}
    for slot, span in spans.items():
        got = parse_input(cmd.argument_types[slot].type, span, env)
        if isinstance(got, Direct):
            resolved[slot] = got.value
    return resolved


def learn_template(
    cmd: CommandSpec, utterance: Sequence[str], resolved: dict[str, str]
) -> Template:
    """Generalize a successful request into a reusable template.

    Each resolved span is replaced by its slot, assigned leftmost-first in
    slot declaration order so colliding spans land deterministically. The
    template joins the command's learned set only when it is sound: no two
    slots side by side, not a duplicate, and re-matching the teaching
    utterance reproduces exactly the spans it was taught from. Unsound
    templates are still returned so callers can inspect the rejection.
    """
    words = list(utterance)
    wanted = {
        slot: tokenize(resolved[slot])
        for slot in cmd.slots
        if resolved.get(slot) and tokenize(resolved[slot])
    }
    starts: dict[int, tuple[str, int]] = {}  # start index -> (slot, span length)
    consumed: set[int] = set()
    for slot, span_words in wanted.items():
        for start in range(len(words) - len(span_words) + 1):
            positions = range(start, start + len(span_words))
            if any(p in consumed for p in positions):
                continue
            if [words[p] for p in positions] == span_words:
                starts[start] = (slot, len(span_words))
                consumed.update(positions)
                break
    tokens: list[TemplateToken] = []
    i = 0
    while i < len(words):
        if i in starts:
            slot, length = starts[i]
            tokens.append(Slot(slot))
            i += length
        else:
            tokens.append(Lit(words[i]))
            i += 1
    template = Template(tuple(tokens), origin="learned")
    if template.has_adjacent_slots():
        return template
    if any(template.tokens == t.tokens for t in cmd.templates()):
        return template
    if len(starts) != len(wanted):
        return template
    replay = {slot: " ".join(span_words) for slot, span_words in wanted.items()}
    if match_template(template, words) != replay:
        return template
    cmd.learned.append(template)
    return template


def render_title_hint(cmd: CommandSpec, partial: dict[str, str]) -> str:
    """Title with captured spans shown in braces, unresolved slots left as
    their names; this is the live hint the user sees while typing."""

    def fill(match):
        name = match.group(1)
        if name in partial:
            return "{%s}" % partial[name]
        return match.group(0)

    return _SLOT_PATTERN.sub(fill, cmd.title)


def template_record(cmd_id: str, tpl: Template) -> dict:
    tokens = [
        ["slot", t.name] if isinstance(t, Slot) else ["lit", t.word]
        for t in tpl.tokens
    ]
    return {"command_id": cmd_id, "tokens": tokens, "origin": tpl.origin}


def template_from_record(record: dict) -> tuple[str, Template]:
    tokens = tuple(
        Slot(text) if kind == "slot" else Lit(text)
        for kind, text in record["tokens"]
    )
    return record["command_id"], Template(tokens, record.get("origin", "learned"))


class CommandRegistry:
    """Shipped command set; learned-template updates are serialized here."""

    def __init__(self, commands: Iterable[CommandSpec] = ()):
        self.commands: dict[str, CommandSpec] = {}
        self._lock = threading.Lock()
        for cmd in commands:
            self.register(cmd)

    def register(self, cmd: CommandSpec) -> None:
        if cmd.id in self.commands:
            raise UnknownCommand(f"duplicate command id {cmd.id!r}")
        self.commands[cmd.id] = cmd

    def get(self, cmd_id: str) -> CommandSpec:
        try:
            return self.commands[cmd_id]
        except KeyError:
            raise UnknownCommand(f"no command {cmd_id!r}") from None

    def __iter__(self):
        return iter(self.commands.values())

    def __len__(self):
        return len(self.commands)

    def learn(
        self, cmd_id: str, utterance: Sequence[str], resolved: dict[str, str]
    ) -> Template:
        with self._lock:
            return learn_template(self.get(cmd_id), utterance, resolved)

    def learned_records(self) -> list[dict]:
        with self._lock:
            return [
                template_record(cmd.id, tpl)
                for cmd in self
                for tpl in cmd.learned
            ]

    def load_learned_records(self, records: Iterable[dict]) -> None:
        with self._lock:
            for record in records:
                cmd_id, tpl = template_from_record(record)
                cmd = self.get(cmd_id)
                if not any(tpl.tokens == t.tokens for t in cmd.templates()):
                    cmd.learned.append(tpl)

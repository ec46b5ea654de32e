"""Conversational types: deciding whether a value fits an argument slot,
parsing user text into values, asking clarification questions, and bridging
mismatched types through short converter dialogues.

Each type carries its own literal grammar. When a literal fails, the text is
tried as a variable name and then as a pronoun; a reference that resolves to
a value of the wrong type is not a parse, but the interpreter may still offer
a conversion for it (say, pulling a numeric column out of a collection to
stand in for an array).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import BadChoice
from .values import (
    ArrayV,
    CollectionV,
    IntV,
    MetricV,
    ModelV,
    NamedRef,
    NumericColumn,
    PlotV,
    PronounRef,
    RealV,
    TextV,
    Value,
    is_pronoun,
    normalize_name,
    string_list_block,
)


@dataclass(frozen=True)
class Direct:
    """Text parsed straight into a value of the requested type."""

    value: Value


class NoParse:
    """Parse miss; the caller may treat the text as a nested command."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "NoParse"


NO_PARSE = NoParse()


@dataclass(frozen=True)
class Converter:
    """Bridges one source type to a target type through dialogue.

    `question` gates the conversion (yes/no). When `needs_choice`, the user
    then picks a label from `choices(value)` after seeing `describe(value)`.
    """

    accepts: str
    question: str
    apply: Callable[[Value, str | None], Value]
    needs_choice: bool = False
    choices: Callable[[Value], list[str]] = lambda value: []
    describe: Callable[[Value], list[str]] = lambda value: []
    choice_question: str = ""
    ack: str = "Great, I'm using {choice}"


@dataclass(frozen=True)
class ConversionPlan:
    converter: Converter
    prompt: str
    options: tuple[str, ...]


@dataclass(frozen=True)
class ConvType:
    """A conversational type: match predicate, literal grammar, clarification
    question template ({name} hole), and converters accepting other types."""

    name: str
    matches: Callable[[Value], bool]
    parse_literal: Callable[[str], Value | None]
    question: str
    converters: tuple[Converter, ...] = ()

    def question_for(self, arg_name: str) -> str:
        return self.question.format(name=arg_name)


def article(noun: str) -> str:
    return "an" if noun[:1].lower() in "aeiou" else "a"


def resolve_reference(text: str, env) -> Value | None:
    """Resolve text as a bound variable name, then as a pronoun."""
    token = text.strip()
    if not token:
        return None
    name = normalize_name(token)
    value = env.lookup(NamedRef(name))
    if value is not None:
        return value
    if is_pronoun(token):
        return env.lookup(PronounRef())
    return None


def parse_input(t: ConvType, text: str, env) -> Direct | NoParse:
    """Literal of the type, else a reference whose value already matches."""
    token = text.strip()
    literal = t.parse_literal(token)
    if literal is not None and t.matches(literal):
        return Direct(literal)
    value = resolve_reference(token, env)
    if value is not None and t.matches(value):
        return Direct(value)
    return NO_PARSE


def plan_conversion(t: ConvType, value: Value) -> ConversionPlan | None:
    """First declared converter accepting the value's type, or None.

    A choice converter with nothing to offer (say, a collection with no
    numeric columns) also yields None; there is no conversation to have.
    """
    for converter in t.converters:
        if converter.accepts != value.type_name:
            continue
        options: tuple[str, ...] = ()
        if converter.needs_choice:
            options = tuple(converter.choices(value))
            if not options:
                return None
        prompt = (
            f"I need {article(t.name)} {t.name} but you've given me "
            f"{article(value.type_name)} {value.type_name}. {converter.question}"
        )
        return ConversionPlan(converter, prompt, options)
    return None


def apply_conversion(plan: ConversionPlan, choice: str | None, value: Value) -> Value:
    if plan.converter.needs_choice:
        if choice not in plan.options:
            raise BadChoice(f"{choice!r} is not one of {list(plan.options)}")
        return plan.converter.apply(value, choice)
    return plan.converter.apply(value, None)


# -- literal grammars ---------------------------------------------------------

_INT_RE = re.compile(r"^[+-]?\d+$")
_REAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)$")


def parse_number_literal(text: str) -> Value | None:
    if _INT_RE.match(text):
        return IntV(int(text))
    if _REAL_RE.match(text):
        return RealV(float(text))
    return None


def parse_array_literal(text: str) -> Value | None:
    if not (text.startswith("[") and text.endswith("]")):
        return None
    inner = text[1:-1].strip()
    if not inner:
        return ArrayV(())
    parts = re.split(r"[,\s]+", inner)
    values = []
    for part in parts:
        if not (_INT_RE.match(part) or _REAL_RE.match(part)):
            return None
        values.append(float(part))
    return ArrayV(tuple(values))


def parse_text_literal(text: str) -> Value | None:
    return TextV(text) if text else None


def no_literal(text: str) -> Value | None:
    return None


# -- converters ---------------------------------------------------------------


def _numeric_column_names(value: Value) -> list[str]:
    return list(value.collection.numeric_names)


def _describe_columns(value: Value) -> list[str]:
    return [
        "Here are the columns in that collection:",
        string_list_block(value.collection.names),
    ]


def _column_as_array(value: Value, choice: str | None) -> Value:
    column = value.collection.column(choice)
    if not isinstance(column, NumericColumn):
        raise BadChoice(f"{choice!r} is not a numeric column")
    return ArrayV(column.values)


COLLECTION_TO_ARRAY = Converter(
    accepts="Collection",
    question="Would you like to use a column from the Collection as an array?",
    apply=_column_as_array,
    needs_choice=True,
    choices=_numeric_column_names,
    describe=_describe_columns,
    choice_question="Which column would you like to select to use as an array?",
)


# -- built-in types -----------------------------------------------------------

INT = ConvType(
    name="Int",
    matches=lambda v: isinstance(v, (IntV, RealV)),
    parse_literal=parse_number_literal,
    question="What number would you like to use for {name}?",
)

STRING = ConvType(
    name="String",
    matches=lambda v: isinstance(v, TextV),
    parse_literal=parse_text_literal,
    question="What would you like to use for {name}?",
)

ARRAY = ConvType(
    name="Array",
    matches=lambda v: isinstance(v, ArrayV),
    parse_literal=parse_array_literal,
    question="What is the array you want to analyze?",
    converters=(COLLECTION_TO_ARRAY,),
)

COLLECTION = ConvType(
    name="Collection",
    matches=lambda v: isinstance(v, CollectionV),
    parse_literal=no_literal,
    question="Which collection would you like to use for {name}?",
)

MODEL = ConvType(
    name="Model",
    matches=lambda v: isinstance(v, ModelV),
    parse_literal=no_literal,
    question="Which model should I use for {name}?",
)

METRIC = ConvType(
    name="Metric",
    matches=lambda v: isinstance(v, MetricV),
    parse_literal=no_literal,
    question="Which result should I use for {name}?",
)

PLOT = ConvType(
    name="Plot",
    matches=lambda v: isinstance(v, PlotV),
    parse_literal=no_literal,
    question="Which plot should I use for {name}?",
)

REGISTRY: dict[str, ConvType] = {
    t.name: t for t in (INT, STRING, ARRAY, COLLECTION, MODEL, METRIC, PLOT)
}

# internal slot type for commands that accept any prior result; deliberately
# outside the registry, reachable only by reference, never by literal
ANY = ConvType(
    name="Any",
    matches=lambda v: True,
    parse_literal=no_literal,
    question="Which value would you like to use for {name}?",
)

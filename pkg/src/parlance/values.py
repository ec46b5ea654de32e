"""Runtime value universe, columnar collections, and session environments.

Values are immutable after construction and safe to share; an Environment is
confined to a single session and mutates only by rebinding in that session's
turn loop.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidName

PRONOUNS = frozenset({"that", "this", "those", "these", "it"})

_IDENT_RE = re.compile(r"^\S+$")


# ---------------------------------------------------------------------------
# Columns and collections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericColumn:
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class TextColumn:
    values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(str(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)


Column = NumericColumn | TextColumn


@dataclass(frozen=True)
class Collection:
    """Named, equal-length columns in declaration order."""

    columns: tuple[tuple[str, Column], ...]

    def __post_init__(self):
        names = [name for name, _ in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("column names must be unique")
        if any(not name for name in names):
            raise ValueError("column names must be non-empty")
        lengths = {len(col) for _, col in self.columns}
        if len(lengths) > 1:
            raise ValueError("columns must have equal length, got %s" % sorted(lengths))

    @classmethod
    def of(cls, columns: Mapping[str, Sequence[float]] | Iterable[tuple[str, Column]]) -> "Collection":
        """Build a collection from name -> column pairs.

        Plain sequences are typed numeric when every cell is a number,
        otherwise text.
        """
        pairs = columns.items() if isinstance(columns, Mapping) else columns
        built = []
        for name, col in pairs:
            if isinstance(col, (NumericColumn, TextColumn)):
                built.append((name, col))
            elif all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in col):
                built.append((name, NumericColumn(tuple(col))))
            else:
                built.append((name, TextColumn(tuple(str(v) for v in col))))
        return cls(tuple(built))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.columns[0][1]) if self.columns else 0

    def column(self, name: str) -> Column | None:
        """Return the named column, or None when absent (a Miss)."""
        for cname, col in self.columns:
            if cname == name:
                return col
        return None

    @property
    def numeric_names(self) -> tuple[str, ...]:
        return tuple(n for n, c in self.columns if isinstance(c, NumericColumn))

    @property
    def text_names(self) -> tuple[str, ...]:
        return tuple(n for n, c in self.columns if isinstance(c, TextColumn))

    def take_rows(self, indices: Sequence[int]) -> "Collection":
        """New collection with the given rows, order preserved."""
        return Collection(tuple(
            (name, type(col)(tuple(col.values[i] for i in indices)))
            for name, col in self.columns
        ))


# ---------------------------------------------------------------------------
# Model and plot payloads
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelRef:
    """Handle to a (possibly untrained) model; prediction requires trained."""

    kind: str  # "logistic_classifier" | "linear_regressor"
    trained: bool = False
    feature_names: tuple[str, ...] = ()
    classes: tuple[str, ...] = ()
    weights: tuple[tuple[float, ...], ...] = ()  # per class, per feature
    bias: tuple[float, ...] = ()
    feature_means: tuple[float, ...] = ()
    feature_scales: tuple[float, ...] = ()
    seed: int = 0


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    categories: tuple[str, ...]
    values: tuple[float, ...]
    title: str = ""
    x_label: str = ""
    y_label: str = ""

    def __post_init__(self):
        if len(self.categories) != len(self.values):
            raise ValueError("categories and values must have equal length")


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

class Value:
    """Base for all runtime values; every variant reports one type name."""

    type_name: str = "Unit"


@dataclass(frozen=True)
class IntV(Value):
    value: int
    type_name: str = field(default="Int", init=False, repr=False)


@dataclass(frozen=True)
class RealV(Value):
    value: float
    type_name: str = field(default="Real", init=False, repr=False)


@dataclass(frozen=True)
class TextV(Value):
    text: str
    type_name: str = field(default="String", init=False, repr=False)


@dataclass(frozen=True)
class ArrayV(Value):
    values: tuple[float, ...]
    type_name: str = field(default="Array", init=False, repr=False)

    def __post_init__(self):
        coerced = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) for v in coerced):
            raise ValueError("arrays admit only finite reals")
        object.__setattr__(self, "values", coerced)


@dataclass(frozen=True)
class CollectionV(Value):
    collection: Collection
    type_name: str = field(default="Collection", init=False, repr=False)


@dataclass(frozen=True)
class ModelV(Value):
    model: ModelRef
    type_name: str = field(default="Model", init=False, repr=False)


@dataclass(frozen=True)
class MetricV(Value):
    """Label -> real map, ordered for display."""

    entries: tuple[tuple[str, float], ...]
    type_name: str = field(default="Metric", init=False, repr=False)

    @classmethod
    def of(cls, mapping: Mapping[str, float] | Iterable[tuple[str, float]]) -> "MetricV":
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple((str(k), float(v)) for k, v in pairs))

    def get(self, label: str) -> float | None:
        for k, v in self.entries:
            if k == label:
                return v
        return None

    def as_dict(self) -> dict[str, float]:
        return dict(self.entries)


@dataclass(frozen=True)
class PlotV(Value):
    spec: PlotSpec
    type_name: str = field(default="Plot", init=False, repr=False)


@dataclass(frozen=True)
class UnitV(Value):
    type_name: str = field(default="Unit", init=False, repr=False)


# ---------------------------------------------------------------------------
# References and the environment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NamedRef:
    name: str


@dataclass(frozen=True)
class PronounRef:
    pass


Reference = NamedRef | PronounRef


def is_pronoun(token: str) -> bool:
    return token.lower() in PRONOUNS


def normalize_name(phrase: str) -> str:
    """Lowercase a user phrase and replace internal whitespace with underscores."""
    return "_".join(phrase.lower().split())


class Environment:
    """Named variables plus the append-only history of command results."""

    def __init__(self):
        self.bindings: dict[str, Value] = {}
        self.history: list[tuple[int, Value]] = []

    def bind(self, name: str, value: Value) -> None:
        if not name or not _IDENT_RE.match(name):
            raise InvalidName(f"invalid variable name: {name!r}")
        self.bindings[name] = value

    def lookup(self, ref: Reference) -> Value | None:
        """Resolve a reference; None is a Miss consumed by type parsing."""
        if isinstance(ref, NamedRef):
            return self.bindings.get(ref.name)
        if self.history:
            return self.history[-1][1]
        return None

    def append_history(self, value: Value) -> int:
        """Record a command result; returns its 1-based turn index."""
        index = len(self.history) + 1
        self.history.append((index, value))
        return index

    def snapshot(self) -> tuple[dict[str, Value], list[tuple[int, Value]]]:
        return dict(self.bindings), list(self.history)

    def restore(self, snap: tuple[dict[str, Value], list[tuple[int, Value]]]) -> None:
        self.bindings, self.history = dict(snap[0]), list(snap[1])


# ---------------------------------------------------------------------------
# Display helpers
# ---------------------------------------------------------------------------

def render_block(v: Value) -> str:
    """Chat-window body for a value, numpy-style where the data is numeric."""
    if isinstance(v, ArrayV):
        return np.array2string(np.asarray(v.values), threshold=7)
    if isinstance(v, CollectionV):
        return f"<Collection: [{', '.join(v.collection.names)}]>"
    if isinstance(v, MetricV):
        return "{" + ", ".join(f"{k}: {val:g}" for k, val in v.entries) + "}"
    if isinstance(v, ModelV):
        state = "trained" if v.model.trained else "untrained"
        return f"<Model: {v.model.kind}, {state}>"
    if isinstance(v, PlotV):
        return f"<Plot: {v.spec.kind} with {len(v.spec.categories)} bars>"
    if isinstance(v, TextV):
        return v.text
    if isinstance(v, (IntV, RealV)):
        return format_number(v.value)
    return "()"


def short_preview(v: Value, limit: int = 5) -> str:
    """Sidebar preview: first few elements/rows plus shape."""
    if isinstance(v, ArrayV):
        head = ", ".join(format_number(x) for x in v.values[:limit])
        more = ", …" if len(v.values) > limit else ""
        return f"[{head}{more}] (n={len(v.values)})"
    if isinstance(v, CollectionV):
        c = v.collection
        return f"<Collection: [{', '.join(c.names)}]> ({c.n_rows} rows)"
    if isinstance(v, TextV):
        return v.text if len(v.text) <= 40 else v.text[:37] + "..."
    return render_block(v)


def format_number(x: float | int) -> str:
    if isinstance(x, int):
        return str(x)
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:g}"


def string_list_block(items: Sequence[str]) -> str:
    """Numpy-style rendering of a string array: ['post' 'score' 'category']."""
    return "[" + " ".join(f"'{s}'" for s in items) + "]"


def coerce_value(obj) -> Value:
    """Lift a plain Python object (as produced by an exported script) into a
    Value, for comparing script runs against live conversation results."""
    if obj is None:
        return UnitV()
    if isinstance(obj, Value):
        return obj
    if isinstance(obj, bool):
        return IntV(int(obj))
    if isinstance(obj, int):
        return IntV(obj)
    if isinstance(obj, float):
        return RealV(obj)
    if isinstance(obj, str):
        return TextV(obj)
    if isinstance(obj, np.ndarray):
        return ArrayV(tuple(float(x) for x in obj))
    if isinstance(obj, (list, tuple)):
        return ArrayV(tuple(float(x) for x in obj))
    if isinstance(obj, Mapping):
        if obj and all(isinstance(v, (int, float)) for v in obj.values()):
            return MetricV.of(obj)
        return CollectionV(Collection.of(obj))
    raise ValueError(f"cannot lift {type(obj).__name__} into a value")

"""CSV ingestion, row filtering, and lexicon word counts."""

import csv
import math
import operator
from dataclasses import dataclass

from ..errors import (
    EmptyHeader,
    EmptyLexicon,
    IoFailure,
    MalformedData,
    TypeMismatch,
    UnknownColumn,
)
from ..tokenizer import tokenize
from ..values import Collection, NumericColumn, TextColumn

_COMPARATORS = {
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}

_EQUALITY = ("==", "!=")


def _parse_real(cell):
    # float() is more liberal than CSV numerals: it takes underscores and
    # padding, which should stay text.
    if "_" in cell or cell != cell.strip() or not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load_csv(path):
    """Parse a headered CSV into a collection, typing columns by content."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as err:
        raise IoFailure("I could not read '%s': %s." % (path, err.strerror or err))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise EmptyHeader("The CSV file needs a header row.")
    header = [cell.strip() for cell in rows[0]]
    if any(not name for name in header):
        raise EmptyHeader("Every header cell needs a name.")
    body = rows[1:]
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise MalformedData(
                "Row %d has %d cells but the header has %d."
                % (i + 2, len(row), len(header))
            )
    columns = []
    for j, name in enumerate(header):
        cells = [row[j] for row in body]
        numbers = [_parse_real(cell) for cell in cells]
        if numbers and all(v is not None for v in numbers):
            columns.append((name, NumericColumn(tuple(numbers))))
        else:
            columns.append((name, TextColumn(tuple(cells))))
    try:
        return Collection(tuple(columns))
    except ValueError as err:
        raise MalformedData("Bad CSV header: %s." % err)


def filter_rows(collection, col, cmp, value):
    """Keep the rows where `col cmp value` holds, all columns row-aligned."""
    if cmp not in _COMPARATORS:
        raise ValueError("unknown comparator: %r" % (cmp,))
    column = collection.column(col)
    if column is None:
        raise UnknownColumn("There is no column named '%s'." % col)
    if isinstance(column, NumericColumn):
        if isinstance(value, str):
            parsed = _parse_real(value)
            if parsed is None:
                raise TypeMismatch("'%s' is not a number." % value)
            value = parsed
        value = float(value)
    else:
        if cmp not in _EQUALITY:
            raise TypeMismatch(
                "I can only compare the text column '%s' with == or !=." % col
            )
        value = str(value)
    test = _COMPARATORS[cmp]
    kept = [i for i, cell in enumerate(column.values) if test(cell, value)]
    return collection.take_rows(kept)


@dataclass(frozen=True)
class Lexicon:
    """Word sets per category, in declaration order."""

    categories: tuple[tuple[str, frozenset[str]], ...]

    @classmethod
    def of(cls, mapping):
        return cls(tuple((name, frozenset(words)) for name, words in mapping.items()))

    @property
    def category_names(self):
        return tuple(name for name, _ in self.categories)

    def words_for(self, name):
        for cname, words in self.categories:
            if cname == name:
                return words
        return frozenset()

    def as_collection(self):
        """Two text columns (category, word), one row per entry."""
        cats = []
        words = []
        for name, wordset in self.categories:
            for word in sorted(wordset):
                cats.append(name)
                words.append(word)
        return Collection.of({"category": cats, "word": words})

    @classmethod
    def from_collection(cls, collection):
        cat_col = collection.column("category")
        word_col = collection.column("word")
        if not isinstance(cat_col, TextColumn) or not isinstance(word_col, TextColumn):
            raise MalformedData(
                "A lexicon collection needs text columns 'category' and 'word'."
            )
        grouped: dict[str, set[str]] = {}
        for cat, word in zip(cat_col.values, word_col.values):
            grouped.setdefault(cat, set()).add(word)
        return cls.of(grouped)


def load_lexicon(path):
    """Read a line-delimited `category<TAB>word` file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as err:
        raise IoFailure("I could not read '%s': %s." % (path, err.strerror or err))
    grouped: dict[str, set[str]] = {}
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        if "\t" not in line:
            raise MalformedData(
                "Line %d must look like 'category<TAB>word'." % (i + 1)
            )
        category, word = line.split("\t", 1)
        grouped.setdefault(category.strip(), set()).add(word.strip())
    if not grouped:
        raise EmptyLexicon("The lexicon file has no entries.")
    return Lexicon.of(grouped)


def lexicon_counts(documents, lexicon):
    """One numeric column per category; cells count matching tokens per doc."""
    if not lexicon.categories:
        raise EmptyLexicon("The lexicon has no categories.")
    tokenized = [tokenize(doc) for doc in documents]
    columns = []
    for name, words in lexicon.categories:
        counts = [float(sum(1 for tok in toks if tok in words)) for toks in tokenized]
        columns.append((name, NumericColumn(tuple(counts))))
    return Collection(tuple(columns))

"""The shipped command registry: data ingestion, selection, statistics,
lexicon analysis, modeling, and plotting.

Each command couples a native body (operating on Values) with the
conversational metadata the interpreter needs: a titled template, example
phrasings, typed slots with clarification questions, a result explanation,
and the source snippet emitted on script export. Snippets for the
arithmetic commands mirror their bodies operation for operation so an
exported script reproduces the live result bit for bit; the heavier
statistical snippets lean on scipy and sklearn instead, which is where
these commands came from in the first place.
"""

from ..commands import ArgSpec, CommandRegistry, CommandSpec
from ..errors import CommandError, TypeMismatch, UnknownColumn
from ..values import (
    ArrayV,
    Collection,
    CollectionV,
    IntV,
    MetricV,
    ModelRef,
    ModelV,
    NumericColumn,
    PlotV,
    RealV,
    TextColumn,
    TextV,
    format_number,
    normalize_name,
    string_list_block,
)
from ..types import ANY, ARRAY, COLLECTION, INT, MODEL, STRING
from . import ml, plots, randoms, stats, tabular

DEFAULT_MODEL_SEED = 13
SIGNIFICANCE_ALPHA = 0.05

MANN_WHITNEY_LABEL = "Mann-Whitney U"
WELCH_LABEL = "Welch t-test"

_LIWC_STYLE_CATEGORIES = (
    ("swear", ("damn", "hell", "crap", "shit", "fuck", "bloody", "bastard", "idiot")),
    ("negemo", ("bad", "hate", "awful", "terrible", "wrong", "stupid", "worse", "angry", "fear", "ugly")),
    ("sexual", ("sex", "sexual", "naked", "porn", "kiss", "horny")),
    ("i", ("i", "me", "my", "mine", "myself", "im")),
    ("past", ("was", "were", "had", "did", "done", "said", "went", "got", "made")),
    ("posemo", ("good", "love", "nice", "great", "happy", "best", "wonderful", "glad")),
    ("certain", ("always", "never", "absolutely", "certainly", "definitely", "totally", "obviously", "undeniable")),
)


def builtin_lexicon():
    """The small lexicon shipped for the built-in word-count analysis."""
    return tabular.Lexicon(
        tuple((name, frozenset(words)) for name, words in _LIWC_STYLE_CATEGORIES)
    )


# --- value unwrapping --------------------------------------------------

def _floats(value):
    return list(value.values)


def _number(value):
    return float(value.value)


def _whole(value):
    raw = value.value
    n = int(raw)
    if isinstance(raw, float) and raw != n:
        raise CommandError("I need a whole number here.")
    return n


def _text(value):
    return value.text


def _rows(value):
    return value.collection


def _first_text_column(collection):
    for name in collection.text_names:
        return collection.column(name)
    raise TypeMismatch("I need a collection with a text column of documents.")


def _metric(result, label):
    return format_number(round(result.get(label), 4))


def _shared_numeric_names(a, b):
    return [n for n in a.numeric_names if n in b.numeric_names]


# --- bodies ------------------------------------------------------------

def _load_csv(path):
    return CollectionV(tabular.load_csv(_text(path)))


def _load_lexicon(path):
    return CollectionV(tabular.load_lexicon(_text(path)).as_collection())


def _list_columns(collection):
    return TextV(string_list_block(_rows(collection).names))


def _get_column(column, collection):
    name = _text(column)
    col = _rows(collection).column(name)
    if col is None:
        raise UnknownColumn("There is no column named '%s'." % name)
    if isinstance(col, NumericColumn):
        return ArrayV(col.values)
    return CollectionV(Collection(((name, col),)))


def _select_columns(columns, collection):
    data = _rows(collection)
    wanted = _text(columns).split()
    missing = [n for n in wanted if data.column(n) is None]
    if missing:
        raise UnknownColumn(
            "There is no column named %s." % ", ".join("'%s'" % n for n in missing)
        )
    return CollectionV(Collection(tuple((n, data.column(n)) for n in wanted)))


def _filter_below(collection, column, value):
    return CollectionV(
        tabular.filter_rows(_rows(collection), _text(column), "<", _number(value))
    )


def _filter_above(collection, column, value):
    return CollectionV(
        tabular.filter_rows(_rows(collection), _text(column), ">", _number(value))
    )


def _filter_equals(collection, column, value):
    return CollectionV(
        tabular.filter_rows(_rows(collection), _text(column), "==", _text(value))
    )


def _select_significant(collection):
    data = _rows(collection)
    target = "p_adjusted" if data.column("p_adjusted") is not None else "p"
    if data.column(target) is None:
        raise UnknownColumn("I need a 'p' or 'p_adjusted' column to select by.")
    return CollectionV(tabular.filter_rows(data, target, "<", SIGNIFICANCE_ALPHA))


def _quartiles(array):
    b0, b1, b2, b3, b4 = stats.quartile_bounds(_floats(array))
    return MetricV.of({"b0": b0, "b1": b1, "b2": b2, "b3": b3, "b4": b4})


def _mean(array):
    return RealV(stats.mean(_floats(array)))


def _variance(array):
    return RealV(stats.variance(_floats(array)))


def _log_transform(array):
    return ArrayV(tuple(stats.log_transform(_floats(array))))


def _length(array):
    return IntV(len(array.values))


def _add(x, y):
    if isinstance(x, IntV) and isinstance(y, IntV):
        return IntV(x.value + y.value)
    return RealV(float(x.value) + float(y.value))


def _pearson(x, y):
    r, p = stats.pearson(_floats(x), _floats(y))
    return MetricV.of({"r": r, "p": p})


def _random_array(n, seed=0):
    return ArrayV(tuple(randoms.random_normal(_whole(n), seed)))


def _mann_whitney(x, y):
    u, p = stats.mann_whitney(_floats(x), _floats(y))
    return MetricV.of({"U": u, "p": p})


def _welch(x, y):
    t, p = stats.welch_t_test(_floats(x), _floats(y))
    return MetricV.of({"t": t, "p": p})


def _compare_groups(test, x, y):
    label = _text(test)
    if label == MANN_WHITNEY_LABEL:
        run = stats.mann_whitney
    elif label == WELCH_LABEL:
        run = stats.welch_t_test
    else:
        raise CommandError("I do not know the test '%s'." % label)
    a = _rows(x)
    b = _rows(y)
    names = _shared_numeric_names(a, b)
    if not names:
        raise UnknownColumn("The two collections share no numeric columns.")
    statistics = []
    pvalues = []
    for name in names:
        statistic, p = run(a.column(name).values, b.column(name).values)
        statistics.append(statistic)
        pvalues.append(p)
    return CollectionV(Collection.of({
        "category": names,
        "statistic": statistics,
        "p": pvalues,
    }))


def _holm_correct(pvalues):
    return ArrayV(tuple(stats.holm_correct(_floats(pvalues))))


def _holm_adjust(collection):
    data = _rows(collection)
    col = data.column("p")
    if not isinstance(col, NumericColumn):
        raise UnknownColumn("I need a numeric 'p' column to correct.")
    adjusted = stats.holm_correct(list(col.values))
    kept = [(n, c) for n, c in data.columns if n != "p_adjusted"]
    kept.append(("p_adjusted", NumericColumn(tuple(adjusted))))
    return CollectionV(Collection(tuple(kept)))


def _lexicon_counts(documents, lexicon):
    docs = _first_text_column(_rows(documents))
    lex = tabular.Lexicon.from_collection(_rows(lexicon))
    return CollectionV(tabular.lexicon_counts(docs.values, lex))


def _liwc_analysis(documents):
    docs = _first_text_column(_rows(documents))
    return CollectionV(tabular.lexicon_counts(docs.values, builtin_lexicon()))


def _odds_ratios(a, b):
    left = _rows(a)
    right = _rows(b)
    names = _shared_numeric_names(left, right)
    if not names:
        raise UnknownColumn("The two collections share no numeric columns.")
    a_counts = [sum(left.column(n).values) for n in names]
    b_counts = [sum(right.column(n).values) for n in names]
    ratios = stats.odds_ratio(a_counts, b_counts)
    return CollectionV(Collection.of({"category": names, "odds_ratio": ratios}))


def _plot_bar(collection, title):
    data = _rows(collection)
    text_names = data.text_names
    numeric_names = data.numeric_names
    if not numeric_names:
        raise TypeMismatch("I need at least one numeric column to plot.")
    if text_names:
        categories = list(data.column(text_names[0]).values)
        values = list(data.column(numeric_names[0]).values)
    else:
        # No label column: one bar per numeric column, totalled.
        categories = list(numeric_names)
        values = [sum(data.column(n).values) for n in numeric_names]
    return PlotV(plots.plot_bar(categories, values, _text(title)))


def _create_classifier():
    return ModelV(ModelRef(kind="logistic_classifier", seed=DEFAULT_MODEL_SEED))


def _create_regressor():
    return ModelV(ModelRef(kind="linear_regressor", seed=DEFAULT_MODEL_SEED))


def _training_frame(features, labels):
    data = _rows(features)
    label_name = _text(labels)
    label_col = data.column(label_name)
    if label_col is None:
        raise UnknownColumn("There is no column named '%s'." % label_name)
    labels_list = [str(v) for v in label_col.values]
    feature_cols = tuple(
        (n, c) for n, c in data.columns
        if n != label_name and isinstance(c, NumericColumn)
    )
    return Collection(feature_cols), labels_list


def _train_model(model, features, labels):
    ref = model.model
    if ref.kind != "logistic_classifier":
        raise CommandError("I can only train classification models so far.")
    frame, labels_list = _training_frame(features, labels)
    return ModelV(ml.train_logistic(frame, labels_list, seed=ref.seed))


def _cross_validate(model, features, labels, folds, seed=0):
    frame, labels_list = _training_frame(features, labels)
    scores = ml.cross_validate(
        model.model, frame, labels_list, folds=_whole(folds), seed=seed
    )
    return ArrayV(tuple(scores))


def _model_coefficients(model):
    rows = ml.coefficient_rows(model.model)
    return CollectionV(Collection.of({
        "class": [r[0] for r in rows],
        "feature": [r[1] for r in rows],
        "weight": [r[2] for r in rows],
    }))


def _save(value, name):
    # The interpreter performs the actual binding; returning the value keeps
    # the command sequenceable.
    return value


# --- explanations ------------------------------------------------------

def _explain_quartiles(result, args):
    b = [format_number(result.get(k)) for k in ("b0", "b1", "b2", "b3", "b4")]
    return (
        "Q1 is from %s to %s, Q2 is from %s to %s, Q3 is from %s to %s, "
        "and Q4 is from %s to %s" % (b[0], b[1], b[1], b[2], b[2], b[3], b[3], b[4])
    )


def _explain_pearson(result, args):
    return "Correlation of {} with p-value of {}".format(
        _metric(result, "r"), _metric(result, "p")
    )


def _explain_mann_whitney(result, args):
    return "The Mann-Whitney U is {} with p-value of {}".format(
        _metric(result, "U"), _metric(result, "p")
    )


def _explain_welch(result, args):
    return "The t statistic is {} with p-value of {}".format(
        _metric(result, "t"), _metric(result, "p")
    )


def _explain_compare(result, args):
    n = result.collection.n_rows
    return "I ran %s tests on %d shared columns:" % (_text(args["test"]), n)


def _explain_mean(result, args):
    return "The mean is {}".format(format_number(round(result.value, 4)))


def _explain_variance(result, args):
    return "The variance is {}".format(format_number(round(result.value, 4)))


def _explain_length(result, args):
    return "There are {} values".format(result.value)


def _explain_add(result, args):
    return "That comes to {}".format(format_number(result.value))


def _explain_save(result, args):
    return "Saving as '%s'" % normalize_name(_text(args["name"]))


def _explain_get_column(result, args):
    return "Sure, here is the '%s' column:" % _text(args["column"])


def _explain_select_significant(result, args):
    n = result.collection.n_rows
    return "%d rows are significant at p < %s:" % (n, format_number(SIGNIFICANCE_ALPHA))


def _explain_cross_validate(result, args):
    scores = result.values
    mean_score = sum(scores) / len(scores)
    return "Accuracy by fold; the mean is {}".format(format_number(round(mean_score, 4)))


def _explain_train(result, args):
    ref = result.model
    return "I trained a %s on %d features" % (ref.kind.replace("_", " "), len(ref.feature_names))


def _explain_new_collection(result, args):
    return "Here is the new collection:"


# --- snippets ----------------------------------------------------------

LOAD_CSV_SNIPPET = '''\
def load_csv(path):
    import csv
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    header, body = rows[0], rows[1:]
    data = {}
    for j, name in enumerate(header):
        cells = [row[j] for row in body]
        try:
            data[name] = [float(cell) for cell in cells]
        except ValueError:
            data[name] = cells
    return data
'''

LOAD_LEXICON_SNIPPET = '''\
def load_lexicon(path):
    categories, words = [], []
    with open(path) as handle:
        for line in handle:
            if line.strip():
                category, word = line.rstrip("\\n").split("\\t", 1)
                categories.append(category.strip())
                words.append(word.strip())
    return {"category": categories, "word": words}
'''

LIST_COLUMNS_SNIPPET = '''\
def list_columns(data):
    return list(data)
'''

GET_COLUMN_SNIPPET = '''\
def get_column(column, data):
    return data[column]
'''

SELECT_COLUMNS_SNIPPET = '''\
def select_columns(columns, data):
    return {name: data[name] for name in columns.split()}
'''

FILTER_BELOW_SNIPPET = '''\
def filter_below(data, column, value):
    keep = [i for i, v in enumerate(data[column]) if v < value]
    return {name: [cells[i] for i in keep] for name, cells in data.items()}
'''

FILTER_ABOVE_SNIPPET = '''\
def filter_above(data, column, value):
    keep = [i for i, v in enumerate(data[column]) if v > value]
    return {name: [cells[i] for i in keep] for name, cells in data.items()}
'''

FILTER_EQUALS_SNIPPET = '''\
def filter_equals(data, column, value):
    cells = data[column]
    wanted = float(value) if cells and not isinstance(cells[0], str) else value
    keep = [i for i, v in enumerate(cells) if v == wanted]
    return {name: [col[i] for i in keep] for name, col in data.items()}
'''

SELECT_SIGNIFICANT_SNIPPET = '''\
def select_significant(data, alpha=0.05):
    column = "p_adjusted" if "p_adjusted" in data else "p"
    keep = [i for i, p in enumerate(data[column]) if p < alpha]
    return {name: [cells[i] for i in keep] for name, cells in data.items()}
'''

QUARTILES_SNIPPET = '''\
def quartiles(xs):
    data = sorted(xs)
    n = len(data)
    def interpolate(p):
        h = (n - 1) * p
        lo = int(h)
        hi = min(lo + 1, n - 1)
        return data[lo] + (h - lo) * (data[hi] - data[lo])
    return {"b0": data[0], "b1": interpolate(0.25), "b2": interpolate(0.5),
            "b3": interpolate(0.75), "b4": data[n - 1]}
'''

MEAN_SNIPPET = '''\
def mean(xs):
    return sum(xs) / len(xs)
'''

VARIANCE_SNIPPET = '''\
def variance(xs):
    center = sum(xs) / len(xs)
    return sum((v - center) ** 2 for v in xs) / (len(xs) - 1)
'''

LOG_TRANSFORM_SNIPPET = '''\
def log_transform(xs):
    import math
    return [math.log(v) for v in xs]
'''

LENGTH_SNIPPET = '''\
def length(arr):
    return len(arr)
'''

ADD_SNIPPET = '''\
def add(x, y):
    return x + y
'''

PEARSON_SNIPPET = '''\
def pearson_correlation(x,y):
    from scipy.stats import pearsonr
    return pearsonr(x,y)
'''

RANDOM_ARRAY_SNIPPET = '''\
def random_array(n, seed=0):
    import numpy as np
    return np.random.default_rng(seed).standard_normal(n)
'''

MANN_WHITNEY_SNIPPET = '''\
def mann_whitney(x, y):
    from scipy.stats import mannwhitneyu
    result = mannwhitneyu(x, y, alternative="two-sided")
    u = min(float(result.statistic), len(x) * len(y) - float(result.statistic))
    return {"U": u, "p": float(result.pvalue)}
'''

WELCH_SNIPPET = '''\
def welch_t_test(x, y):
    from scipy.stats import ttest_ind
    result = ttest_ind(x, y, equal_var=False)
    return {"t": float(result.statistic), "p": float(result.pvalue)}
'''

COMPARE_GROUPS_SNIPPET = '''\
def compare_groups(test, x, y):
    from scipy.stats import mannwhitneyu, ttest_ind
    names = [n for n in x if n in y and not isinstance(x[n][0], str)]
    statistics, pvalues = [], []
    for name in names:
        if test == "Welch t-test":
            result = ttest_ind(x[name], y[name], equal_var=False)
            statistics.append(float(result.statistic))
        else:
            result = mannwhitneyu(x[name], y[name], alternative="two-sided")
            statistics.append(min(float(result.statistic),
                                  len(x[name]) * len(y[name]) - float(result.statistic)))
        pvalues.append(float(result.pvalue))
    return {"category": names, "statistic": statistics, "p": pvalues}
'''

HOLM_CORRECT_SNIPPET = '''\
def holm_correct(pvals):
    order = sorted(range(len(pvals)), key=lambda i: pvals[i])
    adjusted = [0.0] * len(pvals)
    running = 0.0
    for j, idx in enumerate(order):
        running = max(running, (len(pvals) - j) * pvals[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted
'''

HOLM_ADJUST_SNIPPET = '''\
def holm_adjust(data):
    pvals = data["p"]
    order = sorted(range(len(pvals)), key=lambda i: pvals[i])
    adjusted = [0.0] * len(pvals)
    running = 0.0
    for j, idx in enumerate(order):
        running = max(running, (len(pvals) - j) * pvals[idx])
        adjusted[idx] = min(1.0, running)
    out = dict(data)
    out["p_adjusted"] = adjusted
    return out
'''

LEXICON_COUNTS_SNIPPET = '''\
def lexicon_counts(documents, lexicon):
    docs = next(col for col in documents.values() if not col or isinstance(col[0], str))
    groups = {}
    for category, word in zip(lexicon["category"], lexicon["word"]):
        groups.setdefault(category, set()).add(word)
    counts = {}
    for category, vocab in groups.items():
        counts[category] = [
            float(sum(1 for token in doc.lower().split()
                      if token.rstrip("?.,!") in vocab))
            for doc in docs
        ]
    return counts
'''

LIWC_SNIPPET = '''\
def liwc_analysis(documents):
    lexicon = {
        "swear": {"damn", "hell", "crap", "shit", "fuck", "bloody", "bastard", "idiot"},
        "negemo": {"bad", "hate", "awful", "terrible", "wrong", "stupid", "worse", "angry", "fear", "ugly"},
        "sexual": {"sex", "sexual", "naked", "porn", "kiss", "horny"},
        "i": {"i", "me", "my", "mine", "myself", "im"},
        "past": {"was", "were", "had", "did", "done", "said", "went", "got", "made"},
        "posemo": {"good", "love", "nice", "great", "happy", "best", "wonderful", "glad"},
        "certain": {"always", "never", "absolutely", "certainly", "definitely", "totally", "obviously", "undeniable"},
    }
    docs = next(col for col in documents.values() if not col or isinstance(col[0], str))
    counts = {}
    for category, vocab in lexicon.items():
        counts[category] = [
            float(sum(1 for token in doc.lower().split()
                      if token.rstrip("?.,!") in vocab))
            for doc in docs
        ]
    return counts
'''

ODDS_RATIOS_SNIPPET = '''\
def odds_ratios(a, b):
    names = [n for n in a if n in b and not isinstance(a[n][0], str)]
    a_counts = [sum(a[n]) for n in names]
    b_counts = [sum(b[n]) for n in names]
    total_a, total_b = sum(a_counts), sum(b_counts)
    ratios = [
        ((x + 0.5) / (total_a - x + 0.5)) / ((y + 0.5) / (total_b - y + 0.5))
        for x, y in zip(a_counts, b_counts)
    ]
    return {"category": names, "odds_ratio": ratios}
'''

PLOT_BAR_SNIPPET = '''\
def plot_bar(data, title):
    text = [n for n in data if data[n] and isinstance(data[n][0], str)]
    numeric = [n for n in data if n not in text]
    if text:
        pairs = list(zip(data[text[0]], data[numeric[0]]))
    else:
        pairs = [(n, sum(data[n])) for n in numeric]
    pairs.sort(key=lambda pair: -pair[1])
    return {"kind": "bar", "title": title,
            "categories": [c for c, _ in pairs], "values": [v for _, v in pairs]}
'''

CREATE_CLASSIFIER_SNIPPET = '''\
def create_classifier():
    from sklearn.linear_model import LogisticRegression
    return LogisticRegression(max_iter=1000)
'''

CREATE_REGRESSOR_SNIPPET = '''\
def create_regressor():
    from sklearn.linear_model import LinearRegression
    return LinearRegression()
'''

TRAIN_MODEL_SNIPPET = '''\
def train_model(model, features, labels):
    names = [n for n in features
             if n != labels and not isinstance(features[n][0], str)]
    rows = list(zip(*[features[n] for n in names]))
    return model.fit(rows, features[labels])
'''

CROSS_VALIDATE_SNIPPET = '''\
def cross_validate(model, features, labels, folds, seed=0):
    from sklearn.model_selection import StratifiedKFold, cross_val_score
    names = [n for n in features
             if n != labels and not isinstance(features[n][0], str)]
    rows = list(zip(*[features[n] for n in names]))
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return list(cross_val_score(model, rows, features[labels], cv=splitter))
'''

MODEL_COEFFICIENTS_SNIPPET = '''\
def model_coefficients(model):
    return model.coef_
'''


# --- the registry ------------------------------------------------------

def build_registry():
    """A fresh registry of the shipped commands."""
    commands = [
        CommandSpec(
            id="load_csv",
            title="load the csv file at {path}",
            examples=(
                "load csv {path}",
                "load the csv {path}",
                "read the csv file {path}",
                "open csv file {path}",
                "import a csv from {path}",
            ),
            argument_types={
                "path": ArgSpec(STRING, "What file should I load?"),
            },
            body=_load_csv,
            help_text=(
                "Loads a CSV file with a header row into a collection.",
                "Columns where every cell is numeric become numeric columns.",
            ),
            explanation=_explain_new_collection,
            source_snippet=LOAD_CSV_SNIPPET,
            confirm="load a csv file into a collection",
        ),
        CommandSpec(
            id="load_lexicon",
            title="load a lexicon from {path}",
            examples=(
                "load lexicon {path}",
                "read the lexicon file {path}",
                "open lexicon {path}",
                "import a lexicon from {path}",
                "load the word lexicon at {path}",
            ),
            argument_types={
                "path": ArgSpec(STRING, "Where is the lexicon file?"),
            },
            body=_load_lexicon,
            help_text=(
                "Loads a lexicon of category<TAB>word lines as a collection",
                "with 'category' and 'word' columns, for lexicon analysis.",
            ),
            explanation=lambda result, args: "I loaded the lexicon:",
            source_snippet=LOAD_LEXICON_SNIPPET,
            confirm="load a lexicon file",
        ),
        CommandSpec(
            id="list_columns",
            title="list the columns in {collection}",
            examples=(
                "list columns of {collection}",
                "what columns are in {collection}",
                "show the columns of {collection}",
                "column names of {collection}",
                "what are the columns in {collection}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
            },
            body=_list_columns,
            help_text=("Lists the column names of a collection.",),
            explanation=lambda result, args: "Here are the columns in that collection:",
            source_snippet=LIST_COLUMNS_SNIPPET,
            confirm="list the columns of a collection",
        ),
        CommandSpec(
            id="get_column",
            title="get the {column} column from {collection}",
            examples=(
                "the {column} column in {collection}",
                "the {column} column from {collection}",
                "show me the {column} column in {collection}",
                "can you show me the {column} column in {collection}",
                "select the {column} column of {collection}",
            ),
            argument_types={
                "column": ArgSpec(STRING, "Which column would you like?"),
                "collection": ArgSpec(COLLECTION),
            },
            body=_get_column,
            help_text=(
                "Extracts one column from a collection.",
                "Numeric columns come back as arrays, text columns as a",
                "single-column collection.",
            ),
            explanation=_explain_get_column,
            source_snippet=GET_COLUMN_SNIPPET,
            confirm="select a column from a collection",
        ),
        CommandSpec(
            id="select_columns",
            title="select columns {columns} from {collection}",
            examples=(
                "select {columns} from {collection}",
                "keep columns {columns} of {collection}",
                "use the columns {columns} in {collection}",
                "select features {columns} from {collection}",
                "take columns {columns} from {collection}",
            ),
            argument_types={
                "columns": ArgSpec(STRING, "Which columns should I keep?"),
                "collection": ArgSpec(COLLECTION),
            },
            body=_select_columns,
            help_text=("Keeps only the named columns, in the order given.",),
            explanation=_explain_new_collection,
            source_snippet=SELECT_COLUMNS_SNIPPET,
            confirm="select columns from a collection",
        ),
        CommandSpec(
            id="filter_below",
            title="filter collection {collection} with {column} column less than {value}",
            examples=(
                "give me rows in {collection} with {column} less than {value}",
                "rows of {collection} where {column} is below {value}",
                "keep rows of {collection} with {column} under {value}",
                "filter {collection} where {column} is less than {value}",
                "filter {collection} with {column} < {value}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
                "column": ArgSpec(STRING, "Which column should I compare?"),
                "value": ArgSpec(INT, "What is the cutoff value?"),
            },
            body=_filter_below,
            help_text=(
                "Keeps the rows whose value in one numeric column is below",
                "a cutoff; all other columns stay row-aligned.",
            ),
            explanation=_explain_new_collection,
            source_snippet=FILTER_BELOW_SNIPPET,
            confirm="filter a collection by a column",
        ),
        CommandSpec(
            id="filter_above",
            title="filter collection {collection} with {column} column greater than {value}",
            examples=(
                "give me rows in {collection} with {column} greater than {value}",
                "rows of {collection} where {column} is above {value}",
                "keep rows of {collection} with {column} over {value}",
                "filter {collection} where {column} is more than {value}",
                "filter {collection} with {column} > {value}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
                "column": ArgSpec(STRING, "Which column should I compare?"),
                "value": ArgSpec(INT, "What is the cutoff value?"),
            },
            body=_filter_above,
            help_text=(
                "Keeps the rows whose value in one numeric column is above",
                "a cutoff; all other columns stay row-aligned.",
            ),
            explanation=_explain_new_collection,
            source_snippet=FILTER_ABOVE_SNIPPET,
            confirm="filter a collection by a column",
        ),
        CommandSpec(
            id="filter_equals",
            title="filter collection {collection} where {column} equals {value}",
            examples=(
                "rows of {collection} where {column} equals {value}",
                "keep rows of {collection} with {column} equal to {value}",
                "filter {collection} where {column} is exactly {value}",
                "select rows of {collection} whose {column} is {value}",
                "give me rows in {collection} where {column} matches {value}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
                "column": ArgSpec(STRING, "Which column should I compare?"),
                "value": ArgSpec(STRING, "What value should the column equal?"),
            },
            body=_filter_equals,
            help_text=(
                "Keeps the rows where a column equals a value; works on",
                "text and numeric columns.",
            ),
            explanation=_explain_new_collection,
            source_snippet=FILTER_EQUALS_SNIPPET,
            confirm="filter a collection by equality",
        ),
        CommandSpec(
            id="select_significant",
            title="select significant statistics from {collection}",
            examples=(
                "significant rows of {collection}",
                "keep the significant results in {collection}",
                "which stats in {collection} are significant",
                "select the significant statistics in {collection}",
                "filter {collection} to significant results",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
            },
            body=_select_significant,
            help_text=(
                "Keeps the rows whose adjusted p-value (falling back to the",
                "raw 'p' column) is below 0.05.",
            ),
            explanation=_explain_select_significant,
            source_snippet=SELECT_SIGNIFICANT_SNIPPET,
            confirm="select the significant rows",
        ),
        CommandSpec(
            id="quartiles",
            title="compute quartiles for an {array}",
            examples=(
                "quartiles",
                "find quartiles",
                "quartiles of {array}",
                "compute quartiles for {array}",
                "compute the quartiles of {array}",
                "what are the quartiles of {array}",
            ),
            argument_types={
                "array": ArgSpec(ARRAY, "What is the array you want to analyze?"),
            },
            body=_quartiles,
            help_text=(
                "Computes the five quartile boundaries of an array by linear",
                "interpolation on the sorted values.",
            ),
            explanation=_explain_quartiles,
            source_snippet=QUARTILES_SNIPPET,
            confirm="compute quartiles",
        ),
        CommandSpec(
            id="mean",
            title="compute the mean of {array}",
            examples=(
                "mean of {array}",
                "average of {array}",
                "take the mean of {array}",
                "what is the average value of {array}",
                "tell me the mean of {array}",
            ),
            argument_types={
                "array": ArgSpec(ARRAY),
            },
            body=_mean,
            help_text=("Computes the arithmetic mean of an array.",),
            explanation=_explain_mean,
            source_snippet=MEAN_SNIPPET,
            confirm="compute a mean",
        ),
        CommandSpec(
            id="variance",
            title="compute the variance of {array}",
            examples=(
                "variance of {array}",
                "tell me the variance of {array}",
                "what is the variance of {array}",
                "how much does {array} vary",
                "sample variance of {array}",
            ),
            argument_types={
                "array": ArgSpec(ARRAY),
            },
            body=_variance,
            help_text=("Computes the sample variance (n-1 denominator).",),
            explanation=_explain_variance,
            source_snippet=VARIANCE_SNIPPET,
            confirm="compute a variance",
        ),
        CommandSpec(
            id="log_transform",
            title="log transform {array}",
            examples=(
                "take the log of {array}",
                "natural log of {array}",
                "apply a log transform to {array}",
                "log the values in {array}",
                "log-transform {array}",
            ),
            argument_types={
                "array": ArgSpec(ARRAY),
            },
            body=_log_transform,
            help_text=(
                "Applies the natural logarithm elementwise; every value",
                "must be positive.",
            ),
            explanation=lambda result, args: "Here is the log-transformed array:",
            source_snippet=LOG_TRANSFORM_SNIPPET,
            confirm="log-transform an array",
        ),
        CommandSpec(
            id="length",
            title="compute the length of {array}",
            examples=(
                "length of {array}",
                "how long is {array}",
                "how many values are in {array}",
                "count the values in {array}",
                "size of {array}",
            ),
            argument_types={
                "array": ArgSpec(ARRAY),
            },
            body=_length,
            help_text=("Counts the values in an array.",),
            explanation=_explain_length,
            source_snippet=LENGTH_SNIPPET,
            confirm="measure an array's length",
        ),
        CommandSpec(
            id="add",
            title="add {x} and {y}",
            examples=(
                "sum of {x} and {y}",
                "what is {x} plus {y}",
                "add the numbers {x} and {y}",
                "{x} plus {y}",
                "total of {x} and {y}",
            ),
            argument_types={
                "x": ArgSpec(INT, "What is the first number?"),
                "y": ArgSpec(INT, "What is the second number?"),
            },
            body=_add,
            help_text=("Adds two numbers.",),
            explanation=_explain_add,
            source_snippet=ADD_SNIPPET,
            confirm="add two numbers",
        ),
        CommandSpec(
            id="pearson_correlation",
            title="compute pearson correlation: {x} and {y}",
            examples=(
                "pearson correlation between {x} and {y}",
                "pearson correlation {x} {y}",
                "how are {x} and {y} correlated",
                "are {x} and {y} correlated",
                "compute the correlation of {x} with {y}",
            ),
            argument_types={
                "x": ArgSpec(ARRAY, "Where is the first array to analyze?"),
                "y": ArgSpec(ARRAY, "Where is the second array?"),
            },
            body=_pearson,
            help_text=(
                "Computes the Pearson correlation coefficient between two",
                "arrays and a two-sided p-value from the t distribution.",
            ),
            explanation=_explain_pearson,
            source_snippet=PEARSON_SNIPPET,
            confirm="compute a correlation",
        ),
        CommandSpec(
            id="random_array",
            title="generate a random array of {n} numbers",
            examples=(
                "random array of {n} values",
                "generate {n} random numbers",
                "make a random array of length {n}",
                "generate a new array from the normal distribution",
                "draw {n} values from the normal distribution",
            ),
            argument_types={
                "n": ArgSpec(INT, "How many values should the array contain?"),
            },
            body=_random_array,
            help_text=(
                "Draws standard-normal values from a seeded generator, so",
                "an exported script reproduces the same array.",
            ),
            explanation=lambda result, args: "Here is a new random array:",
            source_snippet=RANDOM_ARRAY_SNIPPET,
            confirm="generate a random array",
            seeded=True,
        ),
        CommandSpec(
            id="mann_whitney",
            title="run a mann-whitney test between {x} and {y}",
            examples=(
                "mann-whitney u test on {x} and {y}",
                "mann whitney between {x} and {y}",
                "rank test comparing {x} and {y}",
                "nonparametric test of {x} against {y}",
                "u test for {x} versus {y}",
            ),
            argument_types={
                "x": ArgSpec(ARRAY, "Where is the first sample?"),
                "y": ArgSpec(ARRAY, "Where is the second sample?"),
            },
            body=_mann_whitney,
            help_text=(
                "Runs a two-sided Mann-Whitney U test; exact for small",
                "untied samples, normal approximation otherwise.",
                "The p-value is not corrected for multiple comparisons.",
            ),
            explanation=_explain_mann_whitney,
            source_snippet=MANN_WHITNEY_SNIPPET,
            confirm="run a rank test",
        ),
        CommandSpec(
            id="welch_t_test",
            title="run a t-test between {x} and {y}",
            examples=(
                "t-test between {x} and {y}",
                "welch test on {x} and {y}",
                "do a t test comparing {x} and {y}",
                "is the difference between {x} and {y} significant",
                "compare the means of {x} and {y}",
            ),
            argument_types={
                "x": ArgSpec(ARRAY, "Where is the first sample?"),
                "y": ArgSpec(ARRAY, "Where is the second sample?"),
            },
            body=_welch,
            help_text=(
                "Runs Welch's unequal-variance t-test with Satterthwaite",
                "degrees of freedom.",
                "The p-value is not corrected for multiple comparisons.",
            ),
            explanation=_explain_welch,
            source_snippet=WELCH_SNIPPET,
            confirm="run a t-test",
        ),
        CommandSpec(
            id="compare_groups",
            title="compute {test} between {x} and {y}",
            examples=(
                "run statistical tests between {x} and {y}",
                "run {test} tests between the columns in {x} and {y}",
                "test the columns of {x} against {y}",
                "which columns differ between {x} and {y}",
                "compare the collections {x} and {y} with {test}",
            ),
            argument_types={
                "test": ArgSpec(
                    STRING,
                    "What test would you like to run?",
                    options=(MANN_WHITNEY_LABEL, WELCH_LABEL),
                ),
                "x": ArgSpec(COLLECTION, "Where is the first collection?"),
                "y": ArgSpec(COLLECTION, "Where is the second collection?"),
            },
            body=_compare_groups,
            help_text=(
                "Runs the chosen test on every numeric column the two",
                "collections share and returns a collection of category,",
                "statistic, and p columns.",
                "The p-values are not corrected for multiple comparisons.",
            ),
            explanation=_explain_compare,
            source_snippet=COMPARE_GROUPS_SNIPPET,
            confirm="run statistical tests between two data collections",
        ),
        CommandSpec(
            id="holm_correct",
            title="apply holm correction to {pvalues}",
            examples=(
                "holm correction on {pvalues}",
                "holm-bonferroni adjust {pvalues}",
                "correct {pvalues} for multiple comparisons",
                "holm correct this array of p values",
                "apply the holmes correction to {pvalues}",
            ),
            argument_types={
                "pvalues": ArgSpec(ARRAY, "Where are the p-values to adjust?"),
            },
            body=_holm_correct,
            help_text=(
                "Adjusts an array of p-values with the Holm step-down",
                "method, preserving the input order.",
            ),
            explanation=lambda result, args: "Here are the adjusted p-values:",
            source_snippet=HOLM_CORRECT_SNIPPET,
            confirm="adjust p-values",
        ),
        CommandSpec(
            id="holm_adjust",
            title="apply holm correction to the p values in {collection}",
            examples=(
                "holm correct the stats in {collection}",
                "apply holmes correction to {collection}",
                "correct the p column in {collection}",
                "adjust the p values of {collection} for multiple tests",
                "holm adjustment for {collection}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION),
            },
            body=_holm_adjust,
            help_text=(
                "Adds a 'p_adjusted' column with Holm step-down adjusted",
                "values computed from the 'p' column.",
            ),
            explanation=lambda result, args: "I added a 'p_adjusted' column:",
            source_snippet=HOLM_ADJUST_SNIPPET,
            confirm="adjust the p-values in a collection",
        ),
        CommandSpec(
            id="lexicon_counts",
            title="run lexicon analysis on {documents} with {lexicon}",
            examples=(
                "lexicon analysis on {documents} using {lexicon}",
                "count lexicon categories of {documents} with {lexicon}",
                "apply the lexicon {lexicon} to {documents}",
                "score {documents} against the lexicon {lexicon}",
                "count category words from {lexicon} in {documents}",
            ),
            argument_types={
                "documents": ArgSpec(COLLECTION, "Where are the documents?"),
                "lexicon": ArgSpec(COLLECTION, "Which lexicon should I use?"),
            },
            body=_lexicon_counts,
            help_text=(
                "Counts, per document, the tokens that fall in each lexicon",
                "category; one numeric column per category.",
            ),
            explanation=lambda result, args: "Here are the counts for each lexicon category:",
            source_snippet=LEXICON_COUNTS_SNIPPET,
            confirm="run a lexicon analysis",
        ),
        CommandSpec(
            id="liwc_analysis",
            title="liwc analysis on {documents}",
            examples=(
                "run an analysis using liwc",
                "liwc analysis",
                "analyze {documents} with liwc",
                "run liwc on {documents}",
                "liwc word counts for {documents}",
            ),
            argument_types={
                "documents": ArgSpec(COLLECTION, "Where are the documents?"),
            },
            body=_liwc_analysis,
            help_text=(
                "Counts tokens per document for the built-in lexicon of",
                "linguistic categories (swearing, emotion, pronouns, and",
                "so on); one numeric column per category.",
            ),
            explanation=lambda result, args: "Here are the liwc category counts:",
            source_snippet=LIWC_SNIPPET,
            confirm="run a liwc analysis",
        ),
        CommandSpec(
            id="odds_ratios",
            title="compute odds ratios between {a} and {b}",
            examples=(
                "odds ratios between {a} and {b}",
                "odds ratio analysis of {a} versus {b}",
                "which categories are overrepresented in {a} compared to {b}",
                "calculate category odds ratios for {a} and {b}",
                "odds ratios of {a} against {b}",
            ),
            argument_types={
                "a": ArgSpec(COLLECTION, "Where is the first group's counts?"),
                "b": ArgSpec(COLLECTION, "Where is the second group's counts?"),
            },
            body=_odds_ratios,
            help_text=(
                "Sums each shared numeric column to per-category totals and",
                "computes smoothed odds ratios between the two groups.",
            ),
            explanation=lambda result, args: "Here are the smoothed odds ratios by category:",
            source_snippet=ODDS_RATIOS_SNIPPET,
            confirm="compute odds ratios",
        ),
        CommandSpec(
            id="plot_bar",
            title="plot a bar chart of {collection} titled {title}",
            examples=(
                "plot {collection} as a bar chart named {title}",
                "bar chart of {collection} with title {title}",
                "plot odds ratios for {collection}",
                "draw {collection} as bars titled {title}",
                "make a bar chart from {collection} with the title {title}",
            ),
            argument_types={
                "collection": ArgSpec(COLLECTION, "Which collection should I plot?"),
                "title": ArgSpec(STRING, "What should the title of the chart be?"),
            },
            body=_plot_bar,
            help_text=(
                "Plots a collection as a bar chart sorted by descending",
                "value. With a text column the rows become bars; otherwise",
                "each numeric column is totalled into one bar.",
            ),
            explanation=lambda result, args: "Here is the chart:",
            source_snippet=PLOT_BAR_SNIPPET,
            confirm="plot a bar chart",
        ),
        CommandSpec(
            id="create_classifier",
            title="create a classification model",
            examples=(
                "logistic regression",
                "classification model",
                "build a classifier",
                "new logistic regression model",
                "create a classifier",
            ),
            argument_types={},
            body=_create_classifier,
            help_text=(
                "Creates a new untrained logistic-regression classifier.",
            ),
            explanation=lambda result, args: "I created a new untrained classifier",
            source_snippet=CREATE_CLASSIFIER_SNIPPET,
            confirm="create a classification model",
        ),
        CommandSpec(
            id="create_regressor",
            title="create a regression model",
            examples=(
                "make a regression model",
                "make a model",
                "build a regressor",
                "linear regression",
                "new regression model",
            ),
            argument_types={},
            body=_create_regressor,
            help_text=("Creates a new untrained linear-regression model.",),
            explanation=lambda result, args: "I created a new untrained regression model",
            source_snippet=CREATE_REGRESSOR_SNIPPET,
            confirm="create a regression model",
        ),
        CommandSpec(
            id="train_model",
            title="train {model} on {features} to predict {labels}",
            examples=(
                "train {model} with {features} predicting {labels}",
                "fit {model} to {features} using the {labels} column",
                "train the model {model} on {features} labels {labels}",
                "fit {model} on {features} to predict {labels}",
                "train a model to predict {labels} from {features}",
            ),
            argument_types={
                "model": ArgSpec(MODEL, "What model do you want to use?"),
                "features": ArgSpec(COLLECTION, "Which collection holds the training data?"),
                "labels": ArgSpec(STRING, "Which column should the model predict?"),
            },
            body=_train_model,
            help_text=(
                "Trains a classifier on the numeric columns of a collection",
                "to predict one label column; features are standardized.",
            ),
            explanation=_explain_train,
            source_snippet=TRAIN_MODEL_SNIPPET,
            confirm="train a model",
        ),
        CommandSpec(
            id="cross_validate",
            title="cross-validate {model} on {features} predicting {labels} with {folds} folds",
            examples=(
                "cross-validate",
                "cross validate a model",
                "cross-validate {model} on {features} predicting {labels} with {folds} folds",
                "cross validate {model} on {features} with {labels} and {folds} folds",
                "run {folds} fold cross validation of {model} on {features} predicting {labels}",
                "how accurate is {model} under cross validation",
            ),
            argument_types={
                "model": ArgSpec(MODEL, "What model do you want to use?"),
                "features": ArgSpec(COLLECTION, "Which collection holds the training data?"),
                "labels": ArgSpec(STRING, "Which column should the model predict?"),
                "folds": ArgSpec(INT, "How many folds should I use?"),
            },
            body=_cross_validate,
            help_text=(
                "Scores a model with stratified k-fold cross-validation and",
                "a seeded shuffle; returns the per-fold accuracies.",
            ),
            explanation=_explain_cross_validate,
            source_snippet=CROSS_VALIDATE_SNIPPET,
            confirm="cross-validate a model",
            seeded=True,
        ),
        CommandSpec(
            id="model_coefficients",
            title="show the coefficients of {model}",
            examples=(
                "model coefficients of {model}",
                "examine the coefficients of {model}",
                "what are the weights of {model}",
                "coefficients for {model}",
                "inspect the coefficients of {model}",
            ),
            argument_types={
                "model": ArgSpec(MODEL, "Which model's coefficients should I show?"),
            },
            body=_model_coefficients,
            help_text=(
                "Shows the trained model's weight for every class and",
                "feature pair, on the standardized scale.",
            ),
            explanation=lambda result, args: "Here are the model coefficients by class and feature:",
            source_snippet=MODEL_COEFFICIENTS_SNIPPET,
            confirm="inspect model coefficients",
        ),
        CommandSpec(
            id="save",
            title="save {value} as {name}",
            examples=(
                "save {value} to {name}",
                "store {value} in {name}",
                "keep {value} as {name}",
                "remember {value} as {name}",
                "save {value} under the name {name}",
            ),
            argument_types={
                "value": ArgSpec(ANY, "What value should I save?"),
                "name": ArgSpec(STRING, "What name should I use?"),
            },
            body=_save,
            help_text=(
                "Saves a value into a named variable for later requests.",
            ),
            explanation=_explain_save,
            source_snippet="",
            confirm="save a value",
            effectful=True,
        ),
    ]
    return CommandRegistry(commands)

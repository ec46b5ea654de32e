"""Session turn loop: direct execution, composition, conversion dialogues,
sequencing, option learning, template learning, and transactionality."""

import pytest

from parlance.astgen import AssignStmt
from parlance.commands import first_match
from parlance.intent import ExampleStore, train
from parlance.pack import MANN_WHITNEY_LABEL, WELCH_LABEL, build_registry
from parlance.session import (
    Ask,
    Error,
    OptionSynonyms,
    Say,
    Session,
    ShowHelp,
    ShowValue,
    _label_overlap_run,
)
from parlance.tokenizer import tokenize
from parlance.values import (
    ArrayV,
    Collection,
    CollectionV,
    IntV,
    MetricV,
    render_block,
)


@pytest.fixture(scope="module")
def base_model():
    return train(ExampleStore.from_registry(build_registry()))


@pytest.fixture()
def session(base_model):
    registry = build_registry()
    store = ExampleStore(rows=list(ExampleStore.from_registry(registry).rows))
    return Session(registry, store=store, intent=base_model, rng_seed=0)


def arr(*values):
    return ArrayV(tuple(float(v) for v in values))


SCORES = (15.0, 3.0, 9.0, 7.0, 12.0, 2.0, 13.0, 8.0, 11.0)


def dogmatism_value():
    return CollectionV(Collection.of({
        "post": ["p%d" % i for i in range(9)],
        "score": list(SCORES),
        "category": ["c"] * 9,
    }))


def counts(shift):
    return CollectionV(Collection.of({
        "swear": [v + shift for v in (1.0, 2.0, 1.0, 3.0, 2.0, 1.0, 2.0, 3.0)],
        "posemo": [2.0, 1.0, 2.0, 1.0, 3.0, 2.0, 1.0, 2.0],
    }))


def only(responses, kind):
    picked = [r for r in responses if isinstance(r, kind)]
    assert len(picked) == 1, responses
    return picked[0]


# --- direct execution ------------------------------------------------------

def test_direct_execution_shows_value(session):
    session.preload("a", arr(1, 2, 3, 4, 5))
    session.preload("b", arr(2, 4, 6, 8, 10))
    out = session.handle_input("pearson correlation between a and b")
    shown = only(out, ShowValue)
    assert shown.explanation == "Correlation of 1.0 with p-value of 0.0"
    assert isinstance(shown.value, MetricV)
    assert len(session.env.history) == 1
    assert len(session.ast.statements) == 1
    assert session.machine_stack == []


def test_ask_carries_type_question(session):
    out = session.handle_input("find quartiles")
    assert out == [Ask("What is the array you want to analyze?", "Array")]
    assert len(session.machine_stack) == 1


# --- composition (nested commands) ------------------------------------------

def test_quartiles_with_nested_column_selection(session):
    session.preload("dogmatism_data", dogmatism_value())
    session.handle_input("find quartiles")
    out = session.handle_input("the score column in dogmatism_data")
    says = [r for r in out if isinstance(r, Say)]
    assert says[0] == Say("Sure, I'm using this array:")
    shown = only(out, ShowValue)
    assert shown.explanation == (
        "Q1 is from 2.0 to 7.0, Q2 is from 7.0 to 9.0, "
        "Q3 is from 9.0 to 12.0, and Q4 is from 12.0 to 15.0"
    )
    # nested result and top-level result both enter history
    assert len(session.env.history) == 2
    assert len(session.ast.statements) == 1
    assert session.machine_stack == []


def test_nested_command_can_ask_its_own_arguments(session):
    session.preload("petalength", arr(5.1, 4.9, 6.2, 5.8, 5.5, 6.0))
    out = session.handle_input("pearson correlation between petalength and q")
    assert isinstance(out[-1], Ask)
    assert out[-1].prompt == "Where is the second array?"

    out = session.handle_input("generate a new array from the normal distribution")
    assert out == [Ask("How many values should the array contain?", "Int")]

    out = session.handle_input("length of petalength")
    texts = [r.text for r in out if isinstance(r, Say)]
    assert "Sure, I'm using this number:" in texts
    assert "Sure, I'm using this array:" in texts
    shown = only(out, ShowValue)
    assert shown.explanation.startswith("Correlation of ")
    assert len(session.env.history) == 3
    assert len(session.ast.statements) == 1

    script = session.export()
    final = script.rstrip("\n").splitlines()[-1]
    assert final == "pearson_correlation(petalength, random_array(length(petalength), seed=0))"
    defs = [l for l in script.splitlines() if l.startswith("def ")]
    assert defs == [
        "def pearson_correlation(x,y):",
        "def random_array(n, seed=0):",
        "def length(arr):",
    ]


def test_nested_wrong_type_reasks(session):
    session.preload("dogmatism_data", dogmatism_value())
    session.handle_input("find quartiles")
    # selecting a text column yields a collection, not the array we need
    out = session.handle_input("the post column in dogmatism_data")
    assert any(isinstance(r, Error) for r in out)
    assert isinstance(out[-1], Ask)
    assert out[-1].prompt == "What is the array you want to analyze?"
    out = session.handle_input("the score column in dogmatism_data")
    assert any(isinstance(r, ShowValue) for r in out)


# --- conversion dialogue -----------------------------------------------------

def test_collection_to_array_conversion(session):
    session.preload("dogmatism_data", dogmatism_value())
    out = session.handle_input("compute quartiles for dogmatism_data")
    assert out == [Ask(
        "I need an Array but you've given me a Collection. "
        "Would you like to use a column from the Collection as an array?",
        "Confirm",
        ("yes", "no"),
    )]
    out = session.handle_input("yes")
    assert out[0] == Say("Here are the columns in that collection:")
    assert out[1] == Say("['post' 'score' 'category']")
    assert out[2] == Ask(
        "Which column would you like to select to use as an array?",
        "Array",
        ("score",),
    )
    out = session.handle_input("score")
    assert out[0] == Say("Great, I'm using score")
    shown = only(out, ShowValue)
    assert shown.explanation.startswith("Q1 is from 2.0")
    # the conversion exports as an explicit column selection
    assert "quartiles(get_column('score', dogmatism_data))" in session.export()


def test_conversion_declined_falls_back_to_ask(session):
    session.preload("dogmatism_data", dogmatism_value())
    session.handle_input("compute quartiles for dogmatism_data")
    out = session.handle_input("no")
    assert out == [Ask("What is the array you want to analyze?", "Array")]
    out = session.handle_input("[1, 2, 3, 4]")
    assert any(isinstance(r, ShowValue) for r in out)


def test_conversion_gate_rejects_gibberish(session):
    session.preload("dogmatism_data", dogmatism_value())
    session.handle_input("compute quartiles for dogmatism_data")
    out = session.handle_input("maybe")
    assert isinstance(out[0], Error)
    assert isinstance(out[1], Ask)
    assert out[1].expected == "Confirm"


# --- sequencing and save ------------------------------------------------------

def test_filter_save_and_column_peek(session):
    session.preload("dogmatism_data", dogmatism_value())

    out = session.handle_input("filter dogmatism_data with score > 12")
    shown = only(out, ShowValue)
    assert shown.explanation == "Here is the new collection:"
    assert render_block(shown.value) == "<Collection: [post, score, category]>"
    assert shown.value.collection.column("score").values == (15.0, 13.0)

    out = session.handle_input("save that as dogmatic_posts")
    shown = only(out, ShowValue)
    assert shown.explanation == "Saving as 'dogmatic_posts'"
    assert "dogmatic_posts" in session.env.bindings
    # saving rewrote the filter statement instead of adding a new one
    assert len(session.ast.statements) == 1
    assert isinstance(session.ast.statements[0], AssignStmt)

    out = session.handle_input("can you show me the post column in dogmatic_posts?")
    shown = only(out, ShowValue)
    assert shown.explanation == "Sure, here is the 'post' column:"

    script = session.export()
    assert "dogmatic_posts = filter_above(dogmatism_data, 'score', 12)" in script
    assert "get_column('post', dogmatic_posts)" in script


def test_pronoun_reference_uses_history(session):
    session.handle_input("generate a random array of 5 numbers")
    out = session.handle_input("take the mean of that")
    shown = only(out, ShowValue)
    assert shown.explanation.startswith("The mean is ")
    script = session.export()
    assert "_r1 = random_array(5, seed=0)" in script
    assert "mean(_r1)" in script


# --- options and synonym learning -----------------------------------------------

REQUEST = "run mann-whitney tests between the columns in dogmatic_liwc and non_dogmatic_liwc"


def test_option_ask_learns_synonym(session):
    session.preload("dogmatic_liwc", counts(4.0))
    session.preload("non_dogmatic_liwc", counts(0.0))

    out = session.handle_input(REQUEST)
    assert out[0] == Say("Sure, I can run statistical tests between two data collections.")
    assert out[1] == Ask(
        "What test would you like to run?",
        "String",
        (MANN_WHITNEY_LABEL, WELCH_LABEL),
    )

    out = session.handle_input(MANN_WHITNEY_LABEL)
    shown = only(out, ShowValue)
    assert shown.explanation == "I ran Mann-Whitney U tests on 2 shared columns:"
    assert shown.value.collection.names == ("category", "statistic", "p")
    learned = session.synonyms.for_slot("compare_groups", "test")
    assert learned == {"mann-whitney": MANN_WHITNEY_LABEL}

    # second time around the phrase resolves the option without asking
    out = session.handle_input(REQUEST)
    assert only(out, ShowValue).explanation.startswith("I ran Mann-Whitney U tests")
    assert not any(isinstance(r, Ask) for r in out)


def test_option_wrong_answer_reprompts(session):
    session.preload("dogmatic_liwc", counts(4.0))
    session.preload("non_dogmatic_liwc", counts(0.0))
    session.handle_input(REQUEST)
    out = session.handle_input("the sign test")
    assert isinstance(out[0], Error)
    assert isinstance(out[1], Ask)
    out = session.handle_input("welch t-test")
    assert only(out, ShowValue).explanation.startswith("I ran Welch t-test tests")


def test_synonyms_round_trip_records():
    synonyms = OptionSynonyms()
    synonyms.record("compare_groups", "test", "mann-whitney", MANN_WHITNEY_LABEL)
    copied = OptionSynonyms()
    copied.load_records(synonyms.records())
    assert copied.for_slot("compare_groups", "test") == {
        "mann-whitney": MANN_WHITNEY_LABEL
    }


def test_label_overlap_run_picks_longest():
    tokens = tokenize("please run mann-whitney u tests now")
    assert _label_overlap_run(tokens, MANN_WHITNEY_LABEL) == ["mann-whitney", "u"]
    assert _label_overlap_run(tokenize("no overlap here"), MANN_WHITNEY_LABEL) == []


# --- learning new phrasings -------------------------------------------------------

def test_novel_utterance_learns_template_and_example(session):
    session.preload("myarr", arr(4, 8, 15, 16, 23, 42))
    before_rows = len(session.store.rows)
    out = session.handle_input("crunch the quartiles for myarr")
    if isinstance(out[-1], Ask):
        out = session.handle_input("myarr")
    assert any(isinstance(r, ShowValue) for r in out)
    assert len(session.store.rows) == before_rows + 1

    cmd = session.registry.get("quartiles")
    learned = [t for t in cmd.templates() if t.origin == "learned"]
    assert learned
    matched = first_match(cmd, tokenize("crunch the quartiles for otherarr"))
    assert matched is not None
    assert matched[1] == {"array": "otherarr"}


def test_known_phrasing_does_not_retrain(session):
    session.preload("a", arr(1, 2, 3))
    before_rows = len(session.store.rows)
    session.handle_input("mean of a")
    assert len(session.store.rows) == before_rows


# --- meta turns ----------------------------------------------------------------

def test_help_after_command(session):
    session.preload("dogmatic_liwc", counts(4.0))
    session.preload("non_dogmatic_liwc", counts(0.0))
    session.handle_input(REQUEST)
    session.handle_input(MANN_WHITNEY_LABEL)
    out = session.handle_input("can you tell me more about what you did?")
    help_text = only(out, ShowHelp).text
    assert "not corrected for multiple comparisons" in help_text


def test_help_before_any_command(session):
    out = session.handle_input("tell me more")
    assert isinstance(out[0], Error)


def test_general_help_lists_commands(session):
    out = session.handle_input("help")
    text = only(out, ShowHelp).text
    assert "compute quartiles for an {array}" in text


def test_export_meta_turn(session):
    session.preload("a", arr(1, 2, 3))
    session.handle_input("mean of a")
    out = session.handle_input("export this conversation as a script")
    assert out[0] == Say("Here is the conversation as a script:")
    assert "def mean(xs):" in out[1].text
    assert "mean(a)" in out[1].text


def test_never_mind_aborts_cleanly(session):
    session.handle_input("find quartiles")
    out = session.handle_input("never mind")
    assert out == [Say("Okay, never mind.")]
    assert session.machine_stack == []
    assert session.handle_input("find quartiles") == [
        Ask("What is the array you want to analyze?", "Array")
    ]


def test_empty_input_keeps_machine(session):
    session.handle_input("find quartiles")
    out = session.handle_input("   ")
    assert isinstance(out[0], Error)
    assert len(session.machine_stack) == 1


# --- failure and robustness --------------------------------------------------------

def test_failed_body_is_transactional(session):
    session.preload("a", arr(1, 2))
    env_before = session.env.snapshot()
    out = session.handle_input("pearson correlation between a and a")
    assert isinstance(out[0], Error)
    assert session.env.snapshot() == env_before
    assert session.ast.statements == []
    assert session.machine_stack == []


def test_unparseable_answer_reasks(session):
    session.handle_input("find quartiles")
    out = session.handle_input("purple monkey dishwasher")
    assert isinstance(out[0], Error)
    assert out[-1] == Ask("What is the array you want to analyze?", "Array")


def test_runaway_nesting_degrades_to_error(session):
    out = session.handle_input("what is 1 plus q")
    for _ in range(80):
        if not session.machine_stack:
            break
        out = session.handle_input("what is 1 plus q")
    assert isinstance(out[0], Error)
    assert session.machine_stack == []
    assert session.env.history == []


# --- hints -----------------------------------------------------------------------

def test_hint_matches_execution(session):
    session.preload("a", arr(1, 2, 3))
    for utterance, expected in [
        ("mean of a", "mean"),
        ("find quartiles", "quartiles"),
        ("variance of a", "variance"),
    ]:
        top = session.hints(utterance, 1)[0]
        assert top.command_id == expected
        session.handle_input(utterance)
        if session.machine_stack:
            session.handle_input("never mind")
        else:
            assert session.last_command == expected


def test_hint_braces_captured_spans(session):
    session.preload("dogmatism_data", dogmatism_value())
    top = session.hints("give me rows in dogmatism_data with score less than 7", 1)[0]
    assert top.command_id == "filter_below"
    assert top.text == "filter collection {dogmatism_data} with {score} column less than {7}"

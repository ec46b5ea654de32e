"""Transcript parsing, replay matching, and report rendering."""

import pytest

from parlance.errors import MalformedTranscript
from parlance.pack import build_registry
from parlance.replay import (
    Expected,
    Turn,
    load_transcript,
    parse_transcript,
    render_report,
    response_lines,
    run_replay,
)
from parlance.session import Ask, Error, Say, Session, ShowHelp, ShowValue
from parlance.values import IntV, MetricV


def make_session():
    return Session(build_registry(), rng_seed=0)


def lines(*records):
    import json

    return "\n".join(json.dumps(r) for r in records)


# --- rendering ----------------------------------------------------------------

def test_response_lines_cover_each_shape():
    assert response_lines(Say("hello")) == ["hello"]
    assert response_lines(Say("two\nlines")) == ["two", "lines"]
    assert response_lines(Ask("Which?", "String", ("a", "b"))) == [
        "Which?",
        "Options: a | b",
    ]
    assert response_lines(Ask("Plain?", "Int")) == ["Plain?"]
    assert response_lines(ShowValue(IntV(6), "The length is 6")) == [
        "The length is 6",
        "6",
    ]
    assert response_lines(ShowValue(MetricV.of({"p": 0.5}))) == ["{p: 0.5}"]
    assert response_lines(ShowHelp("a\nb")) == ["a", "b"]
    assert response_lines(Error("nope")) == ["Error: nope"]


# --- parsing -----------------------------------------------------------------

def test_parse_assigns_agent_lines_to_latest_user_turn():
    turns = parse_transcript(lines(
        {"role": "user", "text": "find quartiles"},
        {"role": "agent", "text": "What is the array you want to analyze?"},
        {"role": "user", "text": "[1, 2, 3, 4]"},
        {"role": "agent", "text": "Q1 is.*", "match": "regex"},
    ))
    assert turns == [
        Turn("find quartiles", (Expected("What is the array you want to analyze?"),)),
        Turn("[1, 2, 3, 4]", (Expected("Q1 is.*", "regex"),)),
    ]


def test_parse_skips_blank_lines():
    turns = parse_transcript('\n{"role": "user", "text": "help"}\n\n')
    assert len(turns) == 1


@pytest.mark.parametrize("text,detail", [
    ("not json", "not valid JSON"),
    ('["role", "user"]', "must be a JSON object"),
    ('{"role": "narrator", "text": "hi"}', "unknown role"),
    ('{"role": "user"}', "missing a text"),
    ('{"role": "agent", "text": "hi"}', "agent line before any user line"),
    ('{"role": "user", "text": "hi"}\n{"role": "agent", "text": "x", "match": "fuzzy"}',
     "unknown match"),
])
def test_parse_rejects_malformed_records(text, detail):
    with pytest.raises(MalformedTranscript) as err:
        parse_transcript(text)
    assert detail in str(err.value)


def test_dir_token_substitution(tmp_path):
    (tmp_path / "t.jsonl").write_text(
        '{"role": "user", "text": "load the csv file at @DIR@/mini.csv"}\n'
    )
    turns = load_transcript(str(tmp_path / "t.jsonl"))
    assert turns[0].user_text == "load the csv file at %s/mini.csv" % tmp_path.resolve()


# --- replay -------------------------------------------------------------------

GOLDEN = [
    {"role": "user", "text": "generate a random array of 5 numbers"},
    {"role": "agent", "text": "Here is a new random array:"},
    {"role": "agent", "text": r"\[.*", "match": "regex"},
    {"role": "user", "text": "take the mean of that"},
    {"role": "agent", "text": "The mean is .*", "match": "regex"},
    {"role": "agent", "text": r"-?\d.*", "match": "regex"},
]


def test_replay_passes_golden_turns():
    report = run_replay(parse_transcript(lines(*GOLDEN)), make_session)
    assert report.passed
    assert [t.ok for t in report.turns] == [True, True]


def test_replay_mutated_line_fails_that_turn_only():
    mutated = [dict(r) for r in GOLDEN]
    mutated[1] = {"role": "agent", "text": "something else entirely"}
    report = run_replay(parse_transcript(lines(*mutated)), make_session)
    assert not report.passed
    assert [t.ok for t in report.turns] == [False, True]
    rendered = render_report(report)
    assert "turn 1 FAIL" in rendered
    assert "turn 2 PASS" in rendered
    assert "2 turn(s), 1 failed" in rendered


def test_replay_counts_missing_and_extra_lines():
    turns = [
        Turn("generate a random array of 2 numbers", (
            Expected("Here is a new random array:"),
            Expected(r"\[.*", "regex"),
            Expected("and another line"),
        )),
        Turn("help", ()),
    ]
    report = run_replay(turns, make_session)
    assert [t.ok for t in report.turns] == [False, False]
    assert any(m.startswith("missing") for m in report.turns[0].mismatches)
    assert any(m.startswith("unexpected") for m in report.turns[1].mismatches)


def test_empty_transcript_passes():
    report = run_replay([], make_session)
    assert report.passed
    assert render_report(report) == "0 turn(s), 0 failed\n"


def test_replay_report_is_deterministic():
    turns = parse_transcript(lines(*GOLDEN))
    first = render_report(run_replay(turns, make_session))
    second = render_report(run_replay(turns, make_session))
    assert first == second
    assert "2 turn(s), 0 failed" in first

"""Golden transcripts replay cleanly against a fresh seeded session."""

from pathlib import Path

import pytest

from parlance.pack import build_registry
from parlance.replay import load_transcript, render_report, run_replay
from parlance.session import Session

TRANSCRIPTS = sorted(
    Path(__file__).resolve().parent.parent.joinpath("transcripts").glob("*.jsonl")
)


def make_session():
    return Session(build_registry(), rng_seed=0)


def test_goldens_exist():
    names = {p.name for p in TRANSCRIPTS}
    assert {
        "nested_composition.jsonl",
        "column_conversion.jsonl",
        "save_and_reuse.jsonl",
        "model_pipeline.jsonl",
        "word_analysis.jsonl",
    } <= names


@pytest.mark.parametrize("path", TRANSCRIPTS, ids=lambda p: p.stem)
def test_golden_replays(path):
    report = run_replay(load_transcript(str(path)), make_session)
    assert report.passed, render_report(report)


def test_goldens_pin_the_scenario_lines():
    text = Path(TRANSCRIPTS[0].parent / "nested_composition.jsonl").read_text()
    assert "Q1 is from 2.0 to 7.0" in text
    conversion = (TRANSCRIPTS[0].parent / "column_conversion.jsonl").read_text()
    assert "I need an Array but you've given me a Collection." in conversion
    assert "Which column would you like to select to use as an array?" in conversion
    sequence = (TRANSCRIPTS[0].parent / "save_and_reuse.jsonl").read_text()
    assert "Saving as 'dogmatic_posts'" in sequence
    assert "Sure, here is the 'post' column:" in sequence

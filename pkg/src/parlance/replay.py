"""Transcript replay: feed recorded user turns to a fresh session and
check every expected agent line, exactly or by regex.

A transcript is line-delimited JSON. Each record is {"role": "user"|"agent",
"text": ..., "match": "exact"|"regex"}; "match" applies to agent lines and
defaults to exact. Agent lines belong to the most recent user line. A user
text may contain the token @DIR@, replaced by the transcript's directory so
file-loading turns stay portable.
"""

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MalformedTranscript
from .session import Ask, Error, Say, ShowHelp, ShowValue
from .values import render_block

EXACT = "exact"
REGEX = "regex"


@dataclass(frozen=True)
class Expected:
    text: str
    match: str = EXACT


@dataclass(frozen=True)
class Turn:
    user_text: str
    expected: tuple[Expected, ...]


@dataclass
class TurnResult:
    index: int
    user_text: str
    ok: bool
    mismatches: list[str] = field(default_factory=list)


@dataclass
class ReplayReport:
    turns: list[TurnResult]

    @property
    def passed(self) -> bool:
        return all(t.ok for t in self.turns)


def response_lines(resp) -> list[str]:
    """Canonical one-line-per-fact rendering; replay matches against these
    and the terminal client prints them."""
    if isinstance(resp, Say):
        return resp.text.splitlines()
    if isinstance(resp, Ask):
        lines = [resp.prompt]
        if resp.options:
            lines.append("Options: " + " | ".join(resp.options))
        return lines
    if isinstance(resp, ShowValue):
        lines = [resp.explanation] if resp.explanation else []
        return lines + render_block(resp.value).splitlines()
    if isinstance(resp, ShowHelp):
        return resp.text.splitlines()
    if isinstance(resp, Error):
        return ["Error: " + resp.text]
    return [str(resp)]


def parse_transcript(text: str, base_dir: str | None = None) -> list[Turn]:
    turns: list[tuple[str, list[Expected]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise MalformedTranscript("line %d is not valid JSON: %s" % (lineno, err))
        if not isinstance(record, dict):
            raise MalformedTranscript("line %d must be a JSON object" % lineno)
        role = record.get("role")
        body = record.get("text")
        if role not in ("user", "agent"):
            raise MalformedTranscript("line %d has unknown role %r" % (lineno, role))
        if not isinstance(body, str):
            raise MalformedTranscript("line %d is missing a text string" % lineno)
        if role == "user":
            if base_dir is not None:
                body = body.replace("@DIR@", base_dir)
            turns.append((body, []))
            continue
        match = record.get("match", EXACT)
        if match not in (EXACT, REGEX):
            raise MalformedTranscript("line %d has unknown match kind %r" % (lineno, match))
        if not turns:
            raise MalformedTranscript("line %d: agent line before any user line" % lineno)
        turns[-1][1].append(Expected(body, match))
    return [Turn(user, tuple(expected)) for user, expected in turns]


def load_transcript(path: str) -> list[Turn]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as err:
        raise MalformedTranscript("cannot read transcript: %s" % err)
    return parse_transcript(text, base_dir=str(p.resolve().parent))


def _line_matches(expected: Expected, actual: str) -> bool:
    if expected.match == EXACT:
        return actual == expected.text
    return re.fullmatch(expected.text, actual) is not None


def run_replay(turns, make_session) -> ReplayReport:
    """Play every user turn into one fresh session; a failed expectation
    marks its turn but never stops the conversation."""
    session = make_session()
    results = []
    for index, turn in enumerate(turns, start=1):
        actual: list[str] = []
        for resp in session.handle_input(turn.user_text):
            actual.extend(response_lines(resp))
        result = TurnResult(index, turn.user_text, True)
        for i in range(max(len(turn.expected), len(actual))):
            if i >= len(turn.expected):
                result.mismatches.append("unexpected: %s" % actual[i])
            elif i >= len(actual):
                result.mismatches.append(
                    "missing (%s): %s" % (turn.expected[i].match, turn.expected[i].text)
                )
            elif not _line_matches(turn.expected[i], actual[i]):
                result.mismatches.append(
                    "expected (%s): %s" % (turn.expected[i].match, turn.expected[i].text)
                )
                result.mismatches.append("  actual: %s" % actual[i])
        result.ok = not result.mismatches
        results.append(result)
    return ReplayReport(results)


def render_report(report: ReplayReport) -> str:
    lines = []
    for t in report.turns:
        lines.append("turn %d %s: %s" % (t.index, "PASS" if t.ok else "FAIL", t.user_text))
        lines.extend("  " + m for m in t.mismatches)
    failed = sum(1 for t in report.turns if not t.ok)
    lines.append("%d turn(s), %d failed" % (len(report.turns), failed))
    return "\n".join(lines) + "\n"

"""Terminal front door: interactive REPL, transcript replay for CI,
registry self-test, script export, and service launch.

Exit codes: 0 success, 1 replay or self-test failure, 2 config or
startup error.
"""

import argparse
import ast as pyast
import dataclasses
import sys
from pathlib import Path

from .config import Config, load_config
from .errors import ConfigError, EngineError, MalformedTranscript
from .intent import ExampleStore, predict_topk, train
from .pack import build_registry
from .replay import load_transcript, render_report, response_lines, run_replay
from .session import Session, ShowValue
from .values import PlotV, format_number

BAR_WIDTH = 40

COMMAND_FLOOR = 25
EXAMPLE_FLOOR = 5


# ---------------------------------------------------------------------------
# Plot rendering
# ---------------------------------------------------------------------------


def text_bar_chart(spec) -> str:
    """Aligned text bars, longest value scaled to BAR_WIDTH columns."""
    lines = [spec.title] if spec.title else []
    if not spec.categories:
        lines.append("(no data)")
        return "\n".join(lines)
    peak = max(spec.values)
    label_width = max(len(c) for c in spec.categories)
    for category, value in zip(spec.categories, spec.values):
        share = value / peak if peak > 0 else 0.0
        bar = "#" * max(0, round(share * BAR_WIDTH))
        lines.append(
            "%-*s %s %s" % (label_width, category, bar, format_number(round(value, 4)))
        )
    return "\n".join(lines)


def plot_svg(spec) -> str:
    """Static horizontal bar chart; one rect and label pair per category."""
    bar_h, gap, label_w, chart_w = 22, 8, 140, 360
    rows = len(spec.categories)
    height = 30 + rows * (bar_h + gap)
    peak = max(spec.values) if spec.values and max(spec.values) > 0 else 1.0
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
        % (label_w + chart_w + 60, height),
        '<text x="4" y="18" font-family="monospace" font-size="14">%s</text>'
        % spec.title,
    ]
    for i, (category, value) in enumerate(zip(spec.categories, spec.values)):
        y = 30 + i * (bar_h + gap)
        width = max(1, round(max(value, 0.0) / peak * chart_w))
        parts.append(
            '<text x="4" y="%d" font-family="monospace" font-size="12">%s</text>'
            % (y + bar_h - 7, category)
        )
        parts.append(
            '<rect x="%d" y="%d" width="%d" height="%d" fill="steelblue"/>'
            % (label_w, y, width, bar_h)
        )
        parts.append(
            '<text x="%d" y="%d" font-family="monospace" font-size="12">%s</text>'
            % (label_w + width + 6, y + bar_h - 7, format_number(round(value, 4)))
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Registry self-test
# ---------------------------------------------------------------------------


def selftest(registry, out=sys.stdout) -> bool:
    """Validate the shipped pack: command and example floors, compilable
    snippets, and every authored example classified back to its command."""
    problems = []
    if len(registry) < COMMAND_FLOOR:
        problems.append(
            "registry has %d commands; floor is %d" % (len(registry), COMMAND_FLOOR)
        )
    for cmd in registry:
        if len(cmd.examples) < EXAMPLE_FLOOR:
            problems.append(
                "command '%s' has %d examples; floor is %d"
                % (cmd.id, len(cmd.examples), EXAMPLE_FLOOR)
            )
        if cmd.source_snippet:
            try:
                pyast.parse(cmd.source_snippet)
            except SyntaxError as err:
                problems.append("snippet for '%s' does not compile: %s" % (cmd.id, err))
    store = ExampleStore.from_registry(registry)
    model = train(store)
    for utterance, cmd_id, _ in store.rows:
        top = predict_topk(model, utterance, 1)[0][0]
        if top != cmd_id:
            problems.append(
                "example %r classifies as '%s', not '%s'" % (utterance, top, cmd_id)
            )
    out.write("commands: %d (floor %d)\n" % (len(registry), COMMAND_FLOOR))
    out.write(
        "examples: %d across %d commands (floor %d each)\n"
        % (sum(len(c.examples) for c in registry), len(registry), EXAMPLE_FLOOR)
    )
    for problem in problems:
        out.write("problem: %s\n" % problem)
    out.write("self-test %s\n" % ("PASSED" if not problems else "FAILED"))
    return not problems


# ---------------------------------------------------------------------------
# REPL
# ---------------------------------------------------------------------------


def repl(session, stream_in, stream_out, export_path=None, svg_dir=None) -> None:
    plots_written = 0
    interactive = getattr(stream_in, "isatty", lambda: False)()
    if interactive:
        stream_out.write("parlance ready; type a request, or 'exit' to leave.\n")
    while True:
        if interactive:
            stream_out.write("> ")
            stream_out.flush()
        line = stream_in.readline()
        if not line:
            break
        text = line.strip()
        if not text:
            continue
        if text in ("exit", "quit"):
            break
        top = session.hints(text, 1)
        if top:
            stream_out.write("[hint] %s\n" % top[0].text)
        for resp in session.handle_input(text):
            if isinstance(resp, ShowValue) and isinstance(resp.value, PlotV):
                if resp.explanation:
                    stream_out.write(resp.explanation + "\n")
                stream_out.write(text_bar_chart(resp.value.spec) + "\n")
                if svg_dir is not None:
                    plots_written += 1
                    target = Path(svg_dir) / ("plot_%d.svg" % plots_written)
                    target.write_text(plot_svg(resp.value.spec), encoding="utf-8")
                    stream_out.write("wrote %s\n" % target)
                continue
            for out_line in response_lines(resp):
                stream_out.write(out_line + "\n")
    if export_path is not None:
        Path(export_path).write_text(session.export(), encoding="utf-8")
        stream_out.write("wrote %s\n" % export_path)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parlance",
        description="Conversational data-science engine: chat in, script out.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--replay", metavar="FILE", help="replay a transcript and report")
    parser.add_argument("--export", metavar="FILE", help="write the session script on exit")
    parser.add_argument("--seed", type=int, default=None, help="seed for random commands")
    parser.add_argument("--selftest", action="store_true", help="validate the command pack")
    parser.add_argument("--serve", action="store_true", help="run the HTTP service")
    parser.add_argument("--svg-dir", metavar="DIR", help="also write plots as SVG files")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        registry = build_registry()
    except (ConfigError, EngineError) as err:
        sys.stderr.write("startup error: %s\n" % err)
        return 2
    if args.selftest:
        return 0 if selftest(registry, sys.stdout) else 1
    if args.replay:
        try:
            turns = load_transcript(args.replay)
        except MalformedTranscript as err:
            sys.stderr.write("startup error: %s\n" % err)
            return 2
        report = run_replay(
            turns, lambda: Session(build_registry(), rng_seed=config.seed)
        )
        sys.stdout.write(render_report(report))
        return 0 if report.passed else 1
    if args.serve:
        from .service import serve

        serve(config)
        return 0
    session = Session(registry, rng_seed=config.seed)
    repl(session, sys.stdin, sys.stdout, export_path=args.export, svg_dir=args.svg_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())

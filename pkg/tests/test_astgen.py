import json
import random
import re

import numpy as np
import pytest

from parlance.astgen import (
    AssignStmt,
    CallNode,
    ConversationAst,
    ExprStmt,
    HistoryRefSrc,
    LiteralSrc,
    NestedSrc,
    VarRefSrc,
    ast_to_data,
    build_ast_node,
    evaluate_script,
    export_script,
)
from parlance.commands import ArgSpec, CommandRegistry, CommandSpec
from parlance.errors import ArityMismatch, EngineError, MissingSnippet
from parlance.types import ARRAY, INT
from parlance.values import ArrayV, IntV, RealV, UnitV, coerce_value


def body_add(x, y):
    return IntV(x.value + y.value) if isinstance(x, IntV) and isinstance(y, IntV) \
        else RealV(x.value + y.value)


def body_length(arr):
    return IntV(len(arr.values))


def body_mean(arr):
    return RealV(sum(arr.values) / len(arr.values))


def body_random_array(n, seed):
    draws = np.random.default_rng(seed).standard_normal(n.value)
    return ArrayV(tuple(float(x) for x in draws))


def make_registry():
    return CommandRegistry([
        CommandSpec(
            id="pearson_correlation",
            title="compute pearson correlation: {x} and {y}",
            examples=("pearson correlation between {x} and {y}",),
            argument_types={"x": ArgSpec(ARRAY), "y": ArgSpec(ARRAY)},
            body=lambda x, y: UnitV(),
            source_snippet=(
                "def pearson_correlation(x,y):\n"
                "    from scipy.stats import pearsonr\n"
                "    return pearsonr(x,y)"
            ),
        ),
        CommandSpec(
            id="random_array",
            title="generate a random array of {n} numbers",
            examples=("random array of {n} values",),
            argument_types={"n": ArgSpec(INT)},
            body=body_random_array,
            source_snippet=(
                "def random_array(n, seed):\n"
                "    import numpy as np\n"
                "    return np.random.default_rng(seed).standard_normal(n)"
            ),
        ),
        CommandSpec(
            id="length",
            title="length of {arr}",
            examples=("how long is {arr}",),
            argument_types={"arr": ArgSpec(ARRAY)},
            body=body_length,
            source_snippet="def length(arr):\n    return len(arr)",
        ),
        CommandSpec(
            id="add",
            title="add {x} and {y}",
            examples=("sum of {x} and {y}",),
            argument_types={"x": ArgSpec(INT), "y": ArgSpec(INT)},
            body=body_add,
            source_snippet="def add(x, y):\n    return x + y",
        ),
        CommandSpec(
            id="mean",
            title="mean of {arr}",
            examples=("average {arr}",),
            argument_types={"arr": ArgSpec(ARRAY)},
            body=body_mean,
            source_snippet="def mean(arr):\n    return sum(arr) / len(arr)",
        ),
        CommandSpec(
            id="say_hello",
            title="say hello",
            examples=("hello",),
            argument_types={},
            body=lambda: UnitV(),
            source_snippet="def say_hello():\n    return 'hello'",
        ),
        CommandSpec(
            id="broken",
            title="broken",
            examples=(),
            argument_types={},
            body=lambda: UnitV(),
        ),
    ])


REGISTRY = make_registry()


def nested_correlation_call(seed=42):
    pearson = REGISTRY.get("pearson_correlation")
    rand = REGISTRY.get("random_array")
    length = REGISTRY.get("length")
    inner = build_ast_node(length, [VarRefSrc("petalength")])
    middle = build_ast_node(rand, [NestedSrc(inner)], seed=seed)
    return build_ast_node(pearson, [VarRefSrc("petalength"), NestedSrc(middle)])


def test_arity_checked_when_building_nodes():
    add = REGISTRY.get("add")
    node = build_ast_node(add, [LiteralSrc(IntV(1)), LiteralSrc(IntV(2))])
    assert node.args == (LiteralSrc(IntV(1)), LiteralSrc(IntV(2)))
    with pytest.raises(ArityMismatch):
        build_ast_node(add, [LiteralSrc(IntV(1))])


def test_depth_three_composition_exports_as_single_line():
    ast = ConversationAst(preloaded={"petalength"})
    ast.record_call(nested_correlation_call(), history_index=1)
    script = export_script(ast, REGISTRY)
    final = script.rstrip("\n").splitlines()[-1]
    assert re.sub(r", seed=\d+", "", final) == (
        "pearson_correlation(petalength, random_array(length(petalength)))"
    )
    # defs appear once each, in first-use order, all before the call line
    defs = [i for i, line in enumerate(script.splitlines()) if line.startswith("def ")]
    names = [script.splitlines()[i] for i in defs]
    assert names == [
        "def pearson_correlation(x,y):",
        "def random_array(n, seed):",
        "def length(arr):",
    ]


def test_saving_rewrites_call_into_assignment():
    ast = ConversationAst()
    mean = REGISTRY.get("mean")
    call = build_ast_node(mean, [LiteralSrc(ArrayV((1.0, 2.0, 3.0)))])
    ast.record_call(call, history_index=1)
    ast.record_save("m", HistoryRefSrc(1), history_index=2)
    assert isinstance(ast.statements[0], AssignStmt)
    assert len(ast.statements) == 1
    script = export_script(ast, REGISTRY)
    assert script.rstrip("\n").splitlines()[-1] == "m = mean([1.0, 2.0, 3.0])"


def test_saving_twice_chains_through_the_first_name():
    ast = ConversationAst()
    mean = REGISTRY.get("mean")
    ast.record_call(build_ast_node(mean, [LiteralSrc(ArrayV((2.0,)))]), 1)
    ast.record_save("first", HistoryRefSrc(1), 2)
    ast.record_save("second", HistoryRefSrc(2), 3)
    lines = export_script(ast, REGISTRY).rstrip("\n").splitlines()
    assert lines[-2:] == ["first = mean([2.0])", "second = first"]


def test_saving_a_literal_appends_plain_assignment():
    ast = ConversationAst()
    ast.record_save("xs", LiteralSrc(ArrayV((1.0, 2.0))), 1)
    assert export_script(ast, REGISTRY) == "xs = [1.0, 2.0]\n"


def test_single_no_arg_command_is_one_def_one_call():
    ast = ConversationAst()
    ast.record_call(build_ast_node(REGISTRY.get("say_hello"), []), 1)
    assert export_script(ast, REGISTRY) == (
        "def say_hello():\n    return 'hello'\nsay_hello()\n"
    )


def test_command_used_twice_defined_once():
    ast = ConversationAst()
    hello = REGISTRY.get("say_hello")
    ast.record_call(build_ast_node(hello, []), 1)
    ast.record_call(build_ast_node(hello, []), 2)
    script = export_script(ast, REGISTRY)
    assert script.count("def say_hello") == 1
    assert script.count("say_hello()") == 3  # one def line and two calls


def test_history_reference_becomes_named_temporary():
    ast = ConversationAst()
    mean = REGISTRY.get("mean")
    add = REGISTRY.get("add")
    ast.record_call(build_ast_node(add, [LiteralSrc(IntV(1)), LiteralSrc(IntV(2))]), 1)
    source = ast.source_for_history(1)
    assert source == HistoryRefSrc(1)
    ast.record_call(build_ast_node(add, [source, LiteralSrc(IntV(10))]), 2)
    lines = export_script(ast, REGISTRY).rstrip("\n").splitlines()
    assert lines[-2:] == ["_r1 = add(1, 2)", "add(_r1, 10)"]
    # the live tree still holds the original expression statement
    assert isinstance(ast.statements[0], ExprStmt)
    _ = mean


def test_nested_provenance_duplicates_the_call():
    ast = ConversationAst()
    add = REGISTRY.get("add")
    inner = build_ast_node(add, [LiteralSrc(IntV(1)), LiteralSrc(IntV(2))])
    ast.record_nested(inner, history_index=1)
    outer = build_ast_node(
        add, [ast.source_for_history(1), LiteralSrc(IntV(5))]
    )
    ast.record_call(outer, history_index=2)
    script = export_script(ast, REGISTRY)
    assert script.rstrip("\n").splitlines()[-1] == "add(add(1, 2), 5)"
    assert ast.source_for_history(99) is None


def test_missing_snippet_refused():
    ast = ConversationAst()
    ast.record_call(build_ast_node(REGISTRY.get("broken"), []), 1)
    with pytest.raises(MissingSnippet):
        export_script(ast, REGISTRY)


def test_unassigned_variable_reference_refused():
    ast = ConversationAst()
    mean = REGISTRY.get("mean")
    ast.record_call(build_ast_node(mean, [VarRefSrc("ghost")]), 1)
    with pytest.raises(EngineError):
        export_script(ast, REGISTRY)


def test_export_is_idempotent_and_non_mutating():
    ast = ConversationAst()
    add = REGISTRY.get("add")
    ast.record_call(build_ast_node(add, [LiteralSrc(IntV(1)), LiteralSrc(IntV(2))]), 1)
    ast.record_call(build_ast_node(add, [HistoryRefSrc(1), LiteralSrc(IntV(3))]), 2)
    first = export_script(ast, REGISTRY)
    second = export_script(ast, REGISTRY)
    assert first == second
    assert isinstance(ast.statements[0], ExprStmt)


def test_serialized_form_is_structured_and_json_ready():
    ast = ConversationAst(preloaded={"petalength"})
    ast.record_call(nested_correlation_call(seed=7), 1)
    ast.record_save("answer", HistoryRefSrc(1), 2)
    data = ast_to_data(ast)
    assert json.dumps(data)
    assert data["statements"][0]["assign"] == "answer"
    call = data["statements"][0]["source"]["call"]
    assert call["command"] == "pearson_correlation"
    assert call["args"][1]["call"]["seed"] == 7


# -- round-trip: exported scripts replay to the live result -------------------

BODIES = {
    "add": body_add,
    "length": body_length,
    "mean": body_mean,
    "random_array": body_random_array,
}


def live_eval(call: CallNode, history: dict[int, object]):
    args = []
    for src in call.args:
        if isinstance(src, LiteralSrc):
            args.append(src.value)
        elif isinstance(src, HistoryRefSrc):
            args.append(history[src.index])
        elif isinstance(src, NestedSrc):
            args.append(live_eval(src.call, history))
        else:
            raise AssertionError(src)
    if call.seed is not None:
        return BODIES[call.command_id](*args, call.seed)
    return BODIES[call.command_id](*args)


def random_conversation(rng: random.Random) -> tuple[ConversationAst, object]:
    ast = ConversationAst()
    int_history: list[int] = []  # history indices of integer results
    history_values: dict[int, object] = {}
    add = REGISTRY.get("add")
    mean = REGISTRY.get("mean")
    length = REGISTRY.get("length")
    rand_cmd = REGISTRY.get("random_array")

    def int_source(depth):
        roll = rng.random()
        if depth < 3 and roll < 0.3:
            return NestedSrc(int_call(depth + 1))
        if int_history and roll < 0.55:
            return HistoryRefSrc(rng.choice(int_history))
        return LiteralSrc(IntV(rng.randint(-20, 20)))

    def array_source(depth):
        if depth < 3 and rng.random() < 0.4:
            seed = rng.randint(0, 10**6)
            n = LiteralSrc(IntV(rng.randint(1, 6)))
            return NestedSrc(build_ast_node(rand_cmd, [n], seed=seed))
        values = tuple(round(rng.uniform(-5, 5), 3) for _ in range(rng.randint(1, 5)))
        return LiteralSrc(ArrayV(values))

    def int_call(depth):
        if rng.random() < 0.7:
            return build_ast_node(add, [int_source(depth), int_source(depth)])
        return build_ast_node(length, [array_source(depth)])

    turns = rng.randint(1, 5)
    value = None
    for turn in range(1, turns + 1):
        if rng.random() < 0.75:
            call = int_call(0)
        else:
            call = build_ast_node(mean, [array_source(0)])
        value = live_eval(call, history_values)
        ast.record_call(call, history_index=turn)
        history_values[turn] = value
        if isinstance(value, IntV):
            int_history.append(turn)
    return ast, value


def test_fifty_random_conversations_replay_bit_for_bit():
    rng = random.Random(2026)
    for _ in range(50):
        ast, live_value = random_conversation(rng)
        script = export_script(ast, REGISTRY)
        replayed = coerce_value(evaluate_script(script))
        assert replayed == coerce_value(live_value), script

"""参考解释器测试"""

import pytest

from compiler.errors import Category, InternalCompilerError, RuntimeFault
from compiler.interp import Config, apply_binop, dynamic_type, format_value, run, run_statements, step
from compiler.type_terms import INT, STR, TList


@pytest.fixture
def both(front_end, to_ssa):
    """在核心解释器与 SSA 解释器上各跑一次，要求输出一致"""

    def execute(source: str, **options) -> str:
        _, typed = front_end(source)
        core = run(typed, **options)
        ssa = run(to_ssa(source), **options)
        assert core == ssa
        return core

    return execute


def test_golden_outputs(golden, front_end, to_ssa):
    for program in golden:
        _, typed = front_end(program.source)
        assert run(typed, check_types=True) == program.expected, program.name
        assert run(to_ssa(program.source), check_types=True) == program.expected, program.name


def test_floor_division(both):
    source = "Print 7 divided by 2. Print -7 divided by 2. Print -7 modulo 3. Print 7 modulo -3."
    assert both(source) == "3\n-4\n2\n-2\n"


def test_value_formatting(both):
    source = 'Print "hi". Print true. Print [1, 2]. Print ["a", "b"]. Print "abc" reversed.'
    assert both(source) == "hi\nTrue\n[1, 2]\n['a', 'b']\ncba\n"


def test_lists_have_value_semantics(both):
    source = "Let a be [1]. Let b be a. Add 2 to a. Print b. Print a."
    assert both(source) == "[1]\n[1, 2]\n"


def test_foreach_iterates_the_original_list(both):
    source = "Let xs be [1, 2]. For each n in xs: Add n to xs. End for. Print xs."
    assert both(source) == "[1, 2, 1, 2]\n"


def test_else_if_chain(both):
    source = (
        "Let n be 2.\n"
        "If n is 1:\n    Print \"one\".\n"
        "Else if n is 2:\n    Print \"two\".\n"
        "Else:\n    Print \"many\".\nEnd if.\n"
    )
    assert both(source) == "two\n"


@pytest.mark.parametrize("source, message", [
    ("Let z be 0. Print 1 divided by z.", "division by zero"),
    ("Let z be 0. Print 1 modulo z.", "modulo by zero"),
])
def test_division_by_zero(front_end, to_ssa, source, message):
    _, typed = front_end(source)
    for program in (typed, to_ssa(source)):
        with pytest.raises(RuntimeFault) as info:
            run(program)
        assert info.value.kind == "division-by-zero"
        assert info.value.message == message
        assert info.value.to_diagnostic().category is Category.RUNTIME


@pytest.mark.parametrize("source", [
    "Let x be 9223372036854775807. Print x plus 1.",
    "Let x be -9223372036854775808. Print x minus 1.",
    "Let x be 4294967296. Print x times x.",
    "Print sum of [9223372036854775807, 1].",
])
def test_overflow(front_end, to_ssa, source):
    _, typed = front_end(source)
    for program in (typed, to_ssa(source)):
        with pytest.raises(RuntimeFault) as info:
            run(program)
        assert info.value.kind == "overflow"


def test_step_budget(front_end, to_ssa):
    source = "While true: Print 1. End while."
    _, typed = front_end(source)
    for program in (typed, to_ssa(source)):
        with pytest.raises(RuntimeFault, match="step budget of 1000 steps exhausted") as info:
            run(program, budget=1000)
        assert info.value.kind == "nontermination"


def test_store_is_returned(front_end):
    core, _ = front_end("Let x be 2. Let x be x times 3.")
    output, store = run_statements(core.statements)
    assert output == ""
    assert store == {"x": 6}


def test_statements_continue_from_store(front_end):
    core, _ = front_end("Let x be 5. Print x.")
    _, store = run_statements(core.statements[:1])
    output, _ = run_statements(core.statements[1:], store)
    assert output == "5\n"


def test_single_step(front_end):
    core, _ = front_end("Print 1. Print 2.")
    config = step(Config(core.statements))
    assert config.output == ["1\n"]
    assert not config.terminal
    config = step(config)
    assert config.terminal
    with pytest.raises(InternalCompilerError):
        step(config)


def test_apply_binop_checks_range():
    assert apply_binop("times", 3, -4) == -12
    with pytest.raises(RuntimeFault):
        apply_binop("plus", 2 ** 63 - 1, 1)


def test_format_value_matches_python_print():
    assert format_value("plain") == "plain"
    assert format_value(("it's", "b")) == str(["it's", "b"])
    assert format_value((True, False)) == "[True, False]"
    assert format_value(()) == "[]"


def test_dynamic_type():
    assert dynamic_type(3) == INT
    assert dynamic_type(("a",)) == TList(STR)
    assert dynamic_type(()) is None

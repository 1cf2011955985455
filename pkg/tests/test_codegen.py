"""Python 代码生成测试"""

import pytest

from compiler.codegen import DEFAULT_HEADER, GUARD_NAME, SUM_GUARD_NAME, emit, plan_names


@pytest.fixture
def python(to_ssa):
    def generate(source: str, **options) -> str:
        return emit(to_ssa(source), **options)

    return generate


def body(code: str):
    lines = code.splitlines()
    assert lines[0] == DEFAULT_HEADER
    return lines[1:]


def test_sample(python, sample):
    assert python(sample, overflow_checks=False) == (
        "# generated by linguinec\n"
        "numbers = [8, 12, 15, 9, 6]\n"
        "total = sum(numbers)\n"
        "count = len(numbers)\n"
        "average = total // count\n"
        "if average > 10:\n"
        "    print('Average exceeds ten')\n"
    )


def test_while_loop_reuses_one_name_per_variable(python):
    code = python("Let i be 0. While i is less than 3: Let i be i plus 1. End while. Print i.", overflow_checks=False)
    assert body(code) == [
        "i = 0",
        "while i < 3:",
        "    i = i + 1",
        "print(i)",
    ]


def test_foreach_becomes_for_loop(python):
    assert body(python("For each n in [1, 2]: Print n. End for.")) == [
        "for n in [1, 2]:",
        "    print(n)",
    ]


def test_else_if_chain_becomes_elif(python):
    code = python("Let n be 2. If n is 1: Print 1. Else if n is 2: Print 2. Else: Print 3. End if.")
    assert body(code) == [
        "n = 2",
        "if n == 1:",
        "    print(1)",
        "elif n == 2:",
        "    print(2)",
        "else:",
        "    print(3)",
    ]


def test_empty_block_gets_pass(python):
    assert body(python("Let x be 1. If true: End if. Print x.")) == [
        "x = 1",
        "if True:",
        "    pass",
        "print(x)",
    ]


def test_append_rebinds(python):
    assert body(python("Let xs be [1]. Add 2 to xs. Print xs.")) == [
        "xs = [1]",
        "xs = xs + [2]",
        "print(xs)",
    ]


@pytest.mark.parametrize("source, line", [
    ("Print (1 plus 2) times 3.", "print((1 + 2) * 3)"),
    ("Print 1 minus (2 minus 3).", "print(1 - (2 - 3))"),
    ("Print 1 minus 2 minus 3.", "print(1 - 2 - 3)"),
    ("Print 2 minus -3.", "print(2 - -3)"),
    ("Print (1 is 1) is true.", "print((1 == 1) == True)"),
    ('Print length of "ab" reversed.', "print(len('ab'[::-1]))"),
    ("Print 1 plus 2 is 3.", "print(1 + 2 == 3)"),
])
def test_minimal_parentheses(python, source, line):
    assert body(python(source, overflow_checks=False)) == [line]


def test_identifiers_are_snake_case(python):
    assert body(python("Let maxValue be 3. Print maxValue.")) == ["max_value = 3", "print(max_value)"]


def test_reserved_identifiers_get_suffix(python):
    code = python("Let class be 1. Let len be [class]. Print length of len.")
    assert body(code) == ["class_ = 1", "len_ = [class_]", "print(len(len_))"]


def test_colliding_identifiers_stay_distinct(to_ssa):
    plan = plan_names(to_ssa("Let maxValue be 1. Let max_value be 2. Print maxValue."))
    assert plan.identifiers == {"maxValue": "max_value", "max_value": "max_value_"}


def test_annotations(python, sample):
    lines = body(python(sample, annotate=True, overflow_checks=False))
    assert lines[0] == "numbers = [8, 12, 15, 9, 6]  # line 1"
    assert lines[4] == "if average > 10:  # it -> average"
    assert lines[5] == "    print('Average exceeds ten')  # line 6"


def test_custom_header(python):
    assert python("Print 1.", header="# demo").splitlines() == ["# demo", "print(1)"]


def test_golden_code_is_valid_python(python, golden):
    for program in golden:
        code = python(program.source)
        compile(code, f"{program.name}.py", "exec")


def test_fizzbuzz_uses_elif(python, golden):
    assert any(line.lstrip().startswith("elif ") for line in python(golden.get("fizzbuzz").source).splitlines())


def test_sample_with_overflow_checks(python, sample):
    lines = python(sample).splitlines()
    assert lines[0] == DEFAULT_HEADER
    assert lines[1] == "import sys as _sys"
    assert f"def {GUARD_NAME}(value):" in lines
    assert f"def {SUM_GUARD_NAME}(items, start=0):" in lines
    assert "    if not -9223372036854775808 <= value <= 9223372036854775807:" in lines
    assert lines[-6:] == [
        "numbers = [8, 12, 15, 9, 6]",
        "total = _int64_sum(numbers)",
        "count = len(numbers)",
        "average = _int64(total // count)",
        "if average > 10:",
        "    print('Average exceeds ten')",
    ]
    compile("\n".join(lines), "sample.py", "exec")


@pytest.mark.parametrize("source, line", [
    ("Let x be 1. Print x plus 1.", "print(_int64(x + 1))"),
    ("Let x be 1. Print (x plus 1) times 2.", "print(_int64(_int64(x + 1) * 2))"),
    ("Let x be 7. Print x divided by 2.", "print(x // 2)"),
    ("Let x be 7. Print x divided by -1.", "print(_int64(x // -1))"),
    ("Let x be 7. Print x modulo x.", "print(x % x)"),
])
def test_overflow_checks_wrap_each_operation(python, source, line):
    assert python(source).splitlines()[-1] == line


def test_no_guard_without_arithmetic(python):
    assert python("Let xs be [1, 2]. Print length of xs.") == "# generated by linguinec\nxs = [1, 2]\nprint(len(xs))\n"


def test_guard_without_sum_helper(python):
    code = python("Let x be 1. Print x minus 2.")
    assert f"def {GUARD_NAME}(value):" in code
    assert SUM_GUARD_NAME not in code

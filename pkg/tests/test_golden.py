"""黄金程序端到端测试"""

import time

import pytest

from compiler.pipeline import compile_source
from corpus import GoldenCorpus

NAMES = GoldenCorpus.NAMES
ALL_NAMES = GoldenCorpus.NAMES + GoldenCorpus.EXTRA_NAMES


def test_corpus_is_complete(golden):
    assert len(golden) == 9
    for program in golden:
        assert program.source.startswith("#")
        assert program.expected.endswith("\n") or program.expected == ""


def test_titles(golden):
    assert golden.get("fizzbuzz").title == "FizzBuzz over 1..15 with a chained If / Else if."
    assert golden.get("max_of_list").title == "Max of List"


def test_unknown_program(golden):
    with pytest.raises(FileNotFoundError):
        golden.get("quicksort")


@pytest.mark.parametrize("name", ALL_NAMES)
def test_interpreted_output(golden, name):
    program = golden.get(name)
    unit = compile_source(program.source, program.path.name, interpret=True, check_types=True)
    assert unit.ok, unit.render_diagnostic()
    assert unit.output == program.expected


@pytest.mark.slow
@pytest.mark.parametrize("name", ALL_NAMES)
def test_emitted_output(golden, runner, name):
    program = golden.get(name)
    unit = compile_source(program.source, program.path.name)
    assert unit.ok, unit.render_diagnostic()
    result = runner.run_source(unit.python_source)
    assert result.ok, result.stderr
    assert result.stdout == program.expected


def test_emitted_code_is_valid_python(golden):
    for program in golden:
        unit = compile_source(program.source, program.path.name)
        compile(unit.python_source, f"{program.name}.py", "exec")


def test_largest_script(golden):
    program = golden.largest()
    assert program.name == "grade_report"
    assert program.line_count == 39
    assert program.name not in golden.names()


def test_compile_latency(golden):
    program = golden.largest()
    compile_source(program.source, program.path.name)
    best = float("inf")
    for _ in range(3):
        started = time.perf_counter()
        unit = compile_source(program.source, program.path.name)
        best = min(best, time.perf_counter() - started)
        assert unit.ok
    assert best < 0.2


def test_stage_times_add_up_to_total(golden):
    program = golden.largest()
    gaps = []
    for _ in range(5):
        unit = compile_source(program.source, program.path.name)
        assert unit.ok
        assert all(ms >= 0 for ms in unit.timings.values())
        staged = sum(unit.timings.values())
        assert staged <= unit.total_ms
        gaps.append((unit.total_ms - staged) / unit.total_ms)
    assert min(gaps) <= 0.10

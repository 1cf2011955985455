"""编译流水线测试"""

import pytest

from compiler.errors import Category
from compiler.pipeline import STAGES, CompilerPipeline, PipelineConfig, compile_source


def test_full_compile(sample):
    unit = compile_source(sample, "average.ling")
    assert unit.ok
    assert unit.diagnostic is None
    assert unit.python_source.startswith("# generated by linguinec\n")
    assert list(unit.timings) == ["lex", "parse", "desugar", "typeck", "ssa", "verify", "refs", "codegen"]
    assert unit.output is None


def test_interpret_mode(golden):
    program = golden.get("factorial")
    unit = compile_source(program.source, "factorial.ling", interpret=True)
    assert unit.ok
    assert unit.output == program.expected
    assert "interp" in unit.timings and "codegen" not in unit.timings


def test_stop_after(sample):
    unit = compile_source(sample, stop_after="typeck")
    assert unit.ok
    assert unit.typed is not None
    assert unit.ssa is None
    assert unit.python_source is None


def test_unknown_stage_is_rejected():
    with pytest.raises(ValueError, match="unknown stage"):
        PipelineConfig(stop_after="optimize")


def test_timings_format(sample):
    lines = compile_source(sample).format_timings().splitlines()
    assert lines[-1].startswith("total\t")
    assert [line.split("\t")[0] for line in lines[:-1]] == list(STAGES[:8])


def test_orphan_diagnostic_rendering():
    unit = compile_source("Print it.\n", "orphan.ling")
    assert not unit.ok
    assert unit.diagnostic.category is Category.PRONOUN_UNDEFINED
    assert unit.render_diagnostic().splitlines() == [
        "error[pronoun-undefined] undefined pronoun 'it': no antecedent is bound before it",
        " --> orphan.ling:1:7",
        "  |",
        "1 | Print it.",
        "  |       ^^",
        "referent trace:",
        "  none bound",
    ]


def test_ambiguous_diagnostic_lists_trace():
    source = "If true:\n    Let first be 1.\nElse:\n    Let second be 2.\nEnd if.\nPrint it.\n"
    unit = compile_source(source, "amb.ling")
    assert unit.diagnostic.category is Category.PRONOUN_AMBIGUOUS
    text = unit.render_diagnostic()
    assert "  first bound at line 2:9" in text
    assert "  second bound at line 4:9" in text


@pytest.mark.parametrize("source, category", [
    ('Print "open.', Category.LEX),
    ("Let x be.", Category.PARSE),
    ('Print 1 plus "a".', Category.TYPE),
    ("Print 1 divided by 0.", Category.RUNTIME),
])
def test_one_diagnostic_per_failure(source, category):
    unit = compile_source(source, interpret=True)
    assert unit.status == "failed"
    assert unit.diagnostic.category is category
    assert unit.render_diagnostic().startswith(f"error[{category.value}] ")


def test_parse_diagnostic_quotes_sentence():
    unit = compile_source("Let x be.")
    assert "  = in sentence: Let x be ." in unit.render_diagnostic()


def test_type_diagnostic_names_both_types():
    unit = compile_source('Let n be 1.\nPrint n plus "a".')
    rendered = unit.render_diagnostic()
    assert "expected Int, found Str" in rendered
    assert " --> <input>:2:7" in rendered


def test_deep_nesting_is_reported_not_crashed():
    source = "Print " + "(" * 3000 + "1" + ")" * 3000 + "."
    unit = compile_source(source)
    assert unit.diagnostic.category is Category.INTERNAL
    assert "too deep" in unit.diagnostic.message


def test_step_budget_option():
    unit = compile_source("While true: Print 1. End while.", interpret=True, step_budget=500)
    assert unit.diagnostic.category is Category.RUNTIME
    assert "step budget of 500" in unit.diagnostic.message


def test_pipeline_info():
    info = CompilerPipeline(PipelineConfig(interpret=True)).get_pipeline_info()
    assert [stage["stage"] for stage in info["stages"]][-1] == "interp"


def test_total_is_measured_around_the_whole_compile(sample):
    unit = compile_source(sample)
    total = float(unit.format_timings().splitlines()[-1].split("\t")[1])
    assert total == pytest.approx(unit.total_ms, abs=1e-3)
    assert unit.total_ms >= sum(unit.timings.values())


def test_failed_compile_still_has_total():
    unit = compile_source("Print it.\n")
    assert not unit.ok
    assert unit.total_ms > 0


def test_article_words_as_variables_reach_reference_analysis():
    unit = compile_source("Let c be true. If c: Let a be 1. Else: Let b be 2. End if. Print it.")
    assert unit.diagnostic.category is Category.PRONOUN_AMBIGUOUS
    unit = compile_source("Let a be 4.\nLet the total be a plus 1.\nPrint total.\n", interpret=True)
    assert unit.ok, unit.render_diagnostic()
    assert unit.output == "5\n"

"""指代分析测试"""

import pytest

from compiler.errors import Category, PronounError, SourceSpan
from compiler.lattice import Ref, Top
from compiler.refanalysis import analyze, format_refs

LOOP = """Let x be 0.
While x is less than 3:
    Let x be x plus 1.
End while.
Print it.
"""


def test_golden_pronouns_resolve(to_ssa, golden):
    for program in golden:
        report = analyze(to_ssa(program.source))
        for pronoun in report.pronouns:
            assert pronoun.ssa_name.startswith(pronoun.referent + "_")


def test_sample_chain(to_ssa, golden):
    report = analyze(to_ssa(golden.get("average").source))
    assert format_refs(report) == "6:4  it -> average (bound at line 5)"
    assert report.pronouns[0].sites == (SourceSpan(5, 5, 11),)


def test_loop_joins_both_binding_sites(to_ssa):
    report = analyze(to_ssa(LOOP))
    assert format_refs(report) == "5:7  it -> x (bound at lines 1, 3)"
    assert report.pronouns[0].ssa_name == "x_2"
    assert report.relaxations > 0


def test_block_values(to_ssa):
    report = analyze(to_ssa(LOOP))
    assert report.exit[0] == Ref("x")
    assert report.entry[3] == Ref("x")


@pytest.mark.parametrize("source, names", [
    ("Let x be 1. If true: Let y be 2. End if. Print it.", "'x' or 'y'"),
    ("If true: Let a be 1. Else: Let b be 2. End if. Print it.", "'a' or 'b'"),
    ("Let c be true. If c: Let a be 1. Else: Let b be 2. End if. Print it.", "'a' or 'b'"),
])
def test_branch_join_is_ambiguous(to_ssa, source, names):
    with pytest.raises(PronounError) as info:
        analyze(to_ssa(source))
    error = info.value
    assert error.kind == "ambiguous"
    assert error.message == f"ambiguous pronoun 'it': it could refer to {names}"
    diag = error.to_diagnostic()
    assert diag.category is Category.PRONOUN_AMBIGUOUS
    assert len(diag.trace) == 2


def test_partially_bound_antecedent_is_undefined(to_ssa):
    with pytest.raises(PronounError) as info:
        analyze(to_ssa("If true: Let y be 1. End if. Print it."))
    assert info.value.kind == "undefined"
    assert "antecedent 'y' is not bound on every path" in info.value.message


def test_binding_in_both_arms_is_fine(to_ssa):
    report = analyze(to_ssa("If true: Let y be 1. Else: Let y be 2. End if. Print it."))
    assert report.pronouns[0].referent == "y"
    assert len(report.pronouns[0].sites) == 2


def test_foreach_variable_is_referent(to_ssa):
    report = analyze(to_ssa("For each n in [1, 2]: Print it. End for."))
    assert report.pronouns[0].referent == "n"
    assert report.pronouns[0].ssa_name == "n_1"


def test_top_after_conflicting_loop(to_ssa):
    source = "Let a be 1. For each n in [1]: Print a. End for. Print a."
    report = analyze(to_ssa(source))
    assert report.pronouns == []
    assert isinstance(report.entry[1], Top)

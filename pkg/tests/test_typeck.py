"""类型检查测试"""

import pytest

from compiler.ast_nodes import UNRESOLVED, Pronoun, iter_exprs, iter_statements, statement_exprs
from compiler.errors import Category, PronounError, TypeCheckError
from compiler.type_terms import INT, STR, TList
from compiler.typeck import TypeEnv, format_types, infer
from compiler.desugar import desugar
from compiler.lexer import tokenize
from compiler.parser import parse


def check(source: str, env=None):
    return infer(desugar(parse(tokenize(source))), env)


def test_sample_types(sample):
    assert format_types(check(sample)).splitlines() == [
        "numbers : List<Int>",
        "total : Int",
        "count : Int",
        "average : Int",
    ]


def test_every_golden_program_is_well_typed(golden):
    for program in golden:
        typed = check(program.source)
        assert typed.bindings, program.name


def test_expression_nodes_carry_ground_types(sample):
    typed = check(sample)
    cond = typed.statements[4].cond
    assert cond.left.ty == INT
    assert typed.statements[0].value.ty == TList(INT)


@pytest.mark.parametrize("source, fragment", [
    ('Print 1 plus "a".', "expected Int, found Str in right operand of 'plus'"),
    ('Print 1 is "a".', "between operands of 'is'"),
    ("If 1: Print 1. End if.", "expected Bool, found Int in 'If' condition"),
    ("While 1: Print 1. End while.", "in 'While' condition"),
    ("For each x in 3: Print x. End for.", "'For each' iterable"),
    ('Print sum of "abc".', "expected List<Int>, found Str in 'sum of' operand"),
    ("Print length of 5.", "'length of' operand"),
    ('Let xs be [1]. Add "a" to xs.', "when adding to 'xs'"),
    ('Print [1, "a"].', "in list element"),
    ('Let x be 1. If true: Let x be "s". End if.', "rebound inside a block"),
    ('If true: Let y be 1. End if. Let y be "s".', "may already be bound"),
])
def test_type_mismatches(source, fragment):
    with pytest.raises(TypeCheckError) as info:
        check(source)
    assert "type mismatch" in info.value.message
    assert fragment in info.value.message
    assert info.value.to_diagnostic().category is Category.TYPE


def test_unbound_variable():
    with pytest.raises(TypeCheckError, match="unbound variable 'x'"):
        check("Print x.")


@pytest.mark.parametrize("source", [
    "If true: Let y be 1. End if. Print y.",
    "Let i be 0. While i is less than 3: Let j be i. Let i be i plus 1. End while. Print j.",
    "For each n in [1]: Print n. End for. Print n.",
])
def test_maybe_unbound(source):
    with pytest.raises(TypeCheckError, match="may be unbound here"):
        check(source)


def test_binding_in_both_branches_is_definite():
    typed = check("If true: Let y be 1. Else: Let y be 2. End if. Print y.")
    assert typed.env.bindings["y"] == INT


def test_top_level_rebinding_may_change_type():
    typed = check('Let x be 1. Let x be "a". Print x.')
    assert typed.env.bindings["x"] == STR
    assert format_types(typed) == "x : Int\nx : Str"


@pytest.mark.parametrize("source", [
    "Let xs be []. Add 1 to xs. Print xs.",
    "Let xs be []. Print xs.",
    "Print length of [].",
    "Let xs be [[], [1]].",
])
def test_empty_list_is_rejected(source):
    with pytest.raises(TypeCheckError, match="cannot infer element type for an empty list"):
        check(source)


def test_length_and_reverse_accept_strings():
    typed = check('Let s be "abc". Print length of s. Let r be s reversed.')
    assert typed.env.bindings["r"] == STR


def test_orphan_pronoun():
    with pytest.raises(PronounError) as info:
        check("Print it.")
    assert info.value.kind == "undefined"
    assert info.value.to_diagnostic().category is Category.PRONOUN_UNDEFINED


def test_pronoun_takes_referent_type():
    typed = check('Let s be "ab". Print it reversed.')
    assert typed.statements[1].value.ty == STR


def test_pronoun_to_maybe_bound_referent_is_left_to_reference_analysis():
    typed = check("If true: Let y be 1. End if. Print it.")
    assert typed.env.maybe["y"] == INT


def test_incremental_environment():
    typed = check("Print x plus 1.", TypeEnv({"x": INT}, {"x": INT}))
    assert typed.env.bindings["x"] == INT


def test_conflicting_span_note():
    with pytest.raises(TypeCheckError) as info:
        check('Let n be 3.\nPrint n plus\n"a".')
    notes = info.value.to_diagnostic().notes
    assert notes == ["conflicting type arises at line 3:1"]


def all_exprs(program):
    for stmt in iter_statements(program.statements):
        for root in statement_exprs(stmt):
            yield from iter_exprs(root)


def snapshot(typed):
    return [(name, ty) for name, ty, _ in typed.bindings], [expr.ty for expr in all_exprs(typed.program)]


def test_inference_is_deterministic(golden):
    for program in golden.all() + golden.extras():
        core = desugar(parse(tokenize(program.source)))
        first = snapshot(infer(core))
        # 同一棵树再推断一次：类型变量从头编号
        assert snapshot(infer(core)) == first, program.name
        # 核心程序再去糖一次不变，类型也不变
        assert snapshot(infer(desugar(core))) == first, program.name
        assert all(ty is not None for ty in first[1]), program.name


def test_erasing_a_referent_rejects_the_program(golden):
    erased = 0
    for program in golden.all() + golden.extras():
        core = desugar(parse(tokenize(program.source)))
        infer(core)
        for pronoun in [e for e in all_exprs(core) if isinstance(e, Pronoun)]:
            referent = pronoun.referent
            pronoun.referent = UNRESOLVED
            with pytest.raises(PronounError) as info:
                infer(core)
            assert info.value.kind == "undefined"
            pronoun.referent = referent
            infer(core)
            erased += 1
    assert erased >= 3


def test_erasing_the_sample_referent(sample):
    core = desugar(parse(tokenize(sample)))
    pronouns = [e for e in all_exprs(core) if isinstance(e, Pronoun)]
    assert [p.referent for p in pronouns] == ["average"]
    assert infer(core).bindings
    pronouns[0].referent = UNRESOLVED
    with pytest.raises(PronounError, match="undefined pronoun 'it'"):
        infer(core)

"""REPL 测试"""

import pytest

from compiler.errors import Category
from compiler.pipeline import compile_source
from compiler.repl import Repl, ReplState, format_env, needs_more, repl_eval


def feed(lines):
    state = ReplState()
    outputs = []
    for line in lines:
        state, result = repl_eval(state, line)
        assert result.ok, result.diagnostic
        outputs.append(result.output)
    return state, outputs


def test_pronoun_across_inputs():
    state, outputs = feed(["Let x be 4.", "Print it plus 1."])
    assert outputs == ["", "5\n"]
    assert state.store == {"x": 4}


def test_article_word_names_a_variable():
    state, outputs = feed(["Let a be 4.", "Print a.", "Print a plus 1."])
    assert outputs == ["", "4\n", "5\n"]
    assert state.store["a"] == 4


def test_rejected_input_leaves_state_unchanged():
    state = ReplState()
    after, result = repl_eval(state, "Print it.")
    assert after is state
    assert result.diagnostic.category is Category.PRONOUN_UNDEFINED


def test_runtime_fault_rolls_back():
    state, _ = feed(["Let x be 4."])
    after, result = repl_eval(state, "Let x be 1. Print 1 divided by 0.")
    assert after is state
    assert result.diagnostic.category is Category.RUNTIME
    _, result = repl_eval(after, "Print x.")
    assert result.output == "4\n"


def test_types_persist_between_inputs():
    state, _ = feed(['Let s be "a".'])
    _, result = repl_eval(state, "Print s plus 1.")
    assert result.diagnostic.category is Category.TYPE


def test_session_matches_batch_compilation():
    lines = [
        "Let total be 0.",
        "For each n in [1, 2, 3]: Let total be total plus n. End for.",
        "Print total.",
        "Let names be [\"a\"].",
        "Add \"b\" to names.",
        "Print it reversed.",
    ]
    _, outputs = feed(lines)
    batch = compile_source("\n".join(lines), interpret=True)
    assert batch.ok
    assert "".join(outputs) == batch.output == "6\n['b', 'a']\n"


@pytest.mark.parametrize("buffer, more", [
    ("", False),
    ("Let x be", True),
    ("Let x be 1.", False),
    ("If true:", True),
    ("If true:\n  Print 1.", True),
    ("If true:\n  Print 1.\nEnd if.", False),
    ('Print "unterminated', False),
])
def test_needs_more(buffer, more):
    assert needs_more(buffer) is more


def test_format_env():
    state, _ = feed(["Let x be 1.", 'Let s be "a".'])
    assert format_env(state) == "s : Str\nx : Int"


def scripted(lines):
    pending = list(lines)

    def read(prompt: str) -> str:
        if not pending:
            raise EOFError
        return pending.pop(0)

    return read


def test_loop_reads_blocks_and_commands():
    written, errors = [], []
    repl = Repl(read=scripted(["Let x be 2.", "If x is 2:", "  Print x.", "End if.", ":env", ":bogus", ":quit"]),
                write=written.append, write_error=errors.append)
    assert repl.loop() == 0
    assert "2" in written
    assert "x : Int" in written
    assert any("unknown command" in e for e in errors)


def test_reset_forgets_bindings():
    errors = []
    repl = Repl(read=scripted(["Let x be 1.", ":reset", "Print x."]), write=lambda _: None,
                write_error=errors.append)
    repl.loop()
    assert any("unbound variable 'x'" in e for e in errors)

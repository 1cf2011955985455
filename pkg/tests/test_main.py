"""linguinec 命令行测试"""

import json

import pytest

import main as linguinec


@pytest.fixture
def source_file(tmp_path):
    def write(text: str, name: str = "prog.ling"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


def test_interpret(source_file, capsys):
    path = source_file("Let x be 6.\nPrint x times 7.\n")
    assert linguinec.main([str(path), "--interpret"]) == linguinec.EXIT_OK
    assert capsys.readouterr().out == "42\n"


def test_emit_only_writes_python(source_file, capsys):
    path = source_file("Print 1.\n")
    assert linguinec.main([str(path), "-t", "py"]) == linguinec.EXIT_OK
    target = path.with_suffix(".py")
    assert target.read_text(encoding="utf-8") == "# generated by linguinec\nprint(1)\n"
    assert capsys.readouterr().out == ""


def test_unsupported_target(source_file, capsys):
    path = source_file("Print 1.\n")
    assert linguinec.main([str(path), "-t", "llvm"]) == linguinec.EXIT_UNSUPPORTED_TARGET
    assert "unsupported target 'llvm'" in capsys.readouterr().err
    assert not path.with_suffix(".py").exists()


def test_missing_file(tmp_path, capsys):
    assert linguinec.main([str(tmp_path / "absent.ling")]) == linguinec.EXIT_NOT_FOUND
    assert "file not found" in capsys.readouterr().err


def test_no_file_given(capsys):
    assert linguinec.main([]) == linguinec.EXIT_NOT_FOUND
    assert "no input file" in capsys.readouterr().err


def test_diagnostic_exit_code(source_file, capsys):
    path = source_file("Print it.\n", "orphan.ling")
    assert linguinec.main([str(path), "--interpret"]) == linguinec.EXIT_DIAGNOSTIC
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "error[pronoun-undefined]" in captured.err
    assert "referent trace:" in captured.err
    assert "orphan.ling:1:7" in captured.err


def test_invalid_utf8(tmp_path, capsys):
    path = tmp_path / "bad.ling"
    path.write_bytes(b"Print \"\xff\".\n")
    assert linguinec.main([str(path), "--interpret"]) == linguinec.EXIT_DIAGNOSTIC
    assert "not valid UTF-8" in capsys.readouterr().err


def test_emit_refs(golden, capsys):
    assert linguinec.main([str(golden.get("average").path), "--emit-refs"]) == linguinec.EXIT_OK
    assert capsys.readouterr().out == "6:4  it -> average (bound at line 5)\n"


def test_emit_types_and_tokens(source_file, capsys):
    path = source_file("Let x be 1.\n")
    assert linguinec.main([str(path), "--emit-tokens", "--emit-types"]) == linguinec.EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "KEYWORD\tLet\t1:1-3"
    assert out[-1] == "x : Int"


def test_emit_ir(source_file, capsys):
    path = source_file("Let x be 1.\nPrint x.\n")
    assert linguinec.main([str(path), "--emit-ir"]) == linguinec.EXIT_OK
    assert capsys.readouterr().out == "bb0:\n  x_1:Int = CONST 1\n  PRINT x_1\n"


def test_time_goes_to_stderr(source_file, capsys):
    path = source_file("Print 1.\n")
    assert linguinec.main([str(path), "--interpret", "--time"]) == linguinec.EXIT_OK
    captured = capsys.readouterr()
    assert captured.out == "1\n"
    assert "lex\t" in captured.err
    assert "total\t" in captured.err


def test_config_summary(capsys):
    assert linguinec.main(["--config"]) == linguinec.EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["app"]["name"] == "linguinec"
    assert "step_budget" in info["compiler"]


@pytest.mark.slow
def test_compile_and_run(golden, tmp_path, capsys):
    program = golden.get("fibonacci")
    path = tmp_path / "fibonacci.ling"
    path.write_text(program.source, encoding="utf-8")
    assert linguinec.main([str(path)]) == linguinec.EXIT_OK
    assert capsys.readouterr().out == program.expected
    assert (tmp_path / "fibonacci.py").exists()

"""测试共用夹具"""

import sys

import pytest

from config import CompilerConfig
from compiler.desugar import desugar
from compiler.lexer import tokenize
from compiler.lower import lower
from compiler.parser import parse
from compiler.typeck import infer
from compiler.verify import verify_ssa
from corpus import GoldenCorpus
from targets.python_runner import PythonRunner

SAMPLE = """Let numbers be the list [8, 12, 15, 9, 6].
Let total be sum of numbers.
Let count be length of numbers.
Let average be total divided by count.
If it is greater than 10:
    Print "Average exceeds ten".
End if.
"""


@pytest.fixture(scope="session")
def golden() -> GoldenCorpus:
    return GoldenCorpus()


@pytest.fixture(scope="session")
def runner() -> PythonRunner:
    return PythonRunner(CompilerConfig(), executable=sys.executable)


@pytest.fixture
def sample() -> str:
    return SAMPLE


@pytest.fixture
def front_end():
    """源码 -> (核心程序, 类型化程序)"""

    def run(source: str):
        core = desugar(parse(tokenize(source)))
        return core, infer(core)

    return run


@pytest.fixture
def to_ssa(front_end):
    """源码 -> 通过校验的 SSA 程序"""

    def run(source: str):
        _, typed = front_end(source)
        program = lower(typed)
        verify_ssa(program)
        return program

    return run

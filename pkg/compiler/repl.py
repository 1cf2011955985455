"""
REPL 模块
增量编译：新输入以累积的指代栈与类型环境为起点分析，立即在持久存储上解释执行
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

from utils.logger import get_logger

from .ast_nodes import Program, Stmt
from .desugar import desugar
from .errors import Diagnostic, InternalCompilerError, LexError, LinguineError, render_diagnostic
from .interp import DEFAULT_STEP_BUDGET, Value, run_statements
from .lexer import TokenKind, tokenize
from .lower import lower
from .parser import Parser, ReferentStack
from .refanalysis import analyze
from .typeck import TypedProgram, TypeEnv, infer
from .verify import verify_ssa

logger = get_logger(__name__)

SOURCE_ID = "<repl>"

HELP_TEXT = """commands:
  :help        show this message
  :env         list bound variables and their types
  :reset       forget every binding
  :quit, :q    leave the REPL
Statements end with '.'; blocks are read until their 'End ...' line."""

_OPENERS = ("if", "while", "for-each")
_CLOSERS = ("end-if", "end-while", "end-for")


@dataclass(frozen=True)
class ReplState:
    """REPL 累积状态；每次被接受的输入产生一个新状态"""

    statements: Tuple[Stmt, ...] = ()
    env: TypeEnv = field(default_factory=TypeEnv)
    stack: ReferentStack = field(default_factory=ReferentStack)
    store: Dict[str, Value] = field(default_factory=dict)


@dataclass
class ReplResult:
    output: str = ""
    diagnostic: Optional[Diagnostic] = None

    @property
    def ok(self) -> bool:
        return self.diagnostic is None


def repl_eval(state: ReplState, text: str, budget: int = DEFAULT_STEP_BUDGET) -> Tuple[ReplState, ReplResult]:
    """
    求值一段完整输入

    Args:
        state: 当前状态
        text: 一个或多个完整句子
        budget: 解释器步数上限

    Returns:
        (新状态, 结果)；被拒绝时返回原状态
    """
    try:
        stream = tokenize(text, SOURCE_ID)
        program, stack = Parser(stream, state.stack).parse_program()
        core = desugar(program)
        typed = infer(core, state.env)
        # 指代分析在全部已接受语句加新语句上重做
        combined = Program(state.statements + core.statements, SOURCE_ID)
        ssa = lower(TypedProgram(combined, typed.env, typed.bindings))
        verify_ssa(ssa)
        analyze(ssa)
        output, store = run_statements(core.statements, state.store, budget)
    except LinguineError as exc:
        logger.debug(f"REPL 输入被拒绝: {exc.message}")
        return state, ReplResult(diagnostic=exc.to_diagnostic())
    except RecursionError:
        return state, ReplResult(diagnostic=InternalCompilerError("input nesting is too deep").to_diagnostic())
    new_state = replace(state, statements=state.statements + core.statements, env=typed.env,
                        stack=stack, store=store)
    return new_state, ReplResult(output=output)


def needs_more(buffer: str) -> bool:
    """缓冲区是否还需要更多行：块未闭合，或最后一个记号不是句号"""
    if not buffer.strip():
        return False
    try:
        stream = tokenize(buffer, SOURCE_ID)
    except LexError:
        # 交给 repl_eval 报告
        return False
    depth = 0
    for tok in stream:
        if tok.kind is TokenKind.KEYWORD:
            if tok.value in _OPENERS:
                depth += 1
            elif tok.value in _CLOSERS:
                depth -= 1
    if not stream.tokens:
        return False
    last = stream.tokens[-1]
    return depth > 0 or not last.is_punct(".")


def format_env(state: ReplState) -> str:
    return "\n".join(f"{name} : {ty}" for name, ty in sorted(state.env.bindings.items()))


class Repl:
    """交互式循环；输入输出函数可替换以便测试"""

    def __init__(self, read: Callable[[str], str] = input, write: Callable[[str], None] = print,
                 write_error: Optional[Callable[[str], None]] = None, budget: int = DEFAULT_STEP_BUDGET):
        self.read = read
        self.write = write
        self.write_error = write_error or write
        self.budget = budget
        self.state = ReplState()

    def command(self, line: str) -> bool:
        """执行 : 命令；返回 False 表示退出"""
        name = line.strip().lower()
        if name in (":quit", ":q"):
            return False
        if name == ":help":
            self.write(HELP_TEXT)
        elif name == ":env":
            text = format_env(self.state)
            if text:
                self.write(text)
        elif name == ":reset":
            self.state = ReplState()
        else:
            self.write_error(f"unknown command {line.strip()!r}; type :help")
        return True

    def submit(self, text: str) -> ReplResult:
        self.state, result = repl_eval(self.state, text, self.budget)
        if result.output:
            self.write(result.output.rstrip("\n"))
        if result.diagnostic is not None:
            self.write_error(render_diagnostic(result.diagnostic, text, SOURCE_ID))
        return result

    def loop(self) -> int:
        self.write("Linguine REPL. Type :help for commands, :quit to leave.")
        buffer: List[str] = []
        while True:
            try:
                line = self.read("... " if buffer else "> ")
            except EOFError:
                break
            except KeyboardInterrupt:
                self.write("")
                buffer = []
                continue
            if not buffer and line.strip().startswith(":"):
                if not self.command(line):
                    break
                continue
            buffer.append(line)
            text = "\n".join(buffer)
            if needs_more(text):
                continue
            buffer = []
            if text.strip():
                self.submit(text)
        return 0

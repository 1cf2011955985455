"""
参考解释器模块
按核心操作语义小步执行核心语法树或 SSA 程序，作为差分测试的基准
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .ast_nodes import (
    BinOp, BoolLit, Builtin, BuiltinStmt, Expr, ForEach, If, IntLit, Let, ListLit, Print,
    Program, Pronoun, Reduce, RelOp, Stmt, StrLit, Var, While,
)
from .base_pass import BasePass
from .errors import InternalCompilerError, RuntimeFault, SourceSpan
from .lexer import INT_MAX, INT_MIN
from .ssa import Lit, Operand, SsaProgram, Undef
from .type_terms import BOOL, INT, STR, TList, TypeTerm
from .typeck import TypedProgram

Value = Union[int, bool, str, tuple]
Store = Dict[str, Value]

DEFAULT_STEP_BUDGET = 10_000_000


# ---------------------------------------------------------------- 值

def format_value(value: Value) -> str:
    """与 Python print 输出一致的值文本"""
    if isinstance(value, str):
        return value
    return _repr_value(value)


def _repr_value(value: Value) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return repr(value)
    return "[" + ", ".join(_repr_value(v) for v in value) + "]"


def dynamic_type(value: Value) -> Optional[TypeTerm]:
    """值的运行时类型标签；空列表的元素类型未知，返回 None"""
    if isinstance(value, bool):
        return BOOL
    if isinstance(value, int):
        return INT
    if isinstance(value, str):
        return STR
    if not value:
        return None
    elem = dynamic_type(value[0])
    return TList(elem) if elem is not None else None


def _check_tag(value: Value, static: Optional[TypeTerm], name: str, span: Optional[SourceSpan]) -> None:
    if static is None:
        return
    tag = dynamic_type(value)
    if tag is None:
        if not isinstance(static, TList):
            raise InternalCompilerError(f"preservation violated: '{name}' holds a list but has type {static}", span)
        return
    if tag != static:
        raise InternalCompilerError(f"preservation violated: '{name}' holds {tag} but has type {static}", span)


OVERFLOW_MESSAGE = "integer overflow: result does not fit in 64 bits"


def _checked(value: int, span: Optional[SourceSpan]) -> int:
    if not INT_MIN <= value <= INT_MAX:
        raise RuntimeFault("overflow", OVERFLOW_MESSAGE, span)
    return value


def apply_binop(op: str, left: int, right: int, span: Optional[SourceSpan] = None) -> int:
    """整数运算；除法与取模向下取整，除数为零时触发运行时故障"""
    if op == "plus":
        return _checked(left + right, span)
    if op == "minus":
        return _checked(left - right, span)
    if op == "times":
        return _checked(left * right, span)
    if op in ("divided-by", "modulo"):
        if right == 0:
            raise RuntimeFault("division-by-zero", "division by zero" if op == "divided-by" else "modulo by zero",
                               span)
        return _checked(left // right if op == "divided-by" else left % right, span)
    raise InternalCompilerError(f"unknown operator '{op}'", span)


def apply_relop(op: str, left: Value, right: Value, span: Optional[SourceSpan] = None) -> bool:
    if op in ("is", "is-equal-to"):
        return left == right
    if op == "greater-than":
        return left > right
    if op == "less-than":
        return left < right
    raise InternalCompilerError(f"unknown comparison '{op}'", span)


def apply_reduce(op: str, init: int, items: tuple, span: Optional[SourceSpan] = None) -> int:
    acc = init
    for item in items:
        acc = apply_binop(op, acc, item, span)
    return acc


def apply_builtin(fn: str, args: Sequence[Value], span: Optional[SourceSpan] = None) -> Value:
    if fn == "len":
        return len(args[0])
    if fn == "rev":
        return args[0][::-1]
    if fn == "index":
        return args[0][args[1]]
    if fn == "append":
        return tuple(args[0]) + (args[1],)
    raise InternalCompilerError(f"unknown builtin '{fn}'", span)


def _read(store: Store, name: str, span: Optional[SourceSpan], what: str = "variable") -> Value:
    if name not in store:
        raise InternalCompilerError(f"{what} '{name}' read before it was written", span)
    return store[name]


# ---------------------------------------------------------------- 核心语法树

@dataclass(frozen=True)
class _Iteration:
    """For each 的内部续体：剩余元素"""

    stmt: ForEach
    items: tuple
    index: int = 0


CursorItem = Union[Stmt, _Iteration]


@dataclass
class Config:
    """
    配置 ⟨S, σ⟩ 与输出

    store 在相邻配置之间共享并原地更新。
    """

    cursor: Tuple[CursorItem, ...]
    store: Store = field(default_factory=dict)
    output: List[str] = field(default_factory=list)

    @property
    def terminal(self) -> bool:
        return not self.cursor


class CoreEvaluator:
    def __init__(self, check_types: bool = False):
        self.check_types = check_types

    def eval(self, expr: Expr, store: Store) -> Value:
        if isinstance(expr, (IntLit, StrLit, BoolLit)):
            return expr.value
        if isinstance(expr, ListLit):
            return tuple(self.eval(e, store) for e in expr.elements)
        if isinstance(expr, Var):
            return _read(store, expr.name, expr.span)
        if isinstance(expr, Pronoun):
            # E-Pronoun：解析后的名字必须已写入
            return _read(store, expr.referent, expr.span, f"antecedent of pronoun '{expr.word}'")
        if isinstance(expr, BinOp):
            return apply_binop(expr.op, self.eval(expr.left, store), self.eval(expr.right, store), expr.span)
        if isinstance(expr, RelOp):
            return apply_relop(expr.op, self.eval(expr.left, store), self.eval(expr.right, store), expr.span)
        if isinstance(expr, Reduce):
            return apply_reduce(expr.op, self.eval(expr.init, store), self.eval(expr.operand, store), expr.span)
        if isinstance(expr, Builtin):
            return apply_builtin(expr.fn, [self.eval(a, store) for a in expr.args], expr.span)
        raise InternalCompilerError(f"no rule applies to expression {type(expr).__name__}", expr.span)

    def write(self, store: Store, name: str, value: Value, static: Optional[TypeTerm], span) -> None:
        if self.check_types:
            _check_tag(value, static, name, span)
        store[name] = value

    def step(self, config: Config) -> Config:
        if config.terminal:
            raise InternalCompilerError("step called on a terminal configuration")
        head, rest = config.cursor[0], config.cursor[1:]
        store = config.store

        if isinstance(head, _Iteration):
            if head.index >= len(head.items):
                return Config(rest, store, config.output)
            stmt = head.stmt
            self.write(store, stmt.var, head.items[head.index], stmt.iterable.ty.elem
                       if isinstance(stmt.iterable.ty, TList) else None, stmt.span)
            nxt = _Iteration(stmt, head.items, head.index + 1)
            return Config(tuple(stmt.body) + (nxt,) + rest, store, config.output)
        if isinstance(head, Let):
            self.write(store, head.name, self.eval(head.value, store), head.value.ty, head.span)
            return Config(rest, store, config.output)
        if isinstance(head, Print):
            config.output.append(format_value(self.eval(head.value, store)) + "\n")
            return Config(rest, store, config.output)
        if isinstance(head, BuiltinStmt):
            target = head.call.args[0]
            self.write(store, target.name, self.eval(head.call, store), head.call.ty, head.span)
            return Config(rest, store, config.output)
        if isinstance(head, If):
            if self.eval(head.cond, store) is True:
                return Config(tuple(head.then) + rest, store, config.output)
            return Config(tuple(head.orelse or ()) + rest, store, config.output)
        if isinstance(head, While):
            if self.eval(head.cond, store) is True:
                return Config(tuple(head.body) + (head,) + rest, store, config.output)
            return Config(rest, store, config.output)
        if isinstance(head, ForEach):
            items = self.eval(head.iterable, store)
            return Config((_Iteration(head, items),) + rest, store, config.output)
        raise InternalCompilerError(f"no rule applies to statement {type(head).__name__}", head.span)


def step(config: Config) -> Config:
    """执行一步；终止配置上调用属于内部错误"""
    return CoreEvaluator().step(config)


# ---------------------------------------------------------------- SSA

@dataclass
class SsaConfig:
    block: int
    index: int
    prev_block: Optional[int]
    store: Store = field(default_factory=dict)
    output: List[str] = field(default_factory=list)


class SsaEvaluator:
    def __init__(self, program: SsaProgram, check_types: bool = False):
        self.program = program
        self.check_types = check_types
        self.types = program.types() if check_types else {}

    def terminal(self, config: SsaConfig) -> bool:
        block = self.program.block(config.block)
        return config.index >= len(block.insts) and block.terminator is None

    def operand(self, operand: Operand, store: Store, span) -> Value:
        if isinstance(operand, Lit):
            return operand.value
        if isinstance(operand, Undef):
            raise InternalCompilerError("read of an undefined SSA value", span)
        return _read(store, operand, span, "SSA value")

    def _enter(self, config: SsaConfig, target: int) -> SsaConfig:
        # φ 并行求值
        updates = {}
        for phi in self.program.block(target).phis:
            incoming = phi.incoming.get(config.block)
            if incoming is None:
                raise InternalCompilerError(f"phi '{phi.dst}' has no operand for bb{config.block}")
            if not isinstance(incoming, Undef):
                updates[phi.dst] = self.operand(incoming, config.store, None)
        for name, value in updates.items():
            self._write(config.store, name, value, None)
        return SsaConfig(target, 0, config.block, config.store, config.output)

    def _write(self, store: Store, name: str, value: Value, span) -> None:
        if self.check_types:
            _check_tag(value, self.types.get(name), name, span)
        store[name] = value

    def step(self, config: SsaConfig) -> SsaConfig:
        block = self.program.block(config.block)
        if config.index >= len(block.insts):
            raise InternalCompilerError("step called on a terminal configuration")
        inst = block.insts[config.index]
        store = config.store
        for use in inst.pronoun_uses:
            # E-Pronoun 断言：代词对应的 SSA 名在此处已定义
            if isinstance(use.ssa_name, str):
                _read(store, use.ssa_name, use.span, f"antecedent of pronoun '{use.word}'")
        args = [self.operand(a, store, inst.span) for a in inst.args]
        op = inst.opcode
        nxt = SsaConfig(config.block, config.index + 1, config.prev_block, store, config.output)

        if op == "JMP":
            return self._enter(config, inst.targets[0])
        if op == "BR":
            return self._enter(config, inst.targets[0] if args[0] is True else inst.targets[1])
        if op == "PRINT":
            config.output.append(format_value(args[0]) + "\n")
            return nxt
        if op in ("CONST", "COPY"):
            value = args[0]
        elif op == "BINOP":
            value = apply_binop(inst.op, args[0], args[1], inst.span)
        elif op == "RELOP":
            value = apply_relop(inst.op, args[0], args[1], inst.span)
        elif op == "REDUCE":
            value = apply_reduce(inst.op, args[0], args[1], inst.span)
        elif op == "BUILTIN":
            value = apply_builtin(inst.op, args, inst.span)
        elif op == "LISTNEW":
            value = tuple(args)
        elif op == "APPEND":
            value = apply_builtin("append", args, inst.span)
        else:
            raise InternalCompilerError(f"no rule applies to opcode {op}", inst.span)
        self._write(store, inst.dst, value, inst.span)
        return nxt


# ---------------------------------------------------------------- 入口

def _budget_exhausted(budget: int) -> RuntimeFault:
    return RuntimeFault("nontermination", f"step budget of {budget} steps exhausted; the program may not terminate")


def run_statements(statements: Sequence[Stmt], store: Optional[Store] = None,
                   budget: int = DEFAULT_STEP_BUDGET, check_types: bool = False) -> Tuple[str, Store]:
    """
    在给定存储上执行核心语句序列（REPL 复用）

    Returns:
        (输出文本, 执行后的存储)
    """
    evaluator = CoreEvaluator(check_types)
    config = Config(tuple(statements), dict(store or {}), [])
    steps = 0
    while not config.terminal:
        steps += 1
        if steps > budget:
            raise _budget_exhausted(budget)
        config = evaluator.step(config)
    return "".join(config.output), config.store


def run_ssa(program: SsaProgram, budget: int = DEFAULT_STEP_BUDGET, check_types: bool = False) -> str:
    evaluator = SsaEvaluator(program, check_types)
    config = SsaConfig(0, 0, None)
    steps = 0
    while not evaluator.terminal(config):
        steps += 1
        if steps > budget:
            raise _budget_exhausted(budget)
        config = evaluator.step(config)
    return "".join(config.output)


def run(program: Union[Program, TypedProgram, SsaProgram], budget: int = DEFAULT_STEP_BUDGET,
        check_types: bool = False) -> str:
    """
    运行程序直到终止

    Args:
        program: 核心程序或 SSA 程序
        budget: 步数上限
        check_types: 每次写入存储时检查动态类型与静态类型一致

    Returns:
        累积的输出文本

    Raises:
        RuntimeFault: 除零、溢出或步数耗尽
    """
    if isinstance(program, SsaProgram):
        return run_ssa(program, budget, check_types)
    if isinstance(program, TypedProgram):
        program = program.program
    output, _ = run_statements(program.statements, budget=budget, check_types=check_types)
    return output


class Interpreter(BasePass):
    """解释执行阶段"""

    stage = "interp"

    def __init__(self, budget: int = DEFAULT_STEP_BUDGET, check_types: bool = False):
        self.budget = budget
        self.check_types = check_types

    def run(self, data) -> str:
        return run(data, self.budget, self.check_types)

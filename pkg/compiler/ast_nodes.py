"""
语法树模块
定义表层语法树与核心语法树的节点，以及 --emit-ast / --emit-core 的文本格式
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .errors import SourceSpan

# 代词无先行词时的哨兵值
UNRESOLVED = "unresolved"

BINOPS = ("plus", "minus", "times", "divided-by", "modulo")
RELOPS = ("is", "is-equal-to", "greater-than", "less-than")


@dataclass(eq=True)
class Node:
    """节点基类；ty 由类型推断填写，不参与结构比较"""

    span: SourceSpan = field(kw_only=True)
    ty: Optional[object] = field(default=None, kw_only=True, compare=False, repr=False)


# ---------------------------------------------------------------- 表达式

@dataclass(eq=True)
class IntLit(Node):
    value: int


@dataclass(eq=True)
class StrLit(Node):
    value: str


@dataclass(eq=True)
class BoolLit(Node):
    value: bool


@dataclass(eq=True)
class ListLit(Node):
    elements: Tuple["Expr", ...]


@dataclass(eq=True)
class Var(Node):
    name: str


@dataclass(eq=True)
class Pronoun(Node):
    """代词；referent 为语法分析时的临时先行词或 UNRESOLVED"""

    word: str
    referent: str
    site: Optional[SourceSpan] = None

    @property
    def resolved(self) -> bool:
        return self.referent != UNRESOLVED


@dataclass(eq=True)
class BinOp(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(eq=True)
class RelOp(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(eq=True)
class SumOf(Node):
    operand: "Expr"


@dataclass(eq=True)
class LengthOf(Node):
    operand: "Expr"


@dataclass(eq=True)
class Reversed(Node):
    operand: "Expr"


@dataclass(eq=True)
class Reduce(Node):
    """核心归约：op 只能是内建二元运算"""

    op: str
    init: "Expr"
    operand: "Expr"


@dataclass(eq=True)
class Builtin(Node):
    """核心内建调用：len | rev | append"""

    fn: str
    args: Tuple["Expr", ...]


Expr = Union[IntLit, StrLit, BoolLit, ListLit, Var, Pronoun, BinOp, RelOp,
             SumOf, LengthOf, Reversed, Reduce, Builtin]

SUGAR_EXPRS = (SumOf, LengthOf, Reversed)


# ---------------------------------------------------------------- 语句

@dataclass(eq=True)
class Let(Node):
    name: str
    value: Expr
    name_span: Optional[SourceSpan] = None


@dataclass(eq=True)
class If(Node):
    """条件语句；else if 链表示为 else 块中嵌套的 If"""

    cond: Expr
    then: Tuple["Stmt", ...]
    orelse: Optional[Tuple["Stmt", ...]] = None


@dataclass(eq=True)
class While(Node):
    cond: Expr
    body: Tuple["Stmt", ...]


@dataclass(eq=True)
class ForEach(Node):
    var: str
    iterable: Expr
    body: Tuple["Stmt", ...]
    var_span: Optional[SourceSpan] = None


@dataclass(eq=True)
class Print(Node):
    value: Expr


@dataclass(eq=True)
class AddTo(Node):
    """表层 Add E to x."""

    value: Expr
    target: str
    target_span: Optional[SourceSpan] = None


@dataclass(eq=True)
class BuiltinStmt(Node):
    """核心语句形式的内建调用（append）"""

    call: Builtin


Stmt = Union[Let, If, While, ForEach, Print, AddTo, BuiltinStmt]


@dataclass(eq=True)
class Program:
    """程序：语句序列"""

    statements: Tuple[Stmt, ...]
    source_id: str = "<input>"

    def __len__(self) -> int:
        return len(self.statements)


def binding_span(stmt: Union[Let, ForEach]) -> SourceSpan:
    """绑定点位置：变量名所在区间"""
    if isinstance(stmt, Let):
        return stmt.name_span or stmt.span
    return stmt.var_span or stmt.span


# ---------------------------------------------------------------- 文本格式

def format_expr(expr: Expr) -> str:
    """表达式的 s-表达式文本"""
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, StrLit):
        return f'"{expr.value}"'
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, ListLit):
        return "(list" + "".join(" " + format_expr(e) for e in expr.elements) + ")"
    if isinstance(expr, Var):
        return f"(var {expr.name})"
    if isinstance(expr, Pronoun):
        return f"(pronoun {expr.word} {expr.referent})"
    if isinstance(expr, (BinOp, RelOp)):
        return f"({expr.op} {format_expr(expr.left)} {format_expr(expr.right)})"
    if isinstance(expr, SumOf):
        return f"(sum-of {format_expr(expr.operand)})"
    if isinstance(expr, LengthOf):
        return f"(length-of {format_expr(expr.operand)})"
    if isinstance(expr, Reversed):
        return f"(reversed {format_expr(expr.operand)})"
    if isinstance(expr, Reduce):
        return f"(reduce {expr.op} {format_expr(expr.init)} {format_expr(expr.operand)})"
    if isinstance(expr, Builtin):
        return f"({expr.fn}" + "".join(" " + format_expr(a) for a in expr.args) + ")"
    raise TypeError(f"unknown expression node {expr!r}")


def _format_block(stmts: Tuple[Stmt, ...], depth: int, out: List[str]) -> None:
    for stmt in stmts:
        _format_stmt(stmt, depth, out)


def _format_stmt(stmt: Stmt, depth: int, out: List[str]) -> None:
    pad = "  " * depth
    if isinstance(stmt, Let):
        out.append(f"{pad}(let {stmt.name} {format_expr(stmt.value)})")
    elif isinstance(stmt, Print):
        out.append(f"{pad}(print {format_expr(stmt.value)})")
    elif isinstance(stmt, AddTo):
        out.append(f"{pad}(add {format_expr(stmt.value)} {stmt.target})")
    elif isinstance(stmt, BuiltinStmt):
        out.append(f"{pad}{format_expr(stmt.call)}")
    elif isinstance(stmt, If):
        out.append(f"{pad}(if {format_expr(stmt.cond)}")
        _format_block(stmt.then, depth + 1, out)
        if stmt.orelse is not None:
            out.append(f"{pad} else")
            _format_block(stmt.orelse, depth + 1, out)
        out.append(f"{pad})")
    elif isinstance(stmt, While):
        out.append(f"{pad}(while {format_expr(stmt.cond)}")
        _format_block(stmt.body, depth + 1, out)
        out.append(f"{pad})")
    elif isinstance(stmt, ForEach):
        out.append(f"{pad}(for-each {stmt.var} {format_expr(stmt.iterable)}")
        _format_block(stmt.body, depth + 1, out)
        out.append(f"{pad})")
    else:
        raise TypeError(f"unknown statement node {stmt!r}")


def format_program(program: Program) -> str:
    """--emit-ast / --emit-core 输出"""
    out: List[str] = []
    _format_block(program.statements, 0, out)
    return "\n".join(out)


def iter_exprs(expr: Expr):
    """先序遍历表达式树"""
    yield expr
    if isinstance(expr, ListLit):
        for e in expr.elements:
            yield from iter_exprs(e)
    elif isinstance(expr, (BinOp, RelOp)):
        yield from iter_exprs(expr.left)
        yield from iter_exprs(expr.right)
    elif isinstance(expr, (SumOf, LengthOf, Reversed)):
        yield from iter_exprs(expr.operand)
    elif isinstance(expr, Reduce):
        yield from iter_exprs(expr.init)
        yield from iter_exprs(expr.operand)
    elif isinstance(expr, Builtin):
        for a in expr.args:
            yield from iter_exprs(a)


def iter_statements(stmts: Tuple[Stmt, ...]):
    """先序遍历语句（包含嵌套块）"""
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, If):
            yield from iter_statements(stmt.then)
            if stmt.orelse is not None:
                yield from iter_statements(stmt.orelse)
        elif isinstance(stmt, (While, ForEach)):
            yield from iter_statements(stmt.body)


def statement_exprs(stmt: Stmt) -> Tuple[Expr, ...]:
    """语句直接包含的表达式"""
    if isinstance(stmt, (Let, Print, AddTo)):
        return (stmt.value,)
    if isinstance(stmt, BuiltinStmt):
        return (stmt.call,)
    if isinstance(stmt, (If, While)):
        return (stmt.cond,)
    if isinstance(stmt, ForEach):
        return (stmt.iterable,)
    return ()

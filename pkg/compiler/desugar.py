"""
去糖模块
把表层惯用法改写为最小核心演算，保留位置与代词标注
"""

from dataclasses import replace

from .ast_nodes import (
    AddTo, BinOp, Builtin, BuiltinStmt, BoolLit, Expr, ForEach, If, IntLit, LengthOf,
    Let, ListLit, Print, Program, Pronoun, Reduce, RelOp, Reversed, Stmt, StrLit,
    SumOf, Var, While,
)
from .base_pass import BasePass
from .errors import InternalCompilerError


def desugar_expr(expr: Expr) -> Expr:
    """
    改写表达式

    - sum of E      -> reduce(plus, 0, E)
    - length of E   -> len(E)
    - E reversed    -> rev(E)
    """
    if isinstance(expr, SumOf):
        return Reduce("plus", IntLit(0, span=expr.span), desugar_expr(expr.operand), span=expr.span)
    if isinstance(expr, LengthOf):
        return Builtin("len", (desugar_expr(expr.operand),), span=expr.span)
    if isinstance(expr, Reversed):
        return Builtin("rev", (desugar_expr(expr.operand),), span=expr.span)
    if isinstance(expr, (BinOp, RelOp)):
        return replace(expr, left=desugar_expr(expr.left), right=desugar_expr(expr.right), ty=None)
    if isinstance(expr, ListLit):
        return replace(expr, elements=tuple(desugar_expr(e) for e in expr.elements), ty=None)
    if isinstance(expr, Reduce):
        return replace(expr, init=desugar_expr(expr.init), operand=desugar_expr(expr.operand), ty=None)
    if isinstance(expr, Builtin):
        return replace(expr, args=tuple(desugar_expr(a) for a in expr.args), ty=None)
    if isinstance(expr, (IntLit, StrLit, BoolLit, Var, Pronoun)):
        return replace(expr, ty=None)
    raise InternalCompilerError(f"unknown expression node {type(expr).__name__}", getattr(expr, "span", None))


def desugar_stmt(stmt: Stmt) -> Stmt:
    """改写语句；Add E to x -> append(x, E)"""
    if isinstance(stmt, AddTo):
        target = Var(stmt.target, span=stmt.target_span or stmt.span)
        call = Builtin("append", (target, desugar_expr(stmt.value)), span=stmt.span)
        return BuiltinStmt(call, span=stmt.span)
    if isinstance(stmt, Let):
        return replace(stmt, value=desugar_expr(stmt.value))
    if isinstance(stmt, Print):
        return replace(stmt, value=desugar_expr(stmt.value))
    if isinstance(stmt, BuiltinStmt):
        return replace(stmt, call=desugar_expr(stmt.call))
    if isinstance(stmt, If):
        orelse = tuple(desugar_stmt(s) for s in stmt.orelse) if stmt.orelse is not None else None
        return replace(stmt, cond=desugar_expr(stmt.cond),
                       then=tuple(desugar_stmt(s) for s in stmt.then), orelse=orelse)
    if isinstance(stmt, While):
        return replace(stmt, cond=desugar_expr(stmt.cond), body=tuple(desugar_stmt(s) for s in stmt.body))
    if isinstance(stmt, ForEach):
        return replace(stmt, iterable=desugar_expr(stmt.iterable), body=tuple(desugar_stmt(s) for s in stmt.body))
    raise InternalCompilerError(f"unknown statement node {type(stmt).__name__}", getattr(stmt, "span", None))


def desugar(program: Program) -> Program:
    """
    去糖整个程序（纯函数，幂等）

    Args:
        program: 表层语法树

    Returns:
        核心语法树
    """
    return Program(tuple(desugar_stmt(s) for s in program.statements), program.source_id)


class Desugarer(BasePass):
    """去糖阶段"""

    stage = "desugar"

    def run(self, data: Program) -> Program:
        return desugar(data)

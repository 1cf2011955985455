"""
类型检查模块
单态 Algorithm W 风格的类型推断；代词取其临时先行词的类型
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .ast_nodes import (
    BINOPS, BinOp, Builtin, BuiltinStmt, BoolLit, Expr, ForEach, If, IntLit, Let,
    ListLit, Print, Program, Pronoun, Reduce, RelOp, Stmt, StrLit, Var, While,
    binding_span, iter_exprs, iter_statements, statement_exprs,
)
from .base_pass import BasePass
from .errors import PronounError, SourceSpan, TypeCheckError
from .type_terms import BOOL, INT, STR, Substitution, TList, TVar, TypeTerm, UnificationError, free_vars

_EQUALITY = ("is", "is-equal-to")


@dataclass
class TypeEnv:
    """类型环境

    bindings 是在当前程序点一定已绑定的名字；maybe 记录曾在某条路径上绑定过的名字，
    只供代词定型（是否真正可达由指代分析判定）。
    """

    bindings: Dict[str, TypeTerm] = field(default_factory=dict)
    maybe: Dict[str, TypeTerm] = field(default_factory=dict)

    def copy(self) -> "TypeEnv":
        return TypeEnv(dict(self.bindings), dict(self.maybe))

    def bind(self, name: str, ty: TypeTerm) -> None:
        self.bindings[name] = ty
        self.maybe[name] = ty

    def lookup(self, name: str) -> Optional[TypeTerm]:
        return self.bindings.get(name)


@dataclass
class TypedProgram:
    """类型检查后的核心程序；表达式节点的 ty 已填入基础类型"""

    program: Program
    env: TypeEnv
    bindings: List[Tuple[str, TypeTerm, SourceSpan]]

    @property
    def statements(self):
        return self.program.statements


class TypeInferencer:
    """单次推断运行；类型变量计数与代换只属于本次运行"""

    def __init__(self, env: Optional[TypeEnv] = None):
        self.env = env.copy() if env is not None else TypeEnv()
        self.subst = Substitution()
        self._counter = 0
        self.bindings: List[Tuple[str, TypeTerm, SourceSpan]] = []

    def fresh(self) -> TVar:
        self._counter += 1
        return TVar(self._counter)

    def _unify(self, expected: TypeTerm, actual: TypeTerm, message: str, span: SourceSpan,
               other: Optional[SourceSpan] = None) -> None:
        try:
            self.subst.unify(expected, actual)
        except UnificationError as exc:
            found = self.subst.apply(actual)
            want = self.subst.apply(expected)
            detail = "infinite type" if exc.reason == "occurs check" else f"expected {want}, found {found}"
            raise TypeCheckError(f"type mismatch: {detail} {message}", span, other_span=other) from exc

    # ------------------------------------------------------------ 表达式

    def infer_expr(self, expr: Expr, env: TypeEnv) -> TypeTerm:
        ty = self._infer(expr, env)
        expr.ty = ty
        return ty

    def _infer(self, expr: Expr, env: TypeEnv) -> TypeTerm:
        if isinstance(expr, IntLit):
            return INT
        if isinstance(expr, StrLit):
            return STR
        if isinstance(expr, BoolLit):
            return BOOL
        if isinstance(expr, ListLit):
            if not expr.elements:
                raise TypeCheckError("cannot infer element type for an empty list", expr.span)
            elem = self.fresh()
            for item in expr.elements:
                item_ty = self.infer_expr(item, env)
                self._unify(elem, item_ty, "in list element", item.span, expr.span)
            return TList(elem)
        if isinstance(expr, Var):
            ty = env.lookup(expr.name)
            if ty is not None:
                return ty
            if expr.name in env.maybe:
                raise TypeCheckError(f"variable '{expr.name}' may be unbound here", expr.span)
            raise TypeCheckError(f"unbound variable '{expr.name}'", expr.span)
        if isinstance(expr, Pronoun):
            return self._infer_pronoun(expr, env)
        if isinstance(expr, BinOp):
            left = self.infer_expr(expr.left, env)
            right = self.infer_expr(expr.right, env)
            self._unify(INT, left, f"in left operand of '{expr.op}'", expr.span, expr.left.span)
            self._unify(INT, right, f"in right operand of '{expr.op}'", expr.span, expr.right.span)
            return INT
        if isinstance(expr, RelOp):
            left = self.infer_expr(expr.left, env)
            right = self.infer_expr(expr.right, env)
            if expr.op in _EQUALITY:
                self._unify(left, right, f"between operands of '{expr.op}'", expr.span, expr.right.span)
            else:
                self._unify(INT, left, f"in left operand of '{expr.op}'", expr.span, expr.left.span)
                self._unify(INT, right, f"in right operand of '{expr.op}'", expr.span, expr.right.span)
            return BOOL
        if isinstance(expr, Reduce):
            if expr.op not in BINOPS:
                raise TypeCheckError(f"unsupported reduction operator '{expr.op}'", expr.span)
            init = self.infer_expr(expr.init, env)
            operand = self.infer_expr(expr.operand, env)
            self._unify(INT, init, "in reduction seed", expr.span)
            self._unify(TList(INT), operand, "in 'sum of' operand", expr.span, expr.operand.span)
            return INT
        if isinstance(expr, Builtin):
            return self._infer_builtin(expr, env)
        raise TypeCheckError(f"unexpected expression form {type(expr).__name__}", expr.span)

    def _infer_pronoun(self, expr: Pronoun, env: TypeEnv) -> TypeTerm:
        if not expr.resolved:
            raise PronounError("undefined", f"undefined pronoun '{expr.word}': no antecedent is bound before it",
                               expr.span)
        ty = env.lookup(expr.referent)
        if ty is None:
            # 只在某些路径上绑定：按其类型定型，可达性交给指代分析
            ty = env.maybe.get(expr.referent)
        if ty is None:
            trace = [(expr.referent, expr.site)] if expr.site is not None else []
            raise PronounError("undefined", f"undefined pronoun '{expr.word}': antecedent "
                               f"'{expr.referent}' is not bound here", expr.span, trace)
        return ty

    def _sequence_operand(self, arg: Expr, env: TypeEnv, what: str) -> TypeTerm:
        """len/rev 接受 List τ 或 Str"""
        ty = self.subst.apply(self.infer_expr(arg, env))
        if ty == STR or isinstance(ty, TList):
            return ty
        elem = self.fresh()
        self._unify(TList(elem), ty, f"in '{what}' operand (expects a list or a string)", arg.span)
        return self.subst.apply(ty)

    def _infer_builtin(self, expr: Builtin, env: TypeEnv) -> TypeTerm:
        if expr.fn == "len":
            self._sequence_operand(expr.args[0], env, "length of")
            return INT
        if expr.fn == "rev":
            return self._sequence_operand(expr.args[0], env, "reversed")
        if expr.fn == "append":
            target, value = expr.args
            target_ty = self.infer_expr(target, env)
            value_ty = self.infer_expr(value, env)
            self._unify(target_ty, TList(value_ty), f"when adding to '{getattr(target, 'name', '?')}'",
                        value.span, target.span)
            return target_ty
        raise TypeCheckError(f"unknown builtin '{expr.fn}'", expr.span)

    # ------------------------------------------------------------ 语句

    def _bind(self, env: TypeEnv, name: str, ty: TypeTerm, site: SourceSpan) -> None:
        ty = self.subst.apply(ty)
        if name not in env.bindings and name in env.maybe:
            self._unify(env.maybe[name], ty, f"when rebinding '{name}', which may already be bound", site)
        env.bind(name, ty)
        self.bindings.append((name, ty, site))

    def _check_cond(self, cond: Expr, env: TypeEnv, what: str) -> None:
        ty = self.infer_expr(cond, env)
        self._unify(BOOL, ty, f"in {what} condition", cond.span)

    def _keep_types(self, before: TypeEnv, after: TypeEnv, span: SourceSpan) -> None:
        """块内重新绑定的既有变量必须保持类型"""
        for name, ty in before.bindings.items():
            if name in after.bindings:
                self._unify(ty, after.bindings[name], f"for '{name}', which is rebound inside a block", span)

    def infer_block(self, stmts, env: TypeEnv) -> TypeEnv:
        for stmt in stmts:
            self.infer_stmt(stmt, env)
        return env

    def infer_stmt(self, stmt: Stmt, env: TypeEnv) -> None:
        if isinstance(stmt, Let):
            ty = self.infer_expr(stmt.value, env)
            self._bind(env, stmt.name, ty, binding_span(stmt))
        elif isinstance(stmt, Print):
            self.infer_expr(stmt.value, env)
        elif isinstance(stmt, BuiltinStmt):
            self.infer_expr(stmt.call, env)
        elif isinstance(stmt, If):
            self._check_cond(stmt.cond, env, "'If'")
            then_env = self.infer_block(stmt.then, env.copy())
            else_env = self.infer_block(stmt.orelse or (), env.copy())
            self._keep_types(env, then_env, stmt.span)
            self._keep_types(env, else_env, stmt.span)
            for name, ty in then_env.bindings.items():
                if name in else_env.bindings:
                    self._unify(ty, else_env.bindings[name], f"for '{name}' across the branches of 'If'", stmt.span)
                    env.bindings[name] = self.subst.apply(ty)
            for name in list(env.bindings):
                if name not in then_env.bindings or name not in else_env.bindings:
                    del env.bindings[name]
            env.maybe.update(then_env.maybe)
            env.maybe.update(else_env.maybe)
            for name, ty in env.bindings.items():
                env.maybe[name] = ty
        elif isinstance(stmt, While):
            self._check_cond(stmt.cond, env, "'While'")
            body_env = self.infer_block(stmt.body, env.copy())
            self._keep_types(env, body_env, stmt.span)
            self._merge_loop(env, body_env)
        elif isinstance(stmt, ForEach):
            iter_ty = self.infer_expr(stmt.iterable, env)
            elem = self.fresh()
            self._unify(TList(elem), iter_ty, "in 'For each' iterable (expects a list)", stmt.iterable.span)
            body_env = env.copy()
            self._bind(body_env, stmt.var, elem, binding_span(stmt))
            self.infer_block(stmt.body, body_env)
            self._keep_types(env, body_env, stmt.span)
            self._merge_loop(env, body_env)
        else:
            raise TypeCheckError(f"unexpected statement form {type(stmt).__name__}", stmt.span)

    @staticmethod
    def _merge_loop(env: TypeEnv, body_env: TypeEnv) -> None:
        # 循环体可能一次也不执行：体内新绑定的名字只算“可能绑定”
        for name, ty in body_env.maybe.items():
            if name not in env.bindings:
                env.maybe[name] = ty

    # ------------------------------------------------------------ 收尾

    def finish(self, program: Program) -> TypedProgram:
        """把最终代换应用到所有节点，并确认没有残留类型变量"""
        for stmt in iter_statements(program.statements):
            for root in statement_exprs(stmt):
                for expr in iter_exprs(root):
                    if expr.ty is None:
                        continue
                    expr.ty = self.subst.apply(expr.ty)
                    if free_vars(expr.ty):
                        raise TypeCheckError("cannot infer a ground type for this expression", expr.span)
        env = TypeEnv({k: self.subst.apply(v) for k, v in self.env.bindings.items()},
                      {k: self.subst.apply(v) for k, v in self.env.maybe.items()})
        bindings = [(name, self.subst.apply(ty), site) for name, ty, site in self.bindings]
        return TypedProgram(program, env, bindings)


def infer(program: Program, env: Optional[TypeEnv] = None) -> TypedProgram:
    """
    推断并检查核心程序的类型

    Args:
        program: 去糖后的核心程序（代词已带临时先行词）
        env: 初始类型环境（REPL 增量检查时传入）

    Returns:
        带类型标注的程序

    Raises:
        TypeCheckError: 未绑定变量、类型不匹配
        PronounError: 代词没有先行词
    """
    inferencer = TypeInferencer(env)
    inferencer.infer_block(program.statements, inferencer.env)
    return inferencer.finish(program)


class TypeChecker(BasePass):
    """类型检查阶段"""

    stage = "typeck"

    def __init__(self, env: Optional[TypeEnv] = None):
        self.env = env

    def run(self, data: Program) -> TypedProgram:
        typed = infer(data, self.env)
        self.logger.debug(f"类型检查通过，共 {len(typed.bindings)} 个绑定")
        return typed


def format_types(typed: TypedProgram) -> str:
    """--emit-types 输出：每个绑定一行 name : type"""
    return "\n".join(f"{name} : {ty}" for name, ty, _ in typed.bindings)

"""
随机程序生成器
按目标类型自顶向下生成类型正确的程序：整数幅度有静态上界，循环有静态趟数，
代词只在先行词在所有路径上都唯一且已绑定时出现
"""

import math
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from compiler.ast_nodes import (
    AddTo, BinOp, Builtin, BuiltinStmt, BoolLit, Expr, ForEach, If, IntLit, LengthOf, Let,
    ListLit, Print, Program, Pronoun, Reduce, RelOp, Reversed, Stmt, StrLit, SumOf, Var, While,
)
from compiler.desugar import desugar
from compiler.errors import NO_SPAN
from compiler.type_terms import BOOL, INT, STR, TList, TypeTerm

ALL_CONSTRUCTS = frozenset({
    "let", "print", "int", "bool", "str", "list", "if", "while", "foreach", "append",
    "pronoun", "arith",
})

# 变量中整数的绝对值上界；超出时以取模收回
VAR_BOUND = 1000
# 单个表达式中间结果的绝对值上界，远小于 64 位范围
EXPR_BOUND = 10 ** 12
LENGTH_BOUND = 10 ** 6
SUM_BOUND = VAR_BOUND * LENGTH_BOUND
MAX_TRIPS = 20
# 嵌套循环总趟数上限
MAX_WORK = 400
MAX_NESTING = 3
WORDS = ("apple", "pear", "fig", "noon", "level", "linguine", "racecar", "kiwi")
PRONOUN_WORDS = ("it", "this", "that", "them")

LIST_INT = TList(INT)
LIST_STR = TList(STR)

_PREFIX = {INT: "n", BOOL: "b", STR: "s", LIST_INT: "xs", LIST_STR: "ws"}

_TOP = object()


@dataclass(frozen=True)
class GenConfig:
    """生成配置；相同配置与种子总是生成相同的程序"""
    seed: int = 0
    max_depth: int = 7
    min_statements: int = 1
    max_statements: int = 15
    constructs: FrozenSet[str] = ALL_CONSTRUCTS

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        if not 1 <= self.min_statements <= self.max_statements:
            raise ValueError("statement range must satisfy 1 <= min <= max")
        unknown = set(self.constructs) - ALL_CONSTRUCTS
        if unknown:
            raise ValueError(f"unknown constructs: {sorted(unknown)}")

    def enabled(self, construct: str) -> bool:
        return construct in self.constructs


@dataclass
class _Scope:
    """当前位置上确定绑定的变量"""
    types: Dict[str, TypeTerm] = field(default_factory=dict)
    readonly: Set[str] = field(default_factory=set)

    def copy(self) -> "_Scope":
        return _Scope(dict(self.types), set(self.readonly))

    def of_type(self, ty: TypeTerm, writable: bool = False) -> List[str]:
        return sorted(n for n, t in self.types.items() if t == ty and not (writable and n in self.readonly))


class ProgramGenerator:
    """
    单个程序的生成状态

    flow 记录控制流意义上最近一次绑定（None 为尚无绑定，_TOP 为多条路径不一致），
    stack_top 记录文本意义上最近一次绑定；二者一致时代词才是安全的。
    """

    def __init__(self, config: GenConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.scope = _Scope()
        self.flow: object = None
        self.stack_top: Optional[str] = None
        self.counter = 0
        self.work = 1
        self.nesting = 0
        self.types = self._value_types()

    def _value_types(self) -> List[TypeTerm]:
        cfg = self.config
        types: List[TypeTerm] = [INT] if cfg.enabled("int") or not (
            cfg.enabled("bool") or cfg.enabled("str") or cfg.enabled("list")) else []
        if cfg.enabled("bool"):
            types.append(BOOL)
        if cfg.enabled("str"):
            types.append(STR)
        if cfg.enabled("list"):
            types.append(LIST_INT)
            if cfg.enabled("str"):
                types.append(LIST_STR)
        return types

    def fresh(self, ty: TypeTerm, prefix: Optional[str] = None) -> str:
        self.counter += 1
        return f"{prefix or _PREFIX[ty]}{self.counter}"

    def _bound(self, name: str) -> None:
        self.flow = name
        self.stack_top = name

    # ------------------------------------------------------------ 表达式

    def _pronoun(self, ty: TypeTerm) -> Optional[Expr]:
        if not self.config.enabled("pronoun") or self.flow is _TOP or self.flow is None:
            return None
        name = self.flow
        if name != self.stack_top or self.scope.types.get(name) != ty:
            return None
        return Pronoun(self.rng.choice(PRONOUN_WORDS), name, span=NO_SPAN)

    def _reference(self, ty: TypeTerm) -> Optional[Expr]:
        """变量或代词"""
        pronoun = self._pronoun(ty)
        if pronoun is not None and self.rng.random() < 0.5:
            return pronoun
        names = self.scope.of_type(ty)
        if names:
            return Var(self.rng.choice(names), span=NO_SPAN)
        return pronoun

    def gen_int(self, limit: int, depth: int) -> Tuple[Expr, int]:
        """返回 (表达式, 绝对值上界)，上界不超过 limit"""
        options = ["lit"]
        if limit >= VAR_BOUND and self._reference(INT) is not None:
            options += ["ref", "ref"]
        if depth > 1 and self.config.enabled("arith"):
            if limit >= 2:
                options += ["plus", "minus"]
            if limit >= 4:
                options.append("times")
            options += ["divided-by", "modulo"]
        if depth > 1 and limit >= LENGTH_BOUND and self.config.enabled("list"):
            options.append("length")
        if depth > 1 and limit >= SUM_BOUND and self.config.enabled("list") and self.config.enabled("arith"):
            options.append("sum")
        choice = self.rng.choice(options)
        if choice == "ref":
            return self._reference(INT), VAR_BOUND
        if choice in ("plus", "minus"):
            left, lb = self.gen_int(limit // 2, depth - 1)
            right, rb = self.gen_int(limit // 2, depth - 1)
            return BinOp(choice, left, right, span=NO_SPAN), lb + rb
        if choice == "times":
            half = math.isqrt(limit)
            left, lb = self.gen_int(half, depth - 1)
            right, rb = self.gen_int(half, depth - 1)
            return BinOp("times", left, right, span=NO_SPAN), lb * rb
        if choice in ("divided-by", "modulo"):
            left, lb = self.gen_int(limit, depth - 1)
            divisor = self.rng.randint(1, 9) * self.rng.choice((1, 1, -1))
            expr = BinOp(choice, left, IntLit(divisor, span=NO_SPAN), span=NO_SPAN)
            return expr, lb if choice == "divided-by" else abs(divisor) - 1
        if choice == "length":
            operand = self.gen_value(self.rng.choice([t for t in (STR, LIST_INT, LIST_STR) if t in self.types]
                                                     or [LIST_INT]), depth - 1)
            return LengthOf(operand, span=NO_SPAN), LENGTH_BOUND
        if choice == "sum":
            return SumOf(self.gen_value(LIST_INT, depth - 1), span=NO_SPAN), SUM_BOUND
        top = min(limit, 100)
        value = self.rng.randint(-top, top)
        return IntLit(value, span=NO_SPAN), abs(value)

    def gen_var_int(self, depth: int) -> Expr:
        """可存入变量的整数表达式：幅度不超过 VAR_BOUND"""
        expr, bound = self.gen_int(EXPR_BOUND, max(depth - 1, 1))
        if bound > VAR_BOUND:
            expr = BinOp("modulo", expr, IntLit(VAR_BOUND, span=NO_SPAN), span=NO_SPAN)
        return expr

    def gen_bool(self, depth: int) -> Expr:
        options = ["lit"]
        if self._reference(BOOL) is not None:
            options += ["ref", "ref"]
        if depth > 1 and INT in self.types:
            options += ["compare", "compare"]
        if depth > 1:
            options.append("equal")
        choice = self.rng.choice(options)
        if choice == "ref":
            return self._reference(BOOL)
        if choice == "compare":
            left, _ = self.gen_int(EXPR_BOUND, depth - 1)
            right, _ = self.gen_int(EXPR_BOUND, depth - 1)
            op = self.rng.choice(("greater-than", "less-than", "is", "is-equal-to"))
            return RelOp(op, left, right, span=NO_SPAN)
        if choice == "equal":
            ty = self.rng.choice(self.types)
            left = self.gen_value(ty, depth - 1)
            right = self.gen_value(ty, depth - 1)
            return RelOp(self.rng.choice(("is", "is-equal-to")), left, right, span=NO_SPAN)
        return BoolLit(self.rng.random() < 0.5, span=NO_SPAN)

    def gen_str(self, depth: int) -> Expr:
        options = ["lit"]
        if self._reference(STR) is not None:
            options += ["ref", "ref"]
        if depth > 1:
            options.append("reversed")
        choice = self.rng.choice(options)
        if choice == "ref":
            return self._reference(STR)
        if choice == "reversed":
            return Reversed(self.gen_str(depth - 1), span=NO_SPAN)
        return StrLit(self.rng.choice(WORDS), span=NO_SPAN)

    def gen_list(self, elem: TypeTerm, depth: int) -> Expr:
        ty = TList(elem)
        options = ["lit"]
        if self._reference(ty) is not None:
            options += ["ref", "ref"]
        if depth > 1:
            options.append("reversed")
        choice = self.rng.choice(options)
        if choice == "ref":
            return self._reference(ty)
        if choice == "reversed":
            return Reversed(self.gen_list(elem, depth - 1), span=NO_SPAN)
        return self.list_literal(elem, depth, self.rng.randint(1, 4))

    def list_literal(self, elem: TypeTerm, depth: int, size: int) -> ListLit:
        items = tuple(self.gen_element(elem, depth - 1) for _ in range(size))
        return ListLit(items, span=NO_SPAN)

    def gen_element(self, elem: TypeTerm, depth: int) -> Expr:
        if elem == INT:
            expr, _ = self.gen_int(VAR_BOUND, max(depth, 1))
            return expr
        return self.gen_value(elem, max(depth, 1))

    def gen_value(self, ty: TypeTerm, depth: int) -> Expr:
        """生成给定类型的表达式，深度不超过 depth"""
        depth = max(depth, 1)
        if ty == INT:
            return self.gen_int(EXPR_BOUND, depth)[0]
        if ty == BOOL:
            return self.gen_bool(depth)
        if ty == STR:
            return self.gen_str(depth)
        if isinstance(ty, TList):
            return self.gen_list(ty.elem, depth)
        raise ValueError(f"cannot generate values of type {ty}")

    def _stored(self, ty: TypeTerm) -> Expr:
        depth = self.config.max_depth
        return self.gen_var_int(depth) if ty == INT else self.gen_value(ty, depth)

    # ------------------------------------------------------------ 语句

    def _statement_kinds(self) -> List[str]:
        cfg = self.config
        kinds: List[str] = []
        if cfg.enabled("let"):
            kinds += ["let", "let"]
            if any(self.scope.of_type(t, writable=True) for t in self.types):
                kinds.append("rebind")
        if cfg.enabled("print") or not kinds:
            kinds += ["print", "print"]
        nested = self.nesting < MAX_NESTING
        if nested and cfg.enabled("if"):
            kinds.append("if")
        if nested and cfg.enabled("while") and self.work * 2 <= MAX_WORK:
            kinds.append("while")
        if nested and cfg.enabled("foreach") and self.work * 2 <= MAX_WORK:
            kinds.append("foreach")
        if cfg.enabled("append") and any(
                self.scope.of_type(t, writable=True) for t in (LIST_INT, LIST_STR) if t in self.types):
            kinds.append("append")
        return kinds

    def gen_block(self, count: int) -> List[Stmt]:
        stmts: List[Stmt] = []
        for _ in range(count):
            stmts.extend(self.gen_statement())
        return stmts

    def gen_statement(self) -> List[Stmt]:
        kind = self.rng.choice(self._statement_kinds())
        if kind == "let":
            ty = self.rng.choice(self.types)
            value = self._stored(ty)
            name = self.fresh(ty)
            self.scope.types[name] = ty
            self._bound(name)
            return [Let(name, value, span=NO_SPAN)]
        if kind == "rebind":
            candidates = [n for t in self.types for n in self.scope.of_type(t, writable=True)]
            name = self.rng.choice(sorted(candidates))
            value = self._stored(self.scope.types[name])
            self._bound(name)
            return [Let(name, value, span=NO_SPAN)]
        if kind == "print":
            return [Print(self.gen_value(self.rng.choice(self.types), self.config.max_depth), span=NO_SPAN)]
        if kind == "append":
            lists = [n for t in (LIST_INT, LIST_STR) if t in self.types
                     for n in self.scope.of_type(t, writable=True)]
            target = self.rng.choice(sorted(lists))
            elem = self.scope.types[target].elem
            return [AddTo(self.gen_element(elem, self.config.max_depth), target, span=NO_SPAN)]
        if kind == "if":
            return [self.gen_if()]
        if kind == "while":
            return self.gen_while()
        return [self.gen_foreach()]

    def _inner(self, work: int) -> List[Stmt]:
        saved_work = self.work
        self.work = work
        self.nesting += 1
        try:
            return self.gen_block(self.rng.randint(1, 3))
        finally:
            self.nesting -= 1
            self.work = saved_work

    def gen_if(self) -> If:
        cond = self.gen_bool(self.config.max_depth)
        before_scope, before_flow = self.scope, self.flow
        self.scope = before_scope.copy()
        then = self._inner(self.work)
        then_flow = self.flow
        self.scope, self.flow = before_scope.copy(), before_flow
        roll = self.rng.random()
        orelse: Optional[Tuple[Stmt, ...]] = None
        if roll < 0.3:
            orelse = tuple(self._inner(self.work))
        elif roll < 0.5 and self.nesting < MAX_NESTING:
            self.nesting += 1
            try:
                orelse = (self.gen_if(),)
            finally:
                self.nesting -= 1
        else_flow = self.flow
        self.scope = before_scope
        self.flow = then_flow if then_flow == else_flow else _TOP
        return If(cond, tuple(then), orelse, span=NO_SPAN)

    def gen_while(self) -> List[Stmt]:
        trips = self.rng.randint(1, min(MAX_TRIPS, MAX_WORK // self.work))
        counter = self.fresh(INT, "k")
        init = Let(counter, IntLit(0, span=NO_SPAN), span=NO_SPAN)
        self.scope.types[counter] = INT
        self.scope.readonly.add(counter)
        self._bound(counter)
        cond = RelOp("less-than", Var(counter, span=NO_SPAN), IntLit(trips, span=NO_SPAN), span=NO_SPAN)
        before_scope = self.scope
        self.scope = before_scope.copy()
        body = self._inner(self.work * trips)
        step = Let(counter, BinOp("plus", Var(counter, span=NO_SPAN), IntLit(1, span=NO_SPAN), span=NO_SPAN),
                   span=NO_SPAN)
        self._bound(counter)
        self.scope = before_scope
        return [init, While(cond, tuple(body) + (step,), span=NO_SPAN)]

    def gen_foreach(self) -> ForEach:
        elem = LIST_STR.elem if LIST_STR in self.types and self.rng.random() < 0.3 else INT
        size = self.rng.randint(1, min(5, MAX_WORK // self.work))
        iterable = self.list_literal(elem, self.config.max_depth, size)
        var = self.fresh(elem, "e")
        before_scope, before_flow = self.scope, self.flow
        self.scope = before_scope.copy()
        self.scope.types[var] = elem
        self.scope.readonly.add(var)
        self._bound(var)
        body = self._inner(self.work * size)
        body_flow = self.flow
        self.scope = before_scope
        self.flow = before_flow if before_flow == body_flow else _TOP
        return ForEach(var, iterable, tuple(body), span=NO_SPAN)

    def generate(self) -> Program:
        count = self.rng.randint(self.config.min_statements, self.config.max_statements)
        statements = self.gen_block(count)
        return Program(tuple(statements), f"<gen:{self.config.seed}>")


def gen_surface(config: GenConfig) -> Program:
    """生成表层程序（含 sum of / Add ... to 等写法）"""
    return ProgramGenerator(config).generate()


def gen_program(config: GenConfig) -> Program:
    """
    生成一个类型正确、必然终止的核心程序

    Args:
        config: 生成配置

    Returns:
        去糖后的核心程序
    """
    return desugar(gen_surface(config))


# ---------------------------------------------------------------- 渲染

_REL, _ADD, _MUL, _PREFIX_LEVEL, _POSTFIX, _ATOM = range(1, 7)
_LEVEL = {"plus": _ADD, "minus": _ADD, "times": _MUL, "divided-by": _MUL, "modulo": _MUL}
_OP_TEXT = {"divided-by": "divided by", "is-equal-to": "is equal to", "greater-than": "is greater than",
            "less-than": "is less than"}


def _level(expr: Expr) -> int:
    if isinstance(expr, RelOp):
        return _REL
    if isinstance(expr, BinOp):
        return _LEVEL[expr.op]
    if isinstance(expr, (SumOf, LengthOf, Reduce)):
        return _PREFIX_LEVEL
    if isinstance(expr, Builtin):
        return _POSTFIX if expr.fn == "rev" else _PREFIX_LEVEL
    if isinstance(expr, Reversed):
        return _POSTFIX
    return _ATOM


def _wrapped(expr: Expr, minimum: int) -> str:
    text = render_expr(expr)
    return text if _level(expr) >= minimum else f"({text})"


def render_expr(expr: Expr) -> str:
    """以最少的括号把表达式写回 Linguine 源码"""
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, StrLit):
        return f'"{expr.value}"'
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Pronoun):
        return expr.word
    if isinstance(expr, ListLit):
        return "[" + ", ".join(render_expr(e) for e in expr.elements) + "]"
    if isinstance(expr, BinOp):
        level = _LEVEL[expr.op]
        op = _OP_TEXT.get(expr.op, expr.op)
        return f"{_wrapped(expr.left, level)} {op} {_wrapped(expr.right, level + 1)}"
    if isinstance(expr, RelOp):
        op = _OP_TEXT.get(expr.op, expr.op)
        return f"{_wrapped(expr.left, _ADD)} {op} {_wrapped(expr.right, _ADD)}"
    if isinstance(expr, SumOf):
        return f"sum of {_wrapped(expr.operand, _PREFIX_LEVEL)}"
    if isinstance(expr, LengthOf):
        return f"length of {_wrapped(expr.operand, _PREFIX_LEVEL)}"
    if isinstance(expr, Reversed):
        return f"{_wrapped(expr.operand, _POSTFIX)} reversed"
    if isinstance(expr, Reduce):
        if expr.op != "plus" or not (isinstance(expr.init, IntLit) and expr.init.value == 0):
            raise ValueError(f"reduction {expr.op} has no surface form")
        return f"sum of {_wrapped(expr.operand, _PREFIX_LEVEL)}"
    if isinstance(expr, Builtin):
        if expr.fn == "len":
            return f"length of {_wrapped(expr.args[0], _PREFIX_LEVEL)}"
        if expr.fn == "rev":
            return f"{_wrapped(expr.args[0], _POSTFIX)} reversed"
        raise ValueError(f"builtin {expr.fn} has no expression form")
    raise TypeError(f"unknown expression node {expr!r}")


def _render_block(stmts, depth: int, out: List[str]) -> None:
    for stmt in stmts:
        _render_stmt(stmt, depth, out)


def _render_if(stmt: If, depth: int, out: List[str], keyword: str) -> None:
    pad = "    " * depth
    out.append(f"{pad}{keyword} {render_expr(stmt.cond)}:")
    _render_block(stmt.then, depth + 1, out)
    if stmt.orelse is None:
        return
    if len(stmt.orelse) == 1 and isinstance(stmt.orelse[0], If):
        _render_if(stmt.orelse[0], depth, out, "Else if")
        return
    out.append(f"{pad}Else:")
    _render_block(stmt.orelse, depth + 1, out)


def _render_stmt(stmt: Stmt, depth: int, out: List[str]) -> None:
    pad = "    " * depth
    if isinstance(stmt, Let):
        out.append(f"{pad}Let {stmt.name} be {render_expr(stmt.value)}.")
    elif isinstance(stmt, Print):
        out.append(f"{pad}Print {render_expr(stmt.value)}.")
    elif isinstance(stmt, AddTo):
        out.append(f"{pad}Add {render_expr(stmt.value)} to {stmt.target}.")
    elif isinstance(stmt, BuiltinStmt):
        target, value = stmt.call.args
        out.append(f"{pad}Add {render_expr(value)} to {target.name}.")
    elif isinstance(stmt, If):
        _render_if(stmt, depth, out, "If")
        out.append(f"{pad}End if.")
    elif isinstance(stmt, While):
        out.append(f"{pad}While {render_expr(stmt.cond)}:")
        _render_block(stmt.body, depth + 1, out)
        out.append(f"{pad}End while.")
    elif isinstance(stmt, ForEach):
        out.append(f"{pad}For each {stmt.var} in {render_expr(stmt.iterable)}:")
        _render_block(stmt.body, depth + 1, out)
        out.append(f"{pad}End for.")
    else:
        raise TypeError(f"unknown statement node {stmt!r}")


def render(program: Program) -> str:
    """把表层或核心程序写回 Linguine 源码，每句一行"""
    out: List[str] = []
    _render_block(program.statements, 0, out)
    return "\n".join(out) + "\n"

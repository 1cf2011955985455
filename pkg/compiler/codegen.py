"""
代码生成模块
从校验过的 SSA 按结构化区域树生成可读的 Python 源码（snake_case 命名）
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

from utils.validators import is_python_reserved, to_snake_case

from .base_pass import BasePass
from .errors import Category, InternalCompilerError
from .interp import OVERFLOW_MESSAGE
from .lexer import INT_MAX, INT_MIN
from .ssa import (
    TEMP_PREFIX, BlockRef, ForEachNode, IfNode, Instruction, Lit, Operand, Region, SsaProgram,
    Undef, WhileNode, base_name, is_hidden,
)

DEFAULT_HEADER = "# generated by linguinec"
INDENT = "    "

_BINOP_TEXT = {"plus": "+", "minus": "-", "times": "*", "divided-by": "//", "modulo": "%"}
_RELOP_TEXT = {"is": "==", "is-equal-to": "==", "greater-than": ">", "less-than": "<"}

# Python 运算符优先级（数值越大越紧）
_PREC = {"+": 10, "-": 10, "*": 20, "//": 20, "%": 20}
_PREC_COMPARE = 5
_PREC_UNARY = 25
_PREC_ATOM = 30

# 生成代码中的 64 位溢出检查，与参考解释器的运行时故障一致：消息写到 stderr，退出码 1
GUARD_NAME = "_int64"
SUM_GUARD_NAME = "_int64_sum"
_OVERFLOW_LINE = f"error[{Category.RUNTIME.value}] {OVERFLOW_MESSAGE}"
_GUARD_LINES = [
    "import sys as _sys",
    "",
    "",
    f"def {GUARD_NAME}(value):",
    f"    if not {INT_MIN} <= value <= {INT_MAX}:",
    f"        print({_OVERFLOW_LINE!r}, file=_sys.stderr)",
    "        raise SystemExit(1)",
    "    return value",
]
_SUM_GUARD_LINES = [
    "",
    "",
    f"def {SUM_GUARD_NAME}(items, start=0):",
    "    for item in items:",
    f"        start = {GUARD_NAME}(start + item)",
    "    return start",
]


@dataclass
class EmitPlan:
    """
    生成计划

    names 把每个 SSA 名映射到目标标识符；同一源变量的所有版本共用一个标识符，
    因而 φ 两侧是同一个名字，消除 φ 不需要额外拷贝。
    """

    names: Dict[str, str] = field(default_factory=dict)
    identifiers: Dict[str, str] = field(default_factory=dict)
    block_order: List[int] = field(default_factory=list)


def plan_names(program: SsaProgram) -> EmitPlan:
    """为每个源变量分配无冲突的 snake_case 标识符"""
    bases = set()
    ssa_names = []
    for b in program.blocks:
        for phi in b.phis:
            ssa_names.append(phi.dst)
        for inst in b.insts:
            if inst.dst is not None:
                ssa_names.append(inst.dst)
    for name in ssa_names:
        if not is_hidden(name):
            bases.add(base_name(name))

    plan = EmitPlan()
    taken = set()
    for base in sorted(bases):
        ident = to_snake_case(base)
        if is_python_reserved(ident):
            ident += "_"
        while ident in taken:
            ident += "_"
        taken.add(ident)
        plan.identifiers[base] = ident
    for name in ssa_names:
        if not is_hidden(name):
            plan.names[name] = plan.identifiers[base_name(name)]
    return plan


def render_literal(value: object) -> str:
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, str):
        return repr(value)
    return str(value)


class _Emitter:
    def __init__(self, program: SsaProgram, plan: EmitPlan, annotate: bool, overflow_checks: bool = True):
        self.program = program
        self.plan = plan
        self.annotate = annotate
        self.overflow_checks = overflow_checks
        self.guards: Set[str] = set()
        self.exprs: Dict[str, Tuple[str, int]] = {}
        self._notes: List[str] = []

    # ------------------------------------------------------------ 表达式

    def operand(self, operand: Operand) -> Tuple[str, int]:
        if isinstance(operand, Lit):
            text = render_literal(operand.value)
            prec = _PREC_UNARY if isinstance(operand.value, int) and not isinstance(operand.value, bool) \
                and operand.value < 0 else _PREC_ATOM
            return text, prec
        if isinstance(operand, Undef):
            raise InternalCompilerError("undefined value reached code generation")
        if operand in self.exprs:
            return self.exprs.pop(operand)
        if operand in self.plan.names:
            return self.plan.names[operand], _PREC_ATOM
        raise InternalCompilerError(f"no emitted name for '{operand}'")

    @staticmethod
    def _wrap(part: Tuple[str, int], minimum: int) -> str:
        text, prec = part
        return text if prec >= minimum else f"({text})"

    def expression(self, inst: Instruction) -> Tuple[str, int]:
        op = inst.opcode
        if op in ("CONST", "COPY"):
            return self.operand(inst.args[0])
        if op == "BINOP":
            sym = _BINOP_TEXT[inst.op]
            prec = _PREC[sym]
            left, right = self.operand(inst.args[0]), self.operand(inst.args[1])
            text = f"{self._wrap(left, prec)} {sym} {self._wrap(right, prec + 1)}"
            if self._may_overflow(inst):
                self.guards.add(GUARD_NAME)
                return f"{GUARD_NAME}({text})", _PREC_ATOM
            return text, prec
        if op == "RELOP":
            sym = _RELOP_TEXT[inst.op]
            left, right = self.operand(inst.args[0]), self.operand(inst.args[1])
            # 比较不能链式书写
            return (f"{self._wrap(left, _PREC_COMPARE + 1)} {sym} {self._wrap(right, _PREC_COMPARE + 1)}",
                    _PREC_COMPARE)
        if op == "REDUCE":
            if inst.op != "plus":
                raise InternalCompilerError(f"no target idiom for reduction '{inst.op}'", inst.span)
            init, items = self.operand(inst.args[0]), self.operand(inst.args[1])
            if self.overflow_checks:
                self.guards.update((GUARD_NAME, SUM_GUARD_NAME))
                if init[0] == "0":
                    return f"{SUM_GUARD_NAME}({items[0]})", _PREC_ATOM
                return f"{SUM_GUARD_NAME}({items[0]}, {init[0]})", _PREC_ATOM
            if init[0] == "0":
                return f"sum({items[0]})", _PREC_ATOM
            return f"sum({items[0]}, {init[0]})", _PREC_ATOM
        if op == "BUILTIN":
            arg = self.operand(inst.args[0])
            if inst.op == "len":
                return f"len({arg[0]})", _PREC_ATOM
            if inst.op == "rev":
                return f"{self._wrap(arg, _PREC_ATOM)}[::-1]", _PREC_ATOM
            if inst.op == "index":
                index = self.operand(inst.args[1])
                return f"{self._wrap(arg, _PREC_ATOM)}[{index[0]}]", _PREC_ATOM
        if op == "LISTNEW":
            return "[" + ", ".join(self.operand(a)[0] for a in inst.args) + "]", _PREC_ATOM
        if op == "APPEND":
            target, elem = self.operand(inst.args[0]), self.operand(inst.args[1])
            return f"{target[0]} + [{elem[0]}]", _PREC["+"]
        raise InternalCompilerError(f"no expression form for {op}", inst.span)

    def _may_overflow(self, inst: Instruction) -> bool:
        """取模结果的绝对值小于除数，不会溢出；除法只有除以 -1 时可能溢出"""
        if not self.overflow_checks or inst.op == "modulo":
            return False
        divisor = inst.args[1]
        if inst.op == "divided-by" and isinstance(divisor, Lit):
            return divisor.value == -1
        return True

    # ------------------------------------------------------------ 语句

    def _line(self, text: str, inst: Instruction) -> str:
        self._collect(inst)
        if not self.annotate or inst.span is None:
            self._notes = []
            return text
        trailer = f"  # line {inst.span.line}"
        if self._notes:
            trailer += ": " + ", ".join(self._notes)
        self._notes = []
        return text + trailer

    def _collect(self, inst: Instruction) -> None:
        for use in inst.pronoun_uses:
            self._notes.append(f"{use.word} -> {use.referent}")

    def block(self, block_id: int) -> List[str]:
        self.plan.block_order.append(block_id)
        lines: List[str] = []
        for inst in self.program.block(block_id).insts:
            if inst.is_terminator:
                self._collect(inst)
                continue
            if inst.dst is not None and inst.dst.startswith(TEMP_PREFIX):
                self._collect(inst)
                self.exprs[inst.dst] = self.expression(inst)
            elif inst.dst is not None and (is_hidden(inst.dst) or inst.op == "index"):
                # 循环计数器与 for 变量的取元素由 for 语句本身承担
                self._collect(inst)
            elif inst.opcode == "PRINT":
                text, _ = self.operand(inst.args[0])
                lines.append(self._line(f"print({text})", inst))
            elif inst.dst is not None:
                text, _ = self.expression(inst)
                lines.append(self._line(f"{self.plan.names[inst.dst]} = {text}", inst))
            else:
                raise InternalCompilerError(f"cannot emit {inst.opcode}", inst.span)
        return lines

    def regions(self, regions) -> List[str]:
        lines: List[str] = []
        for region in regions:
            lines.extend(self.region(region))
        return lines

    @staticmethod
    def _indent(lines: List[str]) -> List[str]:
        return [INDENT + line for line in lines] if lines else [INDENT + "pass"]

    def region(self, region: Region) -> List[str]:
        if isinstance(region, BlockRef):
            return self.block(region.block)
        if isinstance(region, IfNode):
            cond, _ = self.operand(region.cond)
            head = self._annotated(f"if {cond}:")
            out = [head] + self._indent(self.regions(region.then))
            if region.has_else:
                orelse = self.regions(region.orelse)
                if self._is_if_chain(orelse):
                    out.append("el" + orelse[0])
                    out.extend(orelse[1:])
                elif orelse:
                    out.append("else:")
                    out.extend(self._indent(orelse))
            return out
        if isinstance(region, WhileNode):
            self.block(region.header)
            cond, _ = self.operand(region.cond)
            return [self._annotated(f"while {cond}:")] + self._indent(self.regions(region.body))
        if isinstance(region, ForEachNode):
            # 头块只含计数器与边界检查
            self.plan.block_order.append(region.header)
            items, _ = self.operand(region.iterable)
            var = self.plan.names[region.dst]
            return [self._annotated(f"for {var} in {items}:")] + self._indent(self.regions(region.body))
        raise InternalCompilerError(f"unknown region {type(region).__name__}")

    def _annotated(self, text: str) -> str:
        if self.annotate and self._notes:
            text = f"{text}  # " + ", ".join(self._notes)
        self._notes = []
        return text

    @staticmethod
    def _is_if_chain(lines: List[str]) -> bool:
        if not lines or not lines[0].startswith("if "):
            return False
        return all(line.startswith((" ", "elif ", "else:")) for line in lines[1:])


def emit(program: SsaProgram, annotate: bool = False, header: str = DEFAULT_HEADER,
         overflow_checks: bool = True) -> str:
    """
    生成 Python 源码

    Args:
        program: 校验过且通过指代分析的 SSA 程序
        annotate: 为每条语句追加 ``# line N`` 注释（含代词解析）
        header: 首行注释
        overflow_checks: 为可能越出 64 位的整数运算生成检查；程序不含这类运算时不生成任何辅助代码

    Returns:
        以换行结尾的 Python 源码
    """
    plan = plan_names(program)
    emitter = _Emitter(program, plan, annotate, overflow_checks)
    body = emitter.regions(program.regions)
    if emitter.exprs:
        raise InternalCompilerError(f"temporaries never consumed: {sorted(emitter.exprs)}")
    prelude: List[str] = []
    if emitter.guards:
        prelude = list(_GUARD_LINES)
        if SUM_GUARD_NAME in emitter.guards:
            prelude.extend(_SUM_GUARD_LINES)
        prelude.extend(["", ""])
    return "\n".join([header] + prelude + body) + "\n"


class CodeGenerator(BasePass):
    """Python 代码生成阶段"""

    stage = "codegen"

    def __init__(self, annotate: bool = False, header: str = DEFAULT_HEADER, overflow_checks: bool = True):
        self.annotate = annotate
        self.header = header
        self.overflow_checks = overflow_checks

    def run(self, data: SsaProgram) -> str:
        return emit(data, self.annotate, self.header, self.overflow_checks)

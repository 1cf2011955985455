"""
SSA 中间表示模块
I = (B, succ, Φ, inst)：基本块、后继、φ 函数与三地址指令，以及 --emit-ir 文本格式
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .errors import SourceSpan
from .type_terms import TypeTerm

# 编译器生成的名字都以下划线开头，源程序标识符不会以它开头
TEMP_PREFIX = "_t"
COUNTER_PREFIX = "_each"

OPCODES = ("CONST", "COPY", "BINOP", "RELOP", "REDUCE", "BUILTIN", "LISTNEW", "APPEND", "PRINT", "BR", "JMP")
TERMINATORS = ("BR", "JMP")


@dataclass(frozen=True)
class Lit:
    """字面量操作数"""

    value: object

    def __str__(self) -> str:
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        if isinstance(self.value, str):
            return f'"{self.value}"'
        return str(self.value)


@dataclass(frozen=True)
class Undef:
    """某条路径上没有定义的值"""

    def __str__(self) -> str:
        return "undef"


UNDEF = Undef()

Operand = Union[str, Lit, Undef]


def is_name(operand: Operand) -> bool:
    return isinstance(operand, str)


def base_name(ssa_name: str) -> str:
    """x_3 → x；临时名原样返回"""
    if ssa_name.startswith(TEMP_PREFIX) and ssa_name[len(TEMP_PREFIX):].isdigit():
        return ssa_name
    base, sep, version = ssa_name.rpartition("_")
    return base if sep and version.isdigit() else ssa_name


def is_hidden(ssa_name: str) -> bool:
    """编译器生成的名字（临时量、循环计数器）"""
    return ssa_name.startswith("_")


@dataclass(frozen=True)
class PronounUse:
    """一处代词使用：已被替换为 ssa_name"""

    word: str
    span: SourceSpan
    referent: str
    ssa_name: Operand
    site: Optional[SourceSpan] = None


@dataclass
class Instruction:
    """
    三地址指令

    op 对 BINOP/RELOP/REDUCE 是运算符，对 BUILTIN 是内建函数名（len | rev | index）。
    binds 非空表示这是源程序中的绑定点（Let 或 For each 的循环变量）。
    """

    opcode: str
    dst: Optional[str]
    args: Tuple[Operand, ...] = ()
    op: Optional[str] = None
    targets: Tuple[int, ...] = ()
    ty: Optional[TypeTerm] = None
    span: Optional[SourceSpan] = None
    binds: Optional[str] = None
    bind_site: Optional[SourceSpan] = None
    pronoun_uses: Tuple[PronounUse, ...] = ()

    @property
    def is_terminator(self) -> bool:
        return self.opcode in TERMINATORS

    def render(self) -> str:
        parts = [self.opcode]
        if self.op is not None:
            parts.append(self.op)
        parts.extend(str(a) for a in self.args)
        parts.extend(f"bb{t}" for t in self.targets)
        text = " ".join(parts)
        if self.dst is not None:
            return f"{self.dst}:{self.ty} = {text}"
        return text


@dataclass
class PhiNode:
    dst: str
    incoming: Dict[int, Operand]
    ty: Optional[TypeTerm] = None

    def render(self) -> str:
        edges = " ".join(f"[bb{b}: {v}]" for b, v in sorted(self.incoming.items()))
        return f"{self.dst}:{self.ty} = PHI {edges}"


@dataclass
class BasicBlock:
    id: int
    phis: List[PhiNode] = field(default_factory=list)
    insts: List[Instruction] = field(default_factory=list)

    @property
    def terminator(self) -> Optional[Instruction]:
        if self.insts and self.insts[-1].is_terminator:
            return self.insts[-1]
        return None

    @property
    def successors(self) -> Tuple[int, ...]:
        term = self.terminator
        return term.targets if term is not None else ()


# ---------------------------------------------------------------- 结构化区域树

@dataclass
class BlockRef:
    """直线代码：一个基本块中（除终结指令外）的指令"""

    block: int


@dataclass
class IfNode:
    cond: Operand
    then: Tuple["Region", ...]
    orelse: Tuple["Region", ...]
    has_else: bool = True


@dataclass
class WhileNode:
    header: int
    cond: Operand
    body: Tuple["Region", ...]


@dataclass
class ForEachNode:
    header: int
    var: str
    dst: str
    iterable: Operand
    body: Tuple["Region", ...]


Region = Union[BlockRef, IfNode, WhileNode, ForEachNode]


@dataclass
class SsaProgram:
    """SSA 程序；blocks[0] 为入口块"""

    blocks: List[BasicBlock]
    regions: Tuple[Region, ...] = ()
    source_id: str = "<input>"

    def block(self, block_id: int) -> BasicBlock:
        return self.blocks[block_id]

    @property
    def succ(self) -> Dict[int, Tuple[int, ...]]:
        return {b.id: b.successors for b in self.blocks}

    def predecessors(self) -> Dict[int, List[int]]:
        preds: Dict[int, List[int]] = {b.id: [] for b in self.blocks}
        for b in self.blocks:
            for s in b.successors:
                preds[s].append(b.id)
        return preds

    def instructions(self) -> Iterator[Tuple[BasicBlock, int, Instruction]]:
        for b in self.blocks:
            for index, inst in enumerate(b.insts):
                yield b, index, inst

    def definitions(self) -> Dict[str, Tuple[int, int]]:
        """SSA 名 → (块号, 指令序号)；φ 的序号记为 -1"""
        defs: Dict[str, Tuple[int, int]] = {}
        for b in self.blocks:
            for phi in b.phis:
                defs[phi.dst] = (b.id, -1)
            for index, inst in enumerate(b.insts):
                if inst.dst is not None:
                    defs[inst.dst] = (b.id, index)
        return defs

    def types(self) -> Dict[str, TypeTerm]:
        out: Dict[str, TypeTerm] = {}
        for b in self.blocks:
            for phi in b.phis:
                out[phi.dst] = phi.ty
            for inst in b.insts:
                if inst.dst is not None:
                    out[inst.dst] = inst.ty
        return out


def format_ir(program: SsaProgram) -> str:
    """--emit-ir 输出"""
    lines: List[str] = []
    for b in program.blocks:
        lines.append(f"bb{b.id}:")
        lines.extend(f"  {phi.render()}" for phi in b.phis)
        lines.extend(f"  {inst.render()}" for inst in b.insts)
    return "\n".join(lines)

"""
SSA 校验模块
检查单赋值、定义支配使用、φ 与前驱的对应以及操作数类型
"""

from typing import Dict, Optional, Set

from .base_pass import BasePass
from .errors import VerifyError
from .ssa import Instruction, Lit, Operand, SsaProgram, Undef
from .type_terms import BOOL, INT, STR, TList, TypeTerm


def dominators(program: SsaProgram) -> Dict[int, Set[int]]:
    """迭代求每个块的支配者集合"""
    all_blocks = {b.id for b in program.blocks}
    preds = program.predecessors()
    dom: Dict[int, Set[int]] = {b: set(all_blocks) for b in all_blocks}
    if not program.blocks:
        return dom
    entry = program.blocks[0].id
    dom[entry] = {entry}
    changed = True
    while changed:
        changed = False
        for b in program.blocks:
            if b.id == entry:
                continue
            incoming = [dom[p] for p in preds[b.id]]
            new = set.intersection(*incoming) if incoming else set(all_blocks)
            new = new | {b.id}
            if new != dom[b.id]:
                dom[b.id] = new
                changed = True
    return dom


def literal_type(lit: Lit) -> TypeTerm:
    if isinstance(lit.value, bool):
        return BOOL
    if isinstance(lit.value, int):
        return INT
    return STR


class _Verifier:
    def __init__(self, program: SsaProgram):
        self.program = program
        self.types: Dict[str, TypeTerm] = {}
        self.defs: Dict[str, tuple] = {}

    def fail(self, invariant: str, message: str, block: Optional[int] = None, index: Optional[int] = None):
        raise VerifyError(invariant, message, block, index)

    def operand_type(self, operand: Operand, block: int, index: int) -> Optional[TypeTerm]:
        if isinstance(operand, Lit):
            return literal_type(operand)
        if isinstance(operand, Undef):
            return None
        if operand not in self.types:
            self.fail("definition", f"use of undefined name '{operand}'", block, index)
        return self.types[operand]

    def check(self) -> None:
        self.check_structure()
        self.check_single_assignment()
        self.check_phis()
        self.check_dominance()
        self.check_types()

    def check_structure(self) -> None:
        ids = {b.id for b in self.program.blocks}
        for position, b in enumerate(self.program.blocks):
            if b.id != position:
                self.fail("block-order", f"block bb{b.id} stored at position {position}", b.id)
            for index, inst in enumerate(b.insts):
                if inst.is_terminator and index != len(b.insts) - 1:
                    self.fail("terminator", f"{inst.opcode} is not the last instruction", b.id, index)
                for target in inst.targets:
                    if target not in ids:
                        self.fail("successor", f"branch to unknown block bb{target}", b.id, index)

    def check_single_assignment(self) -> None:
        for b in self.program.blocks:
            for phi in b.phis:
                self._define(phi.dst, phi.ty, b.id, -1)
            for index, inst in enumerate(b.insts):
                if inst.dst is not None:
                    self._define(inst.dst, inst.ty, b.id, index)

    def _define(self, name: str, ty: Optional[TypeTerm], block: int, index: int) -> None:
        if name in self.defs:
            first = self.defs[name]
            self.fail("single-assignment", f"'{name}' is defined twice (first in bb{first[0]})", block,
                      index if index >= 0 else None)
        if ty is None:
            self.fail("typing", f"'{name}' has no type annotation", block, index if index >= 0 else None)
        self.defs[name] = (block, index)
        self.types[name] = ty

    def check_phis(self) -> None:
        preds = self.program.predecessors()
        for b in self.program.blocks:
            expected = sorted(preds[b.id])
            for phi in b.phis:
                if sorted(phi.incoming) != expected:
                    self.fail("phi-arity", f"phi '{phi.dst}' has incoming edges {sorted(phi.incoming)} "
                              f"but block has predecessors {expected}", b.id)

    def _dominates(self, name: str, block: int, index: int, dom: Dict[int, Set[int]]) -> bool:
        def_block, def_index = self.defs[name]
        if def_block == block:
            return def_index < index
        return def_block in dom[block]

    def check_dominance(self) -> None:
        dom = dominators(self.program)
        for b in self.program.blocks:
            for phi in b.phis:
                for pred, value in phi.incoming.items():
                    if isinstance(value, str):
                        self.operand_type(value, b.id, -1)
                        # φ 的操作数须支配对应前驱的末尾
                        if not self._dominates(value, pred, len(self.program.block(pred).insts) + 1, dom):
                            self.fail("dominance", f"phi operand '{value}' does not dominate edge from bb{pred}",
                                      b.id)
            for index, inst in enumerate(b.insts):
                for arg in inst.args:
                    if isinstance(arg, str):
                        self.operand_type(arg, b.id, index)
                        if not self._dominates(arg, b.id, index, dom):
                            self.fail("dominance", f"use of '{arg}' is not dominated by its definition", b.id, index)

    def check_types(self) -> None:
        for b in self.program.blocks:
            for phi in b.phis:
                for value in phi.incoming.values():
                    ty = self.operand_type(value, b.id, -1)
                    if ty is not None and ty != phi.ty:
                        self.fail("typing", f"phi '{phi.dst}:{phi.ty}' has incoming '{value}:{ty}'", b.id)
            for index, inst in enumerate(b.insts):
                self._check_inst(inst, b.id, index)

    def _check_inst(self, inst: Instruction, block: int, index: int) -> None:
        args = [self.operand_type(a, block, index) for a in inst.args]

        def expect(actual: Optional[TypeTerm], wanted: TypeTerm, what: str) -> None:
            if actual is not None and actual != wanted:
                self.fail("typing", f"{inst.opcode} {what} has type {actual}, expected {wanted}", block, index)

        op = inst.opcode
        if op in ("CONST", "COPY"):
            expect(args[0], inst.ty, "operand")
        elif op == "BINOP":
            expect(args[0], INT, "left operand")
            expect(args[1], INT, "right operand")
            expect(inst.ty, INT, "result")
        elif op == "RELOP":
            if inst.op in ("is", "is-equal-to"):
                if args[0] is not None and args[1] is not None and args[0] != args[1]:
                    self.fail("typing", f"RELOP compares {args[0]} with {args[1]}", block, index)
            else:
                expect(args[0], INT, "left operand")
                expect(args[1], INT, "right operand")
            expect(inst.ty, BOOL, "result")
        elif op == "REDUCE":
            expect(args[0], INT, "seed")
            expect(args[1], TList(INT), "list operand")
            expect(inst.ty, INT, "result")
        elif op == "BUILTIN":
            self._check_builtin(inst, args, expect, block, index)
        elif op == "LISTNEW":
            if not isinstance(inst.ty, TList):
                self.fail("typing", f"LISTNEW produces non-list type {inst.ty}", block, index)
            for arg in args:
                expect(arg, inst.ty.elem, "element")
        elif op == "APPEND":
            if not isinstance(inst.ty, TList):
                self.fail("typing", f"APPEND produces non-list type {inst.ty}", block, index)
            expect(args[0], inst.ty, "list operand")
            expect(args[1], inst.ty.elem, "element")
        elif op == "BR":
            expect(args[0], BOOL, "condition")
        elif op not in ("PRINT", "JMP"):
            self.fail("opcode", f"unknown opcode {op}", block, index)

    def _check_builtin(self, inst, args, expect, block, index) -> None:
        fn = inst.op
        if fn == "len":
            if args[0] is not None and args[0] != STR and not isinstance(args[0], TList):
                self.fail("typing", f"len of {args[0]}", block, index)
            expect(inst.ty, INT, "result")
        elif fn == "rev":
            expect(inst.ty, args[0], "result")
        elif fn == "index":
            if args[0] is not None:
                if not isinstance(args[0], TList):
                    self.fail("typing", f"index into {args[0]}", block, index)
                expect(inst.ty, args[0].elem, "result")
            expect(args[1], INT, "index")
        else:
            self.fail("opcode", f"unknown builtin '{fn}'", block, index)


def verify_ssa(program: SsaProgram) -> None:
    """
    校验 SSA 程序

    Args:
        program: 待校验的 SSA 程序

    Raises:
        VerifyError: 指出被破坏的不变量、所在块与指令序号
    """
    _Verifier(program).check()


class SsaVerifier(BasePass):
    """SSA 校验阶段"""

    stage = "verify"

    def run(self, data: SsaProgram) -> SsaProgram:
        verify_ssa(data)
        return data

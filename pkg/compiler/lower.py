"""
SSA 构造模块
在结构化控制流上按需插入 φ（封闭块 + 不完全 φ），并把每个代词替换为其先行词的当前版本
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Sequence

from .ast_nodes import (
    BinOp, BoolLit, Builtin, BuiltinStmt, Expr, ForEach, If, IntLit, Let, ListLit, Print,
    Pronoun, Reduce, RelOp, Stmt, StrLit, Var, While, binding_span,
)
from .base_pass import BasePass
from .errors import InternalCompilerError, SourceSpan
from .ssa import (
    COUNTER_PREFIX, TEMP_PREFIX, UNDEF, BasicBlock, BlockRef, ForEachNode, IfNode,
    Instruction, Lit, Operand, PhiNode, PronounUse, Region, SsaProgram, WhileNode,
)
from .type_terms import INT, BOOL, TList, TypeTerm
from .typeck import TypedProgram


class SsaBuilder:
    """单次 SSA 构造；状态只属于一个编译单元"""

    def __init__(self, source_id: str = "<input>"):
        self.source_id = source_id
        self.blocks: List[BasicBlock] = []
        self.preds: Dict[int, List[int]] = defaultdict(list)
        self.sealed: set = set()
        self.current_def: Dict[str, Dict[int, Operand]] = defaultdict(dict)
        self.incomplete: Dict[int, Dict[str, PhiNode]] = defaultdict(dict)
        self.var_types: Dict[str, TypeTerm] = {}
        self.versions: Dict[str, int] = defaultdict(int)
        self._temps = 0
        self._loops = 0
        self._pending_uses: List[PronounUse] = []
        self.cur = self.new_block()
        self.seal(self.cur)

    # ------------------------------------------------------------ 块与指令

    def new_block(self) -> int:
        block = BasicBlock(len(self.blocks))
        self.blocks.append(block)
        return block.id

    def emit(self, inst: Instruction) -> Instruction:
        if self._pending_uses:
            inst.pronoun_uses = tuple(self._pending_uses)
            self._pending_uses = []
        self.blocks[self.cur].insts.append(inst)
        return inst

    def jump(self, target: int) -> None:
        self.emit(Instruction("JMP", None, targets=(target,)))
        self.preds[target].append(self.cur)

    def branch(self, cond: Operand, then_block: int, else_block: int, span: Optional[SourceSpan]) -> None:
        self.emit(Instruction("BR", None, (cond,), targets=(then_block, else_block), span=span))
        self.preds[then_block].append(self.cur)
        self.preds[else_block].append(self.cur)

    def new_temp(self) -> str:
        self._temps += 1
        return f"{TEMP_PREFIX}{self._temps}"

    def new_version(self, base: str) -> str:
        self.versions[base] += 1
        return f"{base}_{self.versions[base]}"

    # ------------------------------------------------------------ 变量读写

    def write_variable(self, base: str, block: int, value: Operand) -> None:
        self.current_def[base][block] = value

    def read_variable(self, base: str, block: int) -> Operand:
        defs = self.current_def[base]
        if block in defs:
            return defs[block]
        return self._read_recursive(base, block)

    def _new_phi(self, base: str, block: int) -> PhiNode:
        phi = PhiNode(self.new_version(base), {}, self.var_types.get(base))
        self.blocks[block].phis.append(phi)
        return phi

    def _read_recursive(self, base: str, block: int) -> Operand:
        preds = self.preds[block]
        if block not in self.sealed:
            phi = self._new_phi(base, block)
            self.incomplete[block][base] = phi
            value: Operand = phi.dst
        elif not preds:
            # 到达入口仍无定义
            value = UNDEF
        elif len(preds) == 1:
            value = self.read_variable(base, preds[0])
        else:
            phi = self._new_phi(base, block)
            self.write_variable(base, block, phi.dst)
            self._add_operands(base, phi, block)
            value = phi.dst
        self.write_variable(base, block, value)
        return value

    def _add_operands(self, base: str, phi: PhiNode, block: int) -> None:
        for pred in self.preds[block]:
            phi.incoming[pred] = self.read_variable(base, pred)

    def seal(self, block: int) -> None:
        for base, phi in self.incomplete.pop(block, {}).items():
            self._add_operands(base, phi, block)
        self.sealed.add(block)

    # ------------------------------------------------------------ 表达式

    def lower_expr(self, expr: Expr, dst: Optional[str] = None) -> Operand:
        """
        生成计算 expr 的指令

        dst 为空时原子表达式直接作为操作数返回，复合表达式写入新的临时量。
        """
        ty = expr.ty
        if isinstance(expr, (IntLit, StrLit, BoolLit)):
            if dst is None:
                return Lit(expr.value)
            self.emit(Instruction("CONST", dst, (Lit(expr.value),), ty=ty, span=expr.span))
            return dst
        if isinstance(expr, (Var, Pronoun)):
            operand = self._read_name(expr)
            if dst is None:
                return operand
            self.emit(Instruction("COPY", dst, (operand,), ty=ty, span=expr.span))
            return dst
        if isinstance(expr, ListLit):
            elems = tuple(self.lower_expr(e) for e in expr.elements)
            target = dst or self.new_temp()
            self.emit(Instruction("LISTNEW", target, elems, ty=ty, span=expr.span))
            return target
        if isinstance(expr, (BinOp, RelOp)):
            left = self.lower_expr(expr.left)
            right = self.lower_expr(expr.right)
            target = dst or self.new_temp()
            opcode = "BINOP" if isinstance(expr, BinOp) else "RELOP"
            self.emit(Instruction(opcode, target, (left, right), op=expr.op, ty=ty, span=expr.span))
            return target
        if isinstance(expr, Reduce):
            init = self.lower_expr(expr.init)
            operand = self.lower_expr(expr.operand)
            target = dst or self.new_temp()
            self.emit(Instruction("REDUCE", target, (init, operand), op=expr.op, ty=ty, span=expr.span))
            return target
        if isinstance(expr, Builtin) and expr.fn in ("len", "rev"):
            arg = self.lower_expr(expr.args[0])
            target = dst or self.new_temp()
            self.emit(Instruction("BUILTIN", target, (arg,), op=expr.fn, ty=ty, span=expr.span))
            return target
        raise InternalCompilerError(f"cannot lower expression {type(expr).__name__}", expr.span)

    def _read_name(self, expr) -> Operand:
        if isinstance(expr, Var):
            return self.read_variable(expr.name, self.cur)
        if not expr.resolved:
            raise InternalCompilerError(f"unresolved pronoun '{expr.word}' reached SSA construction", expr.span)
        operand = self.read_variable(expr.referent, self.cur)
        self._pending_uses.append(PronounUse(expr.word, expr.span, expr.referent, operand, expr.site))
        return operand

    # ------------------------------------------------------------ 语句

    def lower_block(self, stmts: Sequence[Stmt]) -> List[Region]:
        regions: List[Region] = [BlockRef(self.cur)]
        for stmt in stmts:
            node = self.lower_stmt(stmt)
            if node is not None:
                regions.append(node)
                regions.append(BlockRef(self.cur))
        return regions

    def _bind(self, name: str, ty: Optional[TypeTerm]) -> str:
        if ty is not None:
            self.var_types[name] = ty
        return self.new_version(name)

    def lower_stmt(self, stmt: Stmt) -> Optional[Region]:
        if isinstance(stmt, Let):
            dst = self._lower_let_value(stmt)
            inst = self.blocks[self.cur].insts[-1]
            if inst.dst != dst:
                raise InternalCompilerError("binding instruction was not emitted last", stmt.span)
            inst.binds = stmt.name
            inst.bind_site = binding_span(stmt)
            self.write_variable(stmt.name, self.cur, dst)
            return None
        if isinstance(stmt, Print):
            value = self.lower_expr(stmt.value)
            self.emit(Instruction("PRINT", None, (value,), span=stmt.span))
            return None
        if isinstance(stmt, BuiltinStmt):
            return self._lower_append(stmt)
        if isinstance(stmt, If):
            return self._lower_if(stmt)
        if isinstance(stmt, While):
            return self._lower_while(stmt)
        if isinstance(stmt, ForEach):
            return self._lower_foreach(stmt)
        raise InternalCompilerError(f"cannot lower statement {type(stmt).__name__}", stmt.span)

    def _lower_let_value(self, stmt: Let) -> str:
        """先读操作数再分配新版本，保证 x_2 = x_1 + 1 的顺序"""
        value = stmt.value
        if isinstance(value, (IntLit, StrLit, BoolLit)):
            dst = self._bind(stmt.name, value.ty)
            self.lower_expr(value, dst)
            return dst
        if isinstance(value, (Var, Pronoun)):
            operand = self._read_name(value)
            dst = self._bind(stmt.name, value.ty)
            self.emit(Instruction("COPY", dst, (operand,), ty=value.ty, span=value.span))
            return dst
        # 复合表达式：子表达式先求值，最后一条指令直接写入新版本
        return _Staged(self, stmt.name, value.ty).lower(value)

    def _lower_append(self, stmt: BuiltinStmt) -> None:
        call = stmt.call
        if call.fn != "append":
            raise InternalCompilerError(f"unexpected builtin statement '{call.fn}'", stmt.span)
        target, value = call.args
        old = self.read_variable(target.name, self.cur)
        elem = self.lower_expr(value)
        dst = self._bind(target.name, call.ty)
        self.emit(Instruction("APPEND", dst, (old, elem), ty=call.ty, span=stmt.span))
        self.write_variable(target.name, self.cur, dst)
        return None

    def _lower_if(self, stmt: If) -> Region:
        cond = self.lower_expr(stmt.cond)
        then_block = self.new_block()
        else_block = self.new_block() if stmt.orelse is not None else None
        join = self.new_block()
        self.branch(cond, then_block, else_block if else_block is not None else join, stmt.cond.span)
        self.seal(then_block)

        self.cur = then_block
        then_regions = self.lower_block(stmt.then)
        self.jump(join)

        else_regions: List[Region] = []
        if else_block is not None:
            self.seal(else_block)
            self.cur = else_block
            else_regions = self.lower_block(stmt.orelse)
            self.jump(join)

        self.seal(join)
        self.cur = join
        return IfNode(cond, tuple(then_regions), tuple(else_regions), has_else=else_block is not None)

    def _lower_while(self, stmt: While) -> Region:
        header = self.new_block()
        self.jump(header)
        self.cur = header
        cond = self.lower_expr(stmt.cond)
        body = self.new_block()
        exit_block = self.new_block()
        self.branch(cond, body, exit_block, stmt.cond.span)
        self.seal(body)

        self.cur = body
        body_regions = self.lower_block(stmt.body)
        self.jump(header)
        self.seal(header)
        self.seal(exit_block)
        self.cur = exit_block
        return WhileNode(header, cond, tuple(body_regions))

    def _lower_foreach(self, stmt: ForEach) -> Region:
        iterable = self.lower_expr(stmt.iterable)
        list_ty = stmt.iterable.ty
        elem_ty = list_ty.elem if isinstance(list_ty, TList) else None

        self._loops += 1
        counter = f"{COUNTER_PREFIX}{self._loops}"
        self.var_types[counter] = INT
        start = self.new_version(counter)
        self.emit(Instruction("CONST", start, (Lit(0),), ty=INT, span=stmt.span))
        self.write_variable(counter, self.cur, start)

        header = self.new_block()
        self.jump(header)
        self.cur = header
        index = self.read_variable(counter, header)
        size = self.new_temp()
        self.emit(Instruction("BUILTIN", size, (iterable,), op="len", ty=INT, span=stmt.iterable.span))
        more = self.new_temp()
        self.emit(Instruction("RELOP", more, (index, size), op="less-than", ty=BOOL, span=stmt.span))
        body = self.new_block()
        exit_block = self.new_block()
        self.branch(more, body, exit_block, stmt.span)
        self.seal(body)

        self.cur = body
        var_dst = self._bind(stmt.var, elem_ty)
        self.emit(Instruction("BUILTIN", var_dst, (iterable, index), op="index", ty=elem_ty, span=stmt.span,
                              binds=stmt.var, bind_site=binding_span(stmt)))
        self.write_variable(stmt.var, self.cur, var_dst)
        body_regions = self.lower_block(stmt.body)
        current = self.read_variable(counter, self.cur)
        bumped = self.new_version(counter)
        self.emit(Instruction("BINOP", bumped, (current, Lit(1)), op="plus", ty=INT, span=stmt.span))
        self.write_variable(counter, self.cur, bumped)
        self.jump(header)
        self.seal(header)
        self.seal(exit_block)
        self.cur = exit_block
        return ForEachNode(header, stmt.var, var_dst, iterable, tuple(body_regions))

    def finish(self, regions: List[Region]) -> SsaProgram:
        if self.incomplete:
            raise InternalCompilerError(f"unsealed blocks remain: {sorted(self.incomplete)}")
        return SsaProgram(self.blocks, tuple(regions), self.source_id)


class _Staged:
    """为 Let 的复合右值分配目标版本：子表达式先行，顶层指令写入 x_n"""

    def __init__(self, builder: SsaBuilder, name: str, ty: Optional[TypeTerm]):
        self.builder = builder
        self.name = name
        self.ty = ty

    def lower(self, expr: Expr) -> str:
        b = self.builder
        if isinstance(expr, ListLit):
            elems = tuple(b.lower_expr(e) for e in expr.elements)
            return self._emit("LISTNEW", elems, None, expr)
        if isinstance(expr, (BinOp, RelOp)):
            left = b.lower_expr(expr.left)
            right = b.lower_expr(expr.right)
            return self._emit("BINOP" if isinstance(expr, BinOp) else "RELOP", (left, right), expr.op, expr)
        if isinstance(expr, Reduce):
            init = b.lower_expr(expr.init)
            operand = b.lower_expr(expr.operand)
            return self._emit("REDUCE", (init, operand), expr.op, expr)
        if isinstance(expr, Builtin) and expr.fn in ("len", "rev"):
            arg = b.lower_expr(expr.args[0])
            return self._emit("BUILTIN", (arg,), expr.fn, expr)
        raise InternalCompilerError(f"cannot lower expression {type(expr).__name__}", expr.span)

    def _emit(self, opcode: str, args, op: Optional[str], expr: Expr) -> str:
        dst = self.builder._bind(self.name, self.ty)
        self.builder.emit(Instruction(opcode, dst, tuple(args), op=op, ty=expr.ty, span=expr.span))
        return dst


def lower(typed: TypedProgram) -> SsaProgram:
    """
    把带类型的核心程序降为 SSA

    Args:
        typed: 通过类型检查的程序

    Returns:
        SSA 程序（尚未校验）

    Raises:
        InternalCompilerError: 构造过程中内部不变量被破坏
    """
    builder = SsaBuilder(typed.program.source_id)
    regions = builder.lower_block(typed.program.statements)
    return builder.finish(regions)


class SsaLowering(BasePass):
    """SSA 构造阶段"""

    stage = "ssa"

    def run(self, data: TypedProgram) -> SsaProgram:
        program = lower(data)
        self.logger.debug(f"生成 {len(program.blocks)} 个基本块")
        return program

"""
指代分析模块
在 SSA 控制流图上做前向抽象解释，证明每个代词都有唯一且已定义的先行词
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .base_pass import BasePass
from .errors import InternalCompilerError, PronounError, SourceSpan
from .lattice import BOTTOM, Bottom, Ref, RefValue, Top, identical, join, trace
from .ssa import PronounUse, SsaProgram, Undef, base_name


@dataclass(frozen=True)
class ResolvedPronoun:
    """一处已证明的代词：指代链即先行词的绑定位置"""

    word: str
    span: SourceSpan
    referent: str
    ssa_name: str
    sites: Tuple[SourceSpan, ...]


@dataclass
class RefReport:
    pronouns: List[ResolvedPronoun]
    entry: Dict[int, RefValue]
    exit: Dict[int, RefValue]
    relaxations: int = 0


def transfer(program: SsaProgram, block: int, value: RefValue,
             uses: Optional[List[Tuple[PronounUse, RefValue]]] = None) -> RefValue:
    """顺序扫描块内指令：先记录代词使用处的值，再应用绑定"""
    for inst in program.block(block).insts:
        if uses is not None:
            for use in inst.pronoun_uses:
                uses.append((use, value))
        if inst.binds is not None:
            sites = frozenset({inst.bind_site}) if inst.bind_site is not None else frozenset()
            value = Ref(inst.binds, sites)
    return value


def maybe_undefined(program: SsaProgram) -> Set[str]:
    """在某条路径上取到 undef 的 φ 目标（迭代到不动点）"""
    result: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for b in program.blocks:
            for phi in b.phis:
                if phi.dst in result:
                    continue
                if any(isinstance(v, Undef) or v in result for v in phi.incoming.values()):
                    result.add(phi.dst)
                    changed = True
    return result


def solve(program: SsaProgram) -> Tuple[Dict[int, RefValue], Dict[int, RefValue], int]:
    """工作表不动点；入口块初值为 ⊥，汇合点取前驱出口值的并"""
    entry: Dict[int, RefValue] = {b.id: BOTTOM for b in program.blocks}
    exit_: Dict[int, RefValue] = {}
    relaxations = 0
    worklist = deque(b.id for b in program.blocks)
    queued = set(worklist)
    while worklist:
        block = worklist.popleft()
        queued.discard(block)
        out = transfer(program, block, entry[block])
        if block in exit_ and identical(exit_[block], out):
            continue
        exit_[block] = out
        for succ in program.block(block).successors:
            relaxations += 1
            merged = join(entry[succ], out)
            if not identical(merged, entry[succ]) and succ not in queued:
                worklist.append(succ)
                queued.add(succ)
            entry[succ] = merged
    return entry, exit_, relaxations


def _names(value: RefValue) -> str:
    names = sorted({name for name, _ in trace(value)})
    return " or ".join(f"'{n}'" for n in names)


def analyze(program: SsaProgram) -> RefReport:
    """
    指代分析

    Args:
        program: 通过校验的 SSA 程序

    Returns:
        每处代词的解析结果（指代链）

    Raises:
        PronounError: 代词处的值为 ⊥（未定义）或 ⊤（歧义），或先行词并非在每条路径上都已绑定
        InternalCompilerError: SSA 绑定与分析结果不一致
    """
    entry, exit_, relaxations = solve(program)
    uses: List[Tuple[PronounUse, RefValue]] = []
    for b in program.blocks:
        transfer(program, b.id, entry[b.id], uses)
    uses.sort(key=lambda item: item[0].span)
    partial = maybe_undefined(program)

    resolved: List[ResolvedPronoun] = []
    for use, value in uses:
        word = use.word
        if isinstance(value, Bottom):
            raise PronounError("undefined", f"undefined pronoun '{word}': no antecedent is bound before it",
                               use.span)
        if isinstance(value, Top):
            raise PronounError("ambiguous", f"ambiguous pronoun '{word}': it could refer to {_names(value)}",
                               use.span, trace(value))
        if value.name != use.referent:
            sites = trace(value)
            if use.site is not None:
                sites = sorted(sites + [(use.referent, use.site)], key=lambda item: (item[1], item[0]))
            raise PronounError("ambiguous", f"ambiguous pronoun '{word}': the nearest antecedent in the text is "
                               f"'{use.referent}' but on this path it is '{value.name}'", use.span, sites)
        if isinstance(use.ssa_name, Undef) or use.ssa_name in partial:
            raise PronounError("undefined", f"undefined pronoun '{word}': antecedent '{use.referent}' "
                               "is not bound on every path", use.span, trace(value))
        if not isinstance(use.ssa_name, str) or base_name(use.ssa_name) != use.referent:
            raise InternalCompilerError(f"pronoun '{word}' lowered to '{use.ssa_name}' "
                                        f"but its antecedent is '{use.referent}'", use.span)
        sites = tuple(site for _, site in trace(value))
        resolved.append(ResolvedPronoun(word, use.span, use.referent, use.ssa_name, sites))
    return RefReport(resolved, entry, exit_, relaxations)


class ReferentAnalyzer(BasePass):
    """指代分析阶段"""

    stage = "refs"

    def run(self, data: SsaProgram) -> RefReport:
        report = analyze(data)
        self.logger.debug(f"{len(report.pronouns)} 个代词全部确定解析，松弛 {report.relaxations} 次")
        return report


def format_refs(report: RefReport) -> str:
    """--emit-refs 输出：line:col  it -> average (bound at line 4)"""
    lines = []
    for p in report.pronouns:
        bound = sorted({s.line for s in p.sites})
        where = f"line {bound[0]}" if len(bound) == 1 else "lines " + ", ".join(str(n) for n in bound)
        lines.append(f"{p.span.line}:{p.span.start}  {p.word} -> {p.referent} (bound at {where})")
    return "\n".join(lines)

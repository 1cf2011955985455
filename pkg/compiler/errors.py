"""
错误与诊断模块
定义源码位置、诊断信息以及各编译阶段的异常类型
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple


@dataclass(frozen=True, slots=True, order=True)
class SourceSpan:
    """源码区间：1 起始的行号，列范围为闭区间"""

    line: int
    start: int
    end: int

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        """覆盖两个区间的最小区间（跨行时保留起始行）"""
        if other.line != self.line:
            return self if (self.line, self.start) <= (other.line, other.start) else other
        return SourceSpan(self.line, min(self.start, other.start), max(self.end, other.end))

    def __str__(self) -> str:
        return f"{self.line}:{self.start}-{self.end}"


NO_SPAN = SourceSpan(1, 1, 1)


class Category(str, Enum):
    """诊断类别，由产生诊断的阶段唯一决定"""

    LEX = "lex"
    PARSE = "parse"
    TYPE = "type"
    PRONOUN_UNDEFINED = "pronoun-undefined"
    PRONOUN_AMBIGUOUS = "pronoun-ambiguous"
    RUNTIME = "runtime"
    INTERNAL = "internal"


# 指代链：(变量名, 绑定位置)
ReferentTrace = List[Tuple[str, SourceSpan]]


@dataclass
class Diagnostic:
    """编译诊断"""

    category: Category
    message: str
    span: Optional[SourceSpan] = None
    trace: ReferentTrace = field(default_factory=list)
    excerpt: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def is_pronoun(self) -> bool:
        return self.category in (Category.PRONOUN_UNDEFINED, Category.PRONOUN_AMBIGUOUS)


def render_diagnostic(diag: Diagnostic, source: Optional[str] = None, source_id: str = "<input>") -> str:
    """
    渲染诊断文本

    格式：
        error[<category>] <message>
         --> file:line:col
        源码行 + 插入符下划线
        referent trace: ...

    Args:
        diag: 诊断信息
        source: 源码全文（用于引用出错行）
        source_id: 文件名或 REPL 标识

    Returns:
        多行诊断文本（不含结尾换行）
    """
    lines = [f"error[{diag.category.value}] {diag.message}"]
    if diag.span is not None:
        span = diag.span
        lines.append(f" --> {source_id}:{span.line}:{span.start}")
        source_lines = source.split("\n") if source is not None else []
        if 0 < span.line <= len(source_lines):
            text = source_lines[span.line - 1]
            gutter = " " * len(str(span.line))
            width = max(1, span.end - span.start + 1)
            lines.append(f"{gutter} |")
            lines.append(f"{span.line} | {text}")
            lines.append(f"{gutter} | {' ' * (span.start - 1)}{'^' * width}")
    if diag.excerpt:
        lines.append(f"  = in sentence: {diag.excerpt}")
    for note in diag.notes:
        lines.append(f"  = note: {note}")
    if diag.is_pronoun:
        lines.append("referent trace:")
        if diag.trace:
            for name, site in diag.trace:
                lines.append(f"  {name} bound at line {site.line}:{site.start}")
        else:
            lines.append("  none bound")
    return "\n".join(lines)


class LinguineError(Exception):
    """所有编译阶段错误的基类"""

    category: Category = Category.INTERNAL

    def __init__(self, message: str, span: Optional[SourceSpan] = None, excerpt: Optional[str] = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span
        self.excerpt = excerpt

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(self.category, self.message, self.span, excerpt=self.excerpt)


class LexError(LinguineError):
    """词法错误：未闭合字符串、未知标点等"""

    category = Category.LEX


class ParseError(LinguineError):
    """语法错误"""

    category = Category.PARSE

    def __init__(self, message: str, span: Optional[SourceSpan] = None, excerpt: Optional[str] = None,
                 expected: Tuple[str, ...] = ()) -> None:
        super().__init__(message, span, excerpt)
        self.expected = expected


class TypeCheckError(LinguineError):
    """类型错误，可携带两侧类型与位置"""

    category = Category.TYPE

    def __init__(self, message: str, span: Optional[SourceSpan] = None, excerpt: Optional[str] = None,
                 other_span: Optional[SourceSpan] = None) -> None:
        super().__init__(message, span, excerpt)
        self.other_span = other_span

    def to_diagnostic(self) -> Diagnostic:
        diag = super().to_diagnostic()
        if self.other_span is not None and self.other_span != self.span:
            diag.notes.append(f"conflicting type arises at line {self.other_span.line}:{self.other_span.start}")
        return diag


class PronounError(LinguineError):
    """代词错误：未定义（⊥）或歧义（⊤）"""

    def __init__(self, kind: str, message: str, span: Optional[SourceSpan] = None,
                 trace: Optional[ReferentTrace] = None, excerpt: Optional[str] = None) -> None:
        super().__init__(message, span, excerpt)
        self.kind = kind
        self.trace = list(trace or [])

    @property
    def category(self) -> Category:  # type: ignore[override]
        return Category.PRONOUN_AMBIGUOUS if self.kind == "ambiguous" else Category.PRONOUN_UNDEFINED

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(self.category, self.message, self.span, list(self.trace), self.excerpt)


class RuntimeFault(LinguineError):
    """运行时故障：除零、溢出、步数耗尽"""

    category = Category.RUNTIME

    def __init__(self, kind: str, message: str, span: Optional[SourceSpan] = None) -> None:
        super().__init__(message, span)
        self.kind = kind


class VerifyError(LinguineError):
    """SSA 校验失败（编译器缺陷）"""

    def __init__(self, invariant: str, message: str, block: Optional[int] = None, index: Optional[int] = None) -> None:
        where = f" (bb{block}" + (f", instruction {index})" if index is not None else ")") if block is not None else ""
        super().__init__(f"SSA verification failed [{invariant}]{where}: {message}")
        self.invariant = invariant
        self.block = block
        self.index = index

    def to_diagnostic(self) -> Diagnostic:
        diag = super().to_diagnostic()
        diag.notes.append("this is a compiler bug")
        return diag


class InternalCompilerError(LinguineError):
    """编译器内部不变量被破坏"""

    def to_diagnostic(self) -> Diagnostic:
        diag = super().to_diagnostic()
        diag.notes.append("this is a compiler bug")
        return diag

"""
指代格模块
平坦格 D_ref = {⊥} ∪ Ref ∪ {⊤} 及其并、交运算
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple, Union

from .errors import NO_SPAN, SourceSpan


@dataclass(frozen=True)
class Bottom:
    """⊥：尚无先行词"""

    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class Ref:
    """单一先行词；比较只看变量名，sites 记录汇入的绑定位置"""

    name: str
    sites: FrozenSet[SourceSpan] = field(default=frozenset(), compare=False)

    def __str__(self) -> str:
        return f"Ref({self.name})"


@dataclass(frozen=True)
class Top:
    """⊤：多个互相冲突的先行词"""

    sources: FrozenSet[Tuple[str, SourceSpan]] = field(default=frozenset(), compare=False)

    def __str__(self) -> str:
        return "⊤"


RefValue = Union[Bottom, Ref, Top]

BOTTOM = Bottom()
TOP = Top()


def contributors(value: RefValue) -> FrozenSet[Tuple[str, SourceSpan]]:
    if isinstance(value, Ref):
        return frozenset((value.name, s) for s in value.sites) or frozenset({(value.name, NO_SPAN)})
    if isinstance(value, Top):
        return value.sources
    return frozenset()


def join(a: RefValue, b: RefValue) -> RefValue:
    """a ⊔ b：相等取 a，一侧为 ⊥ 取另一侧，否则 ⊤"""
    if isinstance(a, Bottom):
        return b
    if isinstance(b, Bottom):
        return a
    if isinstance(a, Ref) and isinstance(b, Ref) and a.name == b.name:
        return Ref(a.name, a.sites | b.sites)
    return Top(contributors(a) | contributors(b))


def meet(a: RefValue, b: RefValue) -> RefValue:
    """a ⊓ b：相等取 a，一侧为 ⊤ 取另一侧，否则 ⊥"""
    if a == b:
        return a
    if isinstance(b, Top):
        return a
    if isinstance(a, Top):
        return b
    return BOTTOM


def leq(a: RefValue, b: RefValue) -> bool:
    """a ⊑ b"""
    return join(a, b) == b


def identical(a: RefValue, b: RefValue) -> bool:
    """连同绑定位置一起比较，供不动点迭代判断是否变化"""
    return a == b and contributors(a) == contributors(b)


def trace(value: RefValue) -> List[Tuple[str, SourceSpan]]:
    """按位置排序的指代链"""
    return sorted(contributors(value), key=lambda item: (item[1], item[0]))

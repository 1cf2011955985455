"""
类型项模块
类型项、代换与合一（含出现检查）
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Set, Union


@dataclass(frozen=True, slots=True)
class TCon:
    """基本类型：Int | Bool | Str"""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TList:
    elem: "TypeTerm"

    def __str__(self) -> str:
        return f"List<{self.elem}>"


@dataclass(frozen=True, slots=True)
class TVar:
    id: int

    def __str__(self) -> str:
        return f"'t{self.id}"


TypeTerm = Union[TCon, TList, TVar]

INT = TCon("Int")
BOOL = TCon("Bool")
STR = TCon("Str")


def free_vars(ty: TypeTerm) -> Set[int]:
    if isinstance(ty, TVar):
        return {ty.id}
    if isinstance(ty, TList):
        return free_vars(ty.elem)
    return set()


def is_ground(ty: TypeTerm) -> bool:
    return not free_vars(ty)


class UnificationError(Exception):
    """合一失败：构造子冲突或出现检查失败"""

    def __init__(self, left: TypeTerm, right: TypeTerm, reason: str = "clash") -> None:
        super().__init__(f"cannot unify {left} with {right} ({reason})")
        self.left = left
        self.right = right
        self.reason = reason


class Substitution:
    """类型变量代换

    始终保持幂等：新增绑定时把它应用到已有的值域上，
    因此 apply 一次与两次结果相同。
    """

    def __init__(self, mapping: Optional[Dict[int, TypeTerm]] = None) -> None:
        self.mapping: Dict[int, TypeTerm] = dict(mapping or {})

    def __contains__(self, var_id: int) -> bool:
        return var_id in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)

    def __iter__(self) -> Iterator[int]:
        return iter(self.mapping)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.mapping == other.mapping

    def __repr__(self) -> str:
        body = ", ".join(f"'t{k} ↦ {v}" for k, v in sorted(self.mapping.items()))
        return "{" + body + "}"

    def apply(self, ty: TypeTerm) -> TypeTerm:
        if isinstance(ty, TVar):
            return self.mapping.get(ty.id, ty)
        if isinstance(ty, TList):
            return TList(self.apply(ty.elem))
        return ty

    def bind(self, var: TVar, ty: TypeTerm) -> None:
        """加入绑定 var ↦ ty（ty 已按当前代换应用）"""
        if ty == var:
            return
        if var.id in free_vars(ty):
            raise UnificationError(var, ty, "occurs check")
        single = Substitution({var.id: ty})
        self.mapping = {k: single.apply(v) for k, v in self.mapping.items()}
        self.mapping[var.id] = ty

    def unify(self, left: TypeTerm, right: TypeTerm) -> None:
        """在当前代换下合一两个类型，原地扩展代换"""
        a, b = self.apply(left), self.apply(right)
        if a == b:
            return
        if isinstance(a, TVar):
            self.bind(a, b)
        elif isinstance(b, TVar):
            self.bind(b, a)
        elif isinstance(a, TList) and isinstance(b, TList):
            try:
                self.unify(a.elem, b.elem)
            except UnificationError as exc:
                raise UnificationError(a, b, exc.reason) from exc
        else:
            raise UnificationError(a, b, "clash")


def unify(left: TypeTerm, right: TypeTerm) -> Substitution:
    """
    求最一般合一子

    Args:
        left: 类型项
        right: 类型项

    Returns:
        满足 s(left) = s(right) 的最一般代换

    Raises:
        UnificationError: 构造子冲突或出现检查失败
    """
    subst = Substitution()
    subst.unify(left, right)
    return subst

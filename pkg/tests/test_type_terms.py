"""类型项与合一测试"""

from itertools import product

import pytest
from hypothesis import given, strategies as st

from compiler.type_terms import BOOL, INT, STR, Substitution, TList, TVar, UnificationError, free_vars, is_ground, unify

ground = st.recursive(st.sampled_from([INT, BOOL, STR]), lambda inner: inner.map(TList), max_leaves=4)
terms = st.recursive(
    st.one_of(st.sampled_from([INT, BOOL, STR]), st.integers(0, 3).map(TVar)),
    lambda inner: inner.map(TList),
    max_leaves=4,
)


def test_render():
    assert str(TList(INT)) == "List<Int>"
    assert str(TList(TList(STR))) == "List<List<Str>>"


def test_variable_binds_to_ground():
    subst = unify(TVar(1), TList(INT))
    assert subst.apply(TVar(1)) == TList(INT)
    assert subst.apply(TList(TVar(1))) == TList(TList(INT))


def test_list_elements_unify():
    subst = unify(TList(TVar(1)), TList(STR))
    assert subst.apply(TVar(1)) == STR


def test_constructor_clash():
    with pytest.raises(UnificationError) as info:
        unify(INT, STR)
    assert info.value.reason == "clash"
    with pytest.raises(UnificationError):
        unify(TList(INT), INT)


def test_occurs_check():
    with pytest.raises(UnificationError) as info:
        unify(TVar(1), TList(TVar(1)))
    assert info.value.reason == "occurs check"


def test_chained_bindings_stay_idempotent():
    subst = Substitution()
    subst.unify(TVar(1), TList(TVar(2)))
    subst.unify(TVar(2), INT)
    assert subst.apply(TVar(1)) == TList(INT)
    assert subst.apply(subst.apply(TVar(1))) == subst.apply(TVar(1))


def test_free_vars():
    assert free_vars(TList(TVar(3))) == {3}
    assert is_ground(TList(BOOL))
    assert not is_ground(TVar(0))


@given(ground)
def test_ground_terms_unify_with_themselves(ty):
    assert len(unify(ty, ty)) == 0


@given(terms, terms)
def test_unifier_makes_terms_equal(left, right):
    try:
        subst = unify(left, right)
    except UnificationError:
        return
    assert subst.apply(left) == subst.apply(right)
    for ty in (left, right):
        once = subst.apply(ty)
        assert subst.apply(once) == once


# 深度不超过 2 的全部基础类型：Int、List<Str>、List<List<Bool>> 等
SMALL_GROUND = [
    base if depth == 0 else TList(base) if depth == 1 else TList(TList(base))
    for depth in range(3) for base in (INT, BOOL, STR)
]
two_var_terms = st.recursive(
    st.one_of(st.sampled_from([INT, BOOL, STR]), st.integers(0, 1).map(TVar)),
    lambda inner: inner.map(TList),
    max_leaves=3,
)


def ground_instances(var_ids):
    ids = sorted(var_ids)
    for choice in product(SMALL_GROUND, repeat=len(ids)):
        yield Substitution(dict(zip(ids, choice)))


@given(two_var_terms, two_var_terms)
def test_unifier_is_most_general(left, right):
    var_ids = free_vars(left) | free_vars(right)
    solutions = [theta for theta in ground_instances(var_ids) if theta.apply(left) == theta.apply(right)]
    try:
        mgu = unify(left, right)
    except UnificationError:
        assert solutions == []
        return
    # 每个基础解都能由最一般合一子再代换得到：theta = theta . mgu
    for theta in solutions:
        for var_id in var_ids:
            assert theta.apply(mgu.apply(TVar(var_id))) == theta.apply(TVar(var_id))


@pytest.mark.parametrize("left, right, solved", [
    (TVar(0), TVar(1), {0: TVar(1)}),
    (TList(TVar(0)), TList(TList(TVar(1))), {0: TList(TVar(1))}),
    (TList(TVar(0)), TVar(1), {1: TList(TVar(0))}),
])
def test_variable_pairs(left, right, solved):
    mgu = unify(left, right)
    assert mgu.mapping == solved
    assert mgu.apply(left) == mgu.apply(right)


def test_occurs_failure_has_no_ground_solution():
    left, right = TList(TVar(0)), TList(TList(TVar(0)))
    with pytest.raises(UnificationError):
        unify(left, right)
    assert not any(theta.apply(left) == theta.apply(right) for theta in ground_instances({0}))

"""指代格代数性质测试"""

import itertools

from hypothesis import given, strategies as st

from compiler.errors import SourceSpan
from compiler.lattice import BOTTOM, TOP, Bottom, Ref, Top, identical, join, leq, meet, trace

CARRIER = [BOTTOM, TOP, Ref("a"), Ref("b")]
values = st.one_of(st.just(BOTTOM), st.just(TOP), st.sampled_from("abc").map(Ref))


def test_join_table():
    assert join(BOTTOM, Ref("a")) == Ref("a")
    assert join(Ref("a"), BOTTOM) == Ref("a")
    assert join(Ref("a"), Ref("a")) == Ref("a")
    assert join(Ref("a"), Ref("b")) == TOP
    assert join(TOP, BOTTOM) == TOP


def test_meet_table():
    assert meet(TOP, Ref("a")) == Ref("a")
    assert meet(Ref("a"), Ref("b")) == BOTTOM
    assert meet(Ref("a"), BOTTOM) == BOTTOM


def test_lattice_laws_exhaustively():
    for x, y, z in itertools.product(CARRIER, repeat=3):
        assert join(x, y) == join(y, x)
        assert meet(x, y) == meet(y, x)
        assert join(join(x, y), z) == join(x, join(y, z))
        assert meet(meet(x, y), z) == meet(x, meet(y, z))
        assert join(x, meet(x, y)) == x
        assert meet(x, join(x, y)) == x
    for x in CARRIER:
        assert join(x, x) == x
        assert meet(x, x) == x
        assert join(x, BOTTOM) == x
        assert join(x, TOP) == TOP
        assert meet(x, TOP) == x


def test_order():
    for x in CARRIER:
        assert leq(BOTTOM, x)
        assert leq(x, TOP)
    assert not leq(Ref("a"), Ref("b"))
    assert not leq(TOP, Ref("a"))


@given(values, values, values)
def test_join_is_least_upper_bound(x, y, z):
    j = join(x, y)
    assert leq(x, j) and leq(y, j)
    if leq(x, z) and leq(y, z):
        assert leq(j, z)


@given(values, values)
def test_order_is_antisymmetric(x, y):
    if leq(x, y) and leq(y, x):
        assert x == y


def test_sites_accumulate_through_join():
    s1, s2 = SourceSpan(1, 5, 5), SourceSpan(3, 9, 9)
    merged = join(Ref("x", frozenset({s2})), Ref("x", frozenset({s1})))
    assert isinstance(merged, Ref)
    assert merged.sites == frozenset({s1, s2})
    assert trace(merged) == [("x", s1), ("x", s2)]


def test_top_remembers_its_sources():
    s1, s2 = SourceSpan(1, 5, 5), SourceSpan(2, 5, 5)
    top = join(Ref("a", frozenset({s1})), Ref("b", frozenset({s2})))
    assert isinstance(top, Top)
    assert trace(top) == [("a", s1), ("b", s2)]
    assert join(top, Ref("c")) == TOP


def test_identical_compares_sites():
    s1, s2 = SourceSpan(1, 5, 5), SourceSpan(2, 5, 5)
    assert Ref("x", frozenset({s1})) == Ref("x", frozenset({s2}))
    assert not identical(Ref("x", frozenset({s1})), Ref("x", frozenset({s2})))
    assert identical(BOTTOM, Bottom())

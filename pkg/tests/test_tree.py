from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcpadic.tree import (
    CapExceeded,
    Configuration,
    build_tree,
    compatible,
    enumerate_admissible,
    is_admissible,
    iter_admissible_states,
    level_size,
    occupied_count,
)


def test_sizes():
    assert build_tree(2, 1).size == 4
    t = build_tree(2, 2)
    assert len(t.sphere(2)) == 6 and t.size == 10
    assert build_tree(1, 3).size == 7


@given(st.integers(1, 4), st.integers(0, 4))
def test_level_sizes_and_children(k, n):
    t = build_tree(k, n)
    for m in range(n + 1):
        assert len(t.sphere(m)) == level_size(k, m)
    for x in range(t.offsets[n] if n else 0):
        assert len(t.children[x]) == (k + 1 if x == 0 else k)
        assert all(t.parent[y] == x and t.level[y] == t.level[x] + 1 for y in t.children[x])


def test_root_exclusive_ball_size():
    t = build_tree(2, 2)
    assert t.ball_size(1) == 4 and t.ball_size(1, include_root=False) == 3


def test_size_cap():
    with pytest.raises(CapExceeded):
        build_tree(3, 10, max_vertices=1000)
    with pytest.raises(ValueError):
        build_tree(0, 1)


def test_admissibility_examples():
    t = build_tree(2, 1)
    assert is_admissible(Configuration(t, (1, 1, 1, 1)))
    assert not is_admissible(Configuration(t, (1, 2, 1, 1)))
    assert not is_admissible(Configuration(t, (0, 0, 0, 0)))
    assert [compatible(a, b) for a, b in [(0, 0), (1, 2), (2, 1), (0, 1), (1, 1), (2, 2)]] == [
        False, False, False, True, True, True,
    ]


def test_configuration_validation_and_strings():
    t = build_tree(2, 1)
    c = Configuration.from_string(t, "0112")
    assert c.to_string() == "0112" and c[3] == 2
    with pytest.raises(ValueError):
        Configuration(t, (0, 1))
    with pytest.raises(ValueError):
        Configuration(t, (0, 1, 3, 1))
    assert c.restrict(build_tree(2, 0)).values == (0,)


def test_occupied_count():
    t = build_tree(2, 1)
    assert occupied_count(Configuration(t, (0, 0, 0, 0))) == 0
    assert occupied_count(Configuration(t, (1, 1, 1, 1))) == 4
    assert occupied_count(Configuration(t, (0, 1, 1, 2))) == 3
    assert occupied_count(Configuration(t, (1, 1, 1, 2)), include_root=False) == 3


def test_enumeration_examples():
    assert len(list(enumerate_admissible(build_tree(2, 0)))) == 3
    assert len(list(enumerate_admissible(build_tree(2, 1), {0: 0}))) == 8


@pytest.mark.parametrize("k,n", [(2, 0), (2, 1), (2, 2), (3, 1), (1, 3)])
def test_enumeration_matches_filter(k, n):
    t = build_tree(k, n)
    brute = [v for v in product((0, 1, 2), repeat=t.size) if is_admissible(Configuration(t, v))]
    assert list(iter_admissible_states(t)) == brute


def test_enumeration_order_and_prefix_fixing():
    t = build_tree(2, 1)
    states = list(iter_admissible_states(t, fixed=[1]))
    assert states == sorted(states) and all(s[0] == 1 for s in states)


def test_enumeration_without_root():
    t = build_tree(2, 1)
    states = list(iter_admissible_states(t, include_root=False))
    assert len(states) == 27 and all(s[0] is None for s in states)


def test_swap_symmetry_of_counts():
    t = build_tree(2, 2)
    states = set(iter_admissible_states(t))
    swap = {0: 0, 1: 2, 2: 1}
    assert {tuple(swap[v] for v in s) for s in states} == states


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(iter_admissible_states(build_tree(2, 3)))
    with pytest.raises(ValueError):
        list(iter_admissible_states(build_tree(2, 1), fixed={9: 0}))

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from changkit.cube import (
    PointSet,
    ball,
    character_eval,
    dictator,
    make_family,
    make_set,
    point_to_signs,
    random_set,
    signs_to_point,
    subcube,
    weight1,
)
from oracles import points


def test_make_set_examples():
    empty = make_set(2, [])
    assert empty.size == 0 and empty.alpha == 0
    full = make_set(2, [0, 1, 2, 3])
    assert full.size == 4 and full.alpha == 1
    A = make_set(3, [0, 1, 2, 3])
    assert A.size == 4 and A.alpha == Fraction(1, 2)
    # the first four indices are exactly the points with x_3 = +1
    pts = points(3)
    assert {idx for idx in range(8) if pts[idx][2] == 1} == set(A.indices.tolist())


def test_make_set_duplicates_and_errors():
    assert make_set(3, [1, 1, 5, 5, 5]).size == 2
    with pytest.raises(ValueError):
        make_set(2, [4])
    with pytest.raises(ValueError):
        make_set(2, [-1])
    with pytest.raises(ValueError):
        make_set(0, [])
    with pytest.raises(ValueError):
        make_set(25, [])


def test_families():
    w = weight1(4)
    assert w.size == 4
    for idx in w.indices.tolist():
        assert point_to_signs(idx, 4).count(1) == 1
    assert subcube(3, 1) == dictator(3, 1)
    assert dictator(3, 1).size == 4
    assert ball(3, 0).indices.tolist() == [0]
    assert ball(4, 1).size == 5
    assert make_family("dictator:3,1") == dictator(3, 1)
    assert make_family("subcube:3,1").size == 4
    assert make_family("weight1:4") == w


@pytest.mark.parametrize("n", range(2, 9))
def test_weight1_pairwise_distance_two(n):
    idx = weight1(n).indices.tolist()
    assert len(idx) == n
    for a in idx:
        for b in idx:
            if a != b:
                assert (a ^ b).bit_count() == 2


def test_random_family_reproducible():
    a = make_family("random:8,37,11")
    assert a == make_family("random:8,37,11")
    assert a.size == 37
    assert a != make_family("random:8,37,12")
    with pytest.raises(ValueError):
        random_set(3, 9, 0)


@pytest.mark.parametrize(
    "spec", ["nope:3", "dictator:3", "dictator:3,4", "weight1", "ball:3,-1", "subcube:3,x", ""]
)
def test_malformed_family(spec):
    with pytest.raises(ValueError):
        make_family(spec)


def test_character_eval_examples():
    assert all(character_eval(0, idx, 3) == 1 for idx in range(8))
    assert character_eval(0b011, 0b011, 3) == 1
    assert character_eval(0b01, 0b01, 2) == -1
    with pytest.raises(ValueError):
        character_eval(4, 0, 2)
    with pytest.raises(ValueError):
        character_eval(1, 4, 2)


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_character_group_law(S, T, idx):
    assert character_eval(S, idx) * character_eval(T, idx) == character_eval(S ^ T, idx)


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_character_is_product_of_coordinates(args):
    n, idx = args
    x = point_to_signs(idx, n)
    assert signs_to_point(x) == idx
    for mask in range(1 << n):
        prod = 1
        for i in range(n):
            if (mask >> i) & 1:
                prod *= x[i]
        assert character_eval(mask, idx, n) == prod


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, (1 << n) - 1)))))
def test_hex_round_trip_and_density(args):
    n, members = args
    A = make_set(n, members)
    assert A.size == len(members)
    assert len(A.to_hex()) == -(-(1 << n) // 4)
    assert PointSet.from_hex(n, A.to_hex()) == A
    assert PointSet.from_code(n, A.code()) == A
    assert 0 <= A.alpha <= 1 and A.alpha.denominator & (A.alpha.denominator - 1) == 0
    assert set(A.indices.tolist()) == set(members)
    assert all(i in A for i in members)


def test_hex_layout():
    # LSB of the first byte is point 0
    assert make_set(3, [0]).to_hex() == "01"
    assert make_set(4, [8]).to_hex() == "0001"
    assert make_set(2, [0, 3]).to_hex() == "9"
    assert make_set(1, [1]).to_hex() == "2"
    with pytest.raises(ValueError):
        PointSet.from_hex(2, "f0")
    with pytest.raises(ValueError):
        PointSet.from_hex(1, "4")
    with pytest.raises(ValueError):
        PointSet.from_hex(3, "0g")


def test_pointset_is_immutable():
    A = make_set(3, [1])
    with pytest.raises(Exception):
        A.size = 3
    with pytest.raises(ValueError):
        A.indices[0] = 2

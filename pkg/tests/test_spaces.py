from itertools import islice

import pytest
from hypothesis import given, strategies as st

from cwb.godel.machine import evaluate, halting_steps, pad
from cwb.spaces import (INF, Numbering, PointError, Seq, Type2Name, baire_code, baire_seq,
                        basis_intersect, cantor_code, cantor_string, format_point,
                        index_bound_from_k, markov_name_of, parse_point, point_filter, space,
                        we_stage)

nat = st.integers(min_value=0, max_value=10 ** 6)


@given(nat)
def test_cantor_code_round_trip(i):
    assert cantor_code(cantor_string(i)) == i


@given(st.text(alphabet="01", max_size=30))
def test_cantor_string_round_trip(u):
    assert cantor_string(cantor_code(u)) == u


def test_cantor_length_lex():
    assert [cantor_string(i) for i in range(7)] == ["", "0", "1", "00", "01", "10", "11"]


@given(nat)
def test_baire_code_round_trip(c):
    assert baire_code(baire_seq(c)) == c


@given(st.lists(st.integers(0, 50), max_size=6))
def test_baire_seq_round_trip(u):
    assert baire_seq(baire_code(u)) == tuple(u)


@pytest.mark.parametrize("text", ["nbar:5", "nbar:inf", "cantor:0^5 1^w", "cantor:0^w",
                                  "baire:3^1 0^w", "sierp:top", "sierp:bot", "pown:{1,3}",
                                  "pown:{}"])
def test_point_syntax_round_trip(text):
    sp, p = parse_point(text)
    assert format_point(sp, p) == text


@pytest.mark.parametrize("text", ["nbar:-1", "cantor:2^w", "cantor:0^5", "nowhere:1",
                                  "sierp:middle", "5", "baire:0^w 1^3"])
def test_malformed_points_rejected(text):
    with pytest.raises(PointError):
        parse_point(text)


def test_nbar_filter_of_two():
    assert set(point_filter("nbar", 2)) == {4, 1, 3, 5}


def test_nbar_filter_of_infinity():
    assert list(islice(point_filter("nbar", INF), 10)) == [2 * j + 1 for j in range(10)]


def test_cantor_filter_of_zeros():
    got = list(islice(point_filter("cantor", Seq((), 0)), 5))
    assert got == [cantor_code("0" * m) for m in range(5)]


def test_sierp_filters():
    assert set(point_filter("sierp", "top")) == {0, 1}
    assert set(point_filter("sierp", "bot")) == {0}


def test_filter_members_contain_point():
    sp, p = parse_point("baire:3^1 0^w")
    assert all(sp.contains(i, p) for i in islice(point_filter(sp, p), 20))


def _domain(e, codes, fuel=10 ** 5):
    return {c for c in codes if halting_steps(e, c, fuel) is not None}


def test_infinity_name_halts_on_odd_codes():
    e = markov_name_of("nbar", INF)
    assert _domain(e, range(21)) == {c for c in range(21) if c % 2}


def test_top_name_halts_on_zero_and_one():
    e = markov_name_of("sierp", "top")
    assert _domain(e, range(8)) == {0, 1}


def test_padded_name_is_a_name():
    e = markov_name_of("nbar", 3)
    assert _domain(pad(e), range(12)) == _domain(e, range(12)) == {6, 1, 3, 5, 7}


def test_markov_name_deterministic():
    assert markov_name_of("cantor", Seq((0, 1), 1)) == markov_name_of("cantor", Seq((0, 1), 1))


def test_type2_name_matches_filter():
    name = Type2Name.of_point("nbar", 4)
    got = {name.nth(j) for j in range(40)}
    assert got == set(point_filter("nbar", 4))


def test_we_stage_of_nowhere_is_empty():
    from cwb import library as lib
    assert all(we_stage(lib.NOWHERE, s) == frozenset() for s in (1, 10, 200))


@given(st.integers(0, 5000), st.integers(0, 60))
def test_we_stage_monotone(e, s):
    assert we_stage(e, s) <= we_stage(e, s + 1)


def test_we_stage_identity():
    # id costs one step, so by stage s every n <= s has halted
    assert we_stage(3, 10) == frozenset(range(11))


def test_index_bound():
    assert index_bound_from_k("MinIndex", 7) == 7
    assert index_bound_from_k("ProgramLength", 3) == 7
    assert all(index_bound_from_k("ProgramLength", k) <= index_bound_from_k("ProgramLength", k + 1)
               for k in range(20))


def test_numbering_translation():
    num = Numbering((101, 202))
    assert [num.to_phi(i) for i in range(4)] == [101, 202, 0, 1]
    assert all(evaluate(num.to_phi(num.from_phi(e)), 2, 100) == evaluate(e, 2, 100)
               for e in range(20))


@pytest.mark.parametrize("i,j", [(4, 1), (1, 3), (7, 9), (4, 6), (1, 1)])
def test_nbar_basis_intersection(i, j):
    sp = space("nbar")
    e = basis_intersect(sp, i, j)
    ks = _domain(e, range(40))
    for p in list(range(12)) + [INF]:
        both = sp.contains(i, p) and sp.contains(j, p)
        assert both == any(sp.contains(k, p) for k in ks)

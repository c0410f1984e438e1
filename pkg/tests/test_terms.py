import pytest
from hypothesis import given, strategies as st

from cwb.godel.terms import (ADD, FST, ID, MONUS, SND, SUCC, ZERO, Comp, If0, Lit, Mu, Pair,
                             ParseError, bitlen, cpair, cunpair, decode, encode, pair, parse,
                             tuple_code, unpair, untuple, unparse)

nat = st.integers(min_value=0, max_value=10 ** 12)


@given(nat, nat)
def test_pair_round_trip(x, y):
    assert unpair(pair(x, y)) == (x, y)


@given(nat)
def test_unpair_is_inverse(z):
    assert pair(*unpair(z)) == z


@given(nat, nat)
def test_cpair_round_trip(x, y):
    assert cunpair(cpair(x, y)) == (x, y)


def test_pair_small_values():
    # Cantor pairing: <x, y> = (x + y)(x + y + 1)/2 + y
    assert [pair(0, 0), pair(1, 0), pair(0, 1), pair(2, 0), pair(1, 1)] == [0, 1, 2, 3, 4]


@given(st.lists(nat, min_size=1, max_size=5))
def test_tuple_round_trip(xs):
    assert untuple(tuple_code(*xs), len(xs)) == tuple(xs)


@given(st.integers(min_value=0, max_value=10 ** 9))
def test_decode_total_and_bijective(code):
    assert encode(decode(code)) == code


@given(st.integers(min_value=0, max_value=10 ** 7))
def test_unparse_parse_round_trip(code):
    t = decode(code)
    assert parse(unparse(t)) == t


def test_zero_encodes_to_zero():
    assert encode(ZERO) == 0


def test_structural_round_trip():
    t = Comp(SUCC, ID)
    assert decode(encode(t)) == t
    assert decode(encode(t)).op == "comp"


def test_distinct_terms_distinct_codes():
    terms = [Lit(0), Lit(1), Pair(ID, ID), Comp(ID, ID), If0(ID, ID, ID), Mu(ID), SUCC, ZERO]
    assert len({t.code for t in terms}) == len(terms)


def test_decode_huge_code():
    assert parse(unparse(decode(10 ** 9))).code == 10 ** 9


@pytest.mark.parametrize("text", ["(comp succ", "(frob id)", ")", "(lit -1)", ""])
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError):
        parse(text)


def test_bitlen():
    assert [bitlen(n) for n in (0, 1, 2, 3, 4, 255, 256)] == [1, 1, 2, 2, 3, 8, 9]


def test_mu_term_shape():
    t = Mu(Comp(ADD, Pair(Comp(MONUS, Pair(FST, SND)), Comp(MONUS, Pair(SND, FST)))))
    assert t.op == "mu" and t.size() == 14

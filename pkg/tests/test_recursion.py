import pytest

from cwb import library as lib
from cwb.godel import lang as L
from cwb.godel.machine import Halted, evaluate
from cwb.godel.terms import ID, SUCC, pair, tuple_code
from cwb.recursion import NonTotalTransformer, family_fixed_point, fixed_point, quine_with
from cwb.suites import _bodies, _transformer

FUEL = 10 ** 5
z = L.var("z")


def _body(expr):
    return L.compile_expr(expr, {"z": L.ID}).code


def _value(e, n):
    r = evaluate(e, n, FUEL)
    return r.value if isinstance(r, Halted) else None


def test_self_printing_quine():
    e = quine_with(_body(L.fst(z)))
    assert _value(e, 0) == e


def test_quine_ignoring_index_is_successor():
    e = quine_with(_body(L.succ(L.snd(z))))
    assert [_value(e, n) for n in range(21)] == list(range(1, 22))


@pytest.mark.parametrize("label", sorted(_bodies()))
def test_quine_defining_equation(label):
    G = _bodies()[label]
    e = quine_with(G)
    for n in range(11):
        assert _value(e, n) == _value(G, pair(e, n))


def test_quine_total_on_garbage_body():
    assert isinstance(quine_with(10 ** 12), int)


def test_fixed_point_of_constant_transformer():
    f = L.function(["e"], L.const(SUCC.code)).code
    e = fixed_point(f)
    assert [_value(e, n) for n in range(10)] == list(range(1, 11))


def test_fixed_point_of_identity():
    e = fixed_point(ID.code)
    assert _value(ID.code, e) == e


def test_fixed_point_self_reproducing():
    # f(e) = index of the constant function returning e
    f = L.function(["e"], L.code_smn(L.const(_body(L.fst(z))), L.var("e"))).code
    e = fixed_point(f)
    assert all(_value(e, n) == e for n in range(5))


@pytest.mark.parametrize("label", sorted(_bodies()))
def test_fixed_point_equation(label):
    f = _transformer(_bodies()[label])
    e = fixed_point(f)
    target = _value(f, e)
    for n in range(11):
        assert _value(e, n) == _value(target, n)


def test_non_total_transformer_is_diagnosed():
    with pytest.raises(NonTotalTransformer):
        fixed_point(lib.NOWHERE)


def test_family_fixed_point_arity_two():
    body = _body(L.add(L.fst(L.snd(z)), L.snd(z)))
    fam = family_fixed_point(body, arity=2)
    for abar in [(0, 0), (3, 7), (50, 50)]:
        e = fam.member(*abar)
        assert _value(fam.index, tuple_code(*abar)) == e
        assert _value(e, 4) == _value(body, pair(e, pair(tuple_code(*abar), 4)))


def test_family_members_know_themselves():
    fam = family_fixed_point(_body(L.fst(z)), arity=1)
    es = [fam.member(a) for a in range(5)]
    assert len(set(es)) == 5
    assert all(_value(e, 0) == e for e in es)

import random

from hypothesis import given, strategies as st

from cwb import library as lib
from cwb.godel import lang as L
from cwb.godel.machine import (Halted, OutOfFuel, compose_index, evaluate, halting_steps, pad,
                               probe_index, smn, universal_index)
from cwb.godel.terms import ADD, FST, MONUS, SND, SUCC, Comp, Mu, Pair, decode, pair
from cwb.suites import random_term

seeds = st.integers(min_value=0, max_value=2 ** 32)
small = st.integers(min_value=0, max_value=500)


def _term(seed):
    return random_term(random.Random(seed)).code


def test_successor_halts():
    r = evaluate(SUCC.code, 5, 10)
    assert isinstance(r, Halted) and r.value == 6


def test_mu_finds_diagonal():
    # t(<x, y>) = |x - y|, zero exactly when y = x
    t = Comp(ADD, Pair(Comp(MONUS, Pair(FST, SND)), Comp(MONUS, Pair(SND, FST))))
    r = evaluate(Mu(t).code, 3, 10 ** 4)
    assert isinstance(r, Halted) and r.value == 3


def test_unsatisfiable_mu_runs_out():
    assert isinstance(evaluate(Mu(SUCC).code, 0, 100), OutOfFuel)
    assert isinstance(evaluate(lib.NOWHERE, 0, 10 ** 4), OutOfFuel)


@given(st.integers(min_value=0, max_value=10 ** 6), small, st.integers(1, 400), st.integers(0, 400))
def test_fuel_monotone_on_arbitrary_codes(e, x, f, extra):
    r1, r2 = evaluate(e, x, f), evaluate(e, x, f + extra)
    if isinstance(r1, Halted):
        assert r2 == r1 and r1.steps <= f


@given(seeds, small, small)
def test_smn_equation(seed, x, y):
    e = _term(seed)
    a, b = evaluate(smn(e, x), y, 10 ** 5), evaluate(e, pair(x, y), 10 ** 5)
    assert a.value == b.value and a.steps == b.steps + 4


def test_smn_shape():
    assert decode(smn(7, 3)).op == "comp"


@given(seeds, small)
def test_universal_costs_one_step(seed, x):
    e = _term(seed)
    a, b = evaluate(universal_index(), pair(e, x), 10 ** 5), evaluate(e, x, 10 ** 5)
    assert a.value == b.value and a.steps == b.steps + 1


@given(seeds, small)
def test_padding_fresh_and_equivalent(seed, x):
    e = _term(seed)
    chain = [e, pad(e), pad(pad(e))]
    assert len(set(chain)) == 3
    vals = {evaluate(c, x, 10 ** 5).value for c in chain}
    assert len(vals) == 1


@given(seeds, small)
def test_compose(seed, x):
    e = _term(seed)
    r = evaluate(compose_index(SUCC.code, e), x, 10 ** 5)
    assert r.value == evaluate(e, x, 10 ** 5).value + 1


def test_probe_ignores_input():
    p = probe_index(SUCC.code, 9)
    assert evaluate(p, 0, 100).value == evaluate(p, 123, 100).value == 10


def test_halting_steps():
    assert halting_steps(SUCC.code, 0, 10) == evaluate(SUCC.code, 0, 10).steps
    assert halting_steps(lib.NOWHERE, 0, 500) is None


def test_clock_reports_halting_within():
    f = L.function(["x"], L.clock(SUCC.code, L.var("x"), 5)).code
    assert evaluate(f, 2, 10 ** 3).value == 1 + 3
    g = L.function(["x"], L.clock(lib.NOWHERE, L.var("x"), 5)).code
    assert evaluate(g, 2, 10 ** 3).value == 0


def test_lang_arithmetic():
    x = L.var("x")
    f = L.function(["x"], L.add(L.times(3, x), L.half(x))).code
    assert [evaluate(f, n, 10 ** 4).value for n in range(5)] == [0, 3, 7, 10, 14]
    g = L.function(["x", "y"], L.monus(L.var("x"), L.var("y"))).code
    assert evaluate(g, pair(3, 5), 10 ** 3).value == 0
    assert evaluate(g, pair(9, 5), 10 ** 3).value == 4


def test_deep_run_does_not_overflow():
    # self-calling program with a long recursion chain
    from cwb.recursion import recursive
    down = recursive(["n"], L.if0(L.var("n"), 0, L.univ(L.var("self"), L.pred(L.var("n")))))
    r = evaluate(down, 3000, 10 ** 6)
    assert isinstance(r, Halted) and r.value == 0

"""Compiled helper programs shared by names, semideciders and constructions.

Each helper is a program code; in-language callers reach it through
``univ``.  Helpers are built once at import and are deterministic.
"""

from __future__ import annotations

from functools import lru_cache

from .godel import lang as L
from .godel.terms import MONUS, SUCC, Comp, Mu, Pair, Term, Lit, ID
from .recursion import recursive

__all__ = [
    "NOWHERE", "EVERYWHERE", "BITLEN", "POW2", "BIT_BOUND", "call",
    "odd", "finite_set_program", "constant_program", "table_program",
    "finite_subset_program", "ce_subset_program", "cantor_prefix_program",
    "baire_prefix_program", "eventually_constant_program", "bit_bound",
]

#: halts nowhere (the body of mu never returns 0, which the evaluator sees)
NOWHERE = Mu(SUCC).code
#: halts everywhere with value 0
EVERYWHERE = Comp(MONUS, Pair(ID, ID)).code


def call(code: int, *args) -> L.Expr:
    """Expression running program ``code`` on the tuple of ``args``."""
    return L.univ(L.const(code), _tuple(args))


def _tuple(args) -> L.Expr:
    acc = L._e(args[-1])
    for a in reversed(args[:-1]):
        acc = L.pr(a, acc)
    return acc


def odd(x) -> L.Expr:
    """x mod 2."""
    return L.let("_o", x, L.monus(L.var("_o"), L.add(L.half(L.var("_o")), L.half(L.var("_o")))))


_v = L.var

# bitlen with bitlen(0) = 0 (callers add the convention they need)
BITLEN = recursive(["v"], L.if0(_v("v"), 0, L.succ(L.univ(_v("self"), L.half(_v("v"))))))

POW2 = recursive(["n"], L.if0(
    _v("n"), 1, L.let("q", L.univ(_v("self"), L.pred(_v("n"))), L.add(_v("q"), _v("q")))))

# An upper bound on bitlen(v) reached in O(log bitlen v) calls: for v >= 2,
# w = fst v + snd v satisfies v < (w + 1)^2, so bitlen(v) <= 2 bitlen(w) + 2.
BIT_BOUND = recursive(["v"], L.if0(
    L.le(_v("v"), 1), 1,
    L.times(2, L.add(L.univ(_v("self"), L.add(L.fst(_v("v")), L.snd(_v("v")))), 1))))


def bit_bound(v: int) -> int:
    """Python twin of BIT_BOUND."""
    if v <= 1:
        return 1
    from .godel.terms import unpair
    a, b = unpair(v)
    return 2 * (bit_bound(a + b) + 1)


def _chain(members, x, hit, miss) -> L.Expr:
    body = miss
    for m in sorted(members, reverse=True):
        body = L.if0(L.eq(x, m), hit, body)
    return body


@lru_cache(maxsize=None)
def finite_set_program(members: frozenset) -> int:
    """Halts (with 0) exactly on ``members``."""
    if not members:
        return NOWHERE
    return L.function(["x"], _chain(members, _v("x"), 0, L.diverge())).code


@lru_cache(maxsize=None)
def constant_program(n: int) -> int:
    """Total program with value n everywhere."""
    return Comp(Lit(n), ID).code if n else Comp(MONUS, Pair(ID, ID)).code


@lru_cache(maxsize=None)
def table_program(values: tuple, default: int) -> int:
    """i |-> values[i] for i < len(values), else default.  Total."""
    body = L.const(default)
    for i in reversed(range(len(values))):
        body = L.if0(L.eq(_v("i"), i), values[i], body)
    return L.function(["i"], body).code


def eventually_constant_program(prefix: tuple, tail: int) -> int:
    return table_program(tuple(prefix), tail)


@lru_cache(maxsize=None)
def finite_subset_program(mask: int) -> int:
    """Halts on x iff the finite set with bit vector x is a subset of ``mask``."""
    rec = recursive(["x", "m"], L.if0(
        _v("x"), 0,
        L.if0(L.both(L.is_zero(odd(_v("x"))), L.lt(odd(_v("m")), 1)),
              1,
              L.univ(_v("self"), L.pr(L.half(_v("x")), L.half(_v("m")))))))
    return L.function(["x"], L.if0(call(rec, _v("x"), mask), 0, L.diverge())).code


@lru_cache(maxsize=None)
def ce_subset_program(e: int) -> int:
    """Halts on x iff every element of the finite set with bit vector x is in W_e."""
    rec = recursive(["x", "i"], L.if0(
        _v("x"), 0,
        L.let("_u", L.if0(odd(_v("x")), 0, L.univ(L.const(e), _v("i"))),
              L.univ(_v("self"), L.pr(L.half(_v("x")), L.succ(_v("i")))))))
    return L.function(["x"], call(rec, _v("x"), 0)).code


@lru_cache(maxsize=None)
def cantor_prefix_program(seq: int) -> int:
    """Halts on x iff the x-th binary string is a prefix of the sequence phi_seq.

    The x-th string is binary(x + 1) without its leading 1, first bit first.
    """
    rec = recursive(["v", "len"], L.if0(
        L.le(_v("v"), 1), 0,
        L.if0(L.eq(L.univ(L.const(seq), L.pred(_v("len"))), odd(_v("v"))),
              L.univ(_v("self"), L.pr(L.half(_v("v")), L.pred(_v("len")))),
              L.diverge())))
    return L.function(["x"], L.let(
        "_v1", L.succ(_v("x")),
        call(rec, _v("_v1"), L.pred(L.univ(L.const(BITLEN), _v("_v1")))))).code


@lru_cache(maxsize=None)
def baire_prefix_program(seq: int) -> int:
    """Halts on c iff the finite sequence coded by c is a prefix of phi_seq.

    Code 0 is the empty sequence and 1 + <v, c> is v followed by sequence c.
    """
    rec = recursive(["c", "k"], L.if0(
        _v("c"), 0,
        L.let("_h", L.pred(_v("c")),
              L.if0(L.eq(L.univ(L.const(seq), _v("k")), L.fst(_v("_h"))),
                    L.univ(_v("self"), L.pr(L.snd(_v("_h")), L.succ(_v("k")))),
                    L.diverge()))))
    return L.function(["c"], call(rec, _v("c"), 0)).code


def as_code(t) -> int:
    return t.code if isinstance(t, Term) else t

"""Friedberg sets on the extended naturals.

For a computable order h the Friedberg set is {x : K(x) < h(x)}, where
K(n) is the least bit length of a code e with phi_e(0) = n and h(inf) = inf,
so inf is always a member.  The curated order used throughout is

    h(n) = n for n < 16,   h(n) = 2^n for n >= 16.

Markov semidecision needs a bound on K of the named point computable from
the name's index x.  Running x until an even code 2n appears and printing n
is the program smn(OUTPUT, x), so K(point) <= bitlen(smn(OUTPUT, x)) <=
2 * BIT_BOUND(x) + OUTPUT_SLACK (checked by the test suite).  Points at or
above N = min{n : h(n) > m} are then members outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .. import library as lib
from ..godel import lang as L
from ..godel.terms import bitlen
from ..recursion import recursive
from ..spaces import INF

__all__ = [
    "curated_order", "H_PROGRAM", "OUTPUT", "OUTPUT_SLACK", "name_complexity_bound",
    "threshold", "MARKOV_SEMIDECIDER", "friedberg_truth", "LINEAR_BELOW",
    "tail_semidecider", "NbarFriedberg", "nbar_friedberg", "Truth",
]

LINEAR_BELOW = 16


def curated_order(n) -> float:
    if n is INF:
        return float("inf")
    return n if n < LINEAR_BELOW else 2 ** n


_v = L.var


def _sigma(j) -> L.Expr:
    return L.pr(L.pr(j, 0), 0)


H_PROGRAM = L.function(["n"], L.if0(L.lt(_v("n"), LINEAR_BELOW), _v("n"),
                                    lib.call(lib.POW2, _v("n")))).code

# <x, _> |-> n, where 2n is the first even code met dovetailing W_x
OUTPUT = L.function(["x", "_"], L.let(
    "p", L.mu("q", L.both(
        L.lt(lib.odd(L.fst(_v("q"))), 1),
        L.is_zero(L.clock(_v("x"), L.fst(_v("q")), L.snd(_v("q")))))),
    L.half(L.fst(_v("p"))))).code

OUTPUT_SLACK = bitlen(OUTPUT) + 64


def name_complexity_bound(x: int) -> int:
    """m(x) = 2 BIT_BOUND(x) + OUTPUT_SLACK, an upper bound on K of the point x names."""
    return 2 * lib.bit_bound(x) + OUTPUT_SLACK


def threshold(m: int) -> int:
    """N = min{n : h(n) > m} for the curated order (m >= LINEAR_BELOW - 1)."""
    return max(LINEAR_BELOW, m.bit_length())


_SCAN = recursive(["x", "t", "n", "N"], L.if0(
    L.le(_v("N"), _v("n")), 0,
    L.if0(L.clock(_v("x"), L.add(_v("n"), _v("n")), _v("t")),
          L.univ(_v("self"), L.pr(_v("x"), L.pr(_v("t"), L.pr(L.succ(_v("n")), _v("N"))))),
          L.succ(_v("n")))))

_CERT = recursive(["n", "hn", "c", "q", "t"], L.if0(
    L.lt(_v("q"), _v("c")), 1,
    L.if0(L.both(L.eq(L.clock(_v("c"), 0, _v("t")), L.succ(_v("n"))),
                 L.lt(L.if0(_v("c"), 1, lib.call(lib.BITLEN, _v("c"))), _v("hn"))),
          0,
          L.univ(_v("self"), L.pr(_v("n"), L.pr(_v("hn"), L.pr(L.succ(_v("c")),
                                                                 L.pr(_v("q"), _v("t")))))))))

_LOOP = recursive(["x", "N", "j", "found"], L.let(
    "t", _sigma(_v("j")),
    L.let("f", L.if0(_v("found"), lib.call(_SCAN, _v("x"), _v("t"), 0, _v("N")), _v("found")),
          L.if0(
              L.either(
                  L.is_zero(L.clock(_v("x"), L.succ(L.add(_v("N"), _v("N"))), _v("t"))),
                  L.both(L.is_zero(_v("f")),
                         lib.call(_CERT, L.pred(_v("f")),
                                  lib.call(H_PROGRAM, L.pred(_v("f"))),
                                  0, L.times(16, L.succ(_v("j"))), _v("t")))),
              0,
              L.univ(_v("self"), L.pr(_v("x"), L.pr(_v("N"), L.pr(L.succ(_v("j")), _v("f")))))))))

#: halts on x iff x names (in nbar, Markov) a point of the curated Friedberg set
MARKOV_SEMIDECIDER = L.function(["x"], L.let(
    "m", L.add(L.times(2, lib.call(lib.BIT_BOUND, _v("x"))), OUTPUT_SLACK),
    L.let("b", lib.call(lib.BITLEN, _v("m")),
          lib.call(_LOOP, _v("x"),
                   L.if0(L.le(_v("b"), LINEAR_BELOW), LINEAR_BELOW, _v("b")), 0, 0)))).code


@dataclass(frozen=True)
class Truth:
    member: bool
    k: int | None       # exact K if decided exhaustively
    how: str


def friedberg_truth(p, fuel: int = 10_000) -> Truth:
    """Ground truth for membership of p in the curated Friedberg set.

    inf is a member by definition.  For n < 16 membership is decided by an
    exhaustive search over all codes of bit length < 15 with a fuel-doubling
    stability check.  For n >= 16, bitlen of the literal program for n
    certifies membership.
    """
    from ..complexity import certified, exact_oracle
    from ..godel.terms import Lit
    if p is INF:
        return Truth(True, None, "definition")
    if p >= LINEAR_BELOW:
        return Truth(True, None, f"certificate bitlen(lit {p}) = {bitlen(Lit(p).code)}")
    ans = certified(exact_oracle("ProgramLength", p, (1 << (LINEAR_BELOW - 1)) - 1, fuel))
    k = ans.value
    return Truth(k is not None and k < curated_order(p), k, "exhaustive")


# -- more semideciders on nbar ---------------------------------------------------

@lru_cache(maxsize=None)
def tail_semidecider(m: int) -> int:
    """Markov semidecider of [m, inf]: a point is in [m, inf] iff its filter has code 2m + 1."""
    return L.function(["x"], L.univ(_v("x"), 2 * m + 1)).code


def _order_value(h, n: int, fuel: int = 10 ** 5) -> int:
    if callable(h):
        return h(n)
    from ..godel.machine import Halted, evaluate
    r = evaluate(h, n, fuel)
    if not isinstance(r, Halted):
        raise ValueError(f"order program {h} did not halt on {n} within {fuel} steps")
    return r.value


@dataclass
class NbarFriedberg:
    """Semidecider for {x : K(x) < h(x)} on nbar, K-mode or Markov-mode.

    With a bound m on the complexity of the point, N = min{n : h(n) > m};
    a point at or above N is a member.  A revealed singleton n < N is a
    member iff K(n) < h(n), which is right-c.e. and watched stage by stage.
    """

    h: object                     # program index or Python callable
    mode: str = "K"

    def threshold(self, m: int, limit: int = 10 ** 6) -> int:
        n = 0
        while _order_value(self.h, n) <= m:
            n += 1
            if n > limit:
                raise ValueError("order does not exceed the bound below the search limit")
        return n

    def run(self, name, m: int | None = None, index: int | None = None,
            budget: float = 10 ** 6):
        from ..complexity import codes_shorter_than
        from .core import Accepted, BudgetExhausted, Meter, NotYet, checkpoint
        if self.mode == "Markov":
            if index is None:
                raise ValueError("Markov mode needs the name's index")
            m = name_complexity_bound(index)
        elif m is None:
            raise ValueError("K mode needs a complexity bound m")
        N = self.threshold(m)
        meter = Meter(budget)
        singleton = None
        settled: set[int] = set()
        j = 0
        try:
            while True:
                s = checkpoint(j)
                for r in range(name.reads, s + 1):
                    c = name.nth(r)
                    if c // 2 >= N:
                        return Accepted(s, {"N": N, "code": c, "reads": name.reads})
                    if c % 2 == 0:
                        singleton = c // 2
                if singleton is not None:
                    pool = codes_shorter_than(_order_value(self.h, singleton))
                    if pool == 0:
                        return NotYet(budget, {"N": N, "n": singleton, "settled": True})
                    for e in range(min(s + 1, pool)):
                        if e in settled:
                            continue
                        r = meter.eval(e, 0, s)
                        if getattr(r, "value", None) == singleton:
                            return Accepted(s, {"N": N, "n": singleton, "witness": e,
                                                "witness_bits": bitlen(e), "reads": name.reads})
                        if hasattr(r, "value"):
                            settled.add(e)
                    if len(settled) == pool:
                        return NotYet(budget, {"N": N, "n": singleton, "settled": True})
                j += 1
        except BudgetExhausted:
            return NotYet(budget, {"N": N, "n": singleton, "spent": meter.spent})


def nbar_friedberg(h, mode: str = "K") -> NbarFriedberg:
    if mode not in ("K", "Markov"):
        raise ValueError(f"mode must be K or Markov, got {mode!r}")
    return NbarFriedberg(h, mode)

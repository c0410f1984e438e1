"""Fuel-metered evaluation of program codes, plus s-m-n, padding, universality.

Cost model: one step per node visit and one per ``mu`` iteration.  ``univ``
and ``clock`` additionally charge the steps of the simulated run; a clock
that gives up charges its whole allowance.  Costs depend only on the
program and its argument, never on the budget, so a run that halts within
``s`` steps halts within any larger budget with the same value and the
same step count.

Runs of codes on arguments are memoised.  The memo only ever records facts
("halted with v after t steps", "not halted within L steps", "diverges"),
so it changes how much Python work is done but never a result or a step
count.  A ``mu`` whose body can never return 0 is recognised statically and
reported as divergent without burning Python time on it.
"""

from __future__ import annotations

import math
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .terms import (
    N_NULLARY, NULLARY, Term, cpair, cunpair, decode, pair, unpair,
)

__all__ = [
    "Halted", "OutOfFuel", "EvalResult", "evaluate", "halting_steps",
    "smn", "pad", "universal_index", "probe_index", "compose_index",
    "clear_cache", "cache_size", "PROBE_KERNEL",
]

sys.setrecursionlimit(max(sys.getrecursionlimit(), 400_000))

# Nesting depth is bounded by the fuel.  Runs with more fuel than the default
# C stack safely holds go to one worker thread with a large stack.
_DIRECT_FUEL = 30_000
_DEEP_STACK = 1 << 30
_deep = threading.local()
_worker: list[ThreadPoolExecutor] = []


def _on_deep_stack(fn, *args):
    if getattr(_deep, "on", False):
        return fn(*args)
    if not _worker:
        old = threading.stack_size(_DEEP_STACK)
        try:
            _worker.append(ThreadPoolExecutor(1, initializer=_mark_deep))
            _worker[0].submit(lambda: None).result()
        finally:
            threading.stack_size(old)
    return _worker[0].submit(fn, *args).result()


def _mark_deep():
    _deep.on = True


@dataclass(frozen=True)
class Halted:
    value: int
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    """Not halted within the budget.  Says nothing about divergence."""

    budget: int


EvalResult = Halted | OutOfFuel


class _Exhausted(Exception):
    pass


class _Diverges(Exception):
    pass


class _Run:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget


_NEVER_ZERO: dict[int, bool] = {}


def _never_zero(t: Term) -> bool:
    """Sound (incomplete) check that t never returns 0."""
    hit = _NEVER_ZERO.get(t.code)
    if hit is not None:
        return hit
    op = t.op
    if op == "succ":
        r = True
    elif op == "lit":
        r = t.args[0] > 0
    elif op == "pair":
        r = _never_zero(t.args[0]) or _never_zero(t.args[1])
    elif op == "comp":
        f, g = t.args
        if _never_zero(f):
            r = True
        elif f.op == "id":
            r = _never_zero(g)
        elif f.op == "add" and g.op == "pair":
            r = _never_zero(g.args[0]) or _never_zero(g.args[1])
        else:
            r = False
    elif op == "if0":
        r = _never_zero(t.args[1]) and _never_zero(t.args[2])
    else:
        r = False
    _NEVER_ZERO[t.code] = r
    return r


# (code, arg) -> (True, value, steps) | (False, lower_bound)
_MEMO: dict[tuple[int, int], tuple] = {}
_MEMO_LIMIT = 4_000_000


def clear_cache() -> None:
    _MEMO.clear()
    _NEVER_ZERO.clear()


def cache_size() -> int:
    return len(_MEMO)


def _run_index(e: int, n: int, budget: int):
    """(value, steps) if code e halts on n within budget, else None or 'div'."""
    key = (e, n)
    hit = _MEMO.get(key)
    if hit is not None:
        if hit[0]:
            return (hit[1], hit[2]) if hit[2] <= budget else None
        if hit[1] >= budget:
            return "div" if hit[1] == math.inf else None
    if budget > _DIRECT_FUEL and not getattr(_deep, "on", False):
        return _on_deep_stack(_run_index, e, n, budget)
    r = _Run(budget)
    try:
        v = _ev(decode(e), n, r)
    except _Exhausted:
        if len(_MEMO) > _MEMO_LIMIT:
            _MEMO.clear()
        _MEMO[key] = (False, budget)
        return None
    except _Diverges:
        _MEMO[key] = (False, math.inf)
        return "div"
    _MEMO[key] = (True, v, r.steps)
    return v, r.steps


class _P:
    """A pair value held as its components.

    Compiled programs keep their variables in nested pairs, and program
    indices make those pairs huge; building the Cantor code of each one would
    dominate run time.  Components stay apart until arithmetic needs the
    number itself.  Only pairs that are not both small are held this way, so
    a held pair is never 0.
    """

    __slots__ = ("a", "b", "_v", "_h")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self._v = None
        self._h = None

    def value(self) -> int:
        if self._v is None:
            self._v = pair(_int(self.a), _int(self.b))
        return self._v

    def __hash__(self):
        if self._h is None:
            self._h = hash((_P, self.a, self.b))
        return self._h

    def __eq__(self, other):
        if isinstance(other, _P):
            return self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return other != 0 and self.value() == other
        return NotImplemented


_SMALL = 1 << 256


def _int(v) -> int:
    return v.value() if isinstance(v, _P) else v


def _mk(a, b):
    if isinstance(a, int) and isinstance(b, int) and a < _SMALL and b < _SMALL:
        return pair(a, b)
    return _P(a, b)


def _split(x):
    if isinstance(x, _P):
        return x.a, x.b
    return unpair(x)


def _ev(t: Term, x, r: _Run):
    r.steps += 1
    if r.steps > r.budget:
        raise _Exhausted
    op = t.op
    if op == "comp":
        return _ev(t.args[0], _ev(t.args[1], x, r), r)
    if op == "id":
        return x
    if op == "pair":
        a = _ev(t.args[0], x, r)
        return _mk(a, _ev(t.args[1], x, r))
    if op == "fst":
        return _split(x)[0]
    if op == "snd":
        return _split(x)[1]
    if op == "lit":
        return t.args[0]
    if op == "if0":
        c, a, b = t.args
        return _ev(a if _ev(c, x, r) == 0 else b, x, r)
    if op == "succ":
        return _int(x) + 1
    if op == "pred":
        x = _int(x)
        return x - 1 if x else 0
    if op == "zero":
        return 0
    if op == "add":
        a, b = _split(x)
        return _int(a) + _int(b)
    if op == "monus":
        a, b = _split(x)
        a, b = _int(a), _int(b)
        return a - b if a > b else 0
    if op == "half":
        return _int(x) >> 1
    if op == "mu":
        body = t.args[0]
        if _never_zero(body):
            raise _Diverges
        y = 0
        while True:
            r.steps += 1
            if r.steps > r.budget:
                raise _Exhausted
            if _ev(body, _mk(x, y), r) == 0:
                return y
            y += 1
    if op == "univ":
        e, n = _split(x)
        res = _run_index(_int(e), n, r.budget - r.steps)
        if res == "div":
            raise _Diverges
        if res is None:
            raise _Exhausted
        r.steps += res[1]
        return res[0]
    if op == "smn":
        e, a = _split(x)
        return smn(_int(e), _int(a))
    if op == "clock":
        e, rest = _split(x)
        n, s = _split(rest)
        n, s = _int(n), _int(s)
        if n > s:
            return 0
        room = r.budget - r.steps
        res = _run_index(_int(e), n, min(s, room))
        if res is None or res == "div":
            if s > room:
                raise _Exhausted
            r.steps += s
            return 0
        r.steps += res[1]
        return _int(res[0]) + 1
    raise AssertionError(op)


def evaluate(e: int | Term, arg: int, fuel: int) -> EvalResult:
    """Run program ``e`` (code or term) on ``arg`` with ``fuel`` steps."""
    code = e.code if isinstance(e, Term) else e
    res = _run_index(code, arg, fuel)
    if res is None or res == "div":
        return OutOfFuel(fuel)
    return Halted(_int(res[0]), res[1])


def halting_steps(e: int, arg: int, fuel: int) -> int | None:
    """Steps of the halting run of e on arg if at most fuel, else None."""
    res = _run_index(e, arg, fuel)
    return None if res is None or res == "div" else res[1]


# -- acceptability --------------------------------------------------------------

_N = N_NULLARY
_ID_CODE = NULLARY.index("id")
_FST_CODE = NULLARY.index("fst")
_UNIV_CODE = NULLARY.index("univ")


def _family(f: int, q: int) -> int:
    a, p = cunpair(q)
    return _N + cpair(5 * a + f, p)


def compose_index(f: int, g: int) -> int:
    """Code of comp(f, g)."""
    return _family(2, cpair(f, g))


def smn(e: int, x: int) -> int:
    """Code of comp(e, pair(lit x, id)): y |-> phi_e(<x, y>), 4 extra steps.

    The ``smn`` primitive computes this same function in one step.
    """
    return compose_index(e, _family(1, cpair(_family(0, x), _ID_CODE)))


def pad(e: int) -> int:
    """Code of comp(id, e): same function, different code, 2 extra steps."""
    return compose_index(_ID_CODE, e)


def universal_index() -> int:
    """Code of univ; phi_u(<e, n>) costs exactly one step more than phi_e(n)."""
    return _UNIV_CODE


def probe_index(e: int, x: int) -> int:
    """Code of a program that ignores its input and runs e on x.

    Membership of a (possibly huge) number x in W_e at stage s is read off
    as 0 in W_{probe(e, x)}[s], which keeps the n <= s cap of staged
    enumerations from hiding large elements.  Equals smn(k, <e, x>) for
    the fixed kernel k = comp(univ, fst).
    """
    return smn(PROBE_KERNEL, pair(e, x))


PROBE_KERNEL = compose_index(_UNIV_CODE, _FST_CODE)

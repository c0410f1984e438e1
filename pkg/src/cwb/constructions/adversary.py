"""Adversaries for the impossibility results: K-names cannot be converted to
Markov names, and c.e. sets cannot be learned in the limit from Type-2 names.

A candidate is run inside a scenario with an explicit budget.  The outcome
is either a replayable ``RefutationWitness`` or a ``BudgetReport``, which
says the candidate stalled and is not a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol

from .. import library as lib
from ..godel import lang as L
from ..godel.machine import Halted, evaluate, halting_steps, probe_index
from ..godel.terms import bitlen
from .core import BudgetReport, RefutationWitness

__all__ = [
    "BitOracle", "QueryBudgetExceeded", "Converter", "ConstantConverter", "FirstConsistentConverter",
    "OneThenZerosConverter", "Overreader", "halting_after", "probe_halting_time",
    "sequence_generator", "converter_adversary", "replay_converter",
    "Learner", "ConstantLearner", "SeenSoFarLearner", "learner_adversary", "replay_learner",
]

_v = L.var


class QueryBudgetExceeded(Exception):
    pass


class BitOracle:
    """Bits of a sequence given as a function; counts the use (bits read)."""

    def __init__(self, bits: Callable[[int], int], limit: int):
        self._bits = bits
        self.limit = limit
        self.use = 0

    def __call__(self, n: int) -> int:
        if n >= self.limit:
            raise QueryBudgetExceeded(n)
        self.use = max(self.use, n + 1)
        return self._bits(n)


class Converter(Protocol):
    label: str

    def __call__(self, k: int, oracle: BitOracle) -> int: ...


@dataclass
class ConstantConverter:
    index: int
    label: str = "constant"

    def __call__(self, k, oracle):
        return self.index


@dataclass
class FirstConsistentConverter:
    """Read a fixed number of bits, output the least code generating them."""

    width: int = 6
    fuel: int = 2000
    label: str = "first-consistent"

    def __call__(self, k, oracle):
        prefix = [oracle(n) for n in range(self.width)]
        c = 0
        while True:
            if all(_value(c, n, self.fuel) == b for n, b in enumerate(prefix)):
                return c
            c += 1


@dataclass
class OneThenZerosConverter:
    """Read up to the first 1 and assume zeros from there on."""

    limit: int = 64
    label: str = "one-then-zeros"

    def __call__(self, k, oracle):
        n = next((j for j in range(self.limit) if oracle(j)), None)
        return sequence_generator(self.limit if n is None else n, lib.NOWHERE)


@dataclass
class Overreader:
    label: str = "overreader"

    def __call__(self, k, oracle):
        n = 0
        while True:
            oracle(n)
            n += 1


def _value(e: int, n: int, fuel: int):
    r = evaluate(e, n, fuel)
    return r.value if isinstance(r, Halted) else None


def halting_after(L_: int) -> int:
    """A program that ignores its input and halts after a run proportional to L_."""
    return L.function(["x"], L.let("_y", L.mu("y", L.eq(_v("y"), L_)), 0)).code


def probe_halting_time(i: int, fuel: int) -> int | None:
    """Steps of the probe running phi_i(i); clock needs its input below the stage, so probes start at 0."""
    return halting_steps(probe_index(i, i), 0, fuel)


def sequence_generator(lead: int, i: int) -> int:
    """n |-> the n-th bit of 0^lead 1 x, with x = 0^t 1^w if phi_i(i) halts in t probe steps, else 0^w."""
    n = _v("n")
    tail = L.if0(L.clock(probe_index(i, i), 0, L.monus(n, lead + 1)), 0, 1)
    return L.function(["n"], L.if0(L.lt(n, lead), 0, L.if0(L.eq(n, lead), 1, tail))).code


def _bit(lead: int, t: int | None, n: int) -> int:
    if n < lead:
        return 0
    if n == lead:
        return 1
    return 0 if t is None or n - lead - 1 < t else 1


def _disagreement(index: int, lead: int, t: int | None, upto: int, fuel: int):
    for n in range(upto):
        got = _value(index, n, fuel)
        if got != _bit(lead, t, n):
            return n, got
    return None


def converter_adversary(candidate: Converter, budget: int = 10 ** 4, fuel: int = 10 ** 4,
                        halting_lengths: tuple = (1, 4, 16, 64, 256, 1024), lead: int = 3):
    """Refute a claimed K-name to Markov-name converter.

    Feed (k, 0^lead 1 0^w) with k the bit length of a generator.  If the output already disagrees, that is the
    witness.  Otherwise take a curated i whose phi_i(i) halts at time t at or
    beyond the use, and feed 0^lead 1 0^t 1^w: the candidate sees the same bits,
    outputs the same program, and that program disagrees at position lead + 1 + t.
    """
    i_loop = lib.NOWHERE
    k = bitlen(sequence_generator(lead, i_loop))
    oracle = BitOracle(lambda n: _bit(lead, None, n), budget)
    try:
        out = candidate(k, oracle)
    except QueryBudgetExceeded:
        return BudgetReport("converter", budget, f"{candidate.label} read past {budget} bits")
    u = oracle.use
    bad = _disagreement(out, lead, None, max(u, lead + 1) + 8, fuel)
    if bad is not None:
        return RefutationWitness(
            "converter", {"candidate": candidate.label, "k": k, "lead": lead, "halting_time": None},
            {"output": out, "use": u, "position": bad[0], "got": bad[1],
             "expected": _bit(lead, None, bad[0])},
            "output program disagrees with the named sequence")
    for L_ in halting_lengths:
        i = halting_after(L_)
        t = probe_halting_time(i, fuel)
        if t is None or t < u - lead - 1:
            continue
        gen = sequence_generator(lead, i)
        kk = bitlen(gen)
        oracle = BitOracle(lambda n, t=t: _bit(lead, t, n), budget)
        try:
            out2 = candidate(kk, oracle)
        except QueryBudgetExceeded:
            return BudgetReport("converter", budget, f"{candidate.label} read past {budget} bits")
        bad = _disagreement(out2, lead, t, lead + t + 2, fuel)
        if bad is not None:
            return RefutationWitness(
                "converter", {"candidate": candidate.label, "k": kk, "lead": lead,
                              "halting_time": t, "i": i},
                {"output": out2, "use": oracle.use, "position": bad[0], "got": bad[1],
                 "expected": _bit(lead, t, bad[0])},
                "output program disagrees with the named sequence")
    return BudgetReport("converter", budget, "no curated halting time beyond the use")


def replay_converter(w: RefutationWitness, candidate: Converter, budget: int = 10 ** 4,
                     fuel: int = 10 ** 4) -> bool:
    """Re-run the recorded input and confirm the same disagreement."""
    lead, t = w.inputs["lead"], w.inputs["halting_time"]
    oracle = BitOracle(lambda n: _bit(lead, t, n), budget)
    out = candidate(w.inputs["k"], oracle)
    n = w.observed["position"]
    return out == w.observed["output"] and _value(out, n, fuel) == w.observed["got"] \
        and w.observed["got"] != _bit(lead, t, n)


# -- learners ------------------------------------------------------------------------

class Learner(Protocol):
    label: str

    def __call__(self, e: int, oracle: tuple) -> list[tuple[int, int]]:
        """Guesses made reading the finite oracle, each with the prefix length it used."""


@dataclass
class ConstantLearner:
    index: int
    label: str = "constant"

    def __call__(self, e, oracle):
        return [(self.index, 0)]


@dataclass
class SeenSoFarLearner:
    """Guess a program for the finite set read so far, whenever it grows."""

    label: str = "seen-so-far"

    def __call__(self, e, oracle):
        out, seen = [], set()
        for m, x in enumerate(oracle):
            if x not in seen:
                seen.add(x)
                out.append((lib.finite_set_program(frozenset(seen)), m + 1))
        return out


def _fresh(g: int, known: set, stage: int) -> int | None:
    """Some element of W_g[stage] outside ``known``."""
    for n in range(stage + 1):
        if n not in known and halting_steps(g, n, stage) is not None:
            return n
    return None


@dataclass
class _Transcript:
    oracle: list = field(default_factory=list)
    guesses: list = field(default_factory=list)


def learner_adversary(candidate: Learner, v: int = 5, budget: int = 2000, stage: int = 200,
                      e: int | None = None):
    """Force the candidate's guesses to take at least v values on one oracle.

    The oracle alternates between continuing a name of N (fresh elements)
    until the last guess enumerates something the oracle has not shown, and
    repeating old elements (a name of the finite set shown so far) until a
    different guess appears.  The union of what is shown is W_a.
    """
    if v < 2:
        return RefutationWitness("learner", {"candidate": candidate.label, "v": v},
                                 {"distinct": 0}, "vacuous: v < 2 needs no oracle")
    e = lib.NOWHERE if e is None else e
    tr = _Transcript()
    phase = "extend"
    last = None
    while len(tr.oracle) < budget:
        if phase == "extend":
            tr.oracle.append(max(tr.oracle, default=-1) + 1)
        else:
            tr.oracle.append(tr.oracle[0])
        gs = candidate(e, tuple(tr.oracle))
        tr.guesses = gs
        distinct = {g for g, _ in gs}
        if len(distinct) >= v:
            return RefutationWitness(
                "learner", {"candidate": candidate.label, "v": v, "e": e,
                            "oracle": list(tr.oracle)},
                {"guesses": [g for g, _ in gs], "distinct": len(distinct)},
                f"guesses take {len(distinct)} >= {v} values on one name")
        if not gs:
            continue
        g = gs[-1][0]
        if phase == "extend" and _fresh(g, set(tr.oracle), stage) is not None:
            phase, last = "freeze", g
        elif phase == "freeze" and g != last:
            phase = "extend"
    gs = tr.guesses
    if gs and phase == "extend":
        g = gs[-1][0]
        missing = [x for x in sorted(set(tr.oracle)) if halting_steps(g, x, stage) is None]
        if missing:
            return RefutationWitness(
                "learner", {"candidate": candidate.label, "v": v, "e": e,
                            "oracle": list(tr.oracle)},
                {"guess": g, "missing": missing[:8], "stage": stage},
                "on a name of N the guess never enumerates a shown element")
    if gs and phase == "freeze":
        x = _fresh(last, set(tr.oracle), stage)
        return RefutationWitness(
            "learner", {"candidate": candidate.label, "v": v, "e": e, "oracle": list(tr.oracle)},
            {"guess": last, "extra": x, "stage": stage},
            "on a name of a finite set the guess stays on a program enumerating an unshown element")
    return BudgetReport("learner", budget, f"{candidate.label}: fewer than {v} values")


def replay_learner(w: RefutationWitness, candidate: Learner) -> bool:
    gs = candidate(w.inputs["e"], tuple(w.inputs["oracle"]))
    if "guesses" in w.observed:
        return [g for g, _ in gs] == w.observed["guesses"]
    return gs[-1][0] == w.observed["guess"]

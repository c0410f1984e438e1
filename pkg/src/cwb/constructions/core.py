"""Shared types for the constructions: staged open sets, verdicts, budgets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from ..godel.machine import Halted, evaluate, halting_steps, probe_index
from ..godel.terms import pair

__all__ = [
    "checkpoint", "checkpoint_at_least", "Meter", "BudgetExhausted", "StagedOpenSet",
    "Accepted", "NotYet", "Verdict", "RefutationWitness", "BudgetReport",
    "OracleIface", "entry_checkpoint",
]


def checkpoint(j: int) -> int:
    """j-th dovetailing stage, T(T(j)) with T(x) = x(x+1)/2.

    Dovetailers only look at these stages, so the work done up to a stage
    is within a constant factor of the stage itself.
    """
    return pair(pair(j, 0), 0)


def checkpoint_at_least(h: int) -> int:
    """Least checkpoint index j with checkpoint(j) >= h."""
    j = 0
    while checkpoint(j) < h:
        j += 1
    return j


def entry_checkpoint(e_set: int, x: int, limit: int) -> int | None:
    """Index j of the first checkpoint at which x is in W_{e_set} (probe reading).

    Matches the in-language test clock(probe(e_set, x), 0, checkpoint(j)).
    """
    h = halting_steps(probe_index(e_set, x), 0, limit)
    if h is None:
        return None
    j = checkpoint_at_least(h)
    return j if checkpoint(j) <= limit else None


class BudgetExhausted(Exception):
    pass


@dataclass
class Meter:
    """Counts accounted evaluation steps against a budget.

    A dovetailer resumes its computations rather than restarting them, so a
    run of (e, x) is charged only the steps beyond those already charged to
    (e, x): its halting steps if it halts, otherwise its whole fuel.
    """

    budget: float
    spent: int = 0
    charged: dict = field(default_factory=dict)

    def eval(self, e: int, x: int, fuel: int):
        if self.spent >= self.budget:
            raise BudgetExhausted
        before = self.charged.get((e, x), 0)
        fuel = int(min(fuel, before + self.budget - self.spent))
        r = evaluate(e, x, fuel)
        used = r.steps if isinstance(r, Halted) else fuel
        if used > before:
            self.spent += used - before
            self.charged[(e, x)] = used
        return r

    def halts(self, e: int, x: int, fuel: int) -> bool:
        return isinstance(self.eval(e, x, fuel), Halted)


@dataclass(frozen=True)
class Accepted:
    stage: int
    detail: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotYet:
    budget: float
    detail: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return False


Verdict = Accepted | NotYet


@dataclass
class StagedOpenSet:
    """emit(s): basis codes enumerated by stage s, monotone in s."""

    space: str
    _emit: Callable[[int], frozenset]
    label: str = ""

    def emit(self, s: int) -> frozenset:
        return self._emit(s)


@dataclass(frozen=True)
class RefutationWitness:
    """A replayable transcript showing a candidate breaks its contract."""

    scenario: str
    inputs: dict
    observed: dict
    violated: str

    def digest(self) -> str:
        import hashlib
        blob = json.dumps([self.scenario, self.inputs, self.observed, self.violated],
                          sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class BudgetReport:
    """The candidate stalled; this is not a refutation."""

    scenario: str
    budget: float
    note: str = ""


@dataclass(frozen=True)
class OracleIface:
    """A halting oracle.

    ``exact`` answers from a curated universe whose halting behaviour is
    known; ``bounded`` (H_s) answers "phi_e(e) halts within s steps", which
    under-approximates halting.
    """

    mode: str
    stage: int = 0
    universe: tuple = ()
    truth: Callable[[int], bool] | None = None

    def query(self, e: int) -> bool:
        if self.mode == "bounded":
            return halting_steps(e, e, self.stage) is not None
        if self.truth is None:
            raise ValueError("exact oracle needs a truth table")
        return self.truth(e)

    @classmethod
    def exact(cls, truth: dict):
        return cls("exact", 0, tuple(sorted(truth)), truth.__getitem__)

    @classmethod
    def bounded(cls, s: int):
        return cls("bounded", s)

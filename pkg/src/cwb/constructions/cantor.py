"""K-semideciders on Cantor space built from monotone complexity."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..complexity import certified, codes_shorter_than, exact_oracle
from ..godel.machine import Halted
from ..godel.terms import bitlen
from ..spaces import Type2Name, cantor_string
from .core import Accepted, BudgetExhausted, Meter, NotYet, checkpoint

__all__ = ["BitReader", "friedberg_cantor", "notsigma2_semidecider", "calibrate_c0"]


class BitReader:
    """Bit access to a Type-2 name of a binary sequence.

    ``bits`` is the number of leading bits requested so far, which is how
    read bounds are measured.
    """

    def __init__(self, name: Type2Name):
        self.name = name
        self.known = ""
        self.bits = 0
        self._j = 0

    def bit(self, i: int) -> int:
        self.bits = max(self.bits, i + 1)
        while len(self.known) <= i:
            u = cantor_string(self.name.nth(self._j))
            self._j += 1
            if len(u) > len(self.known):
                self.known = u
        return int(self.known[i])

    def word(self, n: int) -> str:
        if n:
            self.bit(n - 1)
        return self.known[:n]


def _generates(meter: Meter, e: int, u: str, fuel: int) -> bool | None:
    """True/False once settled at this fuel; None while some output is pending."""
    for i, ch in enumerate(u):
        r = meter.eval(e, i, fuel)
        if not isinstance(r, Halted):
            return None
        if r.value != int(ch):
            return False
    return True


def _staged_km_below(u: str, bits: float, meter: Meter):
    """Yield after each stage; returns the witness code once Km(u) < bits is seen.

    Only codes shorter than ``bits`` can witness the inequality, so the stage-s
    search is over those codes e <= s with fuel s.
    """
    pool = codes_shorter_than(bits)
    settled: set[int] = set()
    j = 0
    while True:
        s = checkpoint(j)
        for e in range(min(s + 1, pool)):
            if e in settled:
                continue
            g = _generates(meter, e, u, s)
            if g:
                return e
            if g is False:
                settled.add(e)
        if len(settled) == pool:
            return None
        yield s
        j += 1


def _run(gen):
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def friedberg_cantor(k: int, name: Type2Name, budget: float = 10 ** 6) -> Accepted | NotYet:
    """Semidecide {0^w} u U{[0^n 1] : Km(0^n 1) < log2(n) - 1} given K(x) <= k.

    Reads at most 2^(k+2) bits: a sequence of complexity at most k that is
    not 0^w has its first 1 before that position.
    """
    reader = BitReader(name)
    e = 1 << (k + 2)
    n = next((i for i in range(e) if reader.bit(i)), None)
    if n is None:
        return Accepted(0, {"bits_read": reader.bits, "prefix": "0^%d" % e})
    meter = Meter(budget)
    if n < 2:
        return NotYet(budget, {"bits_read": reader.bits, "n": n, "settled": True})
    u = "0" * n + "1"
    try:
        w = _run(_staged_km_below(u, math.log2(n) - 1, meter))
    except BudgetExhausted:
        return NotYet(budget, {"bits_read": reader.bits, "n": n, "spent": meter.spent})
    if w is None:
        return NotYet(budget, {"bits_read": reader.bits, "n": n, "settled": True})
    return Accepted(meter.spent, {"bits_read": reader.bits, "n": n, "witness": w,
                                  "witness_bits": bitlen(w)})


def calibrate_c0(limit: int = 40, code_bound: int = 64, fuel: int = 1000) -> int:
    """Least c with Km(0^n) < n/2 + c for all n <= limit (exhaustive, fuel-certified)."""
    worst = 0
    for n in range(limit + 1):
        ans = certified(exact_oracle("Monotone", "0" * n, code_bound, fuel))
        if ans.value is None:
            raise ValueError(f"no generator of 0^{n} below code {code_bound}")
        worst = max(worst, ans.value - n / 2)
    return math.floor(worst) + 1


@dataclass(frozen=True)
class ScanPlan:
    lengths: tuple

    @property
    def scan_length(self) -> int:
        return len(self.lengths)


def notsigma2_semidecider(k: int, name: Type2Name, c: int,
                          budget: float = 10 ** 6) -> Accepted | NotYet:
    """Semidecide {x : Km(x|n) < n/2 + c for all n} given K(x) <= k.

    Beyond n = 2(k - c) the inequality follows from Km(x|n) <= k, so only
    prefixes of length 0 .. 2(k - c) are checked.
    """
    plan = ScanPlan(tuple(range(2 * (k - c) + 1)))
    reader = BitReader(name)
    meter = Meter(budget)
    word = reader.word(plan.lengths[-1]) if plan.lengths else ""
    pending = {n: _staged_km_below(word[:n], n / 2 + c, meter) for n in plan.lengths}
    detail = {"scan_length": plan.scan_length, "bits_read": reader.bits}
    try:
        while pending:
            for n in list(pending):
                try:
                    next(pending[n])
                except StopIteration as stop:
                    if stop.value is None:
                        return NotYet(budget, {**detail, "refuted_at": n, "settled": True})
                    del pending[n]
    except BudgetExhausted:
        return NotYet(budget, {**detail, "spent": meter.spent})
    return Accepted(meter.spent, {**detail, "spent": meter.spent})

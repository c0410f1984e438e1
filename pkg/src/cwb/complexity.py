"""Upper approximations of three complexity measures, and exhaustive oracles.

* MinIndex:      C(n)  = least e with phi_e(0) = n.
* ProgramLength: K(n)  = least bitlen(e) with phi_e(0) = n.
* Monotone:      Km(u) = least bitlen(e) with phi_e(i) = u[i] for i < |u|.

The stage-s approximation searches codes e <= s with fuel s.  By fuel
monotonicity every witness found at stage s survives to later stages, so
each approximation is nonincreasing in s (right-c.e.).  Codes are plain,
bitlen(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .godel.machine import Halted, evaluate
from .godel.terms import bitlen

__all__ = [
    "KINDS", "ComplexityBound", "c_upper", "k_upper", "km_upper", "OracleAnswer",
    "FuelInstability", "exact_oracle", "certified", "infinity_constants",
    "outputs_on_zero", "codes_shorter_than",
]

KINDS = ("MinIndex", "ProgramLength", "Monotone")


@dataclass(frozen=True)
class ComplexityBound:
    kind: str
    value: int
    stage: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown complexity kind {self.kind!r}")


@lru_cache(maxsize=64)
def outputs_on_zero(code_bound: int, fuel: int) -> dict:
    """value -> least code e <= code_bound with phi_e(0) = value within fuel."""
    best: dict[int, int] = {}
    for e in range(code_bound + 1):
        r = evaluate(e, 0, fuel)
        if isinstance(r, Halted) and r.value not in best:
            best[r.value] = e
    return best


def codes_shorter_than(bits: float) -> int:
    """Number of codes e with bitlen(e) < bits; they are exactly 0 .. that - 1."""
    if bits <= 1:
        return 0
    return 1 << (math.ceil(bits) - 1)


def c_upper(n: int, stage: int) -> int | None:
    """Least e <= stage with phi_e(0) = n within stage steps."""
    for e in range(stage + 1):
        r = evaluate(e, 0, stage)
        if isinstance(r, Halted) and r.value == n:
            return e
    return None


def k_upper(n: int, stage: int) -> int | None:
    """Least bit length among the witnesses c_upper searches.

    Bit length is monotone in the code, so this is bitlen of c_upper.
    """
    e = c_upper(n, stage)
    return None if e is None else bitlen(e)


def _generates(e: int, u: str, fuel: int) -> bool:
    for i, ch in enumerate(u):
        r = evaluate(e, i, fuel)
        if not (isinstance(r, Halted) and r.value == int(ch)):
            return False
    return True


def km_upper(u: str, stage: int) -> int | None:
    """Least bitlen(e), e <= stage, with phi_e generating u within stage steps."""
    for e in range(stage + 1):
        if _generates(e, u, stage):
            return bitlen(e)
    return None


@dataclass(frozen=True)
class OracleAnswer:
    kind: str
    target: object
    value: int | None         # the minimum, in the kind's units
    witness: int | None       # the least code attaining it
    code_bound: int
    fuel: int
    stable: bool              # same answer at 2 * fuel


class FuelInstability(RuntimeError):
    """Doubling the fuel changed an exhaustive answer."""


def _search(kind: str, target, code_bound: int, fuel: int) -> int | None:
    if kind in ("MinIndex", "ProgramLength"):
        return outputs_on_zero(code_bound, fuel).get(target)
    if kind == "Monotone":
        for e in range(code_bound + 1):
            if _generates(e, target, fuel):
                return e
        return None
    raise ValueError(f"unknown complexity kind {kind!r}")


def exact_oracle(kind: str, target, code_bound: int, fuel: int) -> OracleAnswer:
    """Exhaustive minimum over all codes <= code_bound at the given fuel.

    The search is repeated at twice the fuel; ``stable`` records whether the
    two answers agree.  Only stable answers may serve as ground truth.
    """
    if code_bound > 10 ** 5 or fuel > 10 ** 6:
        raise ValueError("exhaustive search is limited to code_bound <= 1e5, fuel <= 1e6")
    w1 = _search(kind, target, code_bound, fuel)
    w2 = _search(kind, target, code_bound, 2 * fuel)

    def value(w):
        if w is None:
            return None
        return w if kind == "MinIndex" else bitlen(w)

    return OracleAnswer(kind, target, value(w1), w1, code_bound, fuel, w1 == w2)


def certified(answer: OracleAnswer) -> OracleAnswer:
    if not answer.stable:
        raise FuelInstability(
            f"{answer.kind}({answer.target!r}) changed when fuel doubled from {answer.fuel}")
    return answer


def infinity_constants() -> tuple[int, int]:
    """(code, bitlen) of the canonical program naming infinity in nbar."""
    from .spaces import INF, markov_name_of
    c = markov_name_of("nbar", INF)
    return c, bitlen(c)

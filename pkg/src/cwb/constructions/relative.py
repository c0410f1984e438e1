"""Semidecision relative to the halting set, and functions into the open
subsets of Baire space.

T(n) is the halting time of phi_n(n), or 0 if it diverges.  Baire cylinders
[u] are handled through a membership predicate ``has(u, s)``: the stage-s
enumeration contains [u] iff u lies in the stage window (length and values
at most s) and carries a certificate checkable with fuel s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .. import library as lib
from ..godel import lang as L
from ..godel.machine import Halted, evaluate, halting_steps
from ..spaces import Type2Name
from .cantor import BitReader
from .core import Accepted, NotYet, OracleIface, checkpoint

__all__ = [
    "CuratedProgram", "halting_query", "nonzero_search", "exact_universe_oracle",
    "zero_sequence_semidecider", "relative_k_semidecider", "curated_universe",
    "BaireOpen", "halting_time", "sierp_to_OB", "cantor_to_OB_G", "prefix_oracle",
    "box_covered",
]

_v = L.var


# -- curated programs and the exact oracle -------------------------------------------

@dataclass(frozen=True)
class CuratedProgram:
    """A program with declared behaviour: ``prefix`` values, then ``tail``
    everywhere (None means divergence from there on)."""

    code: int
    prefix: tuple
    tail: int | None

    def value(self, n: int) -> int | None:
        return self.prefix[n] if n < len(self.prefix) else self.tail

    def nonzero_found(self) -> bool:
        """Does mu n. (value(n) != 0) halt?"""
        for v in self.prefix:
            if v is None:
                return False
            if v:
                return True
        return bool(self.tail)


@lru_cache(maxsize=None)
def halting_query(b: int, n: int) -> int:
    """q with phi_q(q) halting iff phi_b(n) halts."""
    q = L.function(["_"], L.univ(b, n)).code
    _QUERIES[q] = ("halt", b, n)
    return q


@lru_cache(maxsize=None)
def nonzero_search(c: int) -> int:
    """q with phi_q(q) halting iff the search for n with phi_c(n) != 0 ends."""
    q = L.function(["_"], L.mu("n", L.is_zero(L.eq(L.univ(c, _v("n")), 0)))).code
    _QUERIES[q] = ("nonzero", c)
    return q


_QUERIES: dict[int, tuple] = {}


def exact_universe_oracle(programs: Sequence[CuratedProgram]) -> OracleIface:
    """Exact halting answers for queries derived from the curated programs."""
    by_code = {p.code: p for p in programs}

    def truth(q: int) -> bool:
        kind = _QUERIES.get(q)
        if kind is None or kind[1] not in by_code:
            raise ValueError(f"query {q} lies outside the curated universe")
        p = by_code[kind[1]]
        if kind[0] == "halt":
            return p.value(kind[2]) is not None
        return p.nonzero_found()

    return OracleIface("exact", 0, tuple(sorted(by_code)), truth)


def curated_universe() -> tuple[CuratedProgram, ...]:
    """Total 0^w program, a program defined only on 0 and 1, and the 1^w program."""
    partial = L.function(["n"], L.if0(L.lt(_v("n"), 2), 0, L.diverge())).code
    return (CuratedProgram(lib.constant_program(0), (), 0),
            CuratedProgram(partial, (0, 0), None),
            CuratedProgram(lib.constant_program(1), (), 1))


def zero_sequence_semidecider(c: int, H: OracleIface, s: int) -> bool:
    """Oracle-aware Markov semidecider of {0^w}: accept c when no nonzero value is ever found."""
    return not H.query(nonzero_search(c))


# -- the partition search ------------------------------------------------------------

def relative_k_semidecider(M: Callable[[int, OracleIface, int], bool], H: OracleIface,
                           x_name: Type2Name, k: int, universe: Sequence[int] | None = None,
                           max_stage: int = 10 ** 4):
    """K-semidecide relative to H from a Markov semidecider M relative to H.

    Indices 0..k (or ``universe[0..k]``) are sorted into incompatible with x,
    partial, or accepted by M.  A complete sorting proves an index of x lies
    among the accepted ones.
    """
    codes = list(range(k + 1)) if universe is None else list(universe[:k + 1])
    reader = BitReader(x_name)
    placed: dict[int, str] = {}
    j = 0
    while True:
        s = checkpoint(j)
        if s > max_stage:
            return NotYet(max_stage, {"placed": _partition(codes, placed), "bits_read": reader.bits})
        for c in codes:
            if c in placed:
                continue
            for n in range(j + 1):
                r = evaluate(c, n, s)
                if isinstance(r, Halted) and r.value != reader.bit(n):
                    placed[c] = "incompatible"
                    break
                if not H.query(halting_query(c, n)):
                    placed[c] = "partial"
                    break
            else:
                if M(c, H, s):
                    placed[c] = "accepted"
        if len(placed) == len(codes):
            return Accepted(s, {"partition": _partition(codes, placed), "bits_read": reader.bits})
        j += 1


def _partition(codes, placed):
    return {tag: [i for i, c in enumerate(codes) if placed.get(c) == tag]
            for tag in ("incompatible", "partial", "accepted")}


# -- open subsets of Baire space ----------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _halts_within(n: int, s: int) -> int | None:
    return halting_steps(n, n, s)


def halting_time(n: int, fuel: int) -> int | None:
    """T(n) if settled within ``fuel``: the halting time, or None while unknown."""
    return _halts_within(n, fuel)


def _not_T_at(n: int, m: int, s: int) -> bool:
    """Certificate that m != T(n), checkable with fuel s."""
    if m > 0:
        return m <= s and _halts_within(n, m) != m
    return _halts_within(n, s) is not None


@dataclass
class BaireOpen:
    """A staged open subset of Baire space given by cylinder membership."""

    label: str
    _has: Callable[[tuple, int], bool]

    def has(self, u, s: int) -> bool:
        u = tuple(u)
        return len(u) <= s and all(v <= s for v in u) and self._has(u, s)

    def emit(self, s: int, depth: int, values: int) -> frozenset:
        """Emitted cylinders of length <= depth over values < ``values``."""
        from itertools import product
        out = set()
        for d in range(depth + 1):
            for u in product(range(values), repeat=d):
                if self.has(u, s):
                    out.add(u)
        return frozenset(out)


def _part_a(u: tuple, s: int) -> bool:
    return any(_not_T_at(n, m, s) for n, m in enumerate(u))


def sierp_to_OB(e: int) -> BaireOpen:
    """Baire \\ {T} together with the functions f whose f(e) is not the halting time of phi_e(e)."""

    def has(u, s):
        # phi_e(e) never halts in 0 steps, so f(e) = 0 always qualifies
        return _part_a(u, s) or (len(u) > e and (u[e] == 0 or _halts_within(e, u[e]) != u[e]))

    return BaireOpen(f"sierp_to_OB({e})", has)


def box_covered(U: BaireOpen, w: tuple, s: int, values: int, max_depth: int) -> bool:
    """Is [w] within {0..values-1}^N covered by cylinders of U emitted by stage s?

    Decided by descending the tree below w up to ``max_depth``.
    """
    w = tuple(w)
    if any(U.has(w[:d], s) for d in range(len(w) + 1)):
        return True
    if len(w) >= max_depth:
        return False
    return all(box_covered(U, w + (v,), s, values, max_depth) for v in range(values))


class _Unreadable(Exception):
    pass


def prefix_oracle(u: tuple) -> OracleIface:
    """Halting answers read off a prefix u of T; queries beyond u are unreadable."""

    def truth(q: int) -> bool:
        if q >= len(u):
            raise _Unreadable(q)
        return u[q] > 0 and _halts_within(q, u[q]) == u[q]

    return OracleIface("exact", 0, (), truth)


def cantor_to_OB_G(x_name: Type2Name, k: int, universe: Sequence[int] | None = None,
                   M=zero_sequence_semidecider) -> BaireOpen:
    """Baire if x = 0^w, else Baire \\ {T}, given a MinIndex bound k on x.

    [u] is emitted when u is certified incompatible with T, or when the
    partition search run with u read as a prefix of T accepts x as 0^w
    without querying past u.
    """

    @lru_cache(maxsize=None)
    def accepted_from(u: tuple, s: int) -> bool:
        try:
            r = relative_k_semidecider(M, prefix_oracle(u), x_name, k, universe, max_stage=s)
        except _Unreadable:
            return False
        return isinstance(r, Accepted)

    def has(u, s):
        return _part_a(u, s) or accepted_from(u, s)

    return BaireOpen("cantor_to_OB_G", has)

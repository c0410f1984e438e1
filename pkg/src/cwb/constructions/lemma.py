"""Self-referential families, the open sets U_k, and K-mode semidecision.

The family program with own index e and parameters a_0 .. a_n, for a chain
of c.e. sets A_0 >= ... >= A_{n-1}, enumerates

    W_{a_0}[t_0] u ... u W_{a_{i-1}}[t_{i-1}] u W_{a_i}

where A_0 .. A_{i-1} are the levels e has entered (at checkpoints t_l)
and A_i the first one it has not.  With n = 1 this is the two-case table
W_a if e is not in A, and W_a[t] u W_b if e enters A at t.

Stages are dovetailing checkpoints (see ``core.checkpoint``); "e in A at
stage t" is read through the probe program, so it is the same test in
Python and in-language.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .. import library as lib
from ..godel import lang as L
from ..godel.machine import Halted, evaluate, halting_steps, smn
from ..godel.terms import tuple_code
from ..recursion import FixedFamily, family_fixed_point, recursive
from ..spaces import Numbering, StagedSet, Type2Name, index_bound_from_k, we_stage
from .core import (
    Accepted, BudgetExhausted, Meter, NotYet, StagedOpenSet, checkpoint, entry_checkpoint,
)

__all__ = [
    "chain_family", "lemma_ext_family", "case_table_reference", "UkEnumerator",
    "lemma_ext_Uk", "nce_family", "markov_to_k_semidecider", "KSemidecider", "difference_member",
    "pi02_hull", "search_order", "mask_of",
]

_v = L.var


def _nth(t, i: int, n: int) -> L.Expr:
    """Component i of an n-tuple expression."""
    for _ in range(i):
        t = L.snd(t)
    return t if i == n - 1 else L.fst(t)


def _tuple(parts) -> L.Expr:
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = L.pr(p, acc)
    return acc


@lru_cache(maxsize=None)
def _loop_program(chain: tuple) -> int:
    """loop(<me, <abar, <m, <j, ts>>>>) for the given chain; ts has one entry per level.

    ts[l] = 0 until level l is entered, then 1 + the entry checkpoint index.
    """
    n = len(chain)
    ts = _v("ts")
    j = _v("j")
    s = L.pr(L.pr(j, 0), 0)
    lets = []
    for l, a_code in enumerate(chain):
        old = _nth(ts, l, n)
        entered_now = L.is_zero(L.clock(L.code_probe(a_code, _v("me")), 0, _v("s")))
        lets.append((f"t{l}", L.if0(old, L.if0(entered_now, L.succ(j), 0), old)))

    def tau(l):
        if l == n:
            return _v("s")
        t_l = _v(f"t{l}")
        return L.if0(t_l, _v("s"), L.pr(L.pr(L.pred(t_l), 0), 0))

    def prefix_entered(l):
        cond = L.const(0)
        for q in range(l):
            cond = L.both(cond, L.is_zero(_v(f"t{q}")))
        return cond

    accept = L.const(1)
    for l in reversed(range(n + 1)):
        hit = L.is_zero(L.clock(_nth(_v("abar"), l, n + 1), _v("m"), tau(l)))
        accept = L.either(L.both(prefix_entered(l), hit), accept)
    new_ts = _tuple([_v(f"t{l}") for l in range(n)])
    body = L.if0(accept, 0, L.univ(_v("self"), _tuple(
        [_v("me"), _v("abar"), _v("m"), L.succ(j), new_ts])))
    for name, val in reversed(lets):
        body = L.let(name, val, body)
    body = L.let("s", s, body)
    return recursive(["me", "abar", "m", "j", "ts"], body)


@lru_cache(maxsize=None)
def chain_family(chain: tuple) -> FixedFamily:
    """Uniform fixed points e(abar), abar = (a_0, ..., a_n), for a chain of n set codes."""
    n = len(chain)
    loop = _loop_program(chain)
    z = _v("z")
    me, rest = L.fst(z), L.snd(z)
    abar, m = L.fst(rest), L.snd(rest)
    body = L.function(["z"], lib.call(loop, me, abar, m, 0, _tuple([L.const(0)] * n)))
    return family_fixed_point(body, arity=n + 1)


def lemma_ext_family(A: StagedSet | int) -> FixedFamily:
    """e(a, b) with W = W_a unless e(a, b) enters A at t, then W_a[t] u W_b."""
    code = A.e if isinstance(A, StagedSet) else A
    return chain_family((code,))


def case_table_reference(chain: tuple, abar: tuple, me: int, m: int, limit: int) -> bool | None:
    """Directly evaluated case table: does m belong to W_me?

    Written against the table, not the program: find each level's entry
    checkpoint (up to ``limit``), then test the union.  Returns None when
    the answer is not settled within ``limit`` (the relevant W is still open).
    """
    n = len(chain)
    entries = []
    for c in chain:
        j = entry_checkpoint(c, me, limit)
        if j is None:
            break
        entries.append(checkpoint(j))
    i = len(entries)
    for l in range(i):
        if m <= entries[l] and halting_steps(abar[l], m, entries[l]) is not None:
            return True
    if halting_steps(abar[i], m, limit) is not None:
        return True
    return None


def mask_of(fs) -> int:
    return sum(1 << k for k in fs)


def search_order(numbering: Numbering, s: int) -> list[int]:
    """phi-codes of the candidates considered at stage s.

    Candidates are psi-indices below len(table) + bitlen(s); every index is
    considered from some stage on, so this is a dovetailing over all a.
    """
    return numbering.first(len(numbering.table) + max(1, s.bit_length()))


@dataclass
class UkEnumerator:
    """The open sets U^1_k .. U^n_k of the chain construction, level by level.

    Level 0 accepts a_0 when e(a_0, a_1, ..., a_n) is in A_0 for all
    a_1 .. a_n among the first b_k + 1 psi-indices, at a least common
    checkpoint t_0, and enumerates the up-set of W_{a_0}[t_0].  Level i
    extends an accepted prefix the same way against A_i.
    """

    chain: tuple
    k: int
    numbering: Numbering = field(default_factory=Numbering)
    meter: Meter | None = None

    def __post_init__(self):
        self.family = chain_family(self.chain)
        self.small = self.numbering.first(index_bound_from_k("MinIndex", self.k) + 1)

    def _in(self, level: int, abar: tuple, s: int) -> int | None:
        e = self.family.member(*abar)
        if self.meter is not None:
            r = self.meter.eval(_probe(self.chain[level], e), 0, s)
            h = r.steps if isinstance(r, Halted) else None
        else:
            h = halting_steps(_probe(self.chain[level], e), 0, s)
        if h is None:
            return None
        from .core import checkpoint_at_least
        j = checkpoint_at_least(h)
        return checkpoint(j) if checkpoint(j) <= s else None

    def _all_in(self, level: int, prefix: tuple, s: int) -> int | None:
        """Least common checkpoint at which e(prefix + rest) is in A_level for all small rest."""
        n = len(self.chain)
        width = n - len(prefix) + 1
        t = 0
        for rest in _tuples(self.small, width):
            ti = self._in(level, prefix + rest, s)
            if ti is None:
                return None
            t = max(t, ti)
        return t

    def accepted(self, s: int) -> list[list[tuple]]:
        """Per level, the accepted (abar-prefix, stages) pairs at stage s."""
        n = len(self.chain)
        out: list[list[tuple]] = [[] for _ in range(n)]
        cands = search_order(self.numbering, s)
        frontier = [((), ())]
        for level in range(n):
            nxt = []
            for prefix, stages in frontier:
                for a in cands:
                    t = self._all_in(level, prefix + (a,), s)
                    if t is not None:
                        item = (prefix + (a,), stages + (t,))
                        out[level].append(item)
                        nxt.append(item)
            frontier = nxt
        return out

    def emit(self, s: int) -> list[frozenset]:
        """Per level, the finite sets F whose up-sets are enumerated by stage s."""
        sets = []
        for level_items in self.accepted(s):
            level_sets = set()
            for abar, stages in level_items:
                F = set()
                for a, t in zip(abar, stages):
                    F |= {x for x in range(t + 1) if halting_steps(a, x, t) is not None}
                level_sets.add(frozenset(F))
            sets.append(frozenset(level_sets))
        return sets


def _tuples(pool, width):
    if width == 0:
        yield ()
        return
    for a in pool:
        for rest in _tuples(pool, width - 1):
            yield (a,) + rest


def _probe(set_code: int, x: int) -> int:
    from ..godel.machine import probe_index
    return probe_index(set_code, x)


def lemma_ext_Uk(A: StagedSet | int, k: int, numbering: Numbering = Numbering()) -> StagedOpenSet:
    """U_k over P(N); emitted codes are bit vectors of the finite sets W_a[t]."""
    code = A.e if isinstance(A, StagedSet) else A
    en = UkEnumerator((code,), k, numbering)
    return StagedOpenSet("pown", lambda s: frozenset(mask_of(F) for F in en.emit(s)[0]),
                         f"U_{k}")


def nce_family(chain: list, k: int, numbering: Numbering = Numbering(),
               probe_stages: tuple = (100, 1000)) -> list[StagedOpenSet]:
    """U^1_k .. U^n_k for a chain A_0 >= A_1 >= ... (checked on probes)."""
    codes = tuple(A.e if isinstance(A, StagedSet) else A for A in chain)
    for hi, lo in zip(codes, codes[1:]):
        for s in probe_stages:
            if not StagedSet(lo).view(s) <= StagedSet(hi).view(s):
                raise ValueError(f"chain not decreasing at stage {s}")
    en = UkEnumerator(codes, k, numbering)
    return [StagedOpenSet("pown", (lambda s, i=i: frozenset(mask_of(F) for F in en.emit(s)[i])),
                          f"U^{i + 1}_{k}") for i in range(len(codes))]


def difference_member(levels_hit: list[bool]) -> bool:
    """D_n(U^1, ..., U^n) membership from per-level membership."""
    out = False
    for i in range(0, len(levels_hit), 2):
        inside = levels_hit[i] and not (i + 1 < len(levels_hit) and levels_hit[i + 1])
        out = out or inside
    return out


@dataclass
class _Candidate:
    a: int
    halted: dict = field(default_factory=dict)    # b -> entry checkpoint
    tried: int = 0                                # fuel given to the pending probe
    F: frozenset | None = None


@dataclass
class KSemidecider:
    """K-mode semidecider from a Markov one, through the filter embedding.

    Given k and a Type-2 name, dovetail over candidates a: a is accepted into
    U_k once e(a, b) has entered I for every b among the first b_k + 1
    indices, at a least common checkpoint t, and the semidecider accepts when
    W_a[t] is contained in the codes the name has revealed.

    Scheduling: the probes of one candidate run one after another (all must
    halt), and a candidate is set aside while some code it has already
    enumerated within its pending probe's fuel is unseen; W_a[t] contains that
    enumeration, so such a candidate cannot be accepted until the name reveals
    the code.  Budgets count the steps of the membership probes.
    """

    I: int
    space: str
    numbering: Numbering = field(default_factory=Numbering)
    scan_cap: int = 256

    def run(self, k: int, name: Type2Name, budget: float) -> Accepted | NotYet:
        meter = Meter(budget)
        family = chain_family((self.I,))
        small = self.numbering.first(index_bound_from_k("MinIndex", k) + 1)
        cands: dict[int, _Candidate] = {}
        seen: set[int] = set()
        j = 0
        try:
            while True:
                s = checkpoint(j)
                for r in range(name.reads, s + 1):
                    seen.add(name.nth(r))
                for a in search_order(self.numbering, s):
                    c = cands.setdefault(a, _Candidate(a))
                    if c.F is None and not self._consistent(a, c.tried, seen):
                        continue
                    while c.F is None:
                        b = small[len(c.halted)]
                        fuel = max(s, 2 * c.tried)
                        r = meter.eval(_probe(self.I, family.member(a, b)), 0, fuel)
                        c.tried = fuel
                        if not isinstance(r, Halted):
                            break
                        from .core import checkpoint_at_least
                        c.halted[b] = checkpoint(checkpoint_at_least(r.steps))
                        if len(c.halted) == len(small):
                            c.F = we_stage(a, max(c.halted.values()))
                    if c.F is not None and c.F <= seen:
                        return Accepted(s, {"a": a, "F": sorted(c.F), "spent": meter.spent,
                                            "reads": name.reads})
                j += 1
        except BudgetExhausted:
            return NotYet(budget, {"spent": meter.spent, "stage": checkpoint(j),
                                   "reads": name.reads})

    def _consistent(self, a: int, fuel: int, seen: set) -> bool:
        top = min(fuel, max(seen, default=0) * 2 + self.scan_cap)
        return all(x in seen or halting_steps(a, x, fuel) is None for x in range(top + 1))


def markov_to_k_semidecider(I: StagedSet | int, space: str,
                            numbering: Numbering = Numbering()) -> KSemidecider:
    code = I.e if isinstance(I, StagedSet) else I
    return KSemidecider(code, space, numbering)


def pi02_hull(I: StagedSet | int, space: str, numbering: Numbering = Numbering()):
    """k |-> U_k through the filter embedding; A is contained in every U_k."""
    code = I.e if isinstance(I, StagedSet) else I
    return lambda k: lemma_ext_Uk(code, k, numbering)

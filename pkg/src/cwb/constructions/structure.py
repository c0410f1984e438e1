"""Structure of Markov-semidecidable sets: emptiness, dense points, orders,
anti-enumeration, and the pair sequences behind the Sigma^0_2 transfer."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .. import library as lib
from ..complexity import certified, exact_oracle
from ..godel import lang as L
from ..godel.machine import Halted, evaluate, halting_steps, probe_index
from ..recursion import FixedFamily, family_fixed_point, recursive
from ..spaces import INF, Numbering, StagedSet, Type2Name, markov_name_of, space, we_stage
from .core import (
    Accepted, BudgetExhausted, Meter, NotYet, RefutationWitness, checkpoint, checkpoint_at_least,
)
from .lemma import KSemidecider, search_order

__all__ = [
    "dense_family", "nbar_dense_point", "DenseSequence", "dense_sequence", "restrict_to_basic",
    "Sigma2Pairs", "sigma2_builder", "FriedbergOrder", "friedberg_order",
    "AntiEnumeration", "anti_enumeration", "min_index_lower_bound",
]

_v = L.var


# -- dense points (nbar) ---------------------------------------------------------

def nbar_dense_point(F) -> int:
    """A natural number in the intersection of the basic sets coded in F.

    The first singleton code wins; otherwise the largest tail start.  If F is
    inconsistent the result is still a number (F then names nothing).
    """
    evens = sorted(c for c in F if c % 2 == 0)
    if evens:
        return evens[0] // 2
    return max((c // 2 for c in F), default=0)


# <a, <t, <x, <sing, top>>>> scanning W_a[t] from x upward; sing = 1 + first singleton
_DENSE_SCAN = recursive(["a", "t", "x", "sing", "top"], L.if0(
    L.lt(_v("t"), _v("x")),
    L.if0(_v("sing"), _v("top"), L.pred(_v("sing"))),
    L.let("hit", L.is_zero(L.clock(_v("a"), _v("x"), _v("t"))),
          L.univ(_v("self"), L.pr(_v("a"), L.pr(_v("t"), L.pr(
              L.succ(_v("x")),
              L.pr(L.if0(L.both(L.is_zero(_v("sing")),
                                L.both(_v("hit"), L.lt(lib.odd(_v("x")), 1))),
                         L.succ(L.half(_v("x"))), _v("sing")),
                   L.if0(_v("hit"), L.if0(L.lt(_v("top"), L.half(_v("x"))),
                                          L.half(_v("x")), _v("top")),
                         _v("top"))))))))))


def _in_filter(m, d) -> L.Expr:
    """m codes a basic set containing the natural d."""
    return L.either(L.eq(m, L.add(d, d)), L.both(lib.odd(m), L.le(L.half(m), d)))


@lru_cache(maxsize=None)
def dense_family(I: int) -> FixedFamily:
    """e(a): names the point a names until e(a) enters I at checkpoint t; from
    then on names a natural in the neighbourhood W_a[t] describes."""
    me, a, m, j = _v("me"), _v("a"), _v("m"), _v("j")
    s = L.pr(L.pr(j, 0), 0)
    loop = recursive(["me", "a", "m", "j"], L.let("s", s, L.if0(
        L.is_zero(L.clock(L.code_probe(I, me), 0, _v("s"))),
        L.let("d", lib.call(_DENSE_SCAN, a, _v("s"), 0, 0, 0),
              L.if0(_in_filter(m, _v("d")), 0, L.diverge())),
        L.if0(L.is_zero(L.clock(a, m, _v("s"))), 0,
              L.univ(_v("self"), L.pr(me, L.pr(a, L.pr(m, L.succ(j)))))))))
    z = _v("z")
    body = L.function(["z"], lib.call(loop, L.fst(z), L.fst(L.snd(z)), L.snd(L.snd(z)), 0))
    return family_fixed_point(body, arity=1)


def restrict_to_basic(I: int, i: int) -> int:
    """Markov semidecider of A n B_i from one of A: wait for code i, then run I."""
    return L.function(["x"], L.let("_w", L.univ(_v("x"), i), L.univ(I, _v("x")))).code


@dataclass
class DenseSequence:
    """Emptiness test and dense points of a Markov-semidecidable subset of nbar.

    A is nonempty iff e(a) enters I for some a; the point e(a) then names is
    a member, and restricting I to B_i yields members inside B_i.
    """

    I: int
    numbering: Numbering = field(default_factory=Numbering)

    def nonempty(self, budget: float = 10 ** 6, I: int | None = None) -> Accepted | NotYet:
        I = self.I if I is None else I
        fam = dense_family(I)
        meter = Meter(budget)
        tried: dict[int, int] = {}
        dead: set[int] = set()
        nbar = space("nbar")
        j = 0
        try:
            while True:
                s = checkpoint(j)
                for a in search_order(self.numbering, s):
                    if a in dead:
                        continue
                    fuel = max(s, 2 * tried.get(a, 0))
                    tried[a] = fuel
                    r = meter.eval(probe_index(I, fam.member(a)), 0, fuel)
                    if isinstance(r, Halted):
                        t = checkpoint(checkpoint_at_least(r.steps))
                        F = we_stage(a, t)
                        d = nbar_dense_point(F)
                        if all(nbar.contains(c, d) for c in F):
                            return Accepted(t, {"a": a, "point": d, "spent": meter.spent})
                        dead.add(a)       # W_a[t] is inconsistent: a names no point
                j += 1
        except BudgetExhausted:
            return NotYet(budget, {"spent": meter.spent})

    def point_in(self, i: int, budget: float = 10 ** 6) -> Accepted | NotYet:
        return self.nonempty(budget, restrict_to_basic(self.I, i))

    def seq(self, codes, budget: float = 10 ** 6):
        """(i, point) for each basic code i whose restriction was found nonempty."""
        for i in codes:
            v = self.point_in(i, budget)
            if v:
                yield i, v.detail["point"]


def dense_sequence(I: StagedSet | int, sp: str = "nbar",
                   numbering: Numbering = Numbering()) -> DenseSequence:
    if space(sp).id != "nbar":
        raise NotImplementedError("dense point selection is implemented on nbar")
    return DenseSequence(I.e if isinstance(I, StagedSet) else I, numbering)


# -- Sigma^0_2 pair sequences -----------------------------------------------------

TOP_SET = "X"


@dataclass
class Sigma2Pairs:
    """Pairs (U_m, V_m) for one index i; C_i is the intersection of the
    complements of U_m minus V_m.

    Even m = 2n watches n in W_i, odd m = 2n + 1 watches i in P_n and Q_n.
    A pair changes exactly once, when its condition is observed.  Levels
    past the supplied lists impose nothing.
    """

    sp: str
    i: int
    P: list
    Q: list

    def pair(self, m: int, s: int) -> tuple:
        n, odd = divmod(m, 2)
        if not odd:
            seen = halting_steps(self.i, n, s) is not None
            return (TOP_SET, frozenset({n})) if seen else (frozenset({n}), frozenset())
        if n >= min(len(self.P), len(self.Q)):
            return (TOP_SET, TOP_SET)
        both = self.P[n].holds(self.i, s) and self.Q[n].holds(self.i, s)
        return (TOP_SET, TOP_SET) if both else (TOP_SET, frozenset())

    def _contains(self, part, p) -> bool:
        if part == TOP_SET:
            return True
        sp = space(self.sp)
        return any(sp.contains(c, p) for c in part)

    def in_C(self, p, s: int, pairs: int) -> bool:
        """p in C_i as seen at stage s through the first ``pairs`` pairs."""
        for m in range(pairs):
            U, V = self.pair(m, s)
            if self._contains(U, p) and not self._contains(V, p):
                return False
        return True


def sigma2_builder(P_levels: list, Q_levels: list, i: int, k: int = 0,
                   sp: str = "nbar") -> Sigma2Pairs:
    """Pair sequence for index i; k only selects which i are relevant (i <= b_k)."""
    return Sigma2Pairs(sp, i, list(P_levels), list(Q_levels))


# -- orders from Markov semideciders ----------------------------------------------

def min_index_lower_bound(numbering: Numbering, table_points: tuple, p, code_bound: int,
                          stage: int) -> int:
    """A lower bound on the least psi-index of a name of the nbar point p.

    Table entries are known names.  A phi-code below ``code_bound`` is ruled
    out once W_j[stage] shows a code outside p's filter; the first code not
    ruled out gives the bound.
    """
    sp = space("nbar")
    for idx, q in enumerate(table_points):
        if q == p or (q is p):
            return idx
    L_ = len(numbering.table)
    for j in range(code_bound):
        if not all(sp.contains(c, p) for c in we_stage(j, stage)):
            continue
        return L_ + j
    return L_ + code_bound


@dataclass
class FriedbergOrder:
    """h(n) = min{i : p(i) > n}, with p(k) read off a K-mode acceptance of inf.

    Accepting (k, name of inf) after reading the codes of [0, inf] .. [J, inf]
    accepts every point of [J, inf] of complexity at most k whose name starts
    the same way, so p(k) = J works; p is then made increasing.
    """

    I: int
    numbering: Numbering
    budget: float = 10 ** 6
    _p: list = field(default_factory=list)

    def p(self, k: int) -> int:
        sem = KSemidecider(self.I, "nbar", self.numbering)
        while len(self._p) <= k:
            kk = len(self._p)
            name = Type2Name.of_point("nbar", INF)
            v = sem.run(kk, name, self.budget)
            if not v:
                raise RuntimeError(
                    f"K-semidecider did not accept (k={kk}, inf) within {self.budget} steps;"
                    " inf may not be in the set")
            J = max(0, v.detail["reads"] - 1)
            self._p.append(max(J, self._p[-1] + 1) if self._p else J)
        return self._p[k]

    def __call__(self, n: int) -> int:
        i = 0
        while self.p(i) <= n:
            i += 1
        return i


def friedberg_order(I: StagedSet | int, numbering: Numbering = Numbering(),
                    budget: float = 10 ** 6) -> FriedbergOrder:
    return FriedbergOrder(I.e if isinstance(I, StagedSet) else I, numbering, budget)


# -- anti-enumeration --------------------------------------------------------------

@dataclass
class AntiEnumeration:
    """A Markov-semidecidable A containing inf that differs from every A_i.

    f_i(k) is the k-th member of A_i found in increasing order, f(k) =
    max(f_0(k) .. f_k(k)) + 1, and A = {x : f(C(x)) <= x} with C the least
    index of a program printing x.
    """

    E: list                      # Markov semideciders of A_0, A_1, ...
    fuel: int = 10 ** 5
    meter: Meter = field(default_factory=lambda: Meter(10 ** 6))
    _f: dict = field(default_factory=dict)

    def contains_inf(self, i: int) -> bool:
        return self.meter.halts(self.E[i], markov_name_of("nbar", INF), self.fuel)

    def f_i(self, i: int, k: int) -> int:
        """Dovetails over n above the previous value; the first acceptance wins."""
        vals = self._f.setdefault(i, [])
        while len(vals) <= k:
            lo = vals[-1] + 1 if vals else 0
            vals.append(self._next_member(self.E[i], lo))
        return vals[k]

    def _next_member(self, e: int, lo: int) -> int:
        j = 0
        while True:
            s = checkpoint(j)
            for n in range(lo, lo + max(1, s.bit_length())):
                if self.meter.halts(e, markov_name_of("nbar", n), min(s, self.fuel)):
                    return n
            j += 1

    def f(self, k: int) -> int:
        return max(self.f_i(i, k) for i in range(min(k, len(self.E) - 1) + 1)) + 1

    def member(self, x, code_bound: int = 1 << 12, fuel: int = 2000) -> bool:
        """Ground truth for x in A via the exhaustive complexity oracle."""
        if x is INF:
            return True
        ans = certified(exact_oracle("MinIndex", x, code_bound, fuel))
        if ans.value is None:
            raise ValueError(f"C({x}) exceeds the search bound {code_bound}")
        return self.f(ans.value) <= x

    def witness(self, i: int, tries: int = 64) -> RefutationWitness | None:
        """x = f_i(k) with x in A_i but not in A."""
        for k in range(tries):
            x = self.f_i(i, k)
            if not self.member(x):
                C = certified(exact_oracle("MinIndex", x, 1 << 12, 2000)).value
                return RefutationWitness(
                    "anti-enumeration", {"i": i, "k": k},
                    {"x": x, "C(x)": C, "f(C(x))": self.f(C), "x_in_A_i": True},
                    f"x = {x} lies in A_{i} but f(C(x)) = {self.f(C)} > x, so x is not in A")
        return None


def anti_enumeration(E_list: list, budget: float = 10 ** 6, fuel: int = 10 ** 5):
    """(A semidecision data, witnesses): one witness per list entry, or None
    where the search gave out (a budget report, not a refutation)."""
    codes = [E.e if isinstance(E, StagedSet) else E for E in E_list]
    ae = AntiEnumeration(codes, fuel, Meter(budget))
    for i in range(len(codes)):
        if not ae.contains_inf(i):
            raise ValueError(f"A_{i} did not accept inf within {fuel} steps")
    witnesses = []
    for i in range(len(codes)):
        try:
            witnesses.append(ae.witness(i))
        except BudgetExhausted:
            witnesses.append(None)
    return ae, witnesses

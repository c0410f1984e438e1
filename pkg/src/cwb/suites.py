"""Named check suites run by ``cwb check``.

Each suite returns a list of ``Check`` records.  Details hold only values
computed deterministically from the fixed seeds, so a report is
byte-identical across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from . import library as lib
from .complexity import c_upper, certified, exact_oracle, km_upper
from .godel import lang as L
from .godel.machine import Halted, OutOfFuel, evaluate, pad, smn, universal_index
from .godel.terms import NULLARY, Comp, If0, Lit, Pair, Term, pair, tuple_code
from .recursion import family_fixed_point, fixed_point, quine_with
from .spaces import INF, Numbering, Type2Name, markov_name_of, parse_point

SEED = 20240517
FUEL = 10 ** 5


@dataclass
class Check:
    suite: str
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.suite}/{self.name}"


# -- program generation --------------------------------------------------------------

_TOTAL_ATOMS = [n for n in NULLARY if n not in ("univ", "clock", "smn")]


def random_term(rng: random.Random, depth: int = 3) -> Term:
    """A random term over total primitives (mu excluded, so it halts)."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.2:
            return Lit(rng.randrange(20))
        return Term(rng.choice(_TOTAL_ATOMS))
    form = rng.choice(("pair", "comp", "if0"))
    if form == "pair":
        return Pair(random_term(rng, depth - 1), random_term(rng, depth - 1))
    if form == "comp":
        return Comp(random_term(rng, depth - 1), random_term(rng, depth - 1))
    return If0(random_term(rng, depth - 1), random_term(rng, depth - 1), random_term(rng, depth - 1))


def _same(r1, r2) -> bool:
    """Exact equality of two runs: equal values, or both out of fuel."""
    if isinstance(r1, Halted) and isinstance(r2, Halted):
        return r1.value == r2.value
    return isinstance(r1, OutOfFuel) and isinstance(r2, OutOfFuel)


# -- 1 ------------------------------------------------------------------------------

def acceptability(cases: int = 50, seed: int = SEED) -> list[Check]:
    rng = random.Random(seed)
    out = []
    bad = []
    for i in range(cases):
        e, x, y = random_term(rng).code, rng.randrange(1000), rng.randrange(1000)
        if not _same(evaluate(smn(e, x), y, FUEL), evaluate(e, pair(x, y), FUEL)):
            bad.append(i)
    out.append(Check("acceptability", "smn", not bad, {"cases": cases, "failures": bad}))
    bad = []
    u = universal_index()
    for i in range(cases):
        e, x = random_term(rng).code, rng.randrange(1000)
        if not _same(evaluate(u, pair(e, x), FUEL), evaluate(e, x, FUEL)):
            bad.append(i)
    out.append(Check("acceptability", "universal", not bad, {"cases": cases, "failures": bad}))
    bad = []
    for i in range(cases):
        e, x = random_term(rng).code, rng.randrange(1000)
        chain = [e, pad(e), pad(pad(e))]
        if len(set(chain)) != 3 or not all(_same(evaluate(c, x, FUEL), evaluate(e, x, FUEL))
                                           for c in chain):
            bad.append(i)
    out.append(Check("acceptability", "padding", not bad, {"cases": cases, "failures": bad}))
    return out


# -- 2 ------------------------------------------------------------------------------

_v = L.var


def _bodies() -> dict[str, int]:
    """Bodies G of phi_e(n) = phi_G(<e, n>), several depending on phi_e itself."""
    z = _v("z")
    me, n = L.fst(z), L.snd(z)
    mk = lambda expr: L.compile_expr(expr, {"z": L.ID}).code  # noqa: E731
    return {
        "successor": mk(L.succ(n)),
        "own-index": mk(me),
        "self-plus-one": mk(L.succ(L.univ(me, n))),
        "doubling": mk(L.if0(n, 0, L.add(2, L.univ(me, L.pred(n))))),
        "halving-to-seven": mk(L.if0(n, 7, L.univ(me, L.half(n)))),
    }


def _transformer(G: int) -> int:
    """e |-> smn(G, e)."""
    return L.function(["e"], L.code_smn(L.const(G), _v("e"))).code


def recursion(upto: int = 20) -> list[Check]:
    out = []
    for label, G in _bodies().items():
        f = _transformer(G)
        e = fixed_point(f)
        r = evaluate(f, e, FUEL)
        target = r.value if isinstance(r, Halted) else None
        ok = target is not None and all(
            _same(evaluate(e, n, FUEL), evaluate(target, n, FUEL)) for n in range(upto + 1))
        out.append(Check("recursion", f"fixed_point/{label}", ok, {"probes": upto + 1}))
        q = quine_with(G)
        ok = all(_same(evaluate(q, n, FUEL), evaluate(G, pair(q, n), FUEL))
                 for n in range(upto + 1))
        out.append(Check("recursion", f"quine_with/{label}", ok, {"probes": upto + 1}))
    z = _v("z")
    body = L.compile_expr(L.add(L.fst(L.snd(z)), L.snd(z)), {"z": L.ID}).code
    fam = family_fixed_point(body, arity=2)
    rng = random.Random(SEED + 2)
    bad = []
    for _ in range(25):
        abar = (rng.randrange(51), rng.randrange(51))
        r = evaluate(fam.index, tuple_code(*abar), FUEL)
        e = fam.member(*abar)
        if not (isinstance(r, Halted) and r.value == e):
            bad.append(abar)
            continue
        n = rng.randrange(50)
        if not _same(evaluate(e, n, FUEL), evaluate(body, pair(e, pair(tuple_code(*abar), n)), FUEL)):
            bad.append(abar)
    out.append(Check("recursion", "family_fixed_point/total", not bad, {"failures": bad}))
    return out


# -- 3 ------------------------------------------------------------------------------

def zero_in_A() -> int:
    """A = {e : 0 in W_e}, an index set."""
    return L.function(["x"], L.univ(_v("x"), 0)).code


def _case_triples():
    fs = lib.finite_set_program
    A_list = [("empty", lib.NOWHERE), ("everything", lib.EVERYWHERE), ("zero-in", zero_in_A())]
    sets = [({1, 2}, {5, 7}), ({0}, {3}), ({4}, set()), (set(), {2, 6}),
            ({0, 9}, {1})]
    return [(f"{A_list[(i + j) % 3][0]}:{sorted(a)}|{sorted(b)}", A_list[(i + j) % 3][1],
             fs(frozenset(a)), fs(frozenset(b)))
            for i, (a, b) in enumerate(sets) for j in (0, 1)]


def lemma_ext(fuel: int = 10 ** 4) -> list[Check]:
    from .constructions.lemma import UkEnumerator, case_table_reference, lemma_ext_family
    out = []
    for label, A, a, b in _case_triples():
        me = lemma_ext_family(A).member(a, b)
        bad = [m for m in range(10)
               if isinstance(evaluate(me, m, fuel), Halted)
               != bool(case_table_reference((A,), (a, b), me, m, fuel))]
        out.append(Check("lemma-ext", f"case-table/{label}", not bad, {"mismatch": bad}))
    A = zero_in_A()
    E1, E2 = frozenset({0, 1}), frozenset({1, 2})
    c1, c2 = lib.finite_set_program(E1), lib.finite_set_program(E2)
    pads = [c1, pad(c1), pad(pad(c1))]
    num = Numbering((c1, c2, pads[1]))
    in_A = all(isinstance(evaluate(A, p, fuel), Halted) for p in pads)
    out_A = not isinstance(evaluate(A, c2, FUEL), Halted) and 0 not in E2
    out.append(Check("lemma-ext", "curated-A/padded-indices", in_A and out_A,
                     {"E1_pads_in_A": in_A, "E2_outside_A": out_A}))
    en = UkEnumerator((A,), 2, num)
    covered = any(F <= E1 for F in en.emit(10 ** 4)[0])
    out.append(Check("lemma-ext", "item-i/E1-covered-by-1e4", covered, {}))
    uncovered = all(not any(F <= E2 for F in en.emit(s)[0]) for s in (10 ** 3, 10 ** 4, 10 ** 5))
    out.append(Check("lemma-ext", "item-ii/E2-uncovered-through-1e5", uncovered, {}))
    return out


# -- 4 ------------------------------------------------------------------------------

FRIEDBERG_POINTS = (INF, 6, 9, 16, 12, 20, 7, 0, 3, 5)


def friedberg_numbering() -> Numbering:
    return Numbering(tuple(markov_name_of("nbar", p) for p in FRIEDBERG_POINTS))


def nbar_friedberg_suite(B: int = 10 ** 6) -> list[Check]:
    from .constructions.lemma import markov_to_k_semidecider
    from .constructions.nbar import MARKOV_SEMIDECIDER, friedberg_truth
    num = friedberg_numbering()
    sem = markov_to_k_semidecider(MARKOV_SEMIDECIDER, "nbar", num)
    out = []
    for k, p in enumerate(FRIEDBERG_POINTS):
        truth = friedberg_truth(p)
        v = sem.run(k, Type2Name.of_point("nbar", p), B if truth.member else 10 * B)
        ok = bool(v) == truth.member
        label = "inf" if p is INF else str(p)
        out.append(Check("nbar-friedberg", f"point/{label}", ok,
                         {"k": k, "truth": truth.member, "accepted": bool(v),
                          "spent": v.detail.get("spent")}))
    return out


# -- 5 ------------------------------------------------------------------------------

def difference(stages=(10 ** 3, 10 ** 4)) -> list[Check]:
    from .constructions.lemma import difference_member, mask_of, nce_family
    x = _v("x")
    A0 = zero_in_A()
    A1 = L.function(["x"], L.let("_a", L.univ(x, 0), L.univ(x, 1))).code
    Es = (frozenset({0}), frozenset({0, 1}), frozenset({1}))
    num = Numbering(tuple(lib.finite_set_program(E) for E in Es))
    U = nce_family([A0, A1], 2, num)
    s = stages[-1]
    em = [U[i].emit(s) for i in range(2)]
    out = []
    for E in Es:
        m = mask_of(E)
        hit = [any(f & ~m == 0 for f in em[i]) for i in range(2)]
        brute = 0 in E and 1 not in E
        out.append(Check("difference", f"member/{sorted(E)}", difference_member(hit) == brute,
                         {"levels": hit, "brute": brute, "stage": s}))
    return out


# -- 6 ------------------------------------------------------------------------------

def structure_suite() -> list[Check]:
    from .constructions.cantor import calibrate_c0, friedberg_cantor, notsigma2_semidecider
    from .constructions.nbar import MARKOV_SEMIDECIDER, friedberg_truth, tail_semidecider
    from .constructions.structure import anti_enumeration, friedberg_order, min_index_lower_bound
    out = []
    sp, zero = parse_point("cantor:0^w")
    for k in (4, 6, 8):
        v = friedberg_cantor(k, Type2Name.of_point(sp, zero))
        ok = bool(v) and v.detail["bits_read"] <= 2 ** (k + 2)
        out.append(Check("structure", f"friedberg-cantor/k={k}", ok,
                         {"bits_read": v.detail["bits_read"], "bound": 2 ** (k + 2)}))
    c0 = calibrate_c0()
    k = c0 + 3
    v = notsigma2_semidecider(k, Type2Name.of_point(sp, zero), c0)
    ok = bool(v) and v.detail["scan_length"] == 2 * (k - c0) + 1
    out.append(Check("structure", "notsigma2/scan-length", ok,
                     {"k": k, "c0": c0, "scan_length": v.detail["scan_length"]}))
    num = friedberg_numbering()
    h = friedberg_order(MARKOV_SEMIDECIDER, num)
    bad = []
    for n in range(10):
        hn = h(n)
        lb = min_index_lower_bound(num, FRIEDBERG_POINTS, n, 64, 200)
        if not (friedberg_truth(n).member or lb >= hn):
            bad.append(n)
    out.append(Check("structure", "friedberg-order/round-trip", not bad,
                     {"p0": h.p(0), "violations": bad}))
    ae, ws = anti_enumeration([tail_semidecider(i) for i in range(5)], budget=10 ** 6)
    ok = all(w is not None and w.observed["x"] >= i and not ae.member(w.observed["x"])
             for i, w in enumerate(ws))
    out.append(Check("structure", "anti-enumeration/witnesses", ok,
                     {"x": [w.observed["x"] if w else None for w in ws],
                      "spent": ae.meter.spent}))
    return out


# -- 7 ------------------------------------------------------------------------------

def complexity_suite(seed: int = SEED) -> list[Check]:
    from .constructions.cantor import calibrate_c0
    from .constructions.nbar import friedberg_truth
    rng = random.Random(seed + 7)
    bad = []
    for _ in range(100):
        n = rng.randrange(30)
        seq = [c_upper(n, s) for s in (20, 60, 200)]
        known = [c for c in seq if c is not None]
        if known != sorted(known, reverse=True) or (seq[0] is not None and None in seq):
            bad.append(n)
    out = [Check("complexity", "right-ce-monotone", not bad, {"targets": 100, "failures": bad})]
    bad = []
    for _ in range(20):
        u = "".join(rng.choice("01") for _ in range(rng.randrange(1, 5)))
        a, b = km_upper(u, 200), km_upper(u + rng.choice("01"), 200)
        if b is not None and (a is None or a > b):
            bad.append(u)
    out.append(Check("complexity", "km-prefix-monotone", not bad, {"failures": bad}))
    from .complexity import FuelInstability
    stable: list = []
    try:
        stable += [friedberg_truth(n).k for n in range(16)]
        stable += [certified(exact_oracle("MinIndex", x, 1 << 12, 2000)).value for x in range(5)]
        stable.append(calibrate_c0())
        ok = True
    except FuelInstability as exc:
        ok, stable = False, [str(exc)]
    out.append(Check("complexity", "exact-oracle-fuel-stable", ok, {"values": stable}))
    return out


# -- 8 ------------------------------------------------------------------------------

def adversaries() -> list[Check]:
    from .constructions import adversary as adv
    from .constructions.core import RefutationWitness
    out = []
    for c in (adv.ConstantConverter(lib.constant_program(0)), adv.OneThenZerosConverter()):
        w = adv.converter_adversary(c)
        ok = isinstance(w, RefutationWitness) and adv.replay_converter(w, c)
        out.append(Check("adversaries", f"converter/{c.label}", ok,
                         {"digest": w.digest() if ok else None}))
    c = adv.SeenSoFarLearner()
    w = adv.learner_adversary(c, v=5)
    ok = isinstance(w, RefutationWitness) and w.observed.get("distinct", 0) >= 5 \
        and adv.replay_learner(w, c)
    out.append(Check("adversaries", "learner/seen-so-far", ok,
                     {"distinct": w.observed.get("distinct") if ok else None}))
    return out


# -- 9 ------------------------------------------------------------------------------

def open_sets() -> list[Check]:
    from .constructions import relative as R
    from .constructions.core import Accepted
    out = []
    e = lib.NOWHERE
    U = R.sierp_to_OB(e)
    ok = all(R.box_covered(U, w, 10 ** 5, 6, e + 1)
             for d in range(4) for w in product(range(6), repeat=d))
    out.append(Check("open-sets", "sierp/cover-nonhalting", ok, {"e": e}))
    e = 3
    U = R.sierp_to_OB(e)
    T = [R.halting_time(n, 10 ** 5) or 0 for n in range(e + 6)]
    hits = [n for n in range(len(T) + 1) if U.has(T[:n], 10 ** 5)]
    out.append(Check("open-sets", "sierp/T-exclusion-halting", not hits, {"e": e, "T": T}))
    universe = R.curated_universe()
    codes = [p.code for p in universe]
    declared = all(R.CuratedProgram(p.code, p.prefix, p.tail).value(n) ==
                   (evaluate(p.code, n, 10 ** 4).value
                    if isinstance(evaluate(p.code, n, 10 ** 4), Halted) else None)
                   for p in universe for n in range(6))
    for txt, zero in (("cantor:0^w", True), ("cantor:1^w", False)):
        sp, p = parse_point(txt)
        G = R.cantor_to_OB_G(Type2Name.of_point(sp, p), 2, codes)
        unsound = [n for n in range(len(T) + 1) if not zero and G.has(T[:n], 10 ** 4)]
        out.append(Check("open-sets", f"cantor-G/sound/{txt}", not unsound, {}))
    H = R.exact_universe_oracle(universe)
    got = []
    for txt, want in (("cantor:0^w", True), ("cantor:1^w", False)):
        sp, p = parse_point(txt)
        v = R.relative_k_semidecider(R.zero_sequence_semidecider, H,
                                     Type2Name.of_point(sp, p), 2, codes)
        got.append(isinstance(v, Accepted) == want)
    out.append(Check("open-sets", "relative-k/universe", declared and all(got),
                     {"declared_behaviour_matches": declared}))
    return out


SUITES = {
    "acceptability": acceptability,
    "recursion": recursion,
    "lemma-ext": lemma_ext,
    "nbar-friedberg": nbar_friedberg_suite,
    "difference": difference,
    "structure": structure_suite,
    "complexity": complexity_suite,
    "adversaries": adversaries,
    "open-sets": open_sets,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()

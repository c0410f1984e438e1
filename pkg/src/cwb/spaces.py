"""Staged c.e. sets, five effective spaces with numbered bases, and names.

Spaces and their basis codings:

* ``sierp`` (Sierpinski space): B_0 is the whole space, B_1 = {top}.
* ``nbar`` (naturals plus infinity): B_{2n} = {n}, B_{2n+1} = [n, inf].
* ``cantor``: B_i is the cylinder of the i-th binary string in length-lex
  order, i.e. binary(i + 1) with its leading 1 removed.
* ``baire``: B_c is the cylinder of the finite sequence coded by c, where
  0 codes the empty sequence and 1 + <v, c'> codes v followed by c'.
* ``pown`` (subsets of N, Scott topology): B_i = up-set of the finite set
  whose bit vector is i.

Membership of a possibly huge index x in a staged set A at stage s means
that the probe program for (A, x) halts on 0 within s steps; finite views
keep the usual cap ``view(s)`` inside {0, ..., s}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import count
from typing import Callable, Iterator

from . import library as lib
from .godel import lang as L
from .godel.machine import Halted, evaluate, halting_steps, probe_index
from .godel.terms import pair, parse, unpair

__all__ = [
    "INF", "TOP", "BOT", "we_stage", "StagedSet", "Seq", "CESet", "Space",
    "SPACES", "space", "point_filter", "Type2Name", "program_name",
    "markov_name_of", "basis_intersect", "index_bound_from_k", "Numbering",
    "parse_point", "format_point", "cantor_string", "cantor_code",
    "baire_seq", "baire_code", "PointError", "nu_sierp",
]


class _Inf:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_inf, ())


def _inf():
    return INF


INF = _Inf()
TOP = "top"
BOT = "bot"


class PointError(ValueError):
    """Malformed curated point."""


# -- staged c.e. sets -----------------------------------------------------------

def we_stage(e: int, s: int) -> frozenset:
    """W_e[s] = {n <= s : e halts on n within s steps}."""
    return frozenset(n for n in range(s + 1) if halting_steps(e, n, s) is not None)


@dataclass(frozen=True)
class StagedSet:
    """The c.e. set W_e with its stage views."""

    e: int
    label: str = ""

    def view(self, s: int) -> frozenset:
        return we_stage(self.e, s)

    def holds(self, x: int, s: int) -> bool:
        """x in A[s], read through the probe program (no n <= s cap)."""
        return isinstance(evaluate(probe_index(self.e, x), 0, s), Halted)

    def entry_stage(self, x: int, limit: int) -> int | None:
        """Least s <= limit with x in A[s], or None."""
        steps = halting_steps(probe_index(self.e, x), 0, limit)
        return steps


# -- points --------------------------------------------------------------------

@dataclass(frozen=True)
class Seq:
    """An eventually constant sequence: prefix, then ``tail`` forever."""

    prefix: tuple
    tail: int

    def at(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def program(self) -> int:
        return lib.eventually_constant_program(self.prefix, self.tail)

    def word(self, n: int) -> str:
        """The first n symbols as a string (binary sequences)."""
        head = "".join(map(str, self.prefix[:n]))
        return head + str(self.tail) * (n - len(head))


@dataclass(frozen=True)
class CESet:
    """The c.e. set W_e as a point of P(N)."""

    e: int


def cantor_string(i: int) -> str:
    return bin(i + 1)[3:]


def cantor_code(u: str) -> int:
    return int("1" + u, 2) - 1


def baire_seq(c: int) -> tuple:
    out = []
    while c:
        v, c = unpair(c - 1)
        out.append(v)
    return tuple(out)


def baire_code(seq) -> int:
    c = 0
    for v in reversed(tuple(seq)):
        c = 1 + pair(v, c)
    return c


def _bits(i: int) -> frozenset:
    return frozenset(k for k in range(i.bit_length()) if i >> k & 1)


def _mask(fs) -> int:
    return sum(1 << k for k in fs)


# -- spaces --------------------------------------------------------------------

@dataclass(frozen=True)
class Space:
    """One of the five fixed effective spaces."""

    id: str
    top_code: int                                  # a code whose basic set is the whole space
    member: Callable[[int, object], bool] = field(repr=False)
    intersect: Callable[[int, int], frozenset] = field(repr=False)
    dense: Callable[[int], object] = field(repr=False)

    def contains(self, i: int, p) -> bool:
        """p in B_i, for curated points (decidable)."""
        return self.member(i, p)


def _nbar_member(i, p):
    n, tail = divmod(i, 2)
    if tail:
        return p is INF or p >= n
    return p == n


def _nbar_intersect(i, j):
    (a, ta), (b, tb) = divmod(i, 2), divmod(j, 2)
    if ta and tb:
        return frozenset({2 * max(a, b) + 1})
    if not ta and not tb:
        return frozenset({i}) if a == b else frozenset()
    n, m = (a, b) if not ta else (b, a)       # n is the singleton, m the tail start
    return frozenset({2 * n}) if n >= m else frozenset()


def _cantor_member(i, p):
    u = cantor_string(i)
    return all(int(ch) == p.at(k) for k, ch in enumerate(u))


def _prefix_intersect(code_of, decode, i, j):
    u, v = decode(i), decode(j)
    if len(u) < len(v):
        u, v = v, u
    return frozenset({code_of(u)}) if tuple(u[:len(v)]) == tuple(v) else frozenset()


def _baire_member(i, p):
    return all(v == p.at(k) for k, v in enumerate(baire_seq(i)))


def _pown_member(i, p):
    if isinstance(p, CESet):
        raise PointError("program-backed sets are checked through pown_holds")
    return _bits(i) <= p


def _sierp_member(i, p):
    return i == 0 or (i == 1 and p == TOP)


SPACES: dict[str, Space] = {
    "sierp": Space("sierp", 0, _sierp_member,
                   lambda i, j: frozenset({max(i, j)}) if max(i, j) <= 1 else frozenset(),
                   lambda j: TOP),
    "nbar": Space("nbar", 1, _nbar_member, _nbar_intersect, lambda j: j),
    "cantor": Space("cantor", 0, _cantor_member,
                    lambda i, j: _prefix_intersect(cantor_code, cantor_string, i, j),
                    lambda j: Seq(tuple(int(c) for c in cantor_string(j)), 0)),
    "baire": Space("baire", 0, _baire_member,
                   lambda i, j: _prefix_intersect(baire_code, baire_seq, i, j),
                   lambda j: Seq(baire_seq(j), 0)),
    "pown": Space("pown", 0, _pown_member, lambda i, j: frozenset({i | j}),
                  lambda j: _bits(j)),
}


def space(name: str) -> Space:
    try:
        return SPACES[name]
    except KeyError:
        raise PointError(f"unknown space {name!r}") from None


def basis_intersect(sp: Space | str, i: int, j: int) -> int:
    """Index whose domain is a set of codes covering B_i and B_j's intersection."""
    sp = space(sp) if isinstance(sp, str) else sp
    return lib.finite_set_program(sp.intersect(i, j))


# -- filters and names ---------------------------------------------------------

def _nbar_filter(p) -> Iterator[int]:
    if p is INF:
        yield from (2 * j + 1 for j in count())
        return
    yield 2 * p
    yield from (2 * j + 1 for j in range(p + 1))


def point_filter(sp: Space | str, p) -> Iterator[int]:
    """Enumerate {i : p in B_i}.  Finite filters end; infinite ones do not."""
    sp = space(sp) if isinstance(sp, str) else sp
    if sp.id == "nbar":
        if not (p is INF or (isinstance(p, int) and p >= 0)):
            raise PointError(f"not a point of nbar: {p!r}")
        yield from _nbar_filter(p)
    elif sp.id == "sierp":
        if p not in (TOP, BOT):
            raise PointError(f"not a point of sierp: {p!r}")
        yield from ((0, 1) if p == TOP else (0,))
    elif sp.id == "cantor":
        for n in count():
            yield cantor_code("".join(str(p.at(k)) for k in range(n)))
    elif sp.id == "baire":
        for n in count():
            yield baire_code(p.at(k) for k in range(n))
    elif sp.id == "pown":
        if isinstance(p, CESet):
            seen = set()
            for j in count():
                s, i = unpair(j)
                if i not in seen and _bits(i) <= we_stage(p.e, s):
                    seen.add(i)
                    yield i
        else:
            m = _mask(p)
            yield from (i for i in range(m + 1) if i & ~m == 0)


class Type2Name:
    """A total enumeration j |-> nth(j) of the basis codes of a point.

    ``reads`` counts queries, which is how read-bounds are measured.
    """

    def __init__(self, sp: Space | str, source: Callable[[int], int], origin: str):
        self.space = space(sp) if isinstance(sp, str) else sp
        self._source = source
        self.origin = origin
        self.reads = 0

    def nth(self, j: int) -> int:
        self.reads = max(self.reads, j + 1)
        return self._source(j)

    @classmethod
    def of_point(cls, sp: Space | str, p) -> "Type2Name":
        sp = space(sp) if isinstance(sp, str) else sp
        if sp.id == "cantor":
            return cls(sp, lambda j: cantor_code(p.word(j)), f"curated:{format_point(sp, p)}")
        gen = point_filter(sp, p)
        cache: list[int] = []

        def source(j):
            while len(cache) <= j:
                nxt = next(gen, None)
                if nxt is None:
                    return cache[-1] if cache else sp.top_code
                cache.append(nxt)
            return cache[j]

        return cls(sp, source, f"curated:{format_point(sp, p)}")


def program_name(sp: Space | str, e: int) -> Type2Name:
    """Type-2 name read off a Markov name e by dovetailing W_e."""
    sp = space(sp) if isinstance(sp, str) else sp

    def source(j):
        s, i = unpair(j)
        return i if i <= s and halting_steps(e, i, s) is not None else sp.top_code

    return Type2Name(sp, source, f"program:{e}")


def nu_sierp(e: int) -> int:
    """Markov presentation of the Sierpinski space: e names top iff phi_e(e) halts.

    As a name this is already an index; the returned filter program halts on 0
    always and on 1 iff phi_e(e) halts.
    """
    return L.function(["x"], L.if0(_x(), 0, L.if0(L.eq(_x(), 1), L.let("_h", L.univ(e, e), 0), L.diverge()))).code


def _x():
    return L.var("x")


def markov_name_of(sp: Space | str, p) -> int:
    """Index of a program whose domain is exactly the filter of p."""
    sp = space(sp) if isinstance(sp, str) else sp
    x = _x()
    if sp.id == "nbar":
        if p is INF:
            return _nbar_inf_name()
        if not isinstance(p, int) or p < 0:
            raise PointError(f"not a point of nbar: {p!r}")
        ok = L.either(L.eq(x, 2 * p), L.both(L.is_zero(lib.odd(x)), L.le(L.half(x), p)))
        return L.function(["x"], L.if0(ok, 0, L.diverge())).code
    if sp.id == "sierp":
        if p not in (TOP, BOT):
            raise PointError(f"not a point of sierp: {p!r}")
        return lib.finite_set_program(frozenset({0, 1} if p == TOP else {0}))
    if sp.id == "cantor":
        return lib.cantor_prefix_program(p.program())
    if sp.id == "baire":
        return lib.baire_prefix_program(p.program())
    if sp.id == "pown":
        if isinstance(p, CESet):
            return lib.ce_subset_program(p.e)
        return lib.finite_subset_program(_mask(p))
    raise PointError(sp.id)


_INF_NAME: list[int] = []


def _nbar_inf_name() -> int:
    if not _INF_NAME:
        _INF_NAME.append(L.function(["x"], L.if0(L.is_zero(lib.odd(_x())), 0, L.diverge())).code)
    return _INF_NAME[0]


# -- numberings and complexity bounds -----------------------------------------

@dataclass(frozen=True)
class Numbering:
    """psi_i = table[i] for i < len(table), psi_{len + j} = phi_j.

    Equivalent to phi in both directions (translation is computable both
    ways), so every complexity bound it gives differs from the phi one by
    at most a computable amount.  Curated programs get small indices.
    """

    table: tuple = ()

    def to_phi(self, i: int) -> int:
        return self.table[i] if i < len(self.table) else i - len(self.table)

    def from_phi(self, e: int) -> int:
        return len(self.table) + e

    def first(self, n: int) -> list[int]:
        """phi-codes of psi_0 .. psi_{n-1}."""
        return [self.to_phi(i) for i in range(n)]


def index_bound_from_k(kind: str, k: int) -> int:
    """b_k: every object of complexity at most k has an index at most b_k."""
    if kind == "MinIndex":
        return k
    if kind == "ProgramLength":
        return (1 << k) - 1 if k > 0 else 0
    raise ValueError(f"no index bound for kind {kind!r}")


# -- curated point syntax ------------------------------------------------------

_RUN = re.compile(r"^(\d+)\^(\d+|w)$")


def _parse_runs(body: str, binary: bool) -> Seq:
    parts = body.split()
    if not parts:
        raise PointError("empty sequence")
    prefix: list[int] = []
    tail = None
    for k, part in enumerate(parts):
        m = _RUN.match(part)
        if not m:
            raise PointError(f"bad run {part!r}; expected a^n or a^w")
        sym = int(m.group(1))
        if binary and sym > 1:
            raise PointError(f"cantor symbols are 0 or 1, got {sym}")
        if m.group(2) == "w":
            if k != len(parts) - 1:
                raise PointError("a^w must come last")
            tail = sym
        else:
            prefix.extend([sym] * int(m.group(2)))
    if tail is None:
        raise PointError("sequence must end with a^w")
    return Seq(tuple(prefix), tail)


def parse_point(text: str) -> tuple[Space, object]:
    """Parse ``nbar:5``, ``nbar:inf``, ``cantor:0^5 1^w``, ``pown:{1,3}``,
    ``pown:idx(E)`` (E an index or program text), ``baire:3^1 0^w``,
    ``sierp:top``/``sierp:bot``."""
    if ":" not in text:
        raise PointError(f"missing space prefix in {text!r}")
    sid, body = text.split(":", 1)
    sp = space(sid.strip())
    body = body.strip()
    if sp.id == "nbar":
        if body == "inf":
            return sp, INF
        if body.isdigit():
            return sp, int(body)
    elif sp.id == "sierp":
        if body in (TOP, BOT):
            return sp, body
    elif sp.id in ("cantor", "baire"):
        return sp, _parse_runs(body, sp.id == "cantor")
    elif sp.id == "pown":
        if body.startswith("{") and body.endswith("}"):
            inner = body[1:-1].strip()
            try:
                return sp, frozenset(int(t) for t in inner.split(",")) if inner else frozenset()
            except ValueError:
                pass
        elif body.startswith("idx(") and body.endswith(")"):
            inner = body[4:-1].strip()
            return sp, CESet(int(inner) if inner.isdigit() else parse(inner).code)
    raise PointError(f"malformed {sp.id} point {body!r}")


def format_point(sp: Space | str, p) -> str:
    sp = space(sp) if isinstance(sp, str) else sp
    if sp.id == "nbar":
        return f"nbar:{'inf' if p is INF else p}"
    if sp.id == "sierp":
        return f"sierp:{p}"
    if sp.id in ("cantor", "baire"):
        runs = []
        for v in p.prefix:
            if runs and runs[-1][0] == v:
                runs[-1][1] += 1
            else:
                runs.append([v, 1])
        return f"{sp.id}:" + " ".join([f"{v}^{n}" for v, n in runs] + [f"{p.tail}^w"])
    if isinstance(p, CESet):
        return f"pown:idx({p.e})"
    return "pown:{" + ",".join(map(str, sorted(p))) + "}"

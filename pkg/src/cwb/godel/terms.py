"""Program terms, Cantor pairing and the bijective Goedel coding.

Every natural number decodes to exactly one term and every term encodes to
exactly one natural number.

Data tuples use Cantor pairing.  Term codes use a second bijective pairing,
:func:`cpair`, whose bit length is additive in its arguments up to a
logarithmic term; under Cantor pairing a code doubles in bit length at each
nesting level, which is hopeless for compiled programs.  In-language
programs never build codes by arithmetic: they use the ``smn`` primitive.

Layout (``[x, y]`` is cpair)::

    0 .. 11            nullary operators, in NULLARY order
    12 + [5a + f, p]   family f with payload q = [a, p]:
                       f = 0: lit(q)
                       f = 1: pair(x, y)        q = [code x, code y]
                       f = 2: comp(x, y)        q = [code x, code y]
                       f = 3: if0(c, x, y)      q = [code c, [code x, code y]]
                       f = 4: mu(t)             q = code t
"""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "pair", "unpair", "cpair", "cunpair", "tuple_code", "untuple",
    "Term", "ParseError", "NULLARY", "N_NULLARY",
    "ZERO", "SUCC", "PRED", "ID", "FST", "SND", "UNIV", "CLOCK", "SMN", "ADD", "MONUS", "HALF",
    "Lit", "Pair", "Comp", "If0", "Mu",
    "encode", "decode", "parse", "unparse", "bitlen",
]


# Environments of compiled programs are nested pairs, so large data (program
# indices) make pairs whose unpairing dominates run time.  Large pairs built
# here are remembered so that taking them apart again is a lookup.
_LARGE = 512
_PAIRS_MAX = 4096
_pairs: dict[int, tuple[int, int]] = {}


def pair(x: int, y: int) -> int:
    """Cantor pairing <x, y> = (x+y)(x+y+1)/2 + y."""
    s = x + y
    z = s * (s + 1) // 2 + y
    if s.bit_length() > _LARGE:
        if len(_pairs) >= _PAIRS_MAX:
            _pairs.pop(next(iter(_pairs)))
        _pairs[z] = (x, y)
    return z


def unpair(z: int) -> tuple[int, int]:
    if z.bit_length() > 2 * _LARGE:
        hit = _pairs.get(z)
        if hit is not None:
            return hit
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def _bstr(n: int) -> tuple[int, int]:
    # n as a bit string: (length, value) of binary(n + 1) without its leading 1
    m = (n + 1).bit_length() - 1
    return m, (n + 1) - (1 << m)


def _base(m: int) -> int:
    # number of string pairs of total length < m: sum_{k<m} (k + 1) 2^k
    return ((m - 1) << m) + 1 if m else 0


def cpair(x: int, y: int) -> int:
    """Bijective pairing with bitlen(cpair(x, y)) ~ bitlen(x) + bitlen(y) + log.

    Pairs of bit strings (s, t) are listed by total length, then by |s|,
    then by the concatenation st read in binary.
    """
    ls, vs = _bstr(x)
    lt, vt = _bstr(y)
    m = ls + lt
    return _base(m) + (ls << m) + (vs << lt) + vt


def cunpair(z: int) -> tuple[int, int]:
    m = max(0, z.bit_length() - 1)
    while m and _base(m) > z:
        m -= 1
    while _base(m + 1) <= z:
        m += 1
    r = z - _base(m)
    ls, st = r >> m, r & ((1 << m) - 1)
    lt = m - ls
    vs, vt = st >> lt, st & ((1 << lt) - 1)
    return (1 << ls) + vs - 1, (1 << lt) + vt - 1


def tuple_code(*xs: int) -> int:
    """Right-nested tuple <x0, <x1, ... x_{n-1}>>; a single value is itself."""
    if not xs:
        raise ValueError("empty tuple")
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = pair(x, acc)
    return acc


def untuple(z: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n - 1):
        x, z = unpair(z)
        out.append(x)
    out.append(z)
    return tuple(out)


def bitlen(n: int) -> int:
    """Binary length with the convention bitlen(0) = 1."""
    return max(1, n.bit_length())


NULLARY = ("zero", "succ", "pred", "id", "fst", "snd", "univ", "clock", "smn", "add", "monus", "half")
N_NULLARY = len(NULLARY)
_FAMILY = {"lit": 0, "pair": 1, "comp": 2, "if0": 3, "mu": 4}


class Term:
    """Immutable program term.  ``code`` is computed once at construction."""

    __slots__ = ("op", "args", "code")

    def __init__(self, op: str, args: tuple = (), code: int | None = None):
        self.op = op
        self.args = args
        self.code = _code_of(op, args) if code is None else code

    def __eq__(self, other):
        return isinstance(other, Term) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __repr__(self):
        return f"Term({unparse(self)})"

    def size(self) -> int:
        """Number of nodes."""
        if self.op == "lit" or not self.args:
            return 1
        return 1 + sum(a.size() for a in self.args)


def _code_of(op: str, args: tuple) -> int:
    if op in _NULLARY_INDEX:
        return _NULLARY_INDEX[op]
    if op == "lit":
        q = args[0]
    elif op in ("pair", "comp"):
        q = cpair(args[0].code, args[1].code)
    elif op == "if0":
        q = cpair(args[0].code, cpair(args[1].code, args[2].code))
    elif op == "mu":
        q = args[0].code
    else:
        raise ValueError(f"unknown operator {op!r}")
    a, p = cunpair(q)
    return N_NULLARY + cpair(5 * a + _FAMILY[op], p)


_NULLARY_INDEX = {name: i for i, name in enumerate(NULLARY)}

ZERO, SUCC, PRED, ID, FST, SND, UNIV, CLOCK, SMN, ADD, MONUS, HALF = (Term(n) for n in NULLARY)


def Lit(n: int) -> Term:
    if n < 0:
        raise ValueError("literals are naturals")
    return Term("lit", (n,))


def Pair(f: Term, g: Term) -> Term:
    return Term("pair", (f, g))


def Comp(f: Term, g: Term) -> Term:
    """comp(f, g)(x) = f(g(x))."""
    return Term("comp", (f, g))


def If0(c: Term, a: Term, b: Term) -> Term:
    return Term("if0", (c, a, b))


def Mu(t: Term) -> Term:
    """mu(t)(x) = least y with t(<x, y>) = 0."""
    return Term("mu", (t,))


def encode(t: Term) -> int:
    return t.code


@lru_cache(maxsize=1 << 16)
def decode(code: int) -> Term:
    if code < 0:
        raise ValueError("codes are naturals")
    if code < N_NULLARY:
        return Term(NULLARY[code], (), code)
    j, p = cunpair(code - N_NULLARY)
    a, f = divmod(j, 5)
    q = cpair(a, p)
    if f == 0:
        return Term("lit", (q,), code)
    if f in (1, 2):
        x, y = cunpair(q)
        return Term("pair" if f == 1 else "comp", (decode(x), decode(y)), code)
    if f == 3:
        c, rest = cunpair(q)
        x, y = cunpair(rest)
        return Term("if0", (decode(c), decode(x), decode(y)), code)
    return Term("mu", (decode(q),), code)


# -- s-expression text format -------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}<<HERE>>{text[pos:]}")
        self.pos = pos


_ARITY = {"pair": 2, "comp": 2, "if0": 3, "mu": 1}


def unparse(t: Term) -> str:
    if t.op == "lit":
        return f"(lit {t.args[0]})"
    if not t.args:
        return t.op
    return "(" + t.op + " " + " ".join(unparse(a) for a in t.args) + ")"


def _tokens(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            yield ch, i
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            yield text[i:j], i
            i = j
    yield None, n


def parse(text: str) -> Term:
    """Parse the s-expression grammar; errors carry the failing position."""
    toks = list(_tokens(text))
    pos = 0

    def expr() -> Term:
        nonlocal pos
        tok, at = toks[pos]
        if tok is None:
            raise ParseError("unexpected end of input", at, text)
        if tok == ")":
            raise ParseError("unexpected ')'", at, text)
        pos += 1
        if tok != "(":
            if tok in _NULLARY_INDEX:
                return Term(tok)
            raise ParseError(f"unknown atom {tok!r}", at, text)
        head, hat = toks[pos]
        pos += 1
        if head == "lit":
            num, nat = toks[pos]
            if num is None or not num.isdigit():
                raise ParseError("lit expects a natural number", nat, text)
            pos += 1
            node = Lit(int(num))
        elif head in _ARITY:
            node = Term(head, tuple(expr() for _ in range(_ARITY[head])))
        else:
            raise ParseError(f"unknown form {head!r}", hat, text)
        close, cat = toks[pos]
        if close != ")":
            raise ParseError("expected ')'", cat, text)
        pos += 1
        return node

    t = expr()
    if toks[pos][0] is not None:
        raise ParseError("trailing input", toks[pos][1], text)
    return t

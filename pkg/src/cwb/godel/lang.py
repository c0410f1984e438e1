"""A tiny expression language compiled to terms.

Writing dovetailers directly as combinator terms is unreadable, so programs
are written as expressions over named variables and compiled.  The
compiled program receives its parameters as a right-nested tuple.

Truth values follow ``if0``: 0 is "yes", anything else is "no".

>>> from cwb.godel import evaluate
>>> prog = function(["x", "y"], add(var("x"), var("y")))
>>> evaluate(prog, tuple_code(3, 4), 100).value
7
"""

from __future__ import annotations

from .machine import PROBE_KERNEL
from .terms import (
    ADD, CLOCK, FST, HALF, ID, MONUS, PRED, SMN, SND, SUCC, UNIV,
    Comp, If0, Lit, Mu, Pair, Term, tuple_code,
)

__all__ = [
    "var", "const", "add", "monus", "half", "succ", "pred", "pr", "fst", "snd",
    "univ", "clock", "if0", "let", "mu", "eq", "le", "lt", "is_zero", "either",
    "both", "times", "diverge", "bounded_exists", "code_smn", "code_probe", "compile_expr", "function",
    "param_env", "tuple_code", "ID",
]

Expr = tuple


def var(name: str) -> Expr:
    return ("var", name)


def const(n: int) -> Expr:
    return ("const", n)


def _e(x) -> Expr:
    return const(x) if isinstance(x, int) else x


def add(a, b) -> Expr:
    return ("add", _e(a), _e(b))


def monus(a, b) -> Expr:
    return ("monus", _e(a), _e(b))


def half(a) -> Expr:
    return ("half", _e(a))


def succ(a) -> Expr:
    return ("succ", _e(a))


def pred(a) -> Expr:
    return ("pred", _e(a))


def pr(a, b) -> Expr:
    return ("pair", _e(a), _e(b))


def fst(a) -> Expr:
    return ("fst", _e(a))


def snd(a) -> Expr:
    return ("snd", _e(a))


def univ(e, x) -> Expr:
    """Run code e on x (diverges with it)."""
    return ("univ", _e(e), _e(x))


def clock(e, n, s) -> Expr:
    """1 + phi_e(n) if n <= s and e halts on n within s steps, else 0."""
    return ("clock", _e(e), _e(n), _e(s))


def if0(c, a, b) -> Expr:
    return ("if0", _e(c), _e(a), _e(b))


def let(name: str, value, body) -> Expr:
    return ("let", name, _e(value), _e(body))


def mu(name: str, body) -> Expr:
    """Least value of ``name`` making body 0."""
    return ("mu", name, _e(body))


# -- derived forms --------------------------------------------------------------

def eq(a, b) -> Expr:
    """0 iff a == b."""
    return let("_eq", pr(a, b),
               add(monus(fst(var("_eq")), snd(var("_eq"))),
                   monus(snd(var("_eq")), fst(var("_eq")))))


def le(a, b) -> Expr:
    """0 iff a <= b."""
    return monus(a, b)


def lt(a, b) -> Expr:
    """0 iff a < b."""
    return monus(succ(a), b)


def is_zero(a) -> Expr:
    """0 iff a != 0 (logical negation)."""
    return if0(a, 1, 0)


def either(a, b) -> Expr:
    """0 iff a == 0 or b == 0."""
    return if0(a, 0, b)


def both(a, b) -> Expr:
    """0 iff a == 0 and b == 0."""
    return if0(a, b, 1)


def times(k: int, a) -> Expr:
    """k * a for a fixed k >= 1 (a evaluated once)."""
    if k == 1:
        return _e(a)
    acc = var("_t")
    for _ in range(k - 1):
        acc = add(acc, var("_t"))
    return let("_t", a, acc)


def diverge() -> Expr:
    return mu("_never", 1)


def bounded_exists(name: str, bound, cond) -> Expr:
    """0 iff cond(name) == 0 for some name <= bound; always halts if cond does.

    ``bound`` may not mention ``name``.
    """
    found = mu(name, either(cond, le(bound, var(name))))
    # re-test at the stopping point: it may have stopped only because of the bound
    return let("_w", found, let(name, var("_w"), cond))


# -- building program codes in-language --------------------------------------

def code_smn(e, x) -> Expr:
    """Code of the specialisation y |-> phi_e(<x, y>)."""
    return ("smn", _e(e), _e(x))


def code_probe(e, x) -> Expr:
    """Code of a program that ignores its input and runs e on x."""
    return code_smn(PROBE_KERNEL, pr(e, x))


# -- compiler -------------------------------------------------------------------

def _comp(f: Term, g: Term) -> Term:
    if f.op == "id":
        return g
    if g.op == "id":
        return f
    return Comp(f, g)


_UNARY = {"half": HALF, "succ": SUCC, "pred": PRED, "fst": FST, "snd": SND}
_BINARY = {"add": ADD, "monus": MONUS}


def compile_expr(x: Expr, env: dict[str, Term]) -> Term:
    tag = x[0]
    if tag == "var":
        try:
            return env[x[1]]
        except KeyError:
            raise NameError(f"unbound variable {x[1]!r}") from None
    if tag == "const":
        return Lit(x[1])
    if tag in _UNARY:
        return _comp(_UNARY[tag], compile_expr(x[1], env))
    if tag in _BINARY:
        return Comp(_BINARY[tag], Pair(compile_expr(x[1], env), compile_expr(x[2], env)))
    if tag == "pair":
        return Pair(compile_expr(x[1], env), compile_expr(x[2], env))
    if tag in ("univ", "smn"):
        return Comp(UNIV if tag == "univ" else SMN, Pair(compile_expr(x[1], env), compile_expr(x[2], env)))
    if tag == "clock":
        c = [compile_expr(a, env) for a in x[1:]]
        return Comp(CLOCK, Pair(c[0], Pair(c[1], c[2])))
    if tag == "if0":
        return If0(*(compile_expr(a, env) for a in x[1:]))
    if tag == "let":
        _, name, value, body = x
        inner = {k: _comp(v, SND) for k, v in env.items()}
        inner[name] = FST
        return _comp(compile_expr(body, inner), Pair(compile_expr(value, env), ID))
    if tag == "mu":
        _, name, body = x
        inner = {k: _comp(v, FST) for k, v in env.items()}
        inner[name] = SND
        return Mu(compile_expr(body, inner))
    raise ValueError(f"unknown expression {tag!r}")


def param_env(params: list[str]) -> dict[str, Term]:
    """Access paths for parameters passed as a right-nested tuple."""
    env: dict[str, Term] = {}
    path = ID
    for i, p in enumerate(params):
        if i == len(params) - 1:
            env[p] = path
        else:
            env[p] = _comp(FST, path)
            path = _comp(SND, path)
    return env


def function(params: list[str], body: Expr) -> Term:
    return compile_expr(body, param_env(params))

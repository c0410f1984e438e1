"""Kleene's recursion theorem, done constructively with s-m-n.

All constructions are code arithmetic: nothing is evaluated except the
optional totality probe in :func:`fixed_point`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .godel import lang as L
from .godel.machine import Halted, evaluate, smn
from .godel.terms import FST, SND, Comp, Pair, Term, decode, tuple_code

__all__ = [
    "NonTotalTransformer", "quine_with", "fixed_point", "FixedFamily",
    "family_fixed_point", "recursive",
]


class NonTotalTransformer(RuntimeError):
    """The transformer did not halt on the constructed index within the ceiling."""


def _code(x: int | Term) -> int:
    return x.code if isinstance(x, Term) else x


_SELF_APPLY = L.compile_expr(L.code_smn(L.var("a"), L.var("a")), {"a": FST})


def quine_with(body: int | Term) -> int:
    """Index e with phi_e(n) = phi_body(<e, n>) for every n."""
    g = Comp(decode(_code(body)), Pair(_SELF_APPLY, SND)).code
    return smn(g, g)


def fixed_point(f: int | Term, *, ceiling: int = 100_000) -> int:
    """Index e with phi_e = phi_{phi_f(e)}.

    ``f`` must be total; it is run once on the returned index and a
    :class:`NonTotalTransformer` is raised if that run exceeds ``ceiling``.
    """
    fc = _code(f)
    body = L.compile_expr(
        L.univ(L.univ(L.const(fc), L.fst(L.var("z"))), L.snd(L.var("z"))), {"z": L.ID})
    e = quine_with(body)
    res = evaluate(fc, e, ceiling)
    if not isinstance(res, Halted):
        raise NonTotalTransformer(f"transformer {fc} did not halt on {e} within {ceiling} steps")
    return e


@dataclass(frozen=True)
class FixedFamily:
    """A total ``index`` computing abar |-> e(abar), plus its kernel code.

    ``member`` computes the same value as running ``index`` without the
    interpreter; both are kept so tests can check one against the other.
    """

    index: int
    kernel: int
    arity: int

    def member(self, *abar: int) -> int:
        if len(abar) != self.arity:
            raise ValueError(f"expected {self.arity} components")
        return smn(self.kernel, tuple_code(self.kernel, tuple_code(*abar)))

    # the member code is built by a constant-size term
    FUEL_BOUND = 100


def family_fixed_point(body: int | Term, arity: int = 1) -> FixedFamily:
    """Uniform fixed points: phi_{e(abar)}(n) = phi_body(<e(abar), <abar, n>>).

    The tuple abar is passed right-nested; for arity 1 it is the number itself.
    """
    z = L.var("z")
    a_and_abar = L.fst(z)
    kernel_expr = L.pr(
        L.code_smn(L.fst(a_and_abar), a_and_abar),
        L.pr(L.snd(a_and_abar), L.snd(z)))
    kernel_term = Comp(decode(_code(body)), L.compile_expr(kernel_expr, {"z": L.ID}))
    k = kernel_term.code
    index = L.compile_expr(L.code_smn(L.const(k), L.pr(L.const(k), L.var("abar"))),
                           {"abar": L.ID}).code
    return FixedFamily(index=index, kernel=k, arity=arity)


def recursive(params: list[str], body: L.Expr) -> int:
    """Compile a function whose body may call itself through ``var('self')``.

    Self-calls pass the argument tuple: ``univ(var('self'), tuple)``.
    """
    env = {"self": FST}
    env.update({p: (SND if path.op == "id" else Comp(path, SND))
                for p, path in L.param_env(params).items()})
    return quine_with(L.compile_expr(body, env))

"""``cwb``: run operations with explicit budgets and write JSONL traces.

Exit status: 0 success, 1 parse or configuration error, 2 out of fuel or
budget exhausted, 3 failed check.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from . import library as lib

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3

CONSTRUCTIONS = (
    "lemma-ext", "markov-to-k", "nce", "sigma2", "dense", "friedberg-cantor", "notsigma2",
    "friedberg-order", "nbar-friedberg", "anti-enum", "adversary-converter",
    "adversary-learner", "relative-k", "sierp-ob", "cantor-ob-g",
)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def number(text: str) -> int:
    """Naturals written as 100000 or 1e5."""
    try:
        v = float(text) if any(c in text for c in "eE.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v < 0 or v != int(v):
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return int(v)


def _jsonable(x):
    from .spaces import INF
    if x is INF:
        return "inf"
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


class Trace:
    """Header line, then one event per line; stages must not decrease."""

    def __init__(self, stream, config: dict):
        self.stream = stream
        self.stage = 0
        self._write({"config": _jsonable(config), "version": __version__})

    def _write(self, obj):
        self.stream.write(json.dumps(obj, sort_keys=True) + "\n")

    def event(self, stage: int, event: str, data: dict | None = None):
        stage = max(int(stage), self.stage)
        self.stage = stage
        self._write({"stage": stage, "event": event, "data": _jsonable(data or {})})


@contextmanager
def _open_trace(args, config):
    if args.out:
        with open(args.out, "w") as fh:
            yield Trace(fh, config)
    else:
        yield Trace(sys.stdout, config)


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",) and v is not None}


def _oracle(text: str):
    from .constructions.core import OracleIface
    if text == "exact":
        return None
    if text.startswith("bounded:"):
        return OracleIface.bounded(number(text.split(":", 1)[1]))
    raise ConfigError(f"--oracle must be exact or bounded:<s>, got {text!r}")


def _program(args) -> int:
    from .godel.terms import parse
    if getattr(args, "program", None) is not None:
        return parse(args.program).code
    if getattr(args, "file", None) is not None:
        return parse(Path(args.file).read_text()).code
    if getattr(args, "index", None) is not None:
        return args.index
    raise ConfigError("give a program with -p TEXT, -f FILE or -e INDEX")


def _point(args, default: str):
    from .spaces import parse_point
    return parse_point(args.point or default)


def _A(text: str | None) -> int:
    """Curated c.e. index sets: empty, everything, zero-in, or code:N."""
    from .suites import zero_in_A
    text = text or "zero-in"
    table = {"empty": lib.NOWHERE, "everything": lib.EVERYWHERE}
    if text in table:
        return table[text]
    if text == "zero-in":
        return zero_in_A()
    if text.startswith("code:"):
        return number(text[5:])
    raise ConfigError(f"unknown A descriptor {text!r}")


# -- program-level commands -----------------------------------------------------------

def cmd_eval(args) -> int:
    from .godel.machine import Halted, evaluate
    e = _program(args)
    with _open_trace(args, _config(args)) as tr:
        r = evaluate(e, args.n, args.fuel)
        if isinstance(r, Halted):
            tr.event(r.steps, "halted", {"value": r.value, "steps": r.steps})
            return EXIT_OK
        tr.event(args.fuel, "out-of-fuel", {"fuel": args.fuel})
        return EXIT_BUDGET


def cmd_smn(args) -> int:
    from .godel.machine import Halted, evaluate, smn
    e = _program(args)
    with _open_trace(args, _config(args)) as tr:
        idx = smn(e, args.x)
        tr.event(0, "smn", {"index": idx})
        if args.n is None:
            return EXIT_OK
        r = evaluate(idx, args.n, args.fuel)
        if isinstance(r, Halted):
            tr.event(r.steps, "halted", {"value": r.value, "steps": r.steps})
            return EXIT_OK
        tr.event(args.fuel, "out-of-fuel", {"fuel": args.fuel})
        return EXIT_BUDGET


def _range(text: str) -> range:
    lo, _, hi = text.partition("..")
    try:
        return range(int(lo), int(hi or lo) + 1)
    except ValueError:
        raise ConfigError(f"--probe expects a..b, got {text!r}") from None


def cmd_fixpoint(args) -> int:
    from .godel.machine import Halted, evaluate
    from .recursion import NonTotalTransformer, fixed_point
    f = _program(args)
    with _open_trace(args, _config(args)) as tr:
        try:
            e = fixed_point(f, ceiling=args.fuel)
        except NonTotalTransformer as exc:
            tr.event(args.fuel, "out-of-fuel", {"message": str(exc)})
            return EXIT_BUDGET
        target = evaluate(f, e, args.fuel).value
        tr.event(0, "fixed-point", {"index": e, "transformed": target})
        status = EXIT_OK
        for n in _range(args.probe):
            a, b = evaluate(e, n, args.fuel), evaluate(target, n, args.fuel)
            val = lambda r: r.value if isinstance(r, Halted) else None  # noqa: E731
            tr.event(0, "probe", {"n": n, "fixed": val(a), "transformed": val(b)})
        return status


# -- constructions ------------------------------------------------------------------

def _stages(limit: int):
    from .constructions.core import checkpoint
    j = 0
    while checkpoint(j) <= limit:
        yield checkpoint(j)
        j += 1


def _verdict(tr, v, extra: dict | None = None) -> int:
    data = {"verdict": type(v).__name__, **v.detail, **(extra or {})}
    data.pop("F", None)
    tr.event(getattr(v, "stage", getattr(v, "budget", 0)), "summary", data)
    return EXIT_OK if v else EXIT_BUDGET


def _emit_stages(tr, staged, limit):
    seen = set()
    for s in _stages(limit):
        new = staged.emit(s) - seen
        if new:
            tr.event(s, "emit", {"codes": sorted(new)})
            seen |= new
    return seen


def construct(args, tr) -> int:
    from . import constructions as C
    from .spaces import Type2Name
    from .suites import FRIEDBERG_POINTS, friedberg_numbering
    cid = args.id
    k = 2 if args.k is None else args.k
    budget = args.budget
    if cid == "lemma-ext":
        seen = _emit_stages(tr, C.lemma_ext_Uk(_A(args.A), k), args.stages)
        tr.event(args.stages, "summary", {"emitted": len(seen)})
        return EXIT_OK
    if cid == "nce":
        from .godel import lang as L
        x = L.var("x")
        A1 = L.function(["x"], L.let("_a", L.univ(x, 0), L.univ(x, 1))).code
        for i, U in enumerate(C.nce_family([_A(args.A), A1], k)):
            seen = _emit_stages(tr, U, args.stages)
            tr.event(args.stages, "level", {"level": i + 1, "emitted": len(seen)})
        tr.event(args.stages, "summary", {"levels": 2})
        return EXIT_OK
    if cid in ("markov-to-k", "nbar-friedberg", "dense", "friedberg-order"):
        num = friedberg_numbering()
        I = C.MARKOV_SEMIDECIDER if args.A is None else _A(args.A)
        if cid == "markov-to-k":
            sp, p = _point(args, "nbar:inf")
            sem = C.markov_to_k_semidecider(I, sp.id, num)
            return _verdict(tr, sem.run(k, Type2Name.of_point(sp, p), budget))
        if cid == "nbar-friedberg":
            from .spaces import markov_name_of
            sp, p = _point(args, "nbar:inf")
            sem = C.nbar_friedberg(C.curated_order, args.mode)
            if args.mode == "Markov":
                v = sem.run(Type2Name.of_point(sp, p), index=markov_name_of(sp, p), budget=budget)
            else:
                v = sem.run(Type2Name.of_point(sp, p), m=k, budget=budget)
            return _verdict(tr, v)
        if cid == "dense":
            return _verdict(tr, C.dense_sequence(I, "nbar", num).nonempty(budget))
        h = C.friedberg_order(I, num, budget)
        for n in range(10):
            tr.event(0, "order", {"n": n, "h": h(n)})
        tr.event(0, "summary", {"p": h._p})
        return EXIT_OK
    if cid == "sigma2":
        from .spaces import StagedSet, parse_point
        i = args.e if args.e is not None else lib.finite_set_program(frozenset({4, 5}))
        P = [StagedSet(lib.EVERYWHERE)] * 3
        pairs = C.sigma2_builder(P, P, i, k)
        for txt in ("nbar:0", "nbar:1", "nbar:2", "nbar:3", "nbar:inf"):
            _, p = parse_point(txt)
            tr.event(args.stages, "member", {"point": txt, "in_C": pairs.in_C(p, args.stages, 6)})
        tr.event(args.stages, "summary", {"i": i})
        return EXIT_OK
    if cid == "friedberg-cantor":
        sp, p = _point(args, "cantor:0^w")
        return _verdict(tr, C.friedberg_cantor(k, Type2Name.of_point(sp, p), budget))
    if cid == "notsigma2":
        sp, p = _point(args, "cantor:0^w")
        c0 = C.calibrate_c0()
        return _verdict(tr, C.notsigma2_semidecider(k, Type2Name.of_point(sp, p), c0, budget),
                        {"c0": c0})
    if cid == "anti-enum":
        spec = args.list or "tails:5"
        if not spec.startswith("tails:"):
            raise ConfigError(f"--list expects tails:N, got {spec!r}")
        n = number(spec[6:])
        ae, ws = C.anti_enumeration([C.tail_semidecider(i) for i in range(n)], budget=budget)
        for i, w in enumerate(ws):
            tr.event(0, "witness", {"i": i, "found": w is not None,
                                    **({"x": w.observed["x"], "digest": w.digest()} if w else {})})
        tr.event(ae.meter.spent, "summary", {"witnesses": sum(w is not None for w in ws)})
        return EXIT_OK if all(ws) else EXIT_BUDGET
    if cid == "adversary-converter":
        cands = {"constant": C.ConstantConverter(lib.constant_program(0)),
                 "one-then-zeros": C.OneThenZerosConverter(),
                 "first-consistent": C.FirstConsistentConverter(),
                 "overreader": C.Overreader()}
        return _adversary(tr, C.converter_adversary(_pick(cands, args.candidate, "constant"),
                                                    budget=min(budget, 10 ** 6)))
    if cid == "adversary-learner":
        cands = {"seen-so-far": C.SeenSoFarLearner(),
                 "constant": C.ConstantLearner(lib.EVERYWHERE)}
        return _adversary(tr, C.learner_adversary(_pick(cands, args.candidate, "seen-so-far"),
                                                  v=args.v, budget=min(budget, 10 ** 4)))
    if cid == "relative-k":
        from .constructions.core import Accepted
        universe = C.curated_universe()
        H = _oracle(args.oracle) or C.exact_universe_oracle(universe)
        sp, p = _point(args, "cantor:0^w")
        v = C.relative_k_semidecider(C.zero_sequence_semidecider, H, Type2Name.of_point(sp, p),
                                     min(k, len(universe) - 1), [q.code for q in universe],
                                     max_stage=args.stages)
        tr.event(getattr(v, "stage", args.stages), "summary",
                 {"verdict": type(v).__name__, "oracle": H.mode, **v.detail})
        return EXIT_OK if isinstance(v, Accepted) else EXIT_BUDGET
    if cid in ("sierp-ob", "cantor-ob-g"):
        if cid == "sierp-ob":
            from .spaces import TOP
            if args.e is not None:
                e = args.e
            else:
                _, p = _point(args, "sierp:bot")
                e = 3 if p == TOP else lib.NOWHERE
            U = C.sierp_to_OB(e)
        else:
            sp, p = _point(args, "cantor:0^w")
            U = C.cantor_to_OB_G(Type2Name.of_point(sp, p), k,
                                 [q.code for q in C.curated_universe()])
        got = U.emit(args.stages, 2, 4)
        tr.event(args.stages, "emit", {"cylinders": sorted(got)})
        tr.event(args.stages, "summary", {"emitted": len(got), "window": "depth<=2,values<4"})
        return EXIT_OK
    raise ConfigError(f"unknown construction {cid!r}")


def _pick(table, name, default):
    name = name or default
    if name not in table:
        raise ConfigError(f"unknown candidate {name!r}; choose from {sorted(table)}")
    return table[name]


def _adversary(tr, outcome) -> int:
    from .constructions.core import RefutationWitness
    if isinstance(outcome, RefutationWitness):
        tr.event(0, "witness", {"scenario": outcome.scenario, "violated": outcome.violated,
                                "digest": outcome.digest(), "inputs": outcome.inputs,
                                "observed": outcome.observed})
        return EXIT_OK
    tr.event(int(outcome.budget), "budget-report", {"note": outcome.note})
    return EXIT_BUDGET


def cmd_construct(args) -> int:
    with _open_trace(args, _config(args)) as tr:
        return construct(args, tr)


def cmd_check(args) -> int:
    from .suites import SUITES, run_suite
    if args.suite != "all" and args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    checks = run_suite(args.suite)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for c in checks:
            out.write(c.line() + "\n")
        failed = sum(not c.ok for c in checks)
        out.write(f"{len(checks) - failed}/{len(checks)} passed\n")
    finally:
        if args.out:
            out.close()
    if args.report:
        report = {"suite": args.suite, "version": __version__,
                  "checks": [{"suite": c.suite, "name": c.name, "ok": c.ok,
                              "detail": _jsonable(c.detail)} for c in checks]}
        Path(args.report).write_text(json.dumps(report, sort_keys=True, indent=1) + "\n")
    return EXIT_CHECK if failed else EXIT_OK


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cwb", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--fuel", type=number, default=10 ** 5)
        sp.add_argument("--budget", type=number, default=10 ** 6)
        sp.add_argument("--stages", type=number, default=10 ** 4)
        sp.add_argument("--k", type=number)
        sp.add_argument("--oracle", default="exact")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int, default=0)

    def program(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("-p", "--program", help="program text, e.g. \"(comp succ id)\"")
        g.add_argument("-f", "--file", help="file holding program text")
        g.add_argument("-e", "--index", type=number, help="program code")

    sp = sub.add_parser("eval", help="run a program on an argument")
    program(sp)
    sp.add_argument("-n", type=number, default=0)
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("smn", help="specialise the first argument of a program")
    program(sp)
    sp.add_argument("-x", type=number, required=True)
    sp.add_argument("-n", type=number)
    common(sp)
    sp.set_defaults(func=cmd_smn)

    sp = sub.add_parser("fixpoint", help="fixed point of a total index transformer")
    program(sp)
    sp.add_argument("--probe", default="0..10")
    common(sp)
    sp.set_defaults(func=cmd_fixpoint)

    sp = sub.add_parser("construct", help="run a construction and trace it")
    sp.add_argument("id", choices=CONSTRUCTIONS)
    sp.add_argument("--point")
    sp.add_argument("--A")
    sp.add_argument("--list")
    sp.add_argument("--mode", choices=("K", "Markov"), default="K")
    sp.add_argument("--candidate")
    sp.add_argument("--v", type=number, default=5)
    sp.add_argument("-e", type=number)
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("check", help="run an acceptance suite")
    sp.add_argument("suite")
    sp.add_argument("--report")
    common(sp)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    from .godel.terms import ParseError
    from .spaces import PointError
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, PointError, ConfigError, OSError) as exc:
        print(f"cwb: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())

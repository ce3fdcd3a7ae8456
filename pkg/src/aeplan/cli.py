"""Command-line front end: ``aeplan <subcommand> ...``.

Exit codes: 0 affirmative/success, 1 negative verdict, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import checker, domain, ltl, quantifier, samples, synth


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def parse_letters(text: str) -> list[frozenset[str]]:
    """``"{p,q} {} {q}"`` -> three letters."""
    out = []
    text = text.strip()
    while text:
        if not text.startswith("{") or "}" not in text:
            raise UsageError(f"letters must look like '{{p,q}}', got {text!r}")
        body, text = text[1:].split("}", 1)
        out.append(frozenset(a.strip() for a in body.split(",") if a.strip()))
        text = text.strip()
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_normalize(args) -> int:
    c = quantifier.normalize(quantifier.parse_quantifier(args.quantifier))
    _emit(args, {"input": args.quantifier, "canonical": str(c)}, str(c))
    return 0


def cmd_implies(args) -> int:
    a = quantifier.normalize(args.a)
    b = quantifier.normalize(args.b)
    verdict = quantifier.implies(a, b)
    _emit(args, {"a": str(a), "b": str(b), "implies": verdict}, str(verdict).lower())
    return 0 if verdict else 1


def cmd_eval(args) -> int:
    f = ltl.parse_ltl(args.formula)
    w = ltl.LassoWord(parse_letters(args.stem), parse_letters(args.loop))
    verdict = ltl.eval_lasso(f, w, args.at)
    _emit(args, {"formula": ltl.to_string(f), "position": args.at, "value": verdict}, str(verdict).lower())
    return 0 if verdict else 1


def _load_domain(path: str) -> domain.PlanningDomain:
    d = domain.parse_domain(_read(path))
    problems = domain.validate(d)
    if problems:
        raise UsageError("invalid domain: " + "; ".join(problems))
    return d


def cmd_check(args) -> int:
    d = _load_domain(args.domain)
    p = domain.parse_plan(_read(args.plan))
    result = checker.check(d, p, checker.parse_goal(args.goal, d.atoms, d.macros))
    if args.json:
        print(result.to_json())
    else:
        print(f"{str(result.verdict).lower()} ({result.canonical})")
    return 0 if result.verdict else 1


def cmd_synth(args) -> int:
    d = _load_domain(args.domain)
    goal = checker.parse_goal(args.goal, d.atoms, d.macros)
    try:
        result = synth.synthesize(d, goal, max_nodes=args.memory_cap)
    except synth.GameTooLarge as exc:
        raise UsageError(str(exc)) from None
    if args.emit_game:
        win = set(result.game.nodes) - result.losing
        Path(args.emit_game).write_text(result.game.dump(win) + "\n", encoding="utf-8")
    plan_text = domain.format_plan(result.plan, d) if result.plan else None
    if plan_text is not None and args.out:
        _write(args.out, plan_text)
    if args.json:
        print(json.dumps(result.summary(args.out if plan_text else None), sort_keys=True))
    elif result.solvable:
        if args.out:
            print(f"solvable; plan written to {args.out}")
        else:
            sys.stdout.write(plan_text)
    else:
        print("unsatisfiable")
    return 0 if result.solvable else 1


def cmd_gen(args) -> int:
    plan = None
    if args.kind == "blocks":
        d = domain.gen_blocks_world()
    elif args.kind == "bintree":
        d = domain.gen_binary_tree()
        plan = domain.memoryless_plan({s: "step" for s in d.states})
    elif args.kind == "realizability":
        if not args.sigma:
            raise UsageError("gen realizability needs --sigma a,b,...")
        d = domain.gen_realizability(x.strip() for x in args.sigma.split(","))
    else:
        rng = random.Random(args.seed)
        d = samples.random_domain(rng, args.states, args.actions)
    _write(args.out, domain.format_domain(d))
    if args.plan_out:
        if plan is None:
            raise UsageError("--plan-out is only available for bintree")
        _write(args.plan_out, domain.format_plan(plan, d))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aeplan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = common(sub.add_parser("normalize", help="canonical form of a path quantifier"))
    p.add_argument("quantifier")
    p.set_defaults(run=cmd_normalize)

    p = common(sub.add_parser("implies", help="does quantifier A entail quantifier B"))
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_implies)

    p = common(sub.add_parser("eval", help="evaluate an LTL formula on a lasso word"))
    p.add_argument("formula")
    p.add_argument("--stem", default="", help="letters such as '{p,q} {}'")
    p.add_argument("--loop", required=True)
    p.add_argument("--at", type=int, default=0, help="position (default 0)")
    p.set_defaults(run=cmd_eval)

    p = common(sub.add_parser("check", help="check a plan against a goal"))
    p.add_argument("--domain", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--goal", required=True, help="e.g. 'AE . F tower'")
    p.set_defaults(run=cmd_check)

    p = common(sub.add_parser("synth", help="synthesize a plan for a goal"))
    p.add_argument("--domain", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--out", help="write the plan here")
    p.add_argument("--emit-game", help="dump the synthesis game here")
    p.add_argument("--memory-cap", type=int, help="give up when the game exceeds N nodes")
    p.set_defaults(run=cmd_synth)

    p = sub.add_parser("gen", help="write an example domain")
    p.add_argument("kind", choices=["blocks", "bintree", "realizability", "random"])
    p.add_argument("--out", help="domain file (default stdout)")
    p.add_argument("--plan-out", help="also write the unique plan (bintree)")
    p.add_argument("--sigma", help="alphabet for realizability, comma separated")
    p.add_argument("--seed", type=int, default=0, help="seed for 'random'")
    p.add_argument("--states", type=int, default=4, help="at most N states")
    p.add_argument("--actions", type=int, default=2, help="at most N actions")
    p.set_defaults(run=cmd_gen)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.run(args)
    except (
        UsageError,
        ltl.LTLSyntaxError,
        quantifier.QuantifierSyntaxError,
        checker.GoalSyntaxError,
        checker.AtomMismatch,
        domain.DomainError,
        ValueError,
    ) as exc:
        print(f"aeplan {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

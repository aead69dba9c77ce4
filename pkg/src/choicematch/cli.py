"""Command line interface.

Exit codes: 0 success (holds / stable), 1 violated or unstable, 2 usage or
input errors, 3 exhausted budgets and non-termination diagnoses.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import core
from .core import load_any, load_market, load_matching, save_market
from .errors import (
    BudgetExceeded,
    ChoicematchError,
    LoadError,
    NonTermination,
    ParseError,
    PreconditionFailed,
    UniverseTooLarge,
    UnknownAgent,
)
from . import axioms as ax
from .individual import enumerate_strongly_maximal_ir, gda
from .many2many import enumerate_cy_stable, gdma, is_cy_stable
from .one2one import daa, is_r_stable
from .genlab import GenSpec, PROFILES, gen_market

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def fmt_set(ids):
    return "{%s}" % ",".join(sorted(ids))


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise LoadError("cannot read %s: %s" % (path, e.strerror)) from e


def _pick_table(args):
    """The table a single-agent command operates on."""
    kind, obj = load_any(_read(args.input))
    if kind == "table":
        if args.agent and args.agent != obj.agent:
            raise UnknownAgent("file defines agent %r, not %r" % (obj.agent, args.agent))
        return obj
    if not args.agent:
        raise UnknownAgent("market input needs --agent")
    return obj.table(args.agent)


def _load_market(args):
    kind, obj = load_any(_read(args.input))
    if kind != "market":
        raise LoadError("%s is a single-agent table, not a market" % args.input)
    return obj


class Printer:
    def __init__(self, out, as_json):
        self.out = out
        self.as_json = as_json
        self.doc = {}
        self.text = []

    def line(self, s):
        self.text.append(s)

    def set(self, key, value):
        self.doc[key] = value

    def flush(self):
        if self.as_json:
            self.out.write(json.dumps(self.doc, ensure_ascii=False, indent=2) + "\n")
        else:
            for s in self.text:
                self.out.write(s + "\n")


def cmd_validate(args, p):
    text = _read(args.input)
    doc = core._parse_json(text)
    issues = []
    if isinstance(doc, dict) and "universe" in doc:
        try:
            core.load_table(text)
        except LoadError as e:
            if e.report is None:
                raise
            issues = e.report.lines()
    else:
        _, report = load_market(text, strict=False)
        issues = report.lines()
    p.set("command", "validate")
    p.set("ok", not issues)
    p.set("issues", issues)
    if issues:
        p.line("invalid")
        for s in issues:
            p.line("  " + s)
        return EXIT_VIOLATED
    p.line("ok")
    return EXIT_OK


_AXIOM_NAMES = ("sub", "con", "pi", "ga", "ba")


def cmd_axioms(args, p):
    table = _pick_table(args)
    names = list(_AXIOM_NAMES) if args.axiom == "all" else [args.axiom]
    single = {"sub": ax.check_sub, "con": ax.check_con, "pi": ax.check_pi,
              "ba": ax.check_ba}
    results = []
    for name in names:
        if name == "ga":
            results.append(("ga_graph", ax.check_ga_graph(table)))
            results.append(("ga_chain", ax.check_ga_chain(table, max_k=args.max_k)))
        else:
            results.append((name, single[name](table)))
    p.set("command", "axioms")
    p.set("agent", table.agent)
    p.set("verdicts", [dict(v.to_dict(), checker=label) for label, v in results])
    code = EXIT_OK
    for label, v in results:
        extra = ""
        if v.bound is not None:
            extra = " bound=%d" % v.bound
        if v.witness is not None:
            extra += " witness=%s" % json.dumps(
                v.witness.to_dict(), ensure_ascii=False, sort_keys=True
            )
        p.line("%s: %s%s" % (label, v.status, extra))
        if v.violated:
            code = EXIT_VIOLATED
    return code


def cmd_gda(args, p):
    table = _pick_table(args)
    result, trace = gda(table, step_budget=args.budget)
    p.set("command", "gda")
    p.set("agent", table.agent)
    p.set("result", sorted(result))
    p.line("result=%s" % fmt_set(result))
    if args.trace:
        p.set("trace", [s.line() for s in trace])
        for s in trace:
            p.line(s.line())
    return EXIT_OK


def cmd_gdma(args, p):
    market = _load_market(args)
    matching, trace = gdma(market, budget=args.budget)
    p.set("command", "gdma")
    p.set("matching", sorted(matching))
    p.line("matching=%s" % fmt_set(matching))
    if args.trace:
        p.set("trace", trace.lines())
        for s in trace.lines():
            p.line(s)
    return EXIT_OK


def cmd_daa(args, p):
    market = _load_market(args)
    matching, orders, rounds = daa(market, proposers=args.proposers)
    p.set("command", "daa")
    p.set("matching", sorted(matching))
    p.set("orders", {a: orders[a].to_lists() for a in sorted(orders)})
    p.line("matching=%s" % fmt_set(matching))
    if args.trace:
        p.set("trace", [r.line() for r in rounds])
        for r in rounds:
            p.line(r.line())
    return EXIT_OK


def cmd_verify(args, p):
    market = _load_market(args)
    nu = load_matching(_read(args.matching), market)
    p.set("command", "verify")
    p.set("notion", args.notion)
    p.set("matching", sorted(nu))
    if args.notion == "cy":
        stable, witness = is_cy_stable(market, nu, method=args.method)
        wdoc = None
        if witness is not None:
            wdoc = witness if isinstance(witness, str) else witness.to_dict()
    else:
        stable, witness = is_r_stable(market, nu)
        wdoc = witness
    p.set("stable", stable)
    p.set("witness", wdoc)
    if stable:
        p.line("stable=true")
        return EXIT_OK
    if isinstance(wdoc, str):
        p.line("stable=false witness=%s" % wdoc)
    else:
        p.line(
            "stable=false witness=%s"
            % json.dumps(wdoc, ensure_ascii=False, sort_keys=True)
        )
    return EXIT_VIOLATED


def cmd_enumerate(args, p):
    p.set("command", "enumerate")
    p.set("target", args.target)
    if args.target == "sm-ir":
        table = _pick_table(args)
        sets = enumerate_strongly_maximal_ir(table)
    else:
        market = _load_market(args)
        sets = enumerate_cy_stable(market)
    p.set("count", len(sets))
    p.set("sets", [sorted(s) for s in sets])
    p.line("count=%d" % len(sets))
    for s in sets:
        p.line(fmt_set(s))
    return EXIT_OK


def cmd_gen(args, p):
    spec = GenSpec(
        seed=args.seed,
        profile=args.profile,
        firms=args.firms,
        workers=args.workers,
        density=args.density,
        firm_profile=args.firm_profile,
        worker_profile=args.worker_profile,
    )
    market, verdicts = gen_market(spec)
    text = save_market(market)
    sidecar = json.dumps(verdicts, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        with open(args.output + ".verdicts.json", "w", encoding="utf-8") as fh:
            fh.write(sidecar)
        p.set("command", "gen")
        p.set("output", args.output)
        p.set("contracts", len(market.contracts))
        p.line("wrote %s (%d contracts)" % (args.output, len(market.contracts)))
    else:
        p.set("command", "gen")
        p.set("market", json.loads(text))
        p.set("verdicts", json.loads(sidecar))
        p.line(text.rstrip("\n"))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="choicematch",
        description="Axiom checks and stable matchings for choice-based markets",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, help="check a market or table file")
    sp.add_argument("--input", required=True)

    sp = add("axioms", cmd_axioms, help="run axiom checkers on one agent's table")
    sp.add_argument("--input", required=True)
    sp.add_argument("--agent")
    sp.add_argument("--axiom", choices=("all",) + _AXIOM_NAMES, default="all")
    sp.add_argument("--max-k", type=int, default=None)

    sp = add("gda", cmd_gda, help="grow-or-discard search for one agent")
    sp.add_argument("--input", required=True)
    sp.add_argument("--agent")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--trace", action="store_true")

    sp = add("gdma", cmd_gdma, help="dynamic many-to-many matching")
    sp.add_argument("--input", required=True)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--trace", action="store_true")

    sp = add("daa", cmd_daa, help="deferred acceptance over induced orders")
    sp.add_argument("--input", required=True)
    sp.add_argument("--proposers", choices=("firms", "workers"), default="firms")
    sp.add_argument("--trace", action="store_true")

    sp = add("verify", cmd_verify, help="verify a matching file")
    sp.add_argument("notion", choices=("cy", "r"))
    sp.add_argument("--input", required=True)
    sp.add_argument("--matching", required=True)
    sp.add_argument("--method", choices=("reference", "single-firm"), default="reference")

    sp = add("enumerate", cmd_enumerate, help="list strongly maximal or stable sets")
    sp.add_argument("target", choices=("sm-ir", "cy-stable"))
    sp.add_argument("--input", required=True)
    sp.add_argument("--agent")

    sp = add("gen", cmd_gen, help="generate a market with a known profile")
    sp.add_argument("--profile", choices=PROFILES, default="PI")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--firms", type=int, default=2)
    sp.add_argument("--workers", type=int, default=2)
    sp.add_argument("--density", type=int, default=100)
    sp.add_argument("--firm-profile", choices=PROFILES, default=None)
    sp.add_argument("--worker-profile", choices=PROFILES, default=None)
    sp.add_argument("--output")
    return parser


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    p = Printer(out, args.format == "json")
    try:
        code = args.fn(args, p)
    except (ParseError, LoadError, UnknownAgent, UniverseTooLarge, PreconditionFailed,
            ValueError) as e:
        err.write("error: %s\n" % e)
        return EXIT_USAGE
    except NonTermination as e:
        err.write("non-termination: %s\n" % e)
        err.write("cycle: %s\n" % " -> ".join(fmt_set(s) for s in e.cycle))
        return EXIT_BUDGET
    except BudgetExceeded as e:
        err.write("budget exceeded: %s\n" % e)
        return EXIT_BUDGET
    except ChoicematchError as e:
        err.write("error: %s\n" % e)
        return EXIT_USAGE
    p.set("exit_code", code)
    p.flush()
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

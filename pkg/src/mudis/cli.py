"""Command-line front end: ``mudis <command> ...``.

Exit codes: 0 success, 1 semantic failure, 2 input error, 3 resource budget.
"""

import argparse
import json
import os
import sys
import time

from . import modal_automaton, parity_formula, simulation, syntax, transforms
from .games import ArenaTooLarge
from .kripke import dump_model, eval_naive, load_model, random_pointed_models

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# input

def read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def parse_formula_text(text):
    """Formula text with ``#`` comment lines allowed."""
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    return syntax.parse(body)


def load_formula(path):
    return parse_formula_text(read_text(path))


def load_parity(path):
    """A parity formula from a ``.mu`` file or from parity formula JSON."""
    text = read_text(path)
    if text.lstrip().startswith("{"):
        return parity_formula.from_json(text)
    return transforms.to_parity(parse_formula_text(text))


def corpus_files(directory):
    return sorted(os.path.join(directory, f) for f in os.listdir(directory) if f.endswith(".mu"))


def model_props(phi):
    props = sorted(syntax.propositions(phi))
    return props or ["p"]


# --------------------------------------------------------------------------
# routes and reports

ROUTES = ("to_parity", "simulation", "wreath", "disjunctive")


def build_routes(phi, max_states=simulation.DEFAULT_MAX_STATES):
    """Predicates on pointed models, one per translation route, plus the
    objects they were built from."""
    g = transforms.to_parity(phi)
    sim = simulation.build_simulation(g, max_states=max_states)
    wreath = simulation.wreath_product(sim, max_states=max_states)
    disj = transforms.from_automaton(wreath)
    assert parity_formula.is_disjunctive(disj)
    preds = {
        "to_parity": lambda pm: parity_formula.holds(g, pm),
        "simulation": lambda pm: simulation.accepts(sim, pm),
        "wreath": lambda pm: modal_automaton.accepts(wreath, pm),
        "disjunctive": lambda pm: parity_formula.holds(disj, pm),
    }
    built = {"parity": g, "simulation": sim, "wreath": wreath, "disjunctive": disj}
    return preds, built


def differential(phi, models, routes):
    """Compare every route with direct evaluation; returns the number of
    agreements and the first disagreement (or ``None``)."""
    agree = 0
    for pm in models:
        expected = pm.point in eval_naive(phi, pm.model)
        for name, pred in routes.items():
            if pred(pm) != expected:
                return agree, {"route": name, "expected": expected,
                               "model": json.loads(dump_model(pm.model, pm.point))}
        agree += 1
    return agree, None


def cmd_equiv_suite(directory, models=200, seed=0, route_builder=build_routes,
                    max_states=simulation.DEFAULT_MAX_STATES):
    """End-to-end agreement of all routes over every ``.mu`` file."""
    files = corpus_files(directory)
    report = {"corpus": directory, "models": models, "seed": seed, "items": [],
              "status": "PASS", "warnings": []}
    if not files:
        report["warnings"].append("empty corpus")
    for path in files:
        start = time.perf_counter()
        phi = load_formula(path)
        preds, built = route_builder(phi, max_states=max_states)
        pms = random_pointed_models(seed, models, model_props(phi))
        agree, witness = differential(phi, pms, preds)
        item = {"file": os.path.basename(path), "formula": syntax.to_text(phi),
                "size": syntax.size(phi), "alternation_depth": syntax.alternation_depth(phi),
                "agree": agree, "checked": models,
                "seconds": round(time.perf_counter() - start, 3)}
        if "simulation" in built:
            item["stats"] = dict(built["simulation"].stats)
        if witness is not None:
            item["witness"] = witness
            report["status"] = "FAIL"
        report["items"].append(item)
    return report


def naive_route(g, max_states):
    """Guard, go to an automaton and back, then simulate: the two-stage
    route, kept only for size comparison."""
    aut = transforms.to_automaton(g)
    back = transforms.from_automaton(aut)
    sim = simulation.build_simulation(back, max_states=max_states)
    return aut, back, sim


def cmd_baseline_compare(phi, max_states=1 << 16):
    """Sizes reached by the direct route and by the two-stage route."""
    g = transforms.to_parity(phi)
    row = {"formula": syntax.to_text(phi), "size": syntax.size(phi),
           "guarded": parity_formula.guard_report(g).verdict}
    direct = simulation.build_simulation(g, max_states=max_states)
    row["direct_states"] = len(direct.states)
    row["direct_size"] = direct.stats["size"]
    try:
        aut, back, naive = naive_route(g, max_states)
    except simulation.SimulationBudgetExceeded:
        row.update(naive_states=None, naive_exceeded=True)
        return row
    row["guarded_automaton_states"] = len(aut.states)
    row["guarded_formula_size"] = back.n
    row["naive_states"] = len(naive.states)
    row["naive_size"] = naive.stats["size"]
    row["naive_exceeded"] = False
    return row


def baseline_family(j):
    """Unguarded family with ``j`` fixpoint states: binders of alternating
    kind, innermost greatest, over ``(x1 & <>x1) | ... | (xj & <>xj)``."""
    if j < 1:
        raise ValueError("family index must be positive")
    kinds = ["nu" if (j - i) % 2 == 0 else "mu" for i in range(1, j + 1)]
    binders = "".join("%s x%d." % (kind, i) for i, kind in enumerate(kinds, 1))
    body = " \\/ ".join("(x%d /\\ <>x%d)" % (i, i) for i in range(1, j + 1))
    return syntax.parse("%s(%s)" % (binders, body))


def cmd_baseline_series(indices, max_states=1 << 16, family=baseline_family):
    """Baseline rows over a formula family with the gap between the naive
    and the direct state counts, and whether both grow as required."""
    rows = []
    for j in indices:
        row = cmd_baseline_compare(family(j), max_states=max_states)
        row["index"] = j
        if row["naive_states"] is not None:
            row["gap"] = row["naive_states"] - row["direct_states"]
        rows.append(row)
    complete = all(r["naive_states"] is not None for r in rows)
    gaps = [r.get("gap") for r in rows]
    steps = list(zip(rows, rows[1:]))
    monotone = complete and all(a < b for a, b in zip(gaps, gaps[1:]))
    faster = complete and all(
        b["naive_states"] - a["naive_states"] > b["direct_states"] - a["direct_states"]
        for a, b in steps)
    return {"rows": rows, "monotone_gap": monotone, "naive_grows_faster": faster}


def _stats_report(**values):
    return json.dumps(values, indent=2, sort_keys=True, default=str)


# --------------------------------------------------------------------------
# commands

def _emit(args, text, dot=None):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.dot and dot is not None:
        with open(args.dot, "w") as fh:
            fh.write(dot + "\n")


def run_parse(args):
    phi = load_formula(args.input)
    out = {"formula": syntax.to_text(phi), "size": syntax.size(phi),
           "alternation_depth": syntax.alternation_depth(phi),
           "propositions": sorted(syntax.propositions(phi))}
    _emit(args, json.dumps(out) if args.json else out["formula"])


def run_to_parity(args):
    t0 = time.perf_counter()
    phi = load_formula(args.input)
    g = transforms.to_parity(phi)
    _emit(args, parity_formula.to_json(g), parity_formula.to_dot(g))
    if args.stats:
        print(_stats_report(closure_size=syntax.size(phi), vertices=g.n,
                            alternation_depth=syntax.alternation_depth(phi),
                            index=parity_formula.index(g),
                            seconds=time.perf_counter() - t0), file=sys.stderr)


def run_guard(args):
    t0 = time.perf_counter()
    g = load_parity(args.input)
    h = parity_formula.guard(g)
    _emit(args, parity_formula.to_json(h), parity_formula.to_dot(h))
    if args.stats:
        bound = 2 ** (1 + len(g.priority)) * g.n
        print(_stats_report(vertices_in=g.n, vertices_out=h.n, bound=bound,
                            slack=bound - h.n, index_in=parity_formula.index(g),
                            index_out=parity_formula.index(h),
                            verdict_in=parity_formula.guard_report(g).verdict,
                            verdict_out=parity_formula.guard_report(h).verdict,
                            seconds=time.perf_counter() - t0), file=sys.stderr)


def run_to_automaton(args):
    t0 = time.perf_counter()
    g = load_parity(args.input)
    aut = transforms.to_automaton(g)
    _emit(args, modal_automaton.to_json(aut))
    if args.stats:
        n_states, n_size, ind = modal_automaton.automaton_size(aut)
        print(_stats_report(vertices=g.n, states=n_states, size=n_size, index=ind,
                            state_bound=2 ** (1 + len(g.priority)) * g.n,
                            seconds=time.perf_counter() - t0), file=sys.stderr)


def run_disjunctive(args):
    t0 = time.perf_counter()
    g = load_parity(args.input)
    sim = simulation.build_simulation(g, max_states=args.max_states)
    wreath = simulation.wreath_product(sim, max_states=args.max_states)
    d = transforms.from_automaton(wreath)
    _emit(args, parity_formula.to_json(d), parity_formula.to_dot(d))
    if args.stats:
        st = sim.stats
        n, k, l = st["n"], st["k"], st["letters"]
        print(_stats_report(
            reachable_macrostates=st["states"], macrostate_bound="2^%d" % (n * n * k),
            max_theta=st["max_theta"], theta_bound=n * 2 ** n,
            table_size=st["table_size"], table_bound="%d*2^%d" % (n, n * n * k + l + n),
            dpw_states=st["dpw_states"], wreath_states=st["wreath_states"],
            wreath_index=st["wreath_index"],
            wreath_index_bound=st["wreath_index_bound"],
            output_vertices=d.n, output_index=parity_formula.index(d),
            seconds=time.perf_counter() - t0), file=sys.stderr)


def run_check(args):
    g = load_parity(args.formula)
    pm = load_model(read_text(args.model))
    print("holds" if parity_formula.holds(g, pm) else "fails")


def run_equiv(args):
    f1, f2 = load_formula(args.first), load_formula(args.second)
    props = sorted(set(model_props(f1)) | set(model_props(f2)))
    g1, g2 = transforms.to_parity(f1), transforms.to_parity(f2)
    for i, pm in enumerate(random_pointed_models(args.seed, args.models, props)):
        a, b = parity_formula.holds(g1, pm), parity_formula.holds(g2, pm)
        if a != b:
            out = {"status": "FAIL", "model_index": i, "first": a, "second": b,
                   "model": json.loads(dump_model(pm.model, pm.point))}
            print(json.dumps(out) if args.json else "FAIL on model %d: %s" % (
                i, dump_model(pm.model, pm.point)))
            return EXIT_FAIL
    print(json.dumps({"status": "PASS", "models": args.models}) if args.json
          else "PASS (%d models)" % args.models)
    return EXIT_OK


def run_suite(args):
    report = cmd_equiv_suite(args.corpus, args.models, args.seed, max_states=args.max_states)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for w in report["warnings"]:
            print("warning: %s" % w, file=sys.stderr)
        for item in report["items"]:
            flag = "ok" if "witness" not in item else "FAIL (%s)" % item["witness"]["route"]
            print("%-28s size %2d ad %d  %d/%d  %s" % (item["file"], item["size"],
                                                   item["alternation_depth"], item["agree"],
                                                   item["checked"], flag))
        print(report["status"])
    return EXIT_OK if report["status"] == "PASS" else EXIT_FAIL


def run_baseline(args):
    series = None
    if args.family:
        lo, hi = args.family
        series = cmd_baseline_series(range(lo, hi + 1), max_states=args.max_states)
        rows = series["rows"]
    else:
        if not args.inputs:
            raise InputError("give formula files or --family LO HI")
        rows = [cmd_baseline_compare(load_formula(p), max_states=args.max_states)
                for p in args.inputs]
    if args.json:
        print(json.dumps(series if series is not None else rows, indent=2))
    else:
        print("%-40s %5s %8s %8s %8s" % ("formula", "size", "direct", "guarded", "naive"))
        for r in rows:
            naive = "budget" if r["naive_exceeded"] else r["naive_states"]
            print("%-40s %5d %8d %8s %8s" % (r["formula"][:40], r["size"], r["direct_states"],
                                             r.get("guarded_automaton_states", "-"), naive))
        if series is not None:
            print("monotone gap: %s  naive grows faster: %s"
                  % (series["monotone_gap"], series["naive_grows_faster"]))


def make_parser():
    p = argparse.ArgumentParser(prog="mudis", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--stats", action="store_true", help="print a size and bound report")
    common.add_argument("--dot", metavar="PATH", help="also write a DOT rendering")
    common.add_argument("--max-states", type=int, default=simulation.DEFAULT_MAX_STATES)
    common.add_argument("--models", type=int, default=200)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", metavar="PATH")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in [
        ("parse", run_parse, "parse and normalise a formula"),
        ("to-parity", run_to_parity, "formula to parity formula JSON"),
        ("guard", run_guard, "strongly guarded equivalent parity formula"),
        ("to-automaton", run_to_automaton, "modal automaton JSON"),
        ("disjunctive", run_disjunctive, "equivalent disjunctive parity formula"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("input", nargs="?", default="-")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("check", parents=[common], help="model check a pointed model")
    sp.add_argument("formula")
    sp.add_argument("model")
    sp.set_defaults(func=run_check)
    sp = sub.add_parser("equiv", parents=[common], help="compare two formulas on random models")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(func=run_equiv)
    sp = sub.add_parser("suite", parents=[common], help="end-to-end check over a corpus")
    sp.add_argument("corpus")
    sp.set_defaults(func=run_suite)
    sp = sub.add_parser("baseline", parents=[common], help="direct versus two-stage sizes")
    sp.add_argument("inputs", nargs="*")
    sp.add_argument("--family", nargs=2, type=int, metavar=("LO", "HI"),
                    help="use the built-in unguarded family for indices LO..HI")
    sp.set_defaults(func=run_baseline, max_states=1 << 16)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (InputError, syntax.ParseError, syntax.PositivityError,
            parity_formula.InvalidFormula, json.JSONDecodeError, KeyError, ValueError) as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_INPUT
    except (simulation.SimulationBudgetExceeded, ArenaTooLarge) as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())

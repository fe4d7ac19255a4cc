"""Command-line interface: ``tsgraph <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 unreadable input, 3 semantic error
raised by the library, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .canonical import canonical_ts_dag, is_stat_ts_dmag, is_ts_dmag
from .equivalence import Knowledge, markov_equivalent, mi_dpag
from .errors import BudgetExceeded
from .generators import random_ts_dag
from .limits import limiting_ts_dmag, limiting_ts_dpag, window_compare
from .marginal import stationarify, ts_dmag

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_BUDGET = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _graph_arg(path):
    kind, obj = io.parse_any(_read(path))
    if kind != "graph":
        raise io.ParseError(f"{path}: expected a window graph document")
    return obj


def _template_arg(path):
    kind, obj = io.parse_any(_read(path))
    if kind != "template":
        raise io.ParseError(f"{path}: expected a template document")
    return obj


def _emit_graph(g, args):
    return io.to_dot(g) if args.format == "dot" else io.print_graph(g)


def _need_tau(args):
    if args.tau_max is None:
        raise _UsageError("--tau-max is required for template input")
    return args.tau_max


def _cmd_marginalize(args):
    template, observed = _template_arg(args.input)
    scheme = io.scheme_for(observed, _need_tau(args), args.stride)
    return _emit_graph(ts_dmag(template, scheme), args)


def _cmd_stationarify(args):
    return _emit_graph(stationarify(_graph_arg(args.input)), args)


def _cmd_canonical(args):
    g = _graph_arg(args.input)
    return io.print_template(canonical_ts_dag(g), observed=range(g.n_vars))


def _edge_docs(g, edges):
    return [{"a": [g.names[a.var], a.time], "b": [g.names[b.var], b.time], "type": sym} for a, b, sym in edges]


def _cmd_check(args):
    g = _graph_arg(args.input)
    report = is_ts_dmag(g, mode=args.mode)
    names_src = report.marginal if report.marginal is not None else g
    doc = {
        "is_ts_dmag": report.verdict,
        "direction": report.direction,
        "only_in_graph": _edge_docs(g, report.only_in_graph),
        "only_in_marginal": _edge_docs(names_src, report.only_in_marginal),
        "reason": report.reason,
        "is_stat_ts_dmag": is_stat_ts_dmag(g),
    }
    return io.dumps(doc)


def _cmd_dpag(args):
    kind, obj = io.parse_any(_read(args.input))
    bk = Knowledge.parse(args.knowledge)
    if kind == "template":
        template, observed = obj
        m = ts_dmag(template, io.scheme_for(observed, _need_tau(args), args.stride))
    else:
        m = obj
    report = mi_dpag(m, bk, args.budget)
    if args.format == "dot":
        return io.to_dot(report.dpag)
    return io.dumps({"knowledge": bk.value, "class_size": report.class_size, "dpag": io.graph_to_doc(report.dpag)})


def _cmd_equiv(args):
    g1, g2 = _graph_arg(args.first), _graph_arg(args.second)
    return io.dumps({"markov_equivalent": markov_equivalent(g1, g2)})


def _cmd_limit(args):
    template, observed = _template_arg(args.input)
    tau = _need_tau(args)
    res = limiting_ts_dmag(template, tau, args.stability_window, observed)
    doc = {"tau_max": tau, "depth": res.depth, "limiting_ts_dmag": io.graph_to_doc(res.graph)}
    if args.with_dpag:
        pres = limiting_ts_dpag(template, tau, args.stability_window, observed, budget=args.budget)
        doc["dpag_depth"] = pres.depth
        doc["limiting_ts_dpag"] = io.graph_to_doc(pres.graph)
    if args.format == "dot":
        return io.to_dot(res.graph)
    return io.dumps(doc)


def _cmd_compare(args):
    template, observed = _template_arg(args.input)
    tau = _need_tau(args)
    if args.tau_tilde is None:
        raise _UsageError("--tau-tilde is required")
    rep = window_compare(template, tau, args.tau_tilde, observed, with_dpags=args.with_dpag, budget=args.budget)
    return io.dumps(
        {
            "tau_max": tau,
            "tau_tilde": args.tau_tilde,
            "latest_subgraph": rep.latest_subgraph,
            "earliest_equal": rep.earliest_equal,
            "marks_monotone": rep.marks_monotone,
            "circles_contained": rep.circles_contained,
            "strict": rep.strict,
        }
    )


def _cmd_random(args):
    template = random_ts_dag(args.n_vars, args.order, args.density, args.seed)
    return io.print_template(template)


def _cmd_render(args):
    return io.to_dot(_graph_arg(args.input))


def build_parser():
    parser = _Parser(prog="tsgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_text, inputs=("input",)):
        p = sub.add_parser(name, help=help_text)
        for arg in inputs:
            p.add_argument(arg, help="JSON document path, or - for stdin")
        p.add_argument("--format", choices=["json", "dot"], default="json")
        p.add_argument("-o", "--output", help="write the result here instead of stdout")
        p.set_defaults(func=func)
        return p

    def scheme_flags(p):
        p.add_argument("--tau-max", type=int)
        p.add_argument("--stride", type=int, default=1)

    def budget_flag(p):
        p.add_argument("--budget", type=int, default=None, help="orientation unit cap (default TSGRAPH_BUDGET or 12)")

    scheme_flags(add("marginalize", _cmd_marginalize, "ts-DMAG of a template"))
    add("stationarify", _cmd_stationarify, "stationarification of a graph")
    add("canonical", _cmd_canonical, "canonical ts-DAG of a graph")
    p = add("check", _cmd_check, "ts-DMAG and stationarified ts-DMAG membership")
    p.add_argument("--mode", choices=["dmag", "mixed"], default="dmag")
    p = add("dpag", _cmd_dpag, "maximally informative DPAG")
    scheme_flags(p)
    budget_flag(p)
    p.add_argument("--knowledge", choices=[k.value for k in Knowledge], default="b_d")
    add("equiv", _cmd_equiv, "Markov equivalence of two DMAGs", inputs=("first", "second"))
    p = add("limit", _cmd_limit, "limiting ts-DMAG (and ts-DPAG)")
    scheme_flags(p)
    budget_flag(p)
    p.add_argument("--stability-window", type=int, default=None)
    p.add_argument("--with-dpag", action="store_true")
    p = add("compare-windows", _cmd_compare, "compare two window lengths")
    scheme_flags(p)
    budget_flag(p)
    p.add_argument("--tau-tilde", type=int)
    p.add_argument("--with-dpag", action="store_true")
    p = add("random", _cmd_random, "random ts-DAG template", inputs=())
    p.add_argument("--n-vars", type=int, default=3)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    add("render", _cmd_render, "Graphviz DOT rendering of a graph")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        out = args.func(args)
    except _UsageError as exc:
        print(f"tsgraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.ParseError as exc:
        print(f"tsgraph: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"tsgraph: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, RuntimeError) as exc:
        # GraphError, QueryError, ConvergenceError and InvariantViolation
        print(f"tsgraph: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

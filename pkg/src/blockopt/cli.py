"""Command-line front end.

Exit status is 0 on success, 1 on a domain error (bad file, disconnected
design, failed check) and 2 on a usage error.  Rationals print as ``p/q``,
floats with 12 significant digits.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Sequence

from blockopt import families
from blockopt.arboreal import levi_tree_factor_check, spanning_tree_count
from blockopt.bounds import best_bound, e_optimality_certificates, isoperimetric_number
from blockopt.design import BlockDesign, DesignError, classify, format_design, parse_design
from blockopt.electrical import design_vbar, solve_network
from blockopt.graphs import Multigraph, concurrence_graph, is_connected, laplacian, levi_graph
from blockopt.search import SearchSpace, optimize, theorem_checks, THEOREMS
from blockopt.spectral import CriteriaReport, Criterion, criteria, dominates, phi_crossover, spectrum


def _f(x: float) -> str:
    return f"{x:.12g}"


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _load(path: str) -> BlockDesign:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DesignError(f"cannot read {path}: {exc.strerror}") from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parse_design(text)


def _graph(d: BlockDesign, levi: bool) -> Multigraph:
    return levi_graph(d) if levi else concurrence_graph(d)


def _vertex(g: Multigraph, token: str) -> int:
    labels = g.labels or tuple(str(i + 1) for i in range(g.n))
    key = token.strip()
    if key.lower().startswith("b"):
        key = "B" + key[1:]
    if key not in labels:
        raise DesignError(f"no vertex labelled {token!r}")
    return labels.index(key)


def _report_lines(name: str, d: BlockDesign) -> list[str]:
    r = criteria(d)
    info = classify(d)
    flags = [f for f in ("binary", "equireplicate", "balanced", "variance_balanced", "queen_bee",
                         "regular_graph_design", "nearly_balanced") if getattr(info, f)]
    lines = [
        f"design {name}: v={d.v} b={d.b} k={d.k}",
        f"  properties: {', '.join(flags) if flags else 'none'}",
        "  criteria (bigger is better):",
        f"    A (harmonic mean)  {_f(r.A_value)}",
        f"    D (geometric mean) {_f(r.D_value)}",
        f"    E (theta_1)        {_f(r.E_value)}",
        f"  theta range: {_f(r.E_value)} .. {_f(r.theta_max)}",
        f"  average pairwise variance: {_q(design_vbar(d))} = {_f(r.Vbar)} sigma^2",
        f"  spanning trees: {spanning_tree_count(concurrence_graph(d))}",
    ]
    lines += ["  " + ln for ln in e_optimality_certificates(d).lines(d.v)]
    return lines


def cmd_eval(args) -> int:
    d = _load(args.file)
    if args.emit == "csv":
        print(CriteriaReport.CSV_HEADER)
        print(criteria(d).csv_row())
    elif args.emit == "graph":
        sys.stdout.write(_graph(d, args.levi).to_csv())
    elif args.emit == "design":
        sys.stdout.write(format_design(d))
    else:
        print("\n".join(_report_lines(args.file, d)))
    return 0


def cmd_resist(args) -> int:
    d = _load(args.file)
    g = _graph(d, args.levi)
    if not is_connected(g):
        raise DesignError("graph is disconnected")
    i, j = _vertex(g, args.pair[0]), _vertex(g, args.pair[1])
    sol = solve_network(g, i, j)
    sol.check()
    print(_q(sol.resistance))
    if args.verbose:
        labels = g.labels
        print(f"# integral flow: {sol.outflow(i)} units from {labels[i]} to {labels[j]}")
        for u in range(g.n):
            print(f"{labels[u]}: {sol.voltages[u]}")
        for u, w in g.edges():
            cur = sol.current(u, w)
            a, c = (u, w) if cur >= 0 else (w, u)
            print(f"{labels[a]}->{labels[c]}: {abs(cur)}")
    return 0


def cmd_trees(args) -> int:
    d = _load(args.file)
    print(spanning_tree_count(_graph(d, args.levi)))
    if args.verbose:
        chk = levi_tree_factor_check(d)
        print(f"# concurrence {chk.concurrence_trees}, Levi {chk.levi_trees}, "
              f"ratio {_q(chk.factor)} vs k^(b-v+1) = {d.k}^{chk.exponent}")
    return 0


def cmd_spectrum(args) -> int:
    d = _load(args.file)
    spec = spectrum(laplacian(_graph(d, args.levi)))
    print(f"# trivial multiplicity {spec.trivial_multiplicity}")
    for x in spec.nontrivial:
        print(_f(x))
    return 0


def cmd_bounds(args) -> int:
    d = _load(args.file)
    g = concurrence_graph(d)
    theta1 = spectrum(laplacian(g)).nontrivial[0]
    bb = best_bound(g)
    iso = isoperimetric_number(g)
    print(f"theta_1: {_f(theta1)}")
    print(f"best cutset bound: {_q(bb.bound_value)} = {_f(float(bb.bound_value))}")
    print(f"  witness: {bb.describe(g.labels)}")
    wit = ",".join(g.labels[u] for u in sorted(iso.witness))
    print(f"isoperimetric number: {_q(iso.value)}{'' if iso.exact else ' (heuristic upper bound)'}"
          f" at S={{{wit}}}; 2*iota = {_q(2 * iso.value)}")
    for ln in e_optimality_certificates(d).lines(d.v):
        print(ln)
    return 0


def cmd_family(args) -> int:
    params = {key: getattr(args, key) for key in ("v", "b", "k", "s", "a", "variant")
              if getattr(args, key) is not None}
    d = families.generate(args.name, **params)
    if args.emit == "graph":
        sys.stdout.write(concurrence_graph(d).to_csv())
    elif args.emit == "csv":
        print(CriteriaReport.CSV_HEADER)
        print(criteria(d).csv_row())
    else:
        sys.stdout.write(format_design(d))
    return 0


def cmd_search(args) -> int:
    if args.check:
        rep = theorem_checks(args.check)
        print(rep)
        return 0 if rep.passed else 1
    missing = [f"--{n}" for n in ("v", "b", "k") if getattr(args, n) is None]
    if missing:
        raise _Usage(f"search needs {' '.join(missing)} (or --check NAME)")
    space = SearchSpace(args.v, args.b, args.k, binary_only=args.binary,
                        equireplicate_only=args.equireplicate, regular_graph_only=args.regular_graph,
                        unicyclic_only=args.unicyclic, max_multiplicity=args.max_multiplicity,
                        override_caps=args.override_caps)
    res = optimize(space, Criterion.parse(args.criterion), workers=args.workers)
    if args.emit == "csv":
        sys.stdout.write(res.to_csv(args.top))
    else:
        print(f"# {len(res.entries)} classes, {len(res.tie_groups)} distinct {res.criterion} values")
        for gi, grp in enumerate(res.tie_groups[: args.top]):
            for i in grp:
                e = res.entries[i]
                blocks = " | ".join(" ".join(map(str, b)) for b in e.design.blocks)
                print(f"{gi + 1}: {_f(res.criterion.value(e.report))}  {blocks}")
    return 0


def cmd_compare(args) -> int:
    d1, d2 = _load(args.first), _load(args.second)
    if d1.v != d2.v:
        raise DesignError(f"designs have different v ({d1.v} vs {d2.v})")
    for name, d in ((args.first, d1), (args.second, d2)):
        print("\n".join(_report_lines(name, d)))
    l1 = laplacian(concurrence_graph(d1))
    l2 = laplacian(concurrence_graph(d2))
    dom = dominates(l1, l2)
    text = {
        "both": "the two information matrices are equal",
        "second": "second design dominates (L2 - L1 is positive semidefinite)",
        "first": "first design dominates (L1 - L2 is positive semidefinite)",
        "neither": "neither design dominates the other",
    }[dom.value]
    print(f"dominance: {text}")
    r1, r2 = criteria(d1), criteria(d2)
    br = phi_crossover(r1, r2)
    if br is None:
        print("Phi_p crossover: none for p in [0.1, 100]")
    else:
        lo, hi = br
        print(f"Phi_p crossover: [{_f(lo)}, {_f(hi)}] ~ [{floor(lo * 1000) / 1000:.3f}, "
              f"{ceil(hi * 1000) / 1000:.3f}] (Phi_p: smaller is better)")
        better = "first" if r1.phi_p(lo) < r2.phi_p(lo) else "second"
        print(f"  below the crossover the {better} design has the smaller Phi_p")
    return 0


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="blockopt", description="Optimality of block designs via concurrence and Levi graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="criteria report for a design file")
    e.add_argument("file")
    e.add_argument("--emit", choices=("text", "csv", "graph", "design"), default="text")
    e.add_argument("--levi", action="store_true", help="with --emit graph, export the Levi graph")
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("resist", help="exact effective resistance between two vertices")
    r.add_argument("file")
    r.add_argument("--pair", nargs=2, required=True, metavar=("I", "J"),
                   help="treatment labels (1..v), or B1..Bb for blocks with --levi")
    r.add_argument("--levi", action="store_true")
    r.add_argument("--verbose", action="store_true", help="print the integral voltages and currents")
    r.set_defaults(func=cmd_resist)

    t = sub.add_parser("trees", help="exact spanning-tree count")
    t.add_argument("file")
    t.add_argument("--levi", action="store_true")
    t.add_argument("--verbose", action="store_true")
    t.set_defaults(func=cmd_trees)

    s = sub.add_parser("spectrum", help="non-trivial Laplacian eigenvalues")
    s.add_argument("file")
    s.add_argument("--levi", action="store_true")
    s.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("bounds", help="cutset bounds, isoperimetric number and E-certificates")
    b.add_argument("file")
    b.set_defaults(func=cmd_bounds)

    f = sub.add_parser("family", help="generate a named design")
    f.add_argument("name", help="family name or figure tag, e.g. C, queen_bee, cycle, fig7")
    for opt in ("v", "b", "k", "s", "a", "variant"):
        f.add_argument(f"--{opt}", type=int)
    f.add_argument("--emit", choices=("design", "graph", "csv"), default="design")
    f.set_defaults(func=cmd_family)

    q = sub.add_parser("search", help="exhaustive search and ranking, or a theorem check")
    q.add_argument("--v", type=int)
    q.add_argument("--b", type=int)
    q.add_argument("--k", type=int)
    q.add_argument("--binary", action="store_true")
    q.add_argument("--equireplicate", action="store_true")
    q.add_argument("--regular-graph", action="store_true")
    q.add_argument("--unicyclic", action="store_true")
    q.add_argument("--max-multiplicity", type=int)
    q.add_argument("--criterion", default="A", help="A, D, E or PhiP such as Phi2")
    q.add_argument("--top", type=int)
    q.add_argument("--emit", choices=("text", "csv"), default="text")
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--override-caps", action="store_true")
    q.add_argument("--check", choices=sorted(THEOREMS))
    q.set_defaults(func=cmd_search)

    c = sub.add_parser("compare", help="compare two designs on the same treatments")
    c.add_argument("first")
    c.add_argument("second")
    c.set_defaults(func=cmd_compare)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DesignError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

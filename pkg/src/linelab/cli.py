"""Command-line interface: ``linelab <subcommand> ...``.

Exit codes: 0 success, 1 usage or operational error, 2 a conjecture
violation was found (scan, check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import equiv, graphs, hypergraphs, lines, metrics, search
from .errors import CapExceeded, GraphFormatError, MetricError, Refusal

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_json(args) -> Any:
    if not args.file:
        raise UsageError("this subcommand needs --file with a JSON document")
    return json.loads(_read_text(args.file))


def _inputs(args) -> list[tuple[str, metrics.MetricSpace, graphs.Graph | None]]:
    """(label, metric, graph-or-None) for every instance named on argv."""
    out = []
    if args.graph6:
        for rec in args.graph6:
            g = graphs.parse_graph6(rec)
            out.append((rec, graphs.bfs_metric(g), g))
    if args.file:
        text = _read_text(args.file)
        if text.lstrip().startswith(("{", "[")):
            obj = json.loads(text)
            for k, item in enumerate(obj if isinstance(obj, list) else [obj]):
                m = metrics.MetricSpace.from_json(item)
                out.append((f"{args.file}#{k}", m, None))
        else:
            for g6, g in zip((ln.strip() for ln in text.splitlines() if ln.strip()),
                             graphs.read_graph6(text.splitlines())):
                out.append((g6, graphs.bfs_metric(g), g))
    if not out:
        raise UsageError("no input: give --graph6 or --file")
    return out


def _graphs(args) -> list[tuple[str, graphs.Graph]]:
    out = []
    for rec in args.graph6 or ():
        out.append((rec, graphs.parse_graph6(rec)))
    if args.file:
        lines_ = [ln.strip() for ln in _read_text(args.file).splitlines() if ln.strip()]
        for g6, g in zip(lines_, graphs.read_graph6(lines_)):
            out.append((g6, g))
    if not out:
        raise UsageError("no input: give --graph6 or --file")
    return out


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(args, payload: Any, rows: list[dict] | None = None, text: str | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        s = json.dumps(payload, indent=2) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise UsageError("csv output is not available for this subcommand")
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _csv_cell(v) for k, v in r.items()})
        s = buf.getvalue()
    else:
        s = text if text is not None else json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(s)
    else:
        sys.stdout.write(s)


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    return v


def _summary_row(label: str, fam: lines.LineFamily) -> dict:
    dbe = lines.dbe_of(fam)
    amrz = lines.amrz_of(fam)
    return {"input": label, "n": fam.n, "lambda": fam.lam, "mu": fam.mu,
            "universal": fam.universal_present, "dbe": dbe.holds, "amrz": amrz.holds}


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in sorted(s)) + "}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_lines(args) -> int:
    mode = "closure_lines" if args.cmd == "closure-lines" else "lines"
    items = []
    rows = []
    text = []
    for label, m, _ in _inputs(args):
        fam = lines.line_family(m, mode)
        items.append({"input": label, "family": fam.to_json()})
        rows.append(_summary_row(label, fam))
        text.append(f"{label}: n={fam.n} lambda={fam.lam} mu={fam.mu} "
                    f"universal={str(fam.universal_present).lower()}")
        text.extend("  " + _fmt_set(ln.members) for ln in fam.lines)
    _emit(args, items, rows, "\n".join(text) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    items, rows, text = [], [], []
    bad = False
    for label, m, _ in _inputs(args):
        fam = lines.line_family(m)
        v = lines.dbe_of(fam) if args.property == "dbe" else lines.amrz_of(fam)
        bad |= not v.holds
        items.append({"input": label, "property": args.property, **v.to_json()})
        rows.append(_summary_row(label, fam))
        text.append(f"{label}: {args.property} {'holds' if v.holds else 'VIOLATED'}")
    _emit(args, items, rows, "\n".join(text) + "\n")
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_classify(args) -> int:
    items, rows = [], []
    for label, g in _graphs(args):
        rep = graphs.classify(g).to_json()
        items.append({"input": label, **rep})
        rows.append({"input": label, **{k: v for k, v in rep.items() if not isinstance(v, (list, dict))}})
    _emit(args, items, rows)
    return EXIT_OK


def cmd_scan(args) -> int:
    checks = tuple(args.checks.split(",")) if args.checks else search.CHECKS
    unknown = set(checks) - set(search.CHECKS)
    if unknown:
        raise UsageError(f"unknown checks: {sorted(unknown)}")
    if args.file:
        source, path = "file", args.file
    else:
        source, path = args.source, None
    rep = search.scan(args.n, source, path, checks, args.jobs, args.checkpoint)
    _emit(args, rep.to_json(), [rep.csv_row()])
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def cmd_zwols(args) -> int:
    rows = search.zwols_report(args.max_n, args.source, args.pattern, args.min_n, args.jobs)
    text = ["n  min_lambda  f(n)  minimizers  all_multipartite"]
    for r in rows:
        text.append(f"{r.n:<3}{str(r.min_lambda_no_universal):<12}{r.f:<6}{len(r.minimizers):<12}"
                    f"{str(r.all_minimizers_multipartite).lower()}")
        text.extend(f"   exception: {s}" for s in r.exceptions)
    _emit(args, [r.to_json() for r in rows], [r.csv_row() for r in rows], "\n".join(text) + "\n")
    return EXIT_OK


def cmd_f_multipartite(args) -> int:
    ns = [args.n] if args.n is not None else list(range(3, args.max_n + 1))
    opts = [search.multipartite_f(n) for n in ns]
    rows = [{"n": o.n, "f": o.value, "partitions": " ".join("+".join(map(str, p)) for p in o.partitions)}
            for o in opts]
    text = "".join(f"f({r['n']}) = {r['f']}  [{r['partitions']}]\n" for r in rows)
    _emit(args, [o.to_json() for o in opts], rows, text)
    return EXIT_OK


def _load_partition(args) -> equiv.EdgePartition:
    if args.graph6:
        if len(args.graph6) != 1:
            raise UsageError("equiv takes a single graph")
        return equiv.line_equivalence(graphs.bfs_metric(graphs.parse_graph6(args.graph6[0])))
    if not args.file:
        raise UsageError("equiv needs --file (partition) or --graph6")
    text = _read_text(args.file)
    if text.lstrip().startswith("{"):
        return equiv.EdgePartition.from_json(json.loads(text))
    return equiv.EdgePartition.from_text(text)


def cmd_equiv(args) -> int:
    p = _load_partition(args)
    out = equiv.algorithm_g(p) if args.algorithm == "g" else equiv.algorithm_h(p)
    rows = [{"algorithm": out.algorithm, "verdict": out.verdict, "n": out.n,
             "sets": " ".join(_fmt_set(s) for s in out.sets)}]
    _emit(args, out.to_json(), rows, out.to_text())
    return EXIT_OK


def _certificate_json(obj) -> Any:
    if isinstance(obj, graphs.Graph):
        return {"type": "graph", "graph6": str(obj), "n": obj.n, "edges": [list(e) for e in obj.edges()]}
    if isinstance(obj, metrics.MetricSpace):
        return {"type": "metric", **obj.to_json()}
    if isinstance(obj, metrics.TernaryRelation):
        return {"type": "relation", "n": obj.n, "triples": obj.to_json()}
    if isinstance(obj, hypergraphs.Hypergraph3):
        return {"type": "hypergraph", **obj.to_json()}
    raise TypeError(type(obj))


def _relation_from(obj) -> metrics.TernaryRelation:
    return metrics.TernaryRelation.from_json(obj)


def cmd_recognize(args) -> int:
    kind = args.kind
    cap = args.cap
    try:
        if kind == "graph-metric":
            if args.graph6:
                m = graphs.bfs_metric(graphs.parse_graph6(args.graph6[0]))
            else:
                m = metrics.MetricSpace.from_json(_load_json(args))
            cert = metrics.recognize_graph_metric(m)
        elif kind == "graph-betweenness":
            cert = metrics.recognize_graph_betweenness(_relation_from(_load_json(args)))
        elif kind == "metric-betweenness":
            r = _relation_from(_load_json(args))
            cert = metrics.recognize_metric_betweenness(r, **({"cap": cap} if cap else {}))
        elif kind == "line-map":
            obj = _load_json(args)
            n = obj.get("n") if isinstance(obj.get("n"), int) else None
            fmap = hypergraphs.line_map_from_json({k: v for k, v in obj.items() if k != "n"})
            cert = hypergraphs.recognize_line_map(fmap, n)
        else:
            h = hypergraphs.Hypergraph3.from_json(_load_json(args))
            if kind == "graphic":
                cert = hypergraphs.is_graphic(h, **({"cap": cap} if cap else {}))
            elif kind == "metric":
                cert = hypergraphs.is_metric(h, **({"cap_n": cap} if cap else {}))
            else:
                cert = hypergraphs.is_pseudometric(h, **({"cap": cap} if cap else {}))
    except CapExceeded:
        raise
    except Refusal as exc:
        payload = {"kind": kind, "accepted": False, "reason": exc.reason,
                   "witness": _jsonable(exc.witness), "message": str(exc)}
        _emit(args, payload, [{"kind": kind, "accepted": False, "reason": exc.reason}],
              f"REFUSED: {exc}\n")
        return EXIT_OK
    payload = {"kind": kind, "accepted": True, "certificate": _certificate_json(cert)}
    _emit(args, payload, [{"kind": kind, "accepted": True, "reason": ""}],
          "ACCEPTED\n" + json.dumps(payload["certificate"]) + "\n")
    return EXIT_OK


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(_jsonable(v) for v in x)
    return x


def cmd_axioms(args) -> int:
    r = _relation_from(_load_json(args))
    rep = metrics.check_axioms(r).to_json()
    row = {k: rep[k] for k in metrics.AXIOMS}
    _emit(args, rep, [row])
    return EXIT_OK


def _points(args) -> list:
    if args.points:
        return json.loads(args.points)
    return _load_json(args)


def cmd_embed(args) -> int:
    kind = args.kind
    if kind == "l1-plane":
        m, nondeg = metrics.from_l1_points(_points(args))
        payload = {"kind": kind, "metric": m.to_json(), "nondegenerate": nondeg}
        rows = [{"kind": kind, "n": m.n, "nondegenerate": nondeg}]
    elif kind == "linf":
        if args.graph6:
            m = graphs.bfs_metric(graphs.parse_graph6(args.graph6[0]))
        else:
            m = metrics.MetricSpace.from_json(_load_json(args))
        vecs = metrics.linf_embed(m)
        payload = {"kind": kind, "vectors": [[metrics.format_exact(x) for x in v] for v in vecs]}
        rows = [{"kind": kind, "n": m.n, "dimension": m.n}]
    elif kind == "unary":
        if args.k is None:
            raise UsageError("unary embedding needs --k")
        vecs = metrics.unary_embed(_points(args), args.k)
        payload = {"kind": kind, "vectors": [list(v) for v in vecs]}
        rows = [{"kind": kind, "n": len(vecs), "dimension": len(vecs[0]) if vecs else 0}]
    else:
        img = metrics.l2_linf_plane_isometry(_points(args))
        payload = {"kind": kind, "vectors": [[metrics.format_exact(x) for x in v] for v in img]}
        rows = [{"kind": kind, "n": len(img), "dimension": 2}]
    _emit(args, payload, rows)
    return EXIT_OK


def cmd_search_line_family(args) -> int:
    obj = _load_json(args)
    n, fam = obj["n"], obj["lines"]
    try:
        cert = search.line_family_search(n, fam, args.level)
    except CapExceeded:
        raise
    except Refusal as exc:
        payload = {"level": args.level, "found": False, "reason": exc.reason,
                   "witness": _jsonable(exc.witness), "message": str(exc)}
        _emit(args, payload, [{"level": args.level, "found": False}], f"REFUSED: {exc}\n")
        return EXIT_OK
    payload = {"level": args.level, "found": True, "certificate": _certificate_json(cert)}
    _emit(args, payload, [{"level": args.level, "found": True}],
          "FOUND\n" + json.dumps(payload["certificate"]) + "\n")
    return EXIT_OK


def _param(s: str):
    if "," in s:
        return [int(x) for x in s.split(",") if x]
    return int(s)


def cmd_generate(args) -> int:
    g = graphs.generate(args.kind, *(_param(p) for p in args.params))
    payload = {"kind": args.kind, "graph6": str(g), "n": g.n, "edges": [list(e) for e in g.edges()]}
    _emit(args, payload, [{"kind": args.kind, "graph6": str(g), "n": g.n, "edges": g.num_edges}],
          str(g) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph6", action="append", metavar="G6", help="graph6 record (repeatable)")
    common.add_argument("--file", help="input file ('-' for stdin)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--cap", type=int, default=None, help="size cap for desk-scale oracles")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--checkpoint", help="JSON checkpoint for resumable scans")

    p = _Parser(prog="linelab", description="Lines in graphs, metric spaces and 3-uniform hypergraphs.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, fn, help_, fmt="json"):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn, default_format=fmt)
        return sp

    add("lines", cmd_lines, "line family of graphs or metric spaces")
    add("closure-lines", cmd_lines, "closure-line family")
    sp = add("check", cmd_check, "DBE or AMRZ property")
    sp.add_argument("property", choices=("dbe", "amrz"))
    add("classify", cmd_classify, "class predicates of graphs")

    sp = add("scan", cmd_scan, "exhaustive conjecture scan of connected graphs")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--source", choices=("internal", "geng"), default="internal")
    sp.add_argument("--checks", help=f"comma list from {','.join(search.CHECKS)}")

    sp = add("zwols", cmd_zwols, "fewest lines without a universal line, per n", fmt="text")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--min-n", type=int, default=3)
    sp.add_argument("--source", choices=("internal", "geng", "file"), default="internal")
    sp.add_argument("--pattern", help="graph6 path pattern with {n}, for --source file")

    sp = add("f-multipartite", cmd_f_multipartite, "complete multipartite optimum f(n)", fmt="text")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--max-n", type=int)

    sp = add("equiv", cmd_equiv, "Algorithm G or H on an edge partition", fmt="text")
    sp.add_argument("algorithm", choices=("g", "h"))

    sp = add("recognize", cmd_recognize, "desk-scale recognizers")
    sp.add_argument("kind", choices=("graph-metric", "graph-betweenness", "metric-betweenness",
                                     "graphic", "metric", "pseudometric", "line-map"))
    add("axioms", cmd_axioms, "axioms M0-M6 of a ternary relation")

    sp = add("embed", cmd_embed, "embeddings and isometries")
    sp.add_argument("kind", choices=("l1-plane", "linf", "unary", "l2-linf"))
    sp.add_argument("--points", help="inline JSON list of points/vectors")
    sp.add_argument("--k", type=int)

    sp = add("search-line-family", cmd_search_line_family, "realize a prescribed line family")
    sp.add_argument("--level", choices=("graph", "metric", "betweenness", "hypergraph"), default="graph")

    sp = add("generate", cmd_generate, "named graph families", fmt="text")
    sp.add_argument("kind", choices=sorted(graphs.GENERATORS))
    sp.add_argument("params", nargs="*", help="integers; comma lists for part sizes")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.fn(args)
    except (UsageError, GraphFormatError, MetricError, CapExceeded, ValueError,
            FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"linelab {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

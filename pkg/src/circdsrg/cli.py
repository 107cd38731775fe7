"""Command-line entry point.

Exit codes: 0 ok, 1 verification false, 2 domain error, 3 parse/IO error,
4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import autiso
from .blockmat import BinaryMatrix, CompactMatrix, compactify, decompactify
from .dsrg import Digraph, DsrgParams, NotDsrgError, infer_params, verify_combinatorial, verify_matrix
from .family import build_family_compact, example_dsrg8, params_for
from .permgroup import format_perm
from .search import SearchSpec, search, write_results

EXIT_OK, EXIT_FALSE, EXIT_DOMAIN, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4

FORMATS = ("matrix", "edges", "compact")
INPUT_SUFFIXES = {".mat", ".edges", ".el", ".cm"}


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _load(path: str | Path) -> tuple[Digraph, CompactMatrix | None]:
    """Read a digraph in any supported format; compact input is also returned as such."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {p}: {exc}", EXIT_PARSE) from exc
    try:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty file")
        header = lines[0].split()
        compact = p.suffix == ".cm" or (
            p.suffix not in (".edges", ".el")
            and len(header) == 2
            and len(lines) > 1
            and ("," in lines[1] or ":" in lines[1])
        )
        if compact:
            cm = CompactMatrix.from_text(text)
            return Digraph.from_matrix(decompactify(cm)), cm
        if len(header) == 1:
            return Digraph.from_matrix(BinaryMatrix.from_text(text)), None
        return Digraph.from_edges_text(text), None
    except ValueError as exc:
        raise CliError(f"cannot parse {p}: {exc}", EXIT_PARSE) from exc


def _render(g: Digraph, fmt: str, blocks: int | None = None, cm: CompactMatrix | None = None) -> str:
    if fmt == "matrix":
        return g.to_matrix().to_text()
    if fmt == "edges":
        return g.to_edges_text()
    if cm is not None and (blocks is None or blocks == cm.block_dim):
        return cm.to_text()
    if blocks is None:
        raise CliError("compact output needs --blocks", EXIT_DOMAIN)
    if blocks < 1 or g.v % blocks:
        raise CliError(f"{blocks} blocks do not divide {g.v} vertices", EXIT_DOMAIN)
    try:
        return compactify(g.to_matrix(), blocks, g.v // blocks).to_text()
    except ValueError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_PARSE) from exc


def _verdict(g: Digraph, p: DsrgParams, method: str) -> list[tuple[str, object]]:
    results = []
    if method in ("matrix", "both"):
        results.append(("matrix", verify_matrix(g, p)))
    if method in ("count", "both"):
        results.append(("count", verify_combinatorial(g, p)))
    return results


def cmd_generate(args) -> int:
    if args.n < 2:
        raise CliError(
            f"the closed-form family needs n >= 2 (got n={args.n})", EXIT_DOMAIN
        )
    cm = build_family_compact(args.n)
    g = Digraph.from_matrix(decompactify(cm))
    _emit(_render(g, args.format, cm=cm), args.out)
    p = params_for(args.n)
    results = _verdict(g, p, "both")
    ok = all(r for _, r in results)
    print(f"{p}: {'VERIFIED' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_verify(args) -> int:
    try:
        p = DsrgParams.parse(args.params)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    g, _ = _load(args.infile)
    if g.v != p.v:
        raise CliError(f"input has {g.v} vertices, parameters say {p.v}", EXIT_DOMAIN)
    results = _verdict(g, p, args.method)
    ok = True
    for name, r in results:
        if r:
            print(f"{name}: VERIFIED")
        else:
            ok = False
            print(f"{name}: FAILED")
            print(f"{name}: {r.violation}", file=sys.stderr)
    print(f"{p}: {'VERIFIED' if ok else 'NOT VERIFIED'}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_infer(args) -> int:
    g, _ = _load(args.infile)
    try:
        p = infer_params(g)
    except NotDsrgError as exc:
        print(f"not a dsrg: {exc.witness}")
        return EXIT_FALSE
    print(p)
    return EXIT_OK


def _read_dir(path: str) -> tuple[list[str], list[Digraph]]:
    d = Path(path)
    if not d.is_dir():
        raise CliError(f"{d} is not a directory", EXIT_PARSE)
    names, graphs = [], []
    for f in sorted(d.iterdir()):
        if f.suffix in INPUT_SUFFIXES:
            g, _ = _load(f)
            names.append(f.name)
            graphs.append(g)
    return names, graphs


def cmd_search(args) -> int:
    if args.n < 1:
        raise CliError(f"search needs n >= 1 (got n={args.n})", EXIT_DOMAIN)
    spec = SearchSpec(args.n, node_budget=args.budget)
    result = search(spec, jobs=args.jobs)
    names = write_results(result, args.out) if args.out else []
    print(f"solutions: {len(result.solutions)}")
    print(f"nodes: {result.stats.nodes}")
    if not result.complete:
        print("incomplete: node budget exhausted")
    if not args.no_classify:
        graphs = [Digraph.from_matrix(decompactify(c)) for c in result.solutions]
        classes = autiso.classify(graphs)
        if args.out:
            (Path(args.out) / "classes.txt").write_text(autiso.format_class_table(classes, names))
        print(f"classes: {len(classes)}")
    return EXIT_OK if result.complete else EXIT_BUDGET


def cmd_classify(args) -> int:
    names, graphs = _read_dir(args.infile)
    classes = autiso.classify(graphs)
    sys.stdout.write(autiso.format_class_table(classes, names))
    print(f"classes: {len(classes)}")
    return EXIT_OK


def cmd_aut(args) -> int:
    g, _ = _load(args.infile)
    res = autiso.automorphism_group(g)
    print(f"order: {res.order}")
    print(f"generators: {len(res.generators)}")
    for p in res.generators:
        print(format_perm(p))
    return EXIT_OK


def cmd_convert(args) -> int:
    g, cm = _load(args.infile)
    _emit(_render(g, args.to, blocks=args.blocks, cm=cm), args.out)
    return EXIT_OK


def cmd_demo(args) -> int:
    S = example_dsrg8()
    print("S =")
    for row in S.rows:
        print("  " + " ".join(str(a) for a in row))
    Sx = compactify(S, 2, 4)
    print(f"S(x) = {Sx.pretty()}")
    p = DsrgParams(8, 3, 2, 1, 1)
    g = Digraph.from_matrix(S)
    results = _verdict(g, p, "both")
    for name, r in results:
        print(f"{name}: {'VERIFIED' if r else 'FAILED'}")
    ok = all(r for _, r in results)
    print(f"{p}: {'VERIFIED' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circdsrg",
        description="Build, search for and verify directed strongly regular graphs made of circulant blocks.",
    )
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="write a member of the closed-form family")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=FORMATS, default="matrix")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify", help="check a digraph against dsrg parameters")
    sp.add_argument("--params", required=True, help="v,k,t,lambda,mu")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--method", choices=("matrix", "count", "both"), default="both")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("infer", help="read dsrg parameters off a digraph")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=cmd_infer)

    sp = sub.add_parser("search", help="backtracking search for compact matrices")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int, help="node budget")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="directory for sol_<index>.cm and stats.txt")
    sp.add_argument("--no-classify", action="store_true")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("classify", help="isomorphism classes of the digraphs in a directory")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("aut", help="automorphism group order and generators")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=cmd_aut)

    sp = sub.add_parser("convert", help="transcode between matrix, edges and compact formats")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--to", choices=FORMATS, required=True)
    sp.add_argument("--blocks", type=int, help="block count b, needed for compact output")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("demo", help="the dsrg(8,3,2,1,1) worked example")
    sp.set_defaults(func=cmd_demo)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

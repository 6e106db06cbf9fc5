"""Command-line front end.

Exit codes: 0 success, 1 validation failure (or a negative answer from
``check``/``compare``), 2 method inapplicable, 3 oracle cap exceeded,
4 I/O or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Callable, Sequence

from . import lattice as lt
from . import network as nw
from . import one_input as oi
from . import oracle
from . import partition as pt
from . import union as un
from .network import Network

OK, INVALID, INAPPLICABLE, CAP, IOERR = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors count as parse errors
        self.print_usage(sys.stderr)
        self.exit(IOERR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------- I/O


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(IOERR, f"cannot read {path}: {exc}") from exc


def _read_network(path: str) -> Network:
    try:
        return nw.parse_network(_read_text(path))
    except nw.NetworkError as exc:
        raise CliError(IOERR, str(exc)) from exc


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".synclattice-")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise CliError(IOERR, f"cannot write {path}: {exc}") from exc


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _parse_partition(text: str, cells: Sequence[str]) -> pt.Partition:
    try:
        if text.lstrip().startswith("["):
            return pt.from_named(cells, json.loads(text), partial=True)
        return pt.parse_polydiagonal(text, cells)
    except (pt.PartitionError, json.JSONDecodeError, TypeError) as exc:
        raise CliError(IOERR, f"bad partition {text!r}: {exc}") from exc


def _read_lattice_doc(path: str) -> tuple[tuple[str, ...], list[pt.Partition]]:
    """Cells and elements of a lattice document; elements may be class lists
    or polydiagonal strings."""
    try:
        doc = json.loads(_read_text(path))
        cells = tuple(str(c) for c in doc["cells"])
        elements = []
        for e in doc["elements"]:
            if isinstance(e, str):
                elements.append(pt.parse_polydiagonal(e, cells))
            else:
                elements.append(pt.from_named(cells, e))
    except (json.JSONDecodeError, KeyError, TypeError, pt.PartitionError) as exc:
        raise CliError(IOERR, f"malformed lattice document {path}: {exc}") from exc
    return cells, elements


def _reject_format(args, allowed: Sequence[str]) -> None:
    if args.format not in allowed:
        raise CliError(INAPPLICABLE, f"--format {args.format} is not available for {args.command}")


# ------------------------------------------------------------------ pipeline


def _component_lattice(sub: Network, cfg: oracle.OracleConfig, trace: list) -> lt.SyncLattice:
    try:
        d = oi.decompose(sub)
    except oi.NotOneInputError:
        lat = oracle.enumerate_balanced(sub, cfg)
        trace.append({"cells": list(sub.cells), "method": "brute", "elements": len(lat)})
        return lat
    gens = oi.enumerate_join_irreducibles(d)
    lat = oi.lattice_from_irreducibles(gens, sub)
    trace.append(
        {"cells": list(sub.cells), "method": "irreducible", "generators": len(gens), "elements": len(lat)}
    )
    return lat


def _fold_components(sub: Network, cfg: oracle.OracleConfig) -> tuple[lt.SyncLattice, dict]:
    comps = nw.connected_components(sub)
    trace: list = []
    unions: list = []
    acc_net, acc_lat = comps[0][0], _component_lattice(comps[0][0], cfg, trace)
    for comp, names in comps[1:]:
        lat = _component_lattice(comp, cfg, trace)
        joined = nw.induced_subnetwork(sub, acc_net.cells + names)
        acc_lat, br = un.compose_union_lattice(acc_net, acc_lat, comp, lat, union=joined, cfg=cfg)
        acc_net = joined
        unions.append(
            {"nb": len(br.nb), "pb": len(br.pb), "npb": len(br.npb), "valency_case": br.valency_case, "elements": len(acc_lat)}
        )
    stage = {"edge_type": sub.edge_types[0], "components": trace, "unions": unions, "elements": len(acc_lat)}
    return acc_lat, stage


def run_lattice(n: Network, method: str, cfg: oracle.OracleConfig) -> tuple[lt.SyncLattice, dict]:
    """Compute the lattice of ``n`` with ``method``; returns it with a provenance block."""
    rep = nw.validate(n, require=())
    prov: dict = {"method": method, "cells": n.size}
    if method == "brute":
        lat = oracle.enumerate_balanced(n, cfg)
    elif method == "irreducible":
        if rep.violations or not (rep.is_regular and rep.is_connected and rep.valency_per_type == {n.edge_types[0]: 1}):
            raise CliError(INAPPLICABLE, "method irreducible needs a connected 1-input regular network")
        d = oi.decompose(n)
        gens = oi.enumerate_join_irreducibles(d)
        lat = oi.lattice_from_irreducibles(gens, n)
        prov["generators"] = len(gens)
    elif method == "compose":
        if not rep.is_regular or rep.components < 2:
            raise CliError(INAPPLICABLE, "method compose needs a single edge type and at least two components")
        lat, stage = _fold_components(n, cfg)
        prov["stages"] = [stage]
    elif method == "intersect":
        stages, lats = [], []
        for t in n.edge_types:
            sub_lat = oracle.enumerate_balanced(nw.edge_type_subnetwork(n, t), cfg)
            lats.append(sub_lat)
            stages.append({"edge_type": t, "method": "brute", "elements": len(sub_lat)})
        lat = lt.intersect_lattices(lats, n)
        prov["stages"] = stages
    elif method == "auto":
        if not (rep.is_homogeneous and rep.is_asymmetric_inputs):
            raise CliError(
                INAPPLICABLE,
                "method auto needs a homogeneous network with asymmetric inputs; use --method brute",
            )
        stages, lats = [], []
        for t in n.edge_types:
            if rep.valency_per_type[t] == 0:
                stages.append({"edge_type": t, "skipped": "no edges of this type"})
                continue
            sub_lat, stage = _fold_components(nw.edge_type_subnetwork(n, t), cfg)
            lats.append(sub_lat)
            stages.append(stage)
        lat = lt.intersect_lattices(lats, n) if lats else oracle.enumerate_balanced(n, cfg)
        prov["stages"] = stages
    else:  # argparse restricts the choices
        raise CliError(INAPPLICABLE, f"unknown method {method}")
    prov["elements"] = len(lat)
    return lat, prov


def _emit_lattice(lat: lt.SyncLattice, fmt: str, extra: dict | None = None) -> str:
    if fmt == "dot":
        return lt.to_dot(lat)
    if fmt == "table":
        return lt.to_table(lat)
    doc = lt.to_dict(lat)
    if extra:
        doc.update(extra)
    return _dump(doc)


# ----------------------------------------------------------------- commands


def cmd_validate(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    n = _read_network(args.input)
    rep = nw.validate(n, require=args.require)
    if args.format == "table":
        lines = [f"{k}: {v}" for k, v in rep.to_dict().items() if k != "violations"]
        lines += [f"violation: {v}" for v in rep.violations]
        text = "\n".join(lines) + "\n"
    else:
        text = _dump(rep.to_dict())
    return text, INVALID if rep.violations else OK


def _one_input_parts(n: Network) -> list[tuple[str, Network]]:
    rep = nw.validate(n)
    if not (rep.is_homogeneous and rep.is_asymmetric_inputs):
        raise CliError(INAPPLICABLE, "needs a homogeneous network with asymmetric inputs")
    parts = []
    for t in n.edge_types:
        if rep.valency_per_type[t] == 0:
            continue
        for comp, _ in nw.connected_components(nw.edge_type_subnetwork(n, t)):
            parts.append((t, comp))
    return parts


def cmd_analyze(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    n = _read_network(args.input)
    out = []
    for t, comp in _one_input_parts(n):
        d = oi.decompose(comp)
        s = oi.spectral_summary(d)
        out.append({"edge_type": t, "cells": list(comp.cells), "decomposition": d.to_dict(), "spectrum": s.to_dict()})
    if args.format == "table":
        lines = []
        for part in out:
            dec, spectrum = part["decomposition"], part["spectrum"]
            lines.append(f"[{part['edge_type']}] cells {' '.join(part['cells'])}")
            lines.append(f"  ring {' -> '.join(dec['ring'])} (m={dec['m']}), depth {dec['depth']}")
            lines.append(
                f"  eigenvalues w^j for j=0..{spectrum['m'] - 1}; zero: multiplicity "
                f"{spectrum['zero_multiplicity']}, kernel dim {spectrum['zero_eigenspace_dim']}"
            )
            for chain in spectrum["jordan_chains"]:
                layers = " | ".join(",".join(layer) for layer in chain["layers"])
                lines.append(f"  chain from {','.join(chain['family'])}: {layers}")
        return "\n".join(lines) + "\n", OK
    return _dump({"parts": out}), OK


def cmd_irreducibles(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    n = _read_network(args.input)
    out = []
    for t, comp in _one_input_parts(n):
        d = oi.decompose(comp)
        seen: dict[pt.Partition, dict] = {}
        for g in oi.enumerate_generators(d):
            entry = seen.setdefault(
                g.partition,
                {"partition": pt.to_named(g.partition, comp.cells), "text": pt.render(g.partition, comp.cells), "sources": []},
            )
            if g.kind == "divisor":
                entry["sources"].append(f"divisor q={g.detail[0]}")
            else:
                entry["sources"].append("chain " + ",".join(comp.cells[c] for c in g.detail))
        items = [seen[p] for p in sorted(seen, key=pt.element_key)]
        out.append({"edge_type": t, "cells": list(comp.cells), "generators": items})
    if args.format == "table":
        lines = []
        for part in out:
            lines.append(f"[{part['edge_type']}] cells {' '.join(part['cells'])}")
            for g in part["generators"]:
                lines.append(f"  {g['text']}  <- {'; '.join(g['sources'])}")
        return "\n".join(lines) + "\n", OK
    return _dump({"parts": out}), OK


def _config(args) -> oracle.OracleConfig:
    return oracle.OracleConfig(max_cells=args.max_cells, parallel=getattr(args, "parallel", False))


def cmd_lattice(args) -> tuple[str, int]:
    n = _read_network(args.input)
    lat, prov = run_lattice(n, args.method, _config(args))
    return _emit_lattice(lat, args.format, {"provenance": prov}), OK


def cmd_oracle(args) -> tuple[str, int]:
    n = _read_network(args.input)
    lat = oracle.enumerate_balanced(n, _config(args))
    return _emit_lattice(lat, args.format), OK


def cmd_quotient(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    n = _read_network(args.input)
    p = _parse_partition(args.partition, n.cells)
    try:
        q = nw.quotient(n, p)
    except nw.NetworkError as exc:
        raise CliError(INVALID, str(exc)) from exc
    if args.format == "table":
        lines = [f"{c} -> {qc}" for c, qc in q.class_map.items()]
        lines += [f"{e.source} -> {e.target} [{e.type}]" for e in q.quotient.edges]
        return "\n".join(lines) + "\n", OK
    return _dump(q.to_dict()), OK


def cmd_check(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    n = _read_network(args.input)
    p = _parse_partition(args.partition, n.cells)
    balanced = pt.is_balanced(n, p)
    doc: dict = {"partition": pt.to_named(p, n.cells), "text": pt.render(p, n.cells), "balanced": balanced}
    if balanced and len(n.edge_types) == 1:
        try:
            d = oi.decompose(n)
        except oi.NotOneInputError:
            pass
        else:
            doc["pattern"] = oi.classify_pattern(d, p).to_dict()
    if args.format == "table":
        text = f"{doc['text'] or '(all distinct)'}: {'balanced' if balanced else 'not balanced'}\n"
        if "pattern" in doc:
            text += f"pattern: {json.dumps(doc['pattern'])}\n"
    else:
        text = _dump(doc)
    return text, OK if balanced else INVALID


def cmd_compare(args) -> tuple[str, int]:
    _reject_format(args, ("json", "table"))
    cells_a, elems_a = _read_lattice_doc(args.input)
    cells_b, elems_b = _read_lattice_doc(args.against)
    if cells_a != cells_b:
        raise CliError(IOERR, "the two documents are over different cell lists")
    diff = lt.compare(elems_a, elems_b, cells_a, ignore_top=args.ignore_top)
    if args.format == "table":
        lines = [f"equal: {diff.equal}", f"common: {diff.common}"]
        lines += [f"only in {args.input}: {pt.render(p, cells_a) or '(all distinct)'}" for p in diff.only_a]
        lines += [f"only in {args.against}: {pt.render(p, cells_a) or '(all distinct)'}" for p in diff.only_b]
        text = "\n".join(lines) + "\n"
    else:
        text = _dump(diff.to_dict())
    return text, OK if diff.equal else INVALID


def cmd_hasse(args) -> tuple[str, int]:
    _reject_format(args, ("json", "dot"))
    text = _read_text(args.input)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(IOERR, f"JSON syntax error: {exc}") from exc
    if isinstance(doc, dict) and "edges" in doc:
        try:
            n = nw.parse_network(text)
        except nw.NetworkError as exc:
            raise CliError(IOERR, str(exc)) from exc
        lat, _ = run_lattice(n, "auto", _config(args))
    else:
        try:
            lat = lt.from_dict(doc)
        except (lt.LatticeError, pt.PartitionError) as exc:
            raise CliError(IOERR, str(exc)) from exc
    if args.format == "dot":
        return lt.to_dot(lat), OK
    return _dump({"cells": list(lat.cells), "elements": [lat.render(p) for p in lat.elements], "cover_edges": [list(e) for e in lt.hasse(lat)]}), OK


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "irreducibles": cmd_irreducibles,
    "lattice": cmd_lattice,
    "quotient": cmd_quotient,
    "check": cmd_check,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "hasse": cmd_hasse,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", default="-", help="input file, '-' for stdin")
    common.add_argument("--format", choices=("json", "dot", "table"), default="json")
    common.add_argument("--output", help="write here (atomically) instead of stdout")
    capped = _Parser(add_help=False)
    capped.add_argument("--max-cells", type=int, default=oracle.DEFAULT_CAP, help="oracle cell cap")

    parser = _Parser(prog="synclattice", description="Synchrony lattices of coupled cell networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("validate", parents=[common], help="structural properties of a network")
    p.add_argument("--require", nargs="*", default=["homogeneous"], choices=nw.PROPERTIES)
    sub.add_parser("analyze", parents=[common], help="ring/tree and spectral data per 1-input part")
    sub.add_parser("irreducibles", parents=[common], help="generating partitions per 1-input part")
    p = sub.add_parser("lattice", parents=[common, capped], help="full synchrony lattice")
    p.add_argument("--method", choices=("auto", "irreducible", "compose", "intersect", "brute"), default="auto")
    p = sub.add_parser("quotient", parents=[common], help="quotient network by a balanced partition")
    p.add_argument("--partition", required=True, help="e.g. 'x1=x3=x7, x2=x4=x5' or a JSON class list")
    p = sub.add_parser("check", parents=[common], help="is a partition balanced; its colouring pattern")
    p.add_argument("--partition", required=True)
    p = sub.add_parser("oracle", parents=[common, capped], help="exhaustive enumeration")
    p.add_argument("--parallel", action="store_true")
    p = sub.add_parser("compare", parents=[common], help="diff two lattice documents")
    p.add_argument("--against", required=True, help="second lattice document")
    p.add_argument("--ignore-top", action="store_true")
    sub.add_parser("hasse", parents=[common, capped], help="cover relation of a lattice document")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
        _write(text, args.output)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except oracle.CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAP
    return code


if __name__ == "__main__":
    sys.exit(main())

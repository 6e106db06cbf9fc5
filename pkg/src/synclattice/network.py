"""Coupled cell networks: data model, JSON I/O, structural constructions,
interior symmetries and quotients."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import partition as pt
from .partition import Partition


class NetworkError(ValueError):
    pass


def _check_token(kind: str, name: object) -> str:
    if not isinstance(name, str) or not name or not name.isprintable() or any(ch.isspace() for ch in name):
        raise NetworkError(f"invalid {kind} name {name!r}")
    return name


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    type: str


@dataclass(frozen=True)
class Network:
    """Typed directed multigraph over named, identical cells.

    ``cells`` fixes the canonical index order used by every matrix and
    partition derived from the network.  Duplicate edges encode
    multiplicity.
    """

    cells: tuple[str, ...]
    edge_types: tuple[str, ...]
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "edge_types", tuple(self.edge_types))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.cells:
            raise NetworkError("a network needs at least one cell")
        for kind, names in (("cell", self.cells), ("edge type", self.edge_types)):
            for name in names:
                _check_token(kind, name)
            if len(set(names)) != len(names):
                raise NetworkError(f"duplicate {kind} names")
        cells, types = set(self.cells), set(self.edge_types)
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in cells:
                    raise NetworkError(f"edge references undeclared cell {end!r}")
            if e.type not in types:
                raise NetworkError(f"edge references undeclared edge type {e.type!r}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.cells)}

    @cached_property
    def type_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.edge_types)}

    @cached_property
    def inputs(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``inputs[t][c]``: sorted source indices of type-``t`` edges into ``c``."""
        acc = [[[] for _ in self.cells] for _ in self.edge_types]
        for e in self.edges:
            acc[self.type_index[e.type]][self.index[e.target]].append(self.index[e.source])
        return tuple(tuple(tuple(sorted(srcs)) for srcs in per_type) for per_type in acc)

    @property
    def size(self) -> int:
        return len(self.cells)

    def adjacency(self, edge_type: str, order: Sequence[str] | None = None) -> np.ndarray:
        return adjacency_matrix(self, edge_type, order)

    def adjacency_matrices(self) -> list[np.ndarray]:
        return [adjacency_matrix(self, t) for t in self.edge_types]

    def __repr__(self) -> str:
        return f"Network(cells={list(self.cells)}, edge_types={list(self.edge_types)}, {len(self.edges)} edges)"


# ---------------------------------------------------------------- JSON I/O


def network_from_dict(doc: Mapping) -> Network:
    if not isinstance(doc, Mapping):
        raise NetworkError("network document must be a JSON object")
    try:
        cells = doc["cells"]
        types = doc["edge_types"]
        raw_edges = doc.get("edges", [])
    except KeyError as exc:
        raise NetworkError(f"missing field {exc.args[0]!r}") from exc
    if not isinstance(cells, list) or not isinstance(types, list) or not isinstance(raw_edges, list):
        raise NetworkError("cells, edge_types and edges must be arrays")
    edges = []
    for raw in raw_edges:
        try:
            edges.append(Edge(str(raw["source"]), str(raw["target"]), str(raw["type"])))
        except (KeyError, TypeError) as exc:
            raise NetworkError(f"malformed edge {raw!r}") from exc
    return Network(tuple(cells), tuple(types), tuple(edges))


def parse_network(text: str) -> Network:
    """Parse the network JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"JSON syntax error: {exc}") from exc
    return network_from_dict(doc)


def load_network(path: str) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def network_to_dict(n: Network) -> dict:
    return {
        "cells": list(n.cells),
        "edge_types": list(n.edge_types),
        "edges": [{"source": e.source, "target": e.target, "type": e.type} for e in n.edges],
    }


def dumps_network(n: Network) -> str:
    return json.dumps(network_to_dict(n), indent=2)


# -------------------------------------------------------------- validation


@dataclass(frozen=True)
class ValidationReport:
    is_homogeneous: bool
    is_asymmetric_inputs: bool
    is_regular: bool
    valency_per_type: dict[str, int] | None
    is_connected: bool
    components: int
    violations: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "is_homogeneous": self.is_homogeneous,
            "is_asymmetric_inputs": self.is_asymmetric_inputs,
            "is_regular": self.is_regular,
            "valency_per_type": self.valency_per_type,
            "is_connected": self.is_connected,
            "components": self.components,
            "violations": list(self.violations),
        }


PROPERTIES = ("homogeneous", "asymmetric_inputs", "regular", "connected", "one_input")


def validate(n: Network, require: Iterable[str] = ("homogeneous",)) -> ValidationReport:
    """Compute the structural flags of ``n``; never raises on bad structure.

    ``violations`` lists a finding for each property in ``require`` that
    fails (names from :data:`PROPERTIES`).
    """
    require = tuple(require)
    unknown = set(require) - set(PROPERTIES)
    if unknown:
        raise ValueError(f"unknown properties {sorted(unknown)}")

    findings: dict[str, list[str]] = {p: [] for p in PROPERTIES}
    valency: dict[str, int] = {}
    for t, per_type in zip(n.edge_types, n.inputs):
        counts = {len(srcs) for srcs in per_type}
        if len(counts) > 1:
            findings["homogeneous"].append(f"cells receive {sorted(counts)} inputs of type {t!r}")
        else:
            valency[t] = counts.pop()
        for c, srcs in enumerate(per_type):
            if len(srcs) > 1:
                findings["asymmetric_inputs"].append(
                    f"cell {n.cells[c]!r} receives {len(srcs)} inputs of type {t!r}"
                )
    homogeneous = not findings["homogeneous"]
    asymmetric = not findings["asymmetric_inputs"]
    regular = homogeneous and len(n.edge_types) == 1
    if not regular:
        findings["regular"].append(
            "not homogeneous" if not homogeneous else f"{len(n.edge_types)} edge types"
        )
    ncomp = len(_component_blocks(n))
    if ncomp > 1:
        findings["connected"].append(f"{ncomp} connected components")
    if not (regular and valency.get(n.edge_types[0]) == 1 if n.edge_types else False):
        findings["one_input"].append("not a regular network of valency 1")

    violations = tuple(msg for prop in require for msg in findings[prop])
    return ValidationReport(
        is_homogeneous=homogeneous,
        is_asymmetric_inputs=asymmetric,
        is_regular=regular,
        valency_per_type=dict(valency) if homogeneous else None,
        is_connected=ncomp == 1,
        components=ncomp,
        violations=violations,
    )


# ---------------------------------------------------------- constructions


def edge_type_subnetwork(n: Network, edge_type: str) -> Network:
    """Same cells, only the edges of ``edge_type``."""
    if edge_type not in n.type_index:
        raise NetworkError(f"unknown edge type {edge_type!r}")
    return Network(n.cells, (edge_type,), tuple(e for e in n.edges if e.type == edge_type))


def induced_subnetwork(n: Network, cells: Iterable[str]) -> Network:
    """Restriction to ``cells`` (kept in canonical order) and the edges among them."""
    keep = set(cells)
    ordered = tuple(c for c in n.cells if c in keep)
    if len(ordered) != len(keep):
        raise NetworkError("unknown cells in selection")
    return Network(
        ordered,
        n.edge_types,
        tuple(e for e in n.edges if e.source in keep and e.target in keep),
    )


def _component_blocks(n: Network) -> list[list[int]]:
    parent = list(range(n.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in n.edges:
        a, b = find(n.index[e.source]), find(n.index[e.target])
        if a != b:
            parent[max(a, b)] = min(a, b)
    blocks: dict[int, list[int]] = {}
    for i in range(n.size):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def connected_components(n: Network) -> list[tuple[Network, tuple[str, ...]]]:
    """Undirected components, ordered by their first cell."""
    out = []
    for block in _component_blocks(n):
        names = tuple(n.cells[i] for i in block)
        out.append((induced_subnetwork(n, names), names))
    return out


def disjoint_union(n1: Network, n2: Network) -> Network:
    """Cells of ``n1`` followed by cells of ``n2``; no new edges."""
    overlap = set(n1.cells) & set(n2.cells)
    if overlap:
        raise NetworkError(f"cell names overlap: {sorted(overlap)}")
    if set(n1.edge_types) != set(n2.edge_types):
        raise NetworkError("edge type lists differ")
    return Network(n1.cells + n2.cells, n1.edge_types, n1.edges + n2.edges)


def join_networks(n1: Network, n2: Network) -> Network:
    """Disjoint union plus an edge from every cell of each part to every
    cell of the other part."""
    union = disjoint_union(n1, n2)
    if len(union.edge_types) != 1:
        raise NetworkError("the join is defined for a single edge type")
    t = union.edge_types[0]
    cross = [Edge(a, b, t) for a in n1.cells for b in n2.cells]
    cross += [Edge(b, a, t) for a in n1.cells for b in n2.cells]
    return Network(union.cells, union.edge_types, union.edges + tuple(cross))


def adjacency_matrix(n: Network, edge_type: str, order: Sequence[str] | None = None) -> np.ndarray:
    """Integer matrix ``a[c, d]`` = number of ``edge_type`` edges from ``d`` into ``c``."""
    if edge_type not in n.type_index:
        raise NetworkError(f"unknown edge type {edge_type!r}")
    if order is None:
        perm = list(range(n.size))
    else:
        if sorted(order) != sorted(n.cells) or len(order) != n.size:
            raise NetworkError("order must be a permutation of the cells")
        perm = [n.index[c] for c in order]
    pos = {old: new for new, old in enumerate(perm)}
    a = np.zeros((n.size, n.size), dtype=np.int64)
    for c, srcs in enumerate(n.inputs[n.type_index[edge_type]]):
        for d in srcs:
            a[pos[c], pos[d]] += 1
    return a


# ------------------------------------------------------- interior symmetry


@dataclass(frozen=True)
class InteriorSymmetry:
    """Permutation of all cells that fixes every cell outside ``support``."""

    support: frozenset[str]
    mapping: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "support", frozenset(self.support))
        moved = {k for k, v in self.mapping.items() if k != v}
        if sorted(self.mapping.keys()) != sorted(self.mapping.values()):
            raise ValueError("mapping is not a permutation")
        if not moved <= self.support:
            raise ValueError("mapping moves cells outside the support")

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[str]], support: Iterable[str] | None = None) -> InteriorSymmetry:
        mapping: dict[str, str] = {}
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                mapping[a] = b
        if support is None:
            support = [k for k, v in mapping.items() if k != v]
        return cls(frozenset(support), mapping)

    def __call__(self, cell: str) -> str:
        return self.mapping.get(cell, cell)


def is_interior_symmetry(n: Network, sym: InteriorSymmetry) -> bool:
    """Check ``a[c, d] == a[sigma(c), sigma(d)]`` for ``c`` in the support,
    every ``d`` and every edge type."""
    for name in list(sym.support) + list(sym.mapping):
        if name not in n.index:
            raise NetworkError(f"unknown cell {name!r} in symmetry")
    sigma = [n.index[sym(c)] for c in n.cells]
    for per_type in n.inputs:
        for name in sym.support:
            c = n.index[name]
            # count-vector equality of row c and row sigma(c) under relabelling
            if sorted(sigma[d] for d in per_type[c]) != list(per_type[sigma[c]]):
                return False
    return True


# ----------------------------------------------------------------- quotient


@dataclass(frozen=True)
class QuotientResult:
    quotient: Network
    class_map: dict[str, str]
    representative: dict[str, str]
    partition: Partition
    source: Network

    def to_dict(self) -> dict:
        return {
            "quotient": network_to_dict(self.quotient),
            "class_map": dict(self.class_map),
            "representative": dict(self.representative),
        }


def quotient(n: Network, p: Partition) -> QuotientResult:
    """Collapse each class of the balanced partition ``p`` to one cell named
    after its minimal member; per type, the quotient inputs are the
    projected inputs of that representative."""
    if not pt.is_balanced(n, p):
        raise NetworkError("partition is not balanced for this network")
    reps = [n.cells[block[0]] for block in p.classes]
    lab = p.labels
    edges = []
    for t, per_type in zip(n.edge_types, n.inputs):
        for k, block in enumerate(p.classes):
            for s in per_type[block[0]]:
                edges.append(Edge(reps[lab[s]], reps[k], t))
    q = Network(tuple(reps), n.edge_types, tuple(edges))
    class_map = {n.cells[c]: reps[lab[c]] for c in range(n.size)}
    return QuotientResult(q, class_map, {r: r for r in reps}, p, n)


def restrict_partition(q: QuotientResult, finer: Partition) -> Partition:
    """Restriction of a partition of the original cells to the quotient.

    ``finer`` must merge whole classes of the quotient's partition, i.e. its
    subspace lies inside the quotient's subspace.
    """
    if not pt.refines(q.partition, finer):
        raise pt.PartitionError("partition does not contain the quotient's equalities")
    flab = finer.labels
    return pt.from_labels([flab[block[0]] for block in q.partition.classes])


def lift_partition(q: QuotientResult, qp: Partition) -> Partition:
    """Lift a partition of quotient cells back to the original cells."""
    if qp.arity != q.quotient.size:
        raise pt.PartitionError("partition arity does not match the quotient")
    qlab = qp.labels
    return pt.from_labels([qlab[k] for k in q.partition.labels])

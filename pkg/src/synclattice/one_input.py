"""Connected 1-input regular networks: ring and tree structure, exact
spectral data, generating partitions and colouring patterns.

Every cell ``c`` has a single input ``f(c)``.  Iterating ``f`` ends on a
ring; the remaining cells hang from it in rooted trees whose edges point
away from the ring.  Eigen data is exact: the eigenvalue ``w**j`` of the
``m``-th root of unity ``w`` is stored as the exponent ``j``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _rows
from . import lattice as lt
from . import network as nw
from . import partition as pt
from .network import Network
from .partition import Partition


class NotOneInputError(ValueError):
    pass


@dataclass(frozen=True)
class FunctionalGraph:
    network: Network
    f: tuple[int, ...]

    def input_of(self, cell: str) -> str:
        return self.network.cells[self.f[self.network.index[cell]]]

    def as_names(self) -> dict[str, str]:
        cells = self.network.cells
        return {cells[c]: cells[s] for c, s in enumerate(self.f)}


def input_map(n: Network) -> tuple[int, ...]:
    """Input of every cell of a regular valency-1 network (connected or not)."""
    rep = nw.validate(n, require=("one_input",))
    if rep.violations:
        raise NotOneInputError("; ".join(rep.violations))
    return tuple(srcs[0] for srcs in n.inputs[0])


def as_functional_graph(n: Network) -> FunctionalGraph:
    rep = nw.validate(n, require=("one_input", "connected"))
    if rep.violations:
        raise NotOneInputError("; ".join(rep.violations))
    return FunctionalGraph(n, tuple(srcs[0] for srcs in n.inputs[0]))


# ------------------------------------------------------------ decomposition


@dataclass(frozen=True)
class RingTreeDecomposition:
    """Indices refer to the canonical cell order of ``graph.network``."""

    graph: FunctionalGraph
    ring: tuple[int, ...]
    anchor: tuple[int, ...]
    dist: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def network(self) -> Network:
        return self.graph.network

    @property
    def f(self) -> tuple[int, ...]:
        return self.graph.f

    @property
    def m(self) -> int:
        return len(self.ring)

    @property
    def size(self) -> int:
        return len(self.f)

    @cached_property
    def on_ring(self) -> frozenset[int]:
        return frozenset(self.ring)

    @cached_property
    def subtrees(self) -> dict[int, frozenset[int]]:
        """Descendant-closed subtree of every non-ring cell, keyed by its root."""
        out: dict[int, frozenset[int]] = {}
        for c in sorted((c for c in range(self.size) if c not in self.on_ring), key=lambda c: -self.dist[c]):
            members = {c}
            for child in self.children[c]:
                members |= out[child]
            out[c] = frozenset(members)
        return dict(sorted(out.items()))

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(c for c in range(self.size) if c not in self.on_ring and not self.children[c])

    @cached_property
    def tails(self) -> tuple[tuple[int, ...], ...]:
        """Paths from the anchoring ring cell down to each leaf."""
        out = []
        for leaf in self.leaves:
            path = [leaf]
            while path[-1] not in self.on_ring:
                path.append(self.f[path[-1]])
            out.append(tuple(reversed(path)))
        return tuple(out)

    @property
    def depth(self) -> int:
        return max(self.dist)

    @cached_property
    def tree_roots(self) -> tuple[int, ...]:
        """Non-ring cells whose input lies on the ring."""
        return tuple(c for r in self.ring for c in self.children[r])

    def to_dict(self) -> dict:
        cells = self.network.cells
        return {
            "ring": [cells[c] for c in self.ring],
            "m": self.m,
            "depth": self.depth,
            "anchor": {cells[c]: cells[a] for c, a in enumerate(self.anchor)},
            "dist": {cells[c]: d for c, d in enumerate(self.dist)},
            "leaves": [cells[c] for c in self.leaves],
            "tails": [[cells[c] for c in t] for t in self.tails],
            "subtrees": {cells[r]: [cells[c] for c in sorted(s)] for r, s in self.subtrees.items()},
        }


def ring_tree_decompose(g: FunctionalGraph) -> RingTreeDecomposition:
    f = g.f
    k = len(f)
    # walk from cell 0 until a cell repeats; the repeat lies on the ring
    seen: dict[int, int] = {}
    c = 0
    while c not in seen:
        seen[c] = len(seen)
        c = f[c]
    cycle = [c]
    while f[cycle[-1]] != c:
        cycle.append(f[cycle[-1]])
    start = cycle.index(min(cycle))
    ring = tuple(cycle[start:] + cycle[:start])
    on_ring = set(ring)

    children: list[list[int]] = [[] for _ in range(k)]
    for d in range(k):
        if d not in on_ring:
            children[f[d]].append(d)
    anchor = [-1] * k
    dist = [0] * k
    frontier = list(ring)
    for r in ring:
        anchor[r] = r
    while frontier:
        nxt = []
        for a in frontier:
            for child in children[a]:
                anchor[child] = anchor[a]
                dist[child] = dist[a] + 1
                nxt.append(child)
        frontier = nxt
    if -1 in anchor:  # only possible for disconnected input
        raise NotOneInputError("network is not connected")
    return RingTreeDecomposition(g, ring, tuple(anchor), tuple(dist), tuple(tuple(ch) for ch in children))


def decompose(n: Network) -> RingTreeDecomposition:
    return ring_tree_decompose(as_functional_graph(n))


# ----------------------------------------------------------------- spectrum


@dataclass(frozen=True)
class JordanChainDescriptor:
    family: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.layers)

    def to_dict(self, cells: Sequence[str]) -> dict:
        return {
            "family": [cells[c] for c in self.family],
            "layers": [[cells[c] for c in layer] for layer in self.layers],
            "length": self.length,
        }


@dataclass(frozen=True)
class SpectralSummary:
    decomposition: RingTreeDecomposition
    exponent: tuple[int, ...]

    @property
    def m(self) -> int:
        return self.decomposition.m

    @property
    def root_exponents(self) -> tuple[int, ...]:
        """Eigenvalue ``w**j`` for each ``j``, with ``w`` a primitive m-th root of unity."""
        return tuple(range(self.m))

    @property
    def zero_multiplicity(self) -> int:
        return self.decomposition.size - self.m

    @property
    def zero_eigenspace_dim(self) -> int:
        return len(self.decomposition.leaves)

    @property
    def zero_eigenbasis(self) -> tuple[int, ...]:
        """Leaves; their indicator vectors span the kernel."""
        return self.decomposition.leaves

    @cached_property
    def jordan_descriptors(self) -> tuple[JordanChainDescriptor, ...]:
        return tuple(jordan_chain_for(self, fam) for fam in subtree_families(self.decomposition))

    def to_dict(self) -> dict:
        d = self.decomposition
        cells = d.network.cells
        return {
            "m": self.m,
            "root_of_unity_exponents": list(self.root_exponents),
            "zero_multiplicity": self.zero_multiplicity,
            "zero_eigenspace_dim": self.zero_eigenspace_dim,
            "zero_eigenbasis": [cells[c] for c in self.zero_eigenbasis],
            "exponent_map": {cells[c]: e for c, e in enumerate(self.exponent)},
            "jordan_chains": [j.to_dict(cells) for j in self.jordan_descriptors],
        }


def exponent_map(d: RingTreeDecomposition) -> tuple[int, ...]:
    """``e`` with ``e(f(c)) = e(c) + 1 (mod m)`` and ``e`` of the first ring cell 0."""
    e = [0] * d.size
    for i, r in enumerate(d.ring):
        e[r] = i
    for c in sorted(range(d.size), key=lambda c: d.dist[c]):
        if c not in d.on_ring:
            e[c] = (e[d.f[c]] - 1) % d.m
    return tuple(e)


def spectral_summary(d: RingTreeDecomposition) -> SpectralSummary:
    return SpectralSummary(d, exponent_map(d))


def eigenvector_for(s: SpectralSummary, j: int) -> tuple[int, ...]:
    """Exponent vector of the ``w**j`` eigenvector: entry ``c`` is ``j*e(c) mod m``."""
    if not 0 <= j < s.m:
        raise ValueError(f"root index {j} outside 0..{s.m - 1}")
    return tuple(j * x % s.m for x in s.exponent)


def is_eigenvector(s: SpectralSummary, j: int, vec: Sequence[int]) -> bool:
    """Exact check of ``A v = w**j v`` for an exponent vector: ``(A v)_c = v_{f(c)}``."""
    f, m = s.decomposition.f, s.m
    return all((vec[f[c]] - vec[c] - j) % m == 0 for c in range(len(vec)))


def subtree_families(d: RingTreeDecomposition) -> list[tuple[int, ...]]:
    """Every nonempty set of non-ring roots whose subtrees are pairwise disjoint."""

    def options(c: int) -> list[tuple[int, ...]]:
        # antichains inside the subtree at c, the empty one included
        below = [options(child) for child in d.children[c]]
        out = [()]
        for combo in itertools.product(*below):
            fam = tuple(x for part in combo for x in part)
            if fam:
                out.append(fam)
        out.append((c,))
        return out

    tops = [options(r) for r in d.tree_roots]
    fams = []
    for combo in itertools.product(*tops):
        fam = tuple(sorted(x for part in combo for x in part))
        if fam:
            fams.append(fam)
    return sorted(fams)


def jordan_chain_for(s: SpectralSummary, family: Iterable[int]) -> JordanChainDescriptor:
    d = s.decomposition
    roots = tuple(sorted(set(family)))
    if not roots:
        raise ValueError("empty subtree family")
    for r in roots:
        if r in d.on_ring:
            raise ValueError(f"cell {d.network.cells[r]!r} lies on the ring")
    for a, b in itertools.combinations(roots, 2):
        if d.subtrees[a] & d.subtrees[b]:
            raise ValueError("subtrees overlap")
    layers: dict[int, list[int]] = {}
    for r in roots:
        for c in d.subtrees[r]:
            layers.setdefault(d.dist[c] - d.dist[r], []).append(c)
    return JordanChainDescriptor(roots, tuple(tuple(sorted(layers[j])) for j in sorted(layers)))


def chain_relations_hold(d: RingTreeDecomposition, chain: JordanChainDescriptor) -> bool:
    """``A u_j = u_{j+1}`` and ``A u_last = 0`` for the layer indicators."""
    a = nw.adjacency_matrix(d.network, d.network.edge_types[0])
    vecs = []
    for layer in chain.layers:
        v = np.zeros(d.size, dtype=np.int64)
        v[list(layer)] = 1
        vecs.append(v)
    vecs.append(np.zeros(d.size, dtype=np.int64))
    return all(np.array_equal(a @ vecs[i], vecs[i + 1]) for i in range(chain.length))


# ------------------------------------------------------------- generators


@dataclass(frozen=True)
class Generator:
    partition: Partition
    kind: str  # "divisor" or "chain"
    detail: tuple[int, ...]  # the divisor q, or the family roots


def divisors(m: int) -> list[int]:
    return [q for q in range(1, m + 1) if m % q == 0]


def divisor_partition(s: SpectralSummary, q: int) -> Partition:
    return pt.from_labels([x % q for x in s.exponent])


def chain_partition(d: RingTreeDecomposition, chain: JordanChainDescriptor) -> Partition:
    """Chain layers as classes, every other cell in one further class."""
    in_chain = {c for layer in chain.layers for c in layer}
    rest = [c for c in range(d.size) if c not in in_chain]
    return pt.from_classes(d.size, [rest, *chain.layers])


def enumerate_generators(d: RingTreeDecomposition) -> list[Generator]:
    s = spectral_summary(d)
    out = [Generator(divisor_partition(s, q), "divisor", (q,)) for q in divisors(d.m)]
    for chain in s.jordan_descriptors:
        out.append(Generator(chain_partition(d, chain), "chain", chain.family))
    return out


def enumerate_join_irreducibles(d: RingTreeDecomposition) -> list[Partition]:
    """Divisor and chain partitions, deduplicated, canonical order."""
    return sorted({g.partition for g in enumerate_generators(d)}, key=pt.element_key)


def lattice_from_irreducibles(
    irr: Iterable[Partition],
    network: Network | None = None,
    cells: Sequence[str] | None = None,
    verify: bool = True,
) -> lt.SyncLattice:
    """Close ``irr`` under common refinement and add the top."""
    irr = list(irr)
    if cells is None:
        if network is None:
            raise ValueError("need a network or a cell list")
        cells = network.cells
    rows = _rows.join_closure(irr, len(cells))
    return lt.build(_rows.partitions_of(rows), network, require_sum_closure=True, cells=cells, verify=verify)


def one_input_lattice(n: Network, verify: bool = True) -> lt.SyncLattice:
    d = decompose(n)
    return lattice_from_irreducibles(enumerate_join_irreducibles(d), n, verify=verify)


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class PatternClass:
    kind: str
    period: int | None = None
    depth: int | None = None
    roots: tuple[str, ...] = ()
    layers: tuple[tuple[str, ...], ...] = ()
    detach: tuple[tuple[str, int | None], ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.period is not None:
            out["period"] = self.period
        if self.depth is not None:
            out["depth"] = self.depth
        if self.roots:
            out["roots"] = list(self.roots)
            out["layers"] = [list(layer) for layer in self.layers]
        if self.detach:
            out["detach"] = {leaf: idx for leaf, idx in self.detach}
        return out


FULL_SYNC = "FullSync"
PERIODIC = "PeriodicRingWrapped"
ALL_DISTINCT = "AllDistinctRingWrapped"
LEAF_SUBSET = "LeafSubset"
SUBTREE_CHAIN = "SubtreeChain"
COMPOSITE = "Composite"


def classify_pattern(d: RingTreeDecomposition, p: Partition) -> PatternClass:
    """Describe a balanced colouring by its ring period and where each
    tail stops following the ring colouring wrapped along it."""
    n = d.network
    if not pt.is_balanced(n, p):
        raise pt.PartitionError("partition is not balanced")
    cells = n.cells
    if p.is_full():
        return PatternClass(FULL_SYNC, period=1)
    lab = p.labels
    ring_cols = [lab[r] for r in d.ring]
    q = next(q for q in divisors(d.m) if all(ring_cols[i] == ring_cols[(i + q) % d.m] for i in range(d.m)))
    e = exponent_map(d)

    def wrapped(c: int) -> bool:
        return lab[c] == ring_cols[e[c]]

    detach = []
    for tail in d.tails:
        idx = next((i for i, c in enumerate(tail) if not wrapped(c)), None)
        if idx is not None and not all(not wrapped(c) for c in tail[idx:]):
            raise AssertionError("wrapping resumed after detaching")  # impossible when balanced
        detach.append((cells[tail[-1]], idx))
    roots = sorted({tail[idx] for tail, (_, idx) in zip(d.tails, detach) if idx is not None})

    if not roots:
        if q == d.m:
            return PatternClass(ALL_DISTINCT, period=q)
        return PatternClass(PERIODIC, period=q)
    if q == 1:
        chain = jordan_chain_for(spectral_summary(d), roots)
        if chain_partition(d, chain) == p:
            named = tuple(cells[r] for r in chain.family)
            layers = tuple(tuple(cells[c] for c in layer) for layer in chain.layers)
            if chain.length == 1 and all(not d.children[r] for r in roots):
                return PatternClass(LEAF_SUBSET, roots=named, layers=layers)
            return PatternClass(SUBTREE_CHAIN, depth=chain.length - 1, roots=named, layers=layers)
    return PatternClass(COMPOSITE, period=q, detach=tuple(detach))

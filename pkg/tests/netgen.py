"""Seeded random networks for the property suites."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from synclattice import partition as pt
from synclattice.network import Edge, Network

DATA = Path(__file__).parent / "data"


def cell_names(n: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(n))


def random_one_input(rng: np.random.Generator, n: int, edge_type: str = "e", names=None) -> Network:
    """Connected 1-input network: a random ring with random trees hung on it."""
    names = names or cell_names(n)
    m = int(rng.integers(1, n + 1))
    order = rng.permutation(n)
    f = {}
    for i in range(m):
        f[order[i]] = order[(i + 1) % m]
    for i in range(m, n):
        f[order[i]] = order[int(rng.integers(0, i))]
    edges = tuple(Edge(names[f[c]], names[c], edge_type) for c in range(n))
    return Network(tuple(names), (edge_type,), edges)


def random_asymmetric(rng: np.random.Generator, n: int, types: int) -> Network:
    """Homogeneous network in which every cell has one input of each type."""
    names = cell_names(n)
    tnames = tuple(f"t{k}" for k in range(types))
    edges = [Edge(names[int(rng.integers(0, n))], names[c], t) for t in tnames for c in range(n)]
    return Network(names, tnames, tuple(edges))


def random_regular(rng: np.random.Generator, n: int, valency: int) -> Network:
    """Single-type network with ``valency`` inputs per cell (repeats allowed)."""
    names = cell_names(n)
    edges = [Edge(names[int(rng.integers(0, n))], names[c], "e") for c in range(n) for _ in range(valency)]
    return Network(names, ("e",), tuple(edges))


def random_partition(rng: np.random.Generator, n: int) -> pt.Partition:
    k = int(rng.integers(1, n + 1))
    return pt.from_labels([int(x) for x in rng.integers(0, k, size=n)])


def all_partitions(n: int):
    """Every set partition of ``n`` cells as restricted-growth label lists."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for v in range(top + 2):
            yield from grow(prefix + [v], max(top, v))
    yield from grow([], -1)


def reference_tables() -> dict:
    return json.loads((DATA / "reference_tables.json").read_text())


def table(name: str) -> tuple[tuple[str, ...], set[pt.Partition]]:
    doc = reference_tables()[name]
    cells = tuple(doc["cells"])
    return cells, {pt.parse_polydiagonal(e, cells) for e in doc["elements"]}

"""Exhaustive ground truth: every set partition of the cells, filtered by
the balanced criterion."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import lattice as lt
from . import partition as pt
from .network import Network
from .partition import Partition

log = logging.getLogger(__name__)

DEFAULT_CAP = 12


class CapExceeded(RuntimeError):
    def __init__(self, cells: int, cap: int):
        self.cells, self.cap = cells, cap
        super().__init__(
            f"{cells} cells exceeds the oracle cap of {cap} "
            f"(about {bell(cells):.3g} partitions to visit)"
        )


@dataclass(frozen=True)
class OracleConfig:
    max_cells: int = DEFAULT_CAP
    parallel: bool = False

    def __post_init__(self) -> None:
        if self.max_cells > DEFAULT_CAP:
            log.warning("oracle cap raised to %d cells; enumeration may be very slow", self.max_cells)


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _visit_order(n: Network) -> list[int]:
    """Cells ordered so that inputs tend to be assigned early: repeatedly
    take the unplaced cell with the most already-placed inputs."""
    k = n.size
    srcs = [sorted({s for per_type in n.inputs for s in per_type[c]}) for c in range(k)]
    placed: list[int] = []
    seen = [False] * k
    while len(placed) < k:
        best = max(
            (c for c in range(k) if not seen[c]),
            key=lambda c: (sum(seen[s] for s in srcs[c]), -len(srcs[c]), -c),
        )
        placed.append(best)
        seen[best] = True
    return placed


class _Search:
    """Restricted-growth enumeration with signature pruning."""

    def __init__(self, n: Network):
        self.n = n
        self.order = _visit_order(n)
        k = n.size
        pos = {c: i for i, c in enumerate(self.order)}
        # cells whose own label and every input label are known after position i
        self.ready: list[list[int]] = [[] for _ in range(k)]
        for c in range(k):
            need = [pos[c]] + [pos[s] for per_type in n.inputs for s in per_type[c]]
            self.ready[max(need)].append(c)

    def signature(self, lab: list[int], c: int) -> tuple:
        return tuple(tuple(sorted(lab[s] for s in per_type[c])) for per_type in self.n.inputs)

    def run(self, prefix: Sequence[int] = ()) -> Iterator[tuple[int, ...]]:
        k = self.n.size
        lab = [-1] * k
        sigs: dict[int, tuple] = {}
        # replay a fixed prefix of the visiting order
        for i, value in enumerate(prefix):
            lab[self.order[i]] = value
            if not self._accept(lab, sigs, i):
                return
        top = max(prefix, default=-1)
        yield from self._extend(lab, sigs, len(prefix), top)

    def _accept(self, lab: list[int], sigs: dict[int, tuple], i: int) -> bool:
        added = []
        ok = True
        for c in self.ready[i]:
            s = self.signature(lab, c)
            known = sigs.get(lab[c])
            if known is None:
                sigs[lab[c]] = s
                added.append(lab[c])
            elif known != s:
                ok = False
                break
        if not ok:
            for key in added:
                del sigs[key]
        else:
            self._last_added = added
        return ok

    def _extend(self, lab: list[int], sigs: dict[int, tuple], i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == self.n.size:
            yield tuple(lab)
            return
        cell = self.order[i]
        for value in range(top + 2):
            lab[cell] = value
            if self._accept(lab, sigs, i):
                added = self._last_added
                yield from self._extend(lab, sigs, i + 1, max(top, value))
                for key in added:
                    del sigs[key]
        lab[cell] = -1


def _check_cap(n: Network, cfg: OracleConfig) -> None:
    if n.size > cfg.max_cells:
        raise CapExceeded(n.size, cfg.max_cells)


def _prefixes(depth: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        out = [p + (v,) for p in out for v in range(max(p, default=-1) + 2)]
    return out


def _run_prefix(args: tuple[Network, tuple[int, ...]]) -> list[tuple[int, ...]]:
    n, prefix = args
    return list(_Search(n).run(prefix))


def balanced_partitions(n: Network, cfg: OracleConfig = OracleConfig()) -> list[Partition]:
    """Every balanced partition of ``n``, sorted canonically."""
    _check_cap(n, cfg)
    if cfg.parallel and n.size > 4:
        with ProcessPoolExecutor() as pool:
            chunks = pool.map(_run_prefix, [(n, p) for p in _prefixes(4)])
            labelings = [lab for chunk in chunks for lab in chunk]
    else:
        labelings = list(_Search(n).run())
    return sorted({pt.from_labels(lab) for lab in labelings}, key=pt.element_key)


def enumerate_balanced(n: Network, cfg: OracleConfig = OracleConfig()) -> lt.SyncLattice:
    """The full lattice of balanced partitions."""
    parts = balanced_partitions(n, cfg)
    asym = all(len(srcs) <= 1 for per_type in n.inputs for srcs in per_type)
    return lt.build(parts, n, require_sum_closure=asym)


def pairing_shaped_balanced(n: Network, split: Sequence[str], cfg: OracleConfig = OracleConfig()) -> list[Partition]:
    """Balanced partitions whose only merged classes are 2-classes with one
    cell on each side of ``split`` (the cells of the first part)."""
    first = {n.index[c] for c in split}
    out = []
    for p in balanced_partitions(n, cfg):
        blocks = p.nontrivial()
        if blocks and all(len(b) == 2 and ((b[0] in first) != (b[1] in first)) for b in blocks):
            out.append(p)
    return out


def estimate(n_cells: int) -> float:
    """Logarithm base 10 of the number of partitions to visit."""
    return math.log10(bell(n_cells))

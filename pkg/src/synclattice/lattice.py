"""Finite lattices of balanced partitions in subspace order."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from . import _rows
from . import partition as pt
from .network import Network
from .partition import Partition

log = logging.getLogger(__name__)

#: Closure verification in :func:`build` is skipped above this many elements.
VERIFY_LIMIT = 3000


class LatticeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SyncLattice:
    """Balanced partitions of ``cells`` ordered by subspace inclusion.

    ``a <= b`` iff ``b``'s partition refines ``a``'s (``b`` has the larger
    polydiagonal).  Elements are listed coarsest first; the all-singleton
    top is always present.
    """

    cells: tuple[str, ...]
    elements: tuple[Partition, ...]
    sum_closed: bool = False
    network: Network | None = field(default=None, repr=False)
    verified: bool = False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SyncLattice):
            return NotImplemented
        return self.cells == other.cells and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.cells, self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return p in self.index

    @cached_property
    def index(self) -> dict[Partition, int]:
        return {p: i for i, p in enumerate(self.elements)}

    @cached_property
    def element_set(self) -> frozenset[Partition]:
        return frozenset(self.elements)

    @property
    def top(self) -> Partition:
        return pt.singletons(len(self.cells))

    @cached_property
    def bottom(self) -> Partition:
        return reduce(pt.equivalence_closure, self.elements)

    @cached_property
    def rows(self) -> np.ndarray:
        return _rows.rows_of(self.elements, len(self.cells))

    @cached_property
    def order(self) -> np.ndarray:
        """Boolean matrix ``order[i, j]``: element i <= element j (subspace order)."""
        lab = self.rows
        k = len(lab)
        out = np.zeros((k, k), dtype=bool)
        # elements are sorted by class count, and i <= j needs no more classes than j
        ends = np.searchsorted([p.nclasses for p in self.elements], [p.nclasses for p in self.elements], side="right")
        for j, p in enumerate(self.elements):
            rep = np.empty(len(self.cells), dtype=np.intp)
            for block in p.classes:
                rep[list(block)] = block[0]
            head = lab[: ends[j]]
            out[: ends[j], j] = (head[:, rep] == head).all(axis=1)
        return out

    @cached_property
    def covers(self) -> np.ndarray:
        """Boolean matrix of cover relations ``i < j`` with nothing in between."""
        lt = self.order & ~np.eye(len(self), dtype=bool)
        ltf = lt.astype(np.float32)
        between = (ltf @ ltf) > 0
        return lt & ~between

    def leq(self, a: Partition, b: Partition) -> bool:
        return pt.subspace_leq(a, b)

    def _require(self, p: Partition) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise LatticeError(f"{p!r} is not an element of the lattice") from None

    def render(self, p: Partition) -> str:
        return pt.render(p, self.cells)


def _verify_closure(elements: Sequence[Partition], n: int, require_sum_closure: bool) -> None:
    rows = _rows.rows_of(elements, n)
    pool = _rows.keys(rows)
    for i, row in enumerate(rows[:-1]):
        later = rows[i + 1:]
        bad = _rows.missing(_rows.meet_with(later, row), pool)
        if bad.any():
            j = i + 1 + int(np.flatnonzero(bad)[0])
            raise LatticeError(
                f"not closed under intersection: {elements[i]!r} and {elements[j]!r}"
            )
        if require_sum_closure:
            bad = _rows.missing(_rows.join_with(later, row), pool)
            if bad.any():
                j = i + 1 + int(np.flatnonzero(bad)[0])
                raise LatticeError(f"not closed under sum: {elements[i]!r} and {elements[j]!r}")


def build(
    elements: Iterable[Partition],
    network: Network | None = None,
    require_sum_closure: bool = False,
    cells: Sequence[str] | None = None,
    verify: bool = True,
) -> SyncLattice:
    """Assemble a lattice, inserting the top.

    With ``verify`` every element is checked for balance against
    ``network`` and the set is checked for closure under intersection (and
    under sum when ``require_sum_closure``).  Closure checks are skipped
    with a warning above :data:`VERIFY_LIMIT` elements.
    """
    if cells is None:
        if network is None:
            raise LatticeError("need a network or a cell list")
        cells = network.cells
    cells = tuple(cells)
    n = len(cells)
    elems = set(elements)
    for p in elems:
        if p.arity != n:
            raise LatticeError(f"{p!r} does not cover the {n} cells")
    elems.add(pt.singletons(n))
    ordered = tuple(sorted(elems, key=pt.element_key))
    verified = False
    if verify:
        if network is not None:
            for p in ordered:
                if not pt.is_balanced(network, p):
                    raise LatticeError(f"unbalanced element {pt.render(p, cells)!r}")
        if len(ordered) <= VERIFY_LIMIT:
            _verify_closure(ordered, n, require_sum_closure)
            verified = True
        else:
            log.warning("lattice has %d elements; closure verification skipped", len(ordered))
    return SyncLattice(cells, ordered, require_sum_closure, network, verified)


def hasse(lat: SyncLattice) -> list[tuple[int, int]]:
    """Cover pairs ``(i, j)``: element i is covered by element j, by index."""
    ii, jj = np.nonzero(lat.covers)
    return sorted(zip(ii.tolist(), jj.tolist()))


def meet(lat: SyncLattice, a: Partition, b: Partition) -> Partition:
    """Subspace intersection, always an element."""
    lat._require(a)
    lat._require(b)
    m = pt.equivalence_closure(a, b)
    lat._require(m)
    return m


def join(lat: SyncLattice, a: Partition, b: Partition) -> Partition:
    """Least upper bound in the lattice."""
    i, j = lat._require(a), lat._require(b)
    if lat.sum_closed:
        s = pt.class_intersection(a, b)
        lat._require(s)
        return s
    above = np.flatnonzero(lat.order[i] & lat.order[j])
    for c in above:
        if lat.order[c, above].all():
            return lat.elements[c]
    raise LatticeError("no least upper bound; the element set is not a lattice")


def join_all(lat: SyncLattice, parts: Iterable[Partition]) -> Partition:
    """Join of a family; the empty join is the bottom."""
    return reduce(lambda x, y: join(lat, x, y), parts, lat.bottom)


def join_irreducibles(lat: SyncLattice) -> list[Partition]:
    """Non-bottom elements with exactly one lower cover."""
    counts = lat.covers.sum(axis=0)
    return [p for p, c in zip(lat.elements, counts) if c == 1]


def meet_irreducibles(lat: SyncLattice) -> list[Partition]:
    """Non-top elements with exactly one upper cover."""
    counts = lat.covers.sum(axis=1)
    return [p for p, c in zip(lat.elements, counts) if c == 1]


def generators(lat: SyncLattice) -> list[Partition]:
    """Join-irreducibles together with the bottom."""
    out = set(join_irreducibles(lat)) | {lat.bottom}
    return sorted(out, key=pt.element_key)


def is_join_dense(lat: SyncLattice, q: Iterable[Partition]) -> bool:
    """Whether every element is the join of the members of ``q`` below it."""
    idx = [lat._require(p) for p in set(q)]
    for x, p in enumerate(lat.elements):
        below = [lat.elements[i] for i in idx if lat.order[i, x]]
        if join_all(lat, below) != p:
            return False
    return True


def intersect_lattices(lats: Sequence[SyncLattice], network: Network | None = None) -> SyncLattice:
    """Common elements of lattices over the same cells."""
    if not lats:
        raise LatticeError("nothing to intersect")
    cells = lats[0].cells
    for lat in lats[1:]:
        if lat.cells != cells:
            raise LatticeError("lattices are over different cell lists")
    common = set(lats[0].elements)
    for lat in lats[1:]:
        common &= lat.element_set
    return build(common, network, all(l.sum_closed for l in lats), cells=cells)


# ------------------------------------------------------------------- output


def to_dict(lat: SyncLattice, with_covers: bool = True) -> dict:
    doc = {
        "cells": list(lat.cells),
        "elements": [pt.to_named(p, lat.cells) for p in lat.elements],
    }
    if with_covers:
        doc["cover_edges"] = [list(e) for e in hasse(lat)]
    return doc


def to_json(lat: SyncLattice) -> str:
    return json.dumps(to_dict(lat), indent=2)


def from_dict(doc: dict, network: Network | None = None, verify: bool = False) -> SyncLattice:
    """Read a lattice document; ``cover_edges`` is ignored and recomputed."""
    try:
        cells = tuple(str(c) for c in doc["cells"])
        elements = [pt.from_named(cells, e) for e in doc["elements"]]
    except (KeyError, TypeError) as exc:
        raise LatticeError(f"malformed lattice document: {exc}") from exc
    return build(elements, network, cells=cells, verify=verify)


def to_dot(lat: SyncLattice) -> str:
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
    for i, p in enumerate(lat.elements):
        label = "⊤" if p.is_singletons() else lat.render(p)
        lines.append(f"  n{i} [label={json.dumps(label, ensure_ascii=False)}];")
    bottom = lat.index.get(lat.bottom)
    if bottom is not None:
        lines.append(f"  {{ rank=source; n{bottom}; }}")
    for i, j in hasse(lat):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_table(lat: SyncLattice) -> str:
    rows = []
    for p in lat.elements:
        rows.append("⊤ (all cells distinct)" if p.is_singletons() else lat.render(p))
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class LatticeDiff:
    only_a: tuple[Partition, ...]
    only_b: tuple[Partition, ...]
    common: int
    cells: tuple[str, ...]

    @property
    def equal(self) -> bool:
        return not self.only_a and not self.only_b

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "common": self.common,
            "only_in_a": [pt.render(p, self.cells) for p in self.only_a],
            "only_in_b": [pt.render(p, self.cells) for p in self.only_b],
        }


def compare(a: Iterable[Partition], b: Iterable[Partition], cells: Sequence[str], ignore_top: bool = False) -> LatticeDiff:
    """Set difference of two element collections over the same cells."""
    sa, sb = set(a), set(b)
    if ignore_top:
        top = pt.singletons(len(cells))
        sa.discard(top)
        sb.discard(top)
    key = pt.element_key
    return LatticeDiff(
        tuple(sorted(sa - sb, key=key)),
        tuple(sorted(sb - sa, key=key)),
        len(sa & sb),
        tuple(cells),
    )

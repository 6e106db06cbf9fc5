"""Canonical set partitions of a cell set and the balanced-colouring test.

A :class:`Partition` stands for a polydiagonal subspace: cells in the same
class have equal coordinates.  The subspace order is the *reverse* of the
refinement order: a finer partition imposes fewer equalities and so
describes a larger subspace.  Every function below that compares
partitions says which of the two orders it uses.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .network import Network


class PartitionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    """Set partition of ``{0, ..., arity-1}`` in canonical form.

    Classes are sorted tuples, ordered by their minimal element, so two
    partitions are equal iff they are the same set partition.
    """

    arity: int
    classes: tuple[tuple[int, ...], ...]

    @cached_property
    def labels(self) -> tuple[int, ...]:
        """Class index of every cell."""
        out = [0] * self.arity
        for k, block in enumerate(self.classes):
            for c in block:
                out[c] = k
        return tuple(out)

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    def is_singletons(self) -> bool:
        return len(self.classes) == self.arity

    def is_full(self) -> bool:
        return len(self.classes) == 1

    def same_class(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def nontrivial(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.classes if len(c) > 1)

    def __repr__(self) -> str:
        return f"Partition({self.arity}, {[list(c) for c in self.classes]})"


def from_classes(cells: int, classes: Iterable[Iterable[int]]) -> Partition:
    """Canonical partition from raw classes that must cover every cell.

    Use :func:`from_blocks` when omitted cells should default to singletons.
    """
    seen = [False] * cells
    blocks = []
    for raw in classes:
        block = sorted(set(raw))
        if not block:
            raise PartitionError("empty class")
        for c in block:
            if not 0 <= c < cells:
                raise PartitionError(f"cell index {c} out of range 0..{cells - 1}")
            if seen[c]:
                raise PartitionError(f"cell {c} appears in two classes")
            seen[c] = True
        blocks.append(tuple(block))
    missing = [i for i, s in enumerate(seen) if not s]
    if missing:
        raise PartitionError(f"cells {missing} are not covered")
    blocks.sort()
    return Partition(cells, tuple(blocks))


def from_blocks(cells: int, blocks: Iterable[Iterable[int]]) -> Partition:
    """Like :func:`from_classes` but uncovered cells become singletons."""
    blocks = [tuple(b) for b in blocks]
    covered = {c for b in blocks for c in b}
    blocks.extend((c,) for c in range(cells) if c not in covered)
    return from_classes(cells, blocks)


def from_labels(labels: Sequence[int]) -> Partition:
    """Partition whose classes are the level sets of ``labels``."""
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    # level sets are already sorted; order them by minimal element
    return Partition(len(labels), tuple(sorted(tuple(g) for g in groups.values())))


def singletons(cells: int) -> Partition:
    """All cells distinct: the total phase space (subspace-order top)."""
    return Partition(cells, tuple((i,) for i in range(cells)))


def full(cells: int) -> Partition:
    """One class: full synchrony (subspace-order bottom)."""
    return Partition(cells, (tuple(range(cells)),))


def _check_arity(p: Partition, q: Partition) -> None:
    if p.arity != q.arity:
        raise PartitionError(f"arity mismatch: {p.arity} vs {q.arity}")


def class_intersection(p: Partition, q: Partition) -> Partition:
    """Common refinement of ``p`` and ``q``.

    In subspace terms this is the *sum* of the two polydiagonals: only
    equalities present in both survive.
    """
    _check_arity(p, q)
    return from_labels(list(zip(p.labels, q.labels)))


def equivalence_closure(p: Partition, q: Partition) -> Partition:
    """Transitive closure of the union of the two equivalences.

    In subspace terms this is the *intersection* of the polydiagonals.
    """
    _check_arity(p, q)
    parent = list(range(p.arity))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        for block in part.classes:
            root = find(block[0])
            for c in block[1:]:
                r = find(c)
                if r != root:
                    if r < root:
                        root, r = r, root
                    parent[r] = root
    return from_labels([find(i) for i in range(p.arity)])


def refines(p: Partition, q: Partition) -> bool:
    """True iff every class of ``p`` lies inside a class of ``q``.

    Refinement order.  In subspace order this reads: the subspace of
    ``q`` is contained in the subspace of ``p``.
    """
    _check_arity(p, q)
    ql = q.labels
    return all(len({ql[c] for c in block}) == 1 for block in p.classes)


def subspace_leq(p: Partition, q: Partition) -> bool:
    """Subspace order: ``p``'s polydiagonal is contained in ``q``'s."""
    return refines(q, p)


# --------------------------------------------------------------- balance


def input_signatures(n: Network, p: Partition) -> list[tuple]:
    """Per cell, the sorted input classes of every edge type."""
    lab = p.labels
    return [
        tuple(tuple(sorted(lab[s] for s in srcs[c])) for srcs in n.inputs)
        for c in range(len(n.cells))
    ]


def is_balanced(n: Network, p: Partition) -> bool:
    """Balanced-colouring test.

    Same-class cells must receive, per edge type, the same multiset of
    input classes.  For asymmetric inputs this is the single-source colour
    condition.
    """
    if p.arity != len(n.cells):
        raise PartitionError(f"partition arity {p.arity} != {len(n.cells)} cells")
    lab = p.labels
    for srcs in n.inputs:
        for block in p.classes:
            if len(block) == 1:
                continue
            first = sorted(lab[s] for s in srcs[block[0]])
            for c in block[1:]:
                if sorted(lab[s] for s in srcs[c]) != first:
                    return False
    return True


def indicator_basis(p: Partition) -> np.ndarray:
    """``arity x nclasses`` 0/1 matrix whose columns span the polydiagonal."""
    basis = np.zeros((p.arity, p.nclasses), dtype=np.int64)
    basis[np.arange(p.arity), p.labels] = 1
    return basis


def in_polydiagonal(v: np.ndarray, p: Partition) -> bool:
    """Whether each column of ``v`` is constant on every class of ``p``."""
    v = np.asarray(v)
    if v.ndim == 1:
        v = v[:, None]
    for block in p.classes:
        if len(block) > 1 and not (v[list(block)] == v[block[0]]).all():
            return False
    return True


def invariance_check(n: Network, p: Partition) -> bool:
    """Linear-algebra route to balance: the polydiagonal must be mapped into
    itself by every adjacency matrix of ``n``."""
    if p.arity != len(n.cells):
        raise PartitionError(f"partition arity {p.arity} != {len(n.cells)} cells")
    basis = indicator_basis(p)
    return all(in_polydiagonal(a @ basis, p) for a in n.adjacency_matrices())


# ------------------------------------------------------------- rendering


def render(p: Partition, cells: Sequence[str]) -> str:
    """Polydiagonal text such as ``"x1=x3=x6, x2=x5"``; ``""`` for all-singletons."""
    if p.arity != len(cells):
        raise PartitionError("cell list does not match partition arity")
    return ", ".join("=".join(f"x{cells[c]}" for c in block) for block in p.nontrivial())


def parse_polydiagonal(text: str, cells: Sequence[str]) -> Partition:
    """Inverse of :func:`render`."""
    index = {name: i for i, name in enumerate(cells)}
    blocks = []
    for chunk in filter(None, (s.strip() for s in text.split(","))):
        names = [t.strip() for t in chunk.split("=")]
        try:
            blocks.append([index[t[1:]] for t in names if t.startswith("x")])
        except KeyError as exc:
            raise PartitionError(f"unknown cell in {chunk!r}") from exc
        if len(blocks[-1]) != len(names):
            raise PartitionError(f"malformed equality {chunk!r}")
    return from_blocks(len(cells), blocks)


def to_named(p: Partition, cells: Sequence[str]) -> list[list[str]]:
    """Partition JSON: list of classes of cell names, singletons included."""
    return [[cells[c] for c in block] for block in p.classes]


def from_named(cells: Sequence[str], named: Iterable[Iterable[str]], *, partial: bool = False) -> Partition:
    """Build a partition from classes of cell names.

    With ``partial=True`` unmentioned cells become singletons.
    """
    index = {name: i for i, name in enumerate(cells)}
    try:
        blocks = [[index[str(x)] for x in block] for block in named]
    except KeyError as exc:
        raise PartitionError(f"unknown cell {exc.args[0]!r}") from exc
    if partial:
        return from_blocks(len(cells), blocks)
    return from_classes(len(cells), blocks)


def element_key(p: Partition) -> tuple:
    """Canonical listing order: coarsest first, then lexicographic."""
    return (p.nclasses, p.classes)

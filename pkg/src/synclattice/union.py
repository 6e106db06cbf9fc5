"""Synchrony lattices of disjoint unions, assembled from the parts.

A balanced partition of ``N1 + N2`` is one of three kinds:

* non-bipartite (nb): no class meets both parts; these are the products
  of one element of each part's lattice;
* pairing bipartite (pb): every merged class is a pair with one cell on
  each side, coming from a partial injection that commutes with the
  inputs;
* non-pairing bipartite (npb): everything else.  Restricting such a
  partition to each part gives an nb element; on the quotient by that
  element the partition becomes a pairing, so npb elements are lifts of
  pairings between quotient parts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import lattice as lt
from . import network as nw
from . import oracle
from . import partition as pt
from .network import Network
from .one_input import NotOneInputError, decompose, input_map
from .partition import Partition


@dataclass(frozen=True)
class PairingMatch:
    """Bijection between cells of the first part and cells of the second,
    as sorted ``(first, second)`` name pairs."""

    pairs: tuple[tuple[str, str], ...]

    def partition(self, cells: Sequence[str]) -> Partition:
        return pt.from_named(cells, [list(p) for p in self.pairs], partial=True)

    def cycles(self) -> str:
        return "".join(f"({a} {b})" for a, b in self.pairs)


@dataclass(frozen=True)
class UnionLatticeBreakdown:
    nb: tuple[Partition, ...]
    pb: tuple[Partition, ...]
    npb: tuple[Partition, ...]
    valency_case: str  # "equal" or "unequal"

    def to_dict(self, cells: Sequence[str]) -> dict:
        return {
            "valency_case": self.valency_case,
            "nb": [pt.to_named(p, cells) for p in self.nb],
            "pb": [pt.to_named(p, cells) for p in self.pb],
            "npb": [pt.to_named(p, cells) for p in self.npb],
            "counts": {"nb": len(self.nb), "pb": len(self.pb), "npb": len(self.npb)},
        }


def _sorted(parts: Iterable[Partition]) -> tuple[Partition, ...]:
    return tuple(sorted(set(parts), key=pt.element_key))


# ---------------------------------------------------------------------- nb


def nb_compose(l1: lt.SyncLattice, l2: lt.SyncLattice, cells: Sequence[str] | None = None) -> list[Partition]:
    """Every pairing of an element of ``l1`` with an element of ``l2``,
    expressed over ``cells`` (default: cells of ``l1`` then ``l2``)."""
    overlap = set(l1.cells) & set(l2.cells)
    if overlap:
        raise nw.NetworkError(f"cell names overlap: {sorted(overlap)}")
    if cells is None:
        cells = l1.cells + l2.cells
    if sorted(cells) != sorted(l1.cells + l2.cells):
        raise nw.NetworkError("cell list does not match the two lattices")
    index = {c: i for i, c in enumerate(cells)}
    map1 = [index[c] for c in l1.cells]
    map2 = [index[c] for c in l2.cells]
    out = []
    for a, b in itertools.product(l1.elements, l2.elements):
        blocks = [[map1[c] for c in block] for block in a.classes]
        blocks += [[map2[c] for c in block] for block in b.classes]
        out.append(pt.from_classes(len(cells), blocks))
    return out


# --------------------------------------------------------- pairing matches


def _tree_matches(a: int, b: int, ch1, ch2) -> list[list[tuple[int, int]]]:
    """Partial injections between the trees below already-paired ``a`` and ``b``."""
    kids1, kids2 = ch1[a], ch2[b]
    out: list[list[tuple[int, int]]] = []

    def extend(i: int, used: frozenset[int], acc: list[list[tuple[int, int]]]) -> None:
        if i == len(kids1):
            out.extend(acc)
            return
        extend(i + 1, used, acc)  # leave kids1[i] unpaired
        for y in kids2:
            if y in used:
                continue
            below = _tree_matches(kids1[i], y, ch1, ch2)
            grown = [base + [(kids1[i], y)] + extra for base in acc for extra in below]
            extend(i + 1, used | {y}, grown)

    extend(0, frozenset(), [[]])
    return out


def _component_matches(d1, d2) -> list[list[tuple[int, int]]]:
    """Matches between two connected 1-input networks (local indices)."""
    if d1.m != d2.m:
        return []
    ch1 = [[c for c in kids] for kids in d1.children]
    ch2 = [[c for c in kids] for kids in d2.children]
    out = []
    for shift in range(d1.m):
        ring_pairs = [(d1.ring[i], d2.ring[(i + shift) % d1.m]) for i in range(d1.m)]
        per_ring = [_tree_matches(a, b, ch1, ch2) for a, b in ring_pairs]
        for combo in itertools.product(*per_ring):
            out.append(ring_pairs + [p for part in combo for p in part])
    return out


def pairing_matches(n1: Network, n2: Network) -> list[PairingMatch]:
    """Every nonempty bijection ``phi`` between cell subsets with
    ``phi(f1(c)) = f2(phi(c))``, for parts of valency 1 (possibly
    disconnected).  Touched components are paired whole-ring to
    whole-ring; trees are matched partially."""
    if n1.edge_types != n2.edge_types:
        raise nw.NetworkError("edge type lists differ")
    input_map(n1)
    input_map(n2)
    comps1 = [(sub, decompose(sub)) for sub, _ in nw.connected_components(n1)]
    comps2 = [(sub, decompose(sub)) for sub, _ in nw.connected_components(n2)]
    table: dict[tuple[int, int], list[list[tuple[str, str]]]] = {}
    for (i, (s1, d1)), (j, (s2, d2)) in itertools.product(enumerate(comps1), enumerate(comps2)):
        named = [[(s1.cells[a], s2.cells[b]) for a, b in match] for match in _component_matches(d1, d2)]
        if named:
            table[i, j] = named

    results: set[tuple[tuple[str, str], ...]] = set()

    def choose(i: int, used: frozenset[int], acc: list[tuple[str, str]]) -> None:
        if i == len(comps1):
            if acc:
                results.add(tuple(sorted(acc, key=lambda p: (n1.index[p[0]], n2.index[p[1]]))))
            return
        choose(i + 1, used, acc)
        for j in range(len(comps2)):
            if j in used or (i, j) not in table:
                continue
            for match in table[i, j]:
                choose(i + 1, used | {j}, acc + match)

    choose(0, frozenset(), [])
    return [PairingMatch(p) for p in sorted(results, key=lambda p: (len(p), p))]


def pb_compose(n: Network, matches: Iterable[PairingMatch]) -> list[Partition]:
    """One partition per match: matched pairs merged, all else distinct."""
    out = []
    for match in matches:
        p = match.partition(n.cells)
        if not pt.is_balanced(n, p):
            raise AssertionError(f"pairing {match.cycles()} is not balanced")
        out.append(p)
    return out


def _is_one_input(n: Network) -> bool:
    try:
        input_map(n)
    except NotOneInputError:
        return False
    return True


def _pairings(union: Network, part1: Sequence[str], part2: Sequence[str], cfg: oracle.OracleConfig) -> list[Partition]:
    """Pairing-shaped balanced partitions of ``union`` across the split."""
    n1 = nw.induced_subnetwork(union, part1)
    n2 = nw.induced_subnetwork(union, part2)
    if _is_one_input(n1) and _is_one_input(n2):
        return pb_compose(union, pairing_matches(n1, n2))
    return oracle.pairing_shaped_balanced(union, part1, cfg)


# --------------------------------------------------------------------- npb


def npb_compose(
    n: Network,
    nb: Iterable[Partition],
    part1: Sequence[str],
    part2: Sequence[str],
    cfg: oracle.OracleConfig = oracle.OracleConfig(),
) -> list[Partition]:
    """Lift pairings of the quotient parts, over every nontrivial nb element,
    keeping those that are not themselves pairing shaped."""
    side1 = {n.index[c] for c in part1}
    found: set[Partition] = set()
    cache: dict[str, list[Partition]] = {}
    for p in nb:
        if p.is_singletons():
            continue
        q = nw.quotient(n, p)
        qcells1 = [c for c in q.quotient.cells if n.index[c] in side1]
        qcells2 = [c for c in q.quotient.cells if n.index[c] not in side1]
        key = nw.dumps_network(q.quotient) + "|" + ",".join(qcells1)
        if key not in cache:
            cache[key] = _pairings(q.quotient, qcells1, qcells2, cfg)
        for qp in cache[key]:
            lifted = nw.lift_partition(q, qp)
            if not _pairing_shaped(lifted, side1):
                found.add(lifted)
    return list(found)


def _pairing_shaped(p: Partition, side1: set[int]) -> bool:
    blocks = p.nontrivial()
    return bool(blocks) and all(len(b) == 2 and ((b[0] in side1) != (b[1] in side1)) for b in blocks)


def _valency(n: Network) -> tuple[int, ...]:
    rep = nw.validate(n)
    if rep.valency_per_type is None:
        raise nw.NetworkError("union parts must be homogeneous")
    return tuple(rep.valency_per_type[t] for t in sorted(n.edge_types))


def compose_union_lattice(
    n1: Network,
    l1: lt.SyncLattice,
    n2: Network,
    l2: lt.SyncLattice,
    union: Network | None = None,
    cfg: oracle.OracleConfig = oracle.OracleConfig(),
) -> tuple[lt.SyncLattice, UnionLatticeBreakdown]:
    """Lattice of ``n1 + n2`` from the lattices of the parts."""
    if set(n1.edge_types) != set(n2.edge_types):
        raise nw.NetworkError("edge type lists differ")
    if l1.cells != n1.cells or l2.cells != n2.cells:
        raise nw.NetworkError("lattice cells do not match the networks")
    if union is None:
        union = nw.disjoint_union(n1, n2)
    nb = nb_compose(l1, l2, union.cells)
    v1, v2 = _valency(n1), _valency(n2)
    if v1 != v2:
        # different input counts can never share a class
        pb: list[Partition] = []
        npb: list[Partition] = []
        case = "unequal"
    else:
        pb = _pairings(union, n1.cells, n2.cells, cfg)
        npb = npb_compose(union, nb, n1.cells, n2.cells, cfg)
        case = "equal"
    breakdown = UnionLatticeBreakdown(_sorted(nb), _sorted(pb), _sorted(npb), case)
    asym = all(len(srcs) <= 1 for per_type in union.inputs for srcs in per_type)
    lat = lt.build(
        breakdown.nb + breakdown.pb + breakdown.npb,
        union,
        require_sum_closure=asym,
    )
    return lat, breakdown

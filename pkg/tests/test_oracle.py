import logging

import numpy as np
import pytest

from synclattice import network as nw
from synclattice import oracle
from synclattice import partition as pt
from synclattice.network import Edge, Network

from netgen import all_partitions, random_asymmetric, random_regular, table

CELLS7 = tuple(str(i) for i in range(1, 8))


def brute(n):
    return {pt.from_labels(lab) for lab in all_partitions(n.size) if pt.is_balanced(n, pt.from_labels(lab))}


def test_bell():
    assert [oracle.bell(k) for k in range(10)] == [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147]
    assert oracle.estimate(9) == pytest.approx(np.log10(21147))


def test_dashed(dashed):
    found = set(oracle.balanced_partitions(dashed))
    assert len(found) == 22
    _, irr = table("dashed_irreducibles")
    _, sums = table("dashed_sums")
    assert irr | sums <= found
    assert found - irr - sums == {pt.singletons(7), pt.parse_polydiagonal("x1=x2=x3=x4, x5=x7", CELLS7)}


def test_single_cell():
    n = Network(("a",), ("e",), (Edge("a", "a", "e"),))
    assert oracle.balanced_partitions(n) == [pt.full(1)]


def test_full_network(two_type):
    found = set(oracle.balanced_partitions(two_type))
    _, printed = table("full_network")
    assert found == printed | {pt.singletons(7)}


def test_matches_unpruned_enumeration():
    rng = np.random.default_rng(2)
    for _ in range(40):
        k = int(rng.integers(1, 7))
        n = random_regular(rng, k, int(rng.integers(1, 3))) if rng.random() < 0.5 else random_asymmetric(rng, k, 2)
        assert set(oracle.balanced_partitions(n)) == brute(n)


def test_sorted_and_unique(dashed):
    found = oracle.balanced_partitions(dashed)
    assert found == sorted(set(found), key=pt.element_key)


def test_relabelling_invariance(dashed):
    perm = ["4", "7", "1", "6", "2", "5", "3"]
    rename = dict(zip(CELLS7, perm))
    other = Network(CELLS7, dashed.edge_types,
                    tuple(Edge(rename[e.source], rename[e.target], e.type) for e in dashed.edges))
    idx = {c: i for i, c in enumerate(CELLS7)}
    mapped = set()
    for p in oracle.balanced_partitions(dashed):
        mapped.add(pt.from_classes(7, [[idx[rename[CELLS7[c]]] for c in b] for b in p.classes]))
    assert mapped == set(oracle.balanced_partitions(other))


def test_pairing_shaped(solid):
    _, printed = table("solid_pb")
    got = oracle.pairing_shaped_balanced(solid, ["1", "4", "5", "6"])
    assert set(got) == printed


def test_cap(caplog):
    n = random_regular(np.random.default_rng(0), 13, 1)
    with pytest.raises(oracle.CapExceeded) as info:
        oracle.balanced_partitions(n)
    assert "13 cells" in str(info.value) and "2.76e+07" in str(info.value)
    with caplog.at_level(logging.WARNING):
        oracle.OracleConfig(max_cells=14)
    assert "cap raised" in caplog.text


def test_parallel_equals_serial(union9):
    serial = oracle.balanced_partitions(union9)
    assert oracle.balanced_partitions(union9, oracle.OracleConfig(parallel=True)) == serial


def test_enumerate_per_type_intersection(two_type):
    per_type = [set(oracle.balanced_partitions(nw.edge_type_subnetwork(two_type, t))) for t in two_type.edge_types]
    assert set.intersection(*per_type) == set(oracle.balanced_partitions(two_type))
    lat = oracle.enumerate_balanced(two_type)
    assert lat.sum_closed and lat.verified

import json

import pytest

from synclattice import lattice as lt
from synclattice import one_input as oi
from synclattice import oracle
from synclattice import partition as pt

from netgen import table

CELLS7 = tuple(str(i) for i in range(1, 8))


def P(text):
    return pt.parse_polydiagonal(text, CELLS7)


@pytest.fixture(scope="module")
def dashed_lat(dashed):
    return oracle.enumerate_balanced(dashed)


def test_build_inserts_top_and_sorts(dashed):
    elems = [pt.full(7), P("x1=x3=x6=x7, x2=x4=x5")]
    lat = lt.build(elems, dashed)
    assert lat.elements[0] == pt.full(7) and lat.elements[-1] == pt.singletons(7)
    assert len(lat) == 3 and lat.verified
    assert lat.bottom == pt.full(7) and lat.top == pt.singletons(7)


def test_build_rejects(dashed):
    with pytest.raises(lt.LatticeError):
        lt.build([P("x1=x2")], dashed)
    with pytest.raises(lt.LatticeError):
        lt.build([pt.full(3)], cells=CELLS7)
    with pytest.raises(lt.LatticeError):
        lt.build([pt.full(2)])
    # two coarse elements whose intersection is missing
    with pytest.raises(lt.LatticeError):
        lt.build([P("x1=x2"), P("x2=x3")], cells=CELLS7)
    with pytest.raises(lt.LatticeError):
        lt.build([pt.from_labels([0, 0, 1, 1, 1, 1, 1]), pt.from_labels([0, 1, 1, 1, 1, 1, 1]), pt.full(7)],
                 cells=CELLS7, require_sum_closure=True)


def test_verify_limit(monkeypatch, caplog, dashed_lat):
    monkeypatch.setattr(lt, "VERIFY_LIMIT", 5)
    lat = lt.build(dashed_lat.elements, cells=CELLS7)
    assert not lat.verified
    assert "verification skipped" in caplog.text


def test_order_and_hasse(dashed_lat):
    lat = dashed_lat
    b, t = lat.index[lat.bottom], lat.index[lat.top]
    assert lat.order[b].all() and lat.order[:, t].all()
    for i, p in enumerate(lat.elements):
        for j, q in enumerate(lat.elements):
            assert lat.order[i, j] == pt.subspace_leq(p, q)
    edges = lt.hasse(lat)
    for i, j in edges:
        assert lat.order[i, j] and i != j
        assert not any(lat.order[i, k] and lat.order[k, j] for k in range(len(lat)) if k not in (i, j))
    # the transitive closure of the covers recovers the order
    import numpy as np

    reach = np.eye(len(lat), dtype=bool)
    for _ in range(len(lat)):
        reach = reach | (reach.astype(int) @ lat.covers.astype(int) > 0)
    assert (reach == lat.order).all()


def test_join_meet(dashed_lat):
    lat = dashed_lat
    a, b = P("x1=x2=x3=x4=x5=x7"), P("x1=x2=x3=x4=x5=x6")
    assert lt.join(lat, a, b) == P("x1=x2=x3=x4=x5")
    assert lt.meet(lat, P("x2=x5, x3=x6=x7"), P("x1=x2=x3=x4=x5=x6")) == pt.full(7)
    assert lt.join_all(lat, []) == lat.bottom
    assert lt.join(lat, lat.bottom, a) == a
    with pytest.raises(lt.LatticeError):
        lt.join(lat, P("x1=x2"), a)


def test_join_without_sum_closure(two_type):
    lat = oracle.enumerate_balanced(two_type)
    for p in lat.elements:
        for q in lat.elements:
            j = lt.join(lat, p, q)
            assert pt.subspace_leq(p, j) and pt.subspace_leq(q, j)
            m = lt.meet(lat, p, q)
            assert pt.subspace_leq(m, p) and pt.subspace_leq(m, q)


def test_irreducibles(dashed, dashed_lat):
    irr = set(lt.join_irreducibles(dashed_lat))
    structural = set(oi.enumerate_join_irreducibles(oi.decompose(dashed)))
    assert irr <= structural
    assert structural - irr == {pt.full(7)}  # the bottom is generated by the empty join
    assert lt.is_join_dense(dashed_lat, lt.generators(dashed_lat))
    assert not lt.is_join_dense(dashed_lat, [dashed_lat.bottom])
    meets = lt.meet_irreducibles(dashed_lat)
    assert dashed_lat.top not in meets and meets


def test_intersect(two_type, solid, dashed):
    a = oracle.enumerate_balanced(solid)
    b = oracle.enumerate_balanced(dashed)
    both = lt.intersect_lattices([a, b], two_type)
    assert set(both.elements) == set(oracle.balanced_partitions(two_type))
    _, printed = table("full_network")
    assert printed <= both.element_set
    with pytest.raises(lt.LatticeError):
        lt.intersect_lattices([])


def test_json_round_trip(dashed, dashed_lat):
    doc = json.loads(lt.to_json(dashed_lat))
    assert doc["cells"] == list(CELLS7) and len(doc["elements"]) == 22
    assert len(doc["cover_edges"]) == len(lt.hasse(dashed_lat))
    back = lt.from_dict(doc, dashed, verify=True)
    assert back == dashed_lat
    with pytest.raises(lt.LatticeError):
        lt.from_dict({"cells": ["1"]})


def test_dot_and_table(dashed_lat):
    dot = lt.to_dot(dashed_lat)
    assert dot.startswith("digraph lattice {") and "rankdir=BT" in dot
    assert dot.count("->") == len(lt.hasse(dashed_lat))
    assert '"⊤"' in dot and "rank=source" in dot
    rows = lt.to_table(dashed_lat).splitlines()
    assert rows[0] == "x1=x2=x3=x4=x5=x6=x7" and rows[-1].startswith("⊤")


def test_compare(dashed_lat):
    _, printed = table("dashed_irreducibles")
    _, sums = table("dashed_sums")
    diff = lt.compare(dashed_lat.elements, printed | sums, CELLS7)
    assert not diff.only_b
    assert set(diff.only_a) == {P("x1=x2=x3=x4, x5=x7"), pt.singletons(7)}
    quiet = lt.compare(dashed_lat.elements, printed | sums, CELLS7, ignore_top=True)
    assert quiet.only_a == (P("x1=x2=x3=x4, x5=x7"),)
    doc = quiet.to_dict()
    assert doc["equal"] is False and doc["only_in_a"] == ["x1=x2=x3=x4, x5=x7"]
    assert lt.compare(dashed_lat.elements, dashed_lat.elements, CELLS7).equal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import synclattice as sl
from synclattice import partition as pt
from synclattice.partition import PartitionError

from netgen import all_partitions

CELLS7 = tuple(str(i) for i in range(1, 8))


def P(text, cells=CELLS7):
    return pt.parse_polydiagonal(text, cells)


def test_from_classes_canonical_sort():
    p = pt.from_classes(4, [{1, 3}, {0, 2}])
    assert p.classes == ((0, 2), (1, 3))


def test_from_classes_singletons():
    assert pt.from_classes(3, [[2], [0], [1]]) == pt.singletons(3)


@pytest.mark.parametrize("classes", [[{0, 1}, {1, 2}], [{0}], [{0, 1, 5}], [set(), {0, 1}]])
def test_from_classes_errors(classes):
    with pytest.raises(PartitionError):
        pt.from_classes(2 if classes == [{0}] else 3, classes)


def test_class_intersection_examples():
    d4, d7 = P("x1=x2=x3=x4=x5=x6"), P("x1=x2=x3=x4=x7")
    assert pt.class_intersection(d4, d7) == P("x1=x2=x3=x4")
    d2, d5 = P("x1=x3=x6=x7, x2=x4=x5"), P("x1=x2=x3=x4=x5=x7")
    assert pt.class_intersection(d2, d5) == P("x1=x3=x7, x2=x4=x5")
    assert pt.class_intersection(d2, d2) == d2


def test_equivalence_closure_examples():
    a = pt.from_blocks(5, [[0, 1]])
    b = pt.from_blocks(5, [[1, 2]])
    assert pt.equivalence_closure(a, b) == pt.from_blocks(5, [[0, 1, 2]])
    assert pt.equivalence_closure(pt.singletons(5), a) == a
    d3, d7 = P("x2=x5, x3=x6=x7"), P("x1=x2=x3=x4=x7")
    assert pt.equivalence_closure(d3, d7) == pt.full(7)


def test_arity_mismatch():
    with pytest.raises(PartitionError):
        pt.class_intersection(pt.full(2), pt.full(3))
    with pytest.raises(PartitionError):
        pt.refines(pt.full(2), pt.full(3))


def test_refines_examples():
    assert pt.refines(pt.singletons(7), P("x1=x3"))
    assert pt.refines(P("x1=x3=x7, x2=x4=x5"), P("x1=x2=x3=x4=x5=x7"))
    p = P("x1=x3=x6")
    assert pt.refines(p, p)
    assert not pt.refines(P("x1=x2=x3=x4=x5=x7"), P("x1=x3=x7, x2=x4=x5"))
    # subspace order is the reverse
    assert pt.subspace_leq(P("x1=x2=x3=x4=x5=x7"), P("x1=x3=x7, x2=x4=x5"))


def test_is_balanced_examples(two_type):
    # cells 3 and 7 both read cell 2 on each edge type
    assert pt.is_balanced(two_type, P("x3=x7"))
    # cell 1 reads (5, 4) while cell 3 reads (2, 2)
    assert not pt.is_balanced(two_type, P("x1=x3"))
    assert not pt.is_balanced(two_type, P("x1=x3=x7"))
    assert pt.is_balanced(two_type, P("x1=x3=x7, x2=x4=x5"))
    assert pt.is_balanced(two_type, pt.singletons(7))


def test_is_balanced_arity(two_type):
    with pytest.raises(PartitionError):
        pt.is_balanced(two_type, pt.full(3))


def test_invariance_check_examples(two_type):
    assert pt.invariance_check(two_type, pt.full(7))
    assert not pt.invariance_check(two_type, P("x1=x3=x7"))


@pytest.mark.parametrize("name", ["two_type_7", "solid_7", "dashed_7", "interior_3", "union_9"])
def test_invariance_agrees_with_balance_on_fixtures(name):
    n = sl.fixture(name)
    for labels in all_partitions(n.size):
        p = pt.from_labels(labels)
        assert pt.is_balanced(n, p) == pt.invariance_check(n, p), p


def test_balance_uses_multiset_counts():
    # cell 1 gets two inputs from 2, cell 3 one from 2 and one from 1
    n = sl.parse_network(
        '{"cells":["1","2","3"],"edge_types":["e"],"edges":['
        '{"source":"2","target":"1","type":"e"},{"source":"2","target":"1","type":"e"},'
        '{"source":"2","target":"2","type":"e"},{"source":"3","target":"2","type":"e"},'
        '{"source":"2","target":"3","type":"e"},{"source":"1","target":"3","type":"e"}]}'
    )
    cells = n.cells
    assert not pt.is_balanced(n, P("x1=x3", cells))
    assert pt.is_balanced(n, pt.full(3))
    assert pt.is_balanced(n, P("x1=x3", cells)) == pt.invariance_check(n, P("x1=x3", cells))


def test_render_examples():
    assert pt.render(pt.from_blocks(7, [[0, 2, 5, 6], [1, 3, 4]]), CELLS7) == "x1=x3=x6=x7, x2=x4=x5"
    assert pt.render(pt.singletons(7), CELLS7) == ""
    assert pt.render(pt.full(7), CELLS7) == "x1=x2=x3=x4=x5=x6=x7"


def test_named_round_trip():
    p = P("x1=x3=x6=x7, x2=x4=x5")
    assert pt.to_named(p, CELLS7) == [["1", "3", "6", "7"], ["2", "4", "5"]]
    assert pt.from_named(CELLS7, pt.to_named(p, CELLS7)) == p
    assert pt.from_named(CELLS7, [["2", "5"]], partial=True) == P("x2=x5")
    with pytest.raises(PartitionError):
        pt.from_named(CELLS7, [["2", "5"]])
    with pytest.raises(PartitionError):
        pt.parse_polydiagonal("x1=x9", CELLS7)
    with pytest.raises(PartitionError):
        pt.parse_polydiagonal("x1=y2", CELLS7)


# ------------------------------------------------------------ lattice laws

labels = st.integers(min_value=1, max_value=7).flatmap(
    lambda n: st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n)
)


def same_size(n=6):
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(pt.from_labels)


@settings(max_examples=200, deadline=None)
@given(same_size(), same_size(), same_size())
def test_partition_lattice_laws(a, b, c):
    j, m = pt.class_intersection, pt.equivalence_closure
    assert j(a, b) == j(b, a) and m(a, b) == m(b, a)
    assert j(j(a, b), c) == j(a, j(b, c))
    assert m(m(a, b), c) == m(a, m(b, c))
    assert j(a, a) == a and m(a, a) == a
    assert j(a, m(a, b)) == a and m(a, j(a, b)) == a


@settings(max_examples=200, deadline=None)
@given(same_size(), same_size(), same_size())
def test_refinement_is_the_order(a, b, c):
    j, m = pt.class_intersection, pt.equivalence_closure
    assert pt.refines(j(a, b), a) and pt.refines(j(a, b), b)
    assert pt.refines(a, m(a, b)) and pt.refines(b, m(a, b))
    if pt.refines(c, a) and pt.refines(c, b):
        assert pt.refines(c, j(a, b))
    if pt.refines(a, c) and pt.refines(b, c):
        assert pt.refines(m(a, b), c)
    if pt.refines(a, b) and pt.refines(b, a):
        assert a == b
    if pt.refines(a, b) and pt.refines(b, c):
        assert pt.refines(a, c)


@settings(max_examples=100, deadline=None)
@given(labels)
def test_render_round_trip(lab):
    p = pt.from_labels(lab)
    cells = tuple(str(i + 1) for i in range(len(lab)))
    assert pt.parse_polydiagonal(pt.render(p, cells), cells) == p
    assert pt.from_classes(p.arity, p.classes) == p

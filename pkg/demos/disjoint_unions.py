"""Synchrony across disconnected parts of a network.

The lattice of a two-component network splits into products of the part
lattices, pairings that glue cells one-to-one, and everything else.  The
second fixture shows a partition of the last kind that no intersection of
a product with a pairing reaches.
"""
import itertools

import synclattice as sl
from synclattice import network as nw
from synclattice import one_input as oi
from synclattice import oracle
from synclattice import partition as pt
from synclattice import union as un


def breakdown(net):
    (a, _), (b, _) = nw.connected_components(net)
    print(f"parts {a.cells} and {b.cells}")
    for m in un.pairing_matches(a, b):
        print("  pairing", m.cycles())
    lat, br = un.compose_union_lattice(a, oi.one_input_lattice(a), b, oi.one_input_lattice(b), net)
    print(f"  products {len(br.nb)}, pairings {len(br.pb)}, other {len(br.npb)}: total {len(lat)}")
    assert set(lat.elements) == set(oracle.balanced_partitions(net))
    print("  agrees with exhaustive enumeration")
    return br


solid = sl.fixture("solid_7")
breakdown(solid)

print()
net = sl.fixture("union_9")
br = breakdown(net)
witness = pt.parse_polydiagonal("x1=x6=x7, x2=x5=x8, x3=x9", net.cells)
hits = [(p, q) for p, q in itertools.product(br.nb, br.pb) if pt.equivalence_closure(p, q) == witness]
print(f"\n{pt.render(witness, net.cells)}: balanced={pt.is_balanced(net, witness)}, "
      f"from a product and a pairing: {bool(hits)}")

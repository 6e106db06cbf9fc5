"""A 1-input network: a 4-cycle with two trees hanging off it.

Walks through the ring/tree decomposition, the exact spectrum, the
generating partitions and the lattice they produce.
"""
import synclattice as sl
from synclattice import lattice as lt
from synclattice import one_input as oi
from synclattice import oracle
from synclattice import partition as pt

net = sl.fixture("dashed_7")
d = oi.decompose(net)
name = lambda idx: [net.cells[c] for c in idx]

print("ring:", " -> ".join(name(d.ring)), f"(length {d.m}), depth {d.depth}")
print("tails:", ["/".join(name(t)) for t in d.tails])

s = oi.spectral_summary(d)
print(f"\nEigenvalues: w^j for j in {s.root_exponents}, w = exp(2 pi i / {s.m})")
print(f"zero eigenvalue: multiplicity {s.zero_multiplicity}, kernel spanned by leaves {name(s.zero_eigenbasis)}")
for j in s.root_exponents:
    v = oi.eigenvector_for(s, j)
    print(f"  j={j}: exponents {v}  ->  synchrony {pt.render(pt.from_labels(v), net.cells) or '(none)'}")
for chain in s.jordan_descriptors:
    print("  chain from", ",".join(name(chain.family)), "layers", [name(layer) for layer in chain.layers])

print("\nGenerators:")
for g in oi.enumerate_generators(d):
    label = f"q={g.detail[0]}" if g.kind == "divisor" else "roots " + ",".join(name(g.detail))
    print(f"  {g.kind:8s} {label:14s} {pt.render(g.partition, net.cells)}")

lat = oi.one_input_lattice(net)
print(f"\nJoin closure: {len(lat)} elements (including the all-distinct top)")
assert set(lat.elements) == set(oracle.balanced_partitions(net))
print("matches exhaustive enumeration")
print("irreducible in the lattice:", [lat.render(p) for p in lt.join_irreducibles(lat)])

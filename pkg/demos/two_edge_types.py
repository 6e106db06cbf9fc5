"""A network with two input types: its lattice is the intersection of the
lattices of the two single-type networks.  Ends with a quotient and a DOT
rendering of the Hasse diagram."""
import synclattice as sl
from synclattice import cli
from synclattice import lattice as lt
from synclattice import network as nw
from synclattice import oracle
from synclattice import partition as pt

net = sl.fixture("two_type_7")
report = nw.validate(net, require=("homogeneous", "asymmetric_inputs"))
print("valencies:", report.valency_per_type, "violations:", report.violations)

lat, provenance = cli.run_lattice(net, "auto", oracle.OracleConfig())
for stage in provenance["stages"]:
    print(f"  {stage['edge_type']}: {stage['elements']} synchrony partitions")
print(f"common to both types: {len(lat)}")
print(lt.to_table(lat))

p = pt.parse_polydiagonal("x1=x3=x6=x7, x2=x4=x5", net.cells)
q = nw.quotient(net, p)
print("quotient cells:", q.quotient.cells)
for e in q.quotient.edges:
    print(f"  {e.source} -> {e.target} [{e.type}]")

print("\nx1=x3 balanced?", pt.is_balanced(net, pt.parse_polydiagonal("x1=x3", net.cells)))
print("x3=x7 balanced?", pt.is_balanced(net, pt.parse_polydiagonal("x3=x7", net.cells)))

print()
print(lt.to_dot(lat))

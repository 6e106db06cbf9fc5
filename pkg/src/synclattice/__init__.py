"""Lattices of synchrony subspaces (balanced colourings) of homogeneous
coupled cell networks with asymmetric inputs."""
from importlib import resources

from .lattice import LatticeError, SyncLattice
from .network import Network, NetworkError, load_network, parse_network
from .partition import Partition, PartitionError

__all__ = [
    "LatticeError",
    "Network",
    "NetworkError",
    "Partition",
    "PartitionError",
    "SyncLattice",
    "fixture",
    "load_network",
    "parse_network",
]


def fixture(name: str) -> Network:
    """One of the bundled example networks, e.g. ``fixture("dashed_7")``."""
    text = resources.files(__package__).joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return parse_network(text)

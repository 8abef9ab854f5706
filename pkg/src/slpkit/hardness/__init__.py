"""Instance generators: small combinatorial problems turned into compressed-string
instances whose answers are certified by brute force on the source."""

from .sources import Graph, KovInstance, KsumInstance, OvInstance, solve_source
from .instances import Expected, GeneratedInstance, read_bundle, write_bundle

__all__ = [
    "Graph",
    "KovInstance",
    "KsumInstance",
    "OvInstance",
    "solve_source",
    "Expected",
    "GeneratedInstance",
    "read_bundle",
    "write_bundle",
]

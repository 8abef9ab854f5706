"""Source problems for the generators, their brute-force solvers, and file io."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

from ..errors import ParseError, TooLarge

# Exhaustive-search caps; beyond these the ground truth is not desk-checkable.
KOV_ENUM_CAP = 10_000_000
CLIQUE_VERTEX_CAP = 12
KSUM_ENUM_CAP = 10_000_000


@dataclass(frozen=True)
class OvInstance:
    """Two sets of d-bit vectors; asks for an orthogonal pair."""

    a_vectors: tuple
    b_vectors: tuple
    d: int

    def __post_init__(self):
        if not self.a_vectors or not self.b_vectors:
            raise ValueError("both vector sets must be nonempty")
        for v in self.a_vectors + self.b_vectors:
            if len(v) != self.d or any(x not in (0, 1) for x in v):
                raise ValueError(f"bad vector {v!r} for dimension {self.d}")


@dataclass(frozen=True)
class KovInstance:
    """One set of d-bit vectors; asks for an orthogonal k-tuple."""

    vectors: tuple
    d: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("tuple arity must be >= 1")
        if not self.vectors:
            raise ValueError("vector set must be nonempty")
        for v in self.vectors:
            if len(v) != self.d or any(x not in (0, 1) for x in v):
                raise ValueError(f"bad vector {v!r} for dimension {self.d}")


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..num_vertices-1, no self-loops."""

    num_vertices: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = frozenset(
            (min(u, v), max(u, v)) for u, v in self.edges
        )
        object.__setattr__(self, "edges", norm)
        for u, v in norm:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, u: int) -> list:
        return [v for v in range(self.num_vertices) if v != u and self.has_edge(u, v)]

    @property
    def non_edges(self) -> list:
        """Unordered distinct pairs that are not edges, lexicographic."""
        return [
            (u, v)
            for u in range(self.num_vertices)
            for v in range(u + 1, self.num_vertices)
            if (u, v) not in self.edges
        ]

    def cliques(self, k: int) -> list:
        """All k-cliques as sorted vertex tuples, lexicographic."""
        return [
            c
            for c in itertools.combinations(range(self.num_vertices), k)
            if all(self.has_edge(u, v) for u, v in itertools.combinations(c, 2))
        ]


@dataclass(frozen=True)
class KsumInstance:
    """Distinct values in [0, bound]; asks for `arity` of them summing to target."""

    values: tuple
    target: int
    arity: int
    bound: int

    def __post_init__(self):
        if self.arity < 3 or self.arity % 2 == 0:
            raise ValueError("arity must be an odd integer >= 3")
        if len(set(self.values)) != len(self.values):
            raise ValueError("values must be distinct")
        if any(not 0 <= z <= self.bound for z in self.values):
            raise ValueError("values must lie in [0, bound]")
        if not self.values:
            raise ValueError("value set must be nonempty")


def _orthogonal(*vectors) -> bool:
    return all(any(v[i] == 0 for v in vectors) for i in range(len(vectors[0])))


def solve_source(instance, k: int | None = None) -> bool:
    """Exhaustive-search ground truth for a source instance.

    For a Graph the clique size ``k`` must be supplied.  Raises TooLarge when
    the search space exceeds the desk-checkable caps.
    """
    if isinstance(instance, OvInstance):
        if len(instance.a_vectors) * len(instance.b_vectors) > KOV_ENUM_CAP:
            raise TooLarge("too many vector pairs to enumerate")
        return any(
            _orthogonal(a, b)
            for a in instance.a_vectors
            for b in instance.b_vectors
        )
    if isinstance(instance, KovInstance):
        if len(instance.vectors) ** instance.k > KOV_ENUM_CAP:
            raise TooLarge("too many vector tuples to enumerate")
        return any(
            _orthogonal(*combo)
            for combo in itertools.product(instance.vectors, repeat=instance.k)
        )
    if isinstance(instance, Graph):
        if k is None:
            raise ValueError("clique size required for graph instances")
        if instance.num_vertices > CLIQUE_VERTEX_CAP:
            raise TooLarge(f"graph larger than {CLIQUE_VERTEX_CAP} vertices")
        if k > instance.num_vertices:
            return False
        return bool(instance.cliques(k))
    if isinstance(instance, KsumInstance):
        r = len(instance.values)
        if r ** instance.arity > KSUM_ENUM_CAP:
            raise TooLarge("too many value tuples to enumerate")
        return any(
            sum(combo) == instance.target
            for combo in itertools.combinations_with_replacement(
                instance.values, instance.arity
            )
        )
    raise TypeError(f"not a source instance: {instance!r}")


# -- file formats ----------------------------------------------------------------
#
#   ov <d>       rows for the first set, a blank line, rows for the second
#   kov <d> <k>  rows
#   graph <V>    `u v` lines
#   ksum <arity> <target>   one value per line


def _emit_rows(vectors) -> list:
    return [" ".join(str(x) for x in v) for v in vectors]


def emit_source(instance) -> str:
    if isinstance(instance, OvInstance):
        lines = [f"ov {instance.d}"]
        lines += _emit_rows(instance.a_vectors)
        lines.append("")
        lines += _emit_rows(instance.b_vectors)
    elif isinstance(instance, KovInstance):
        lines = [f"kov {instance.d} {instance.k}"]
        lines += _emit_rows(instance.vectors)
    elif isinstance(instance, Graph):
        lines = [f"graph {instance.num_vertices}"]
        lines += [f"{u} {v}" for u, v in sorted(instance.edges)]
    elif isinstance(instance, KsumInstance):
        lines = [f"ksum {instance.arity} {instance.target}"]
        lines += [str(z) for z in instance.values]
    else:
        raise TypeError(f"not a source instance: {instance!r}")
    return "\n".join(lines) + "\n"


def _parse_row(line: str, lineno: int) -> tuple:
    parts = line.split()
    if len(parts) == 1 and len(parts[0]) > 1 and set(parts[0]) <= {"0", "1"}:
        parts = list(parts[0])
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"bad vector row {line!r}", lineno) from None


def parse_source(text: str):
    lines = text.splitlines()
    header = None
    header_no = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            header = line.split()
            header_no = lineno
            break
    if header is None:
        raise ParseError("empty source file", None)
    body = lines[header_no:]
    kind = header[0]
    if kind == "ov":
        d = int(header[1])
        blocks: list[list[tuple]] = [[]]
        for lineno, raw in enumerate(body, start=header_no + 1):
            line = raw.strip()
            if line.startswith("#"):
                continue
            if not line:
                if blocks[-1]:
                    blocks.append([])
                continue
            blocks[-1].append(_parse_row(line, lineno))
        blocks = [b for b in blocks if b]
        if len(blocks) != 2:
            raise ParseError("ov file needs two vector blocks", None)
        return OvInstance(tuple(blocks[0]), tuple(blocks[1]), d)
    if kind == "kov":
        d, k = int(header[1]), int(header[2])
        rows = [
            _parse_row(l.strip(), i)
            for i, l in enumerate(body, start=header_no + 1)
            if l.strip() and not l.strip().startswith("#")
        ]
        return KovInstance(tuple(rows), d, k)
    if kind == "graph":
        v = int(header[1])
        edges = set()
        for lineno, raw in enumerate(body, start=header_no + 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"bad edge line {line!r}", lineno)
            edges.add((int(parts[0]), int(parts[1])))
        return Graph(v, frozenset(edges))
    if kind == "ksum":
        arity, target = int(header[1]), int(header[2])
        values = tuple(
            int(l.strip())
            for l in body
            if l.strip() and not l.strip().startswith("#")
        )
        bound = max(values) if values else 0
        return KsumInstance(values, target, arity, bound)
    raise ParseError(f"unknown source kind {kind!r}", header_no)


def source_digest(instance) -> str:
    return hashlib.sha256(emit_source(instance).encode()).hexdigest()[:16]

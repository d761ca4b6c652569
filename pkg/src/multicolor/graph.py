"""Interference graphs with IDs drawn from a bounded space.

Nodes carry distinct integer IDs from [1, id_space]; the id space may be much
larger than the node count, so generators inject IDs by a seeded partial
Fisher-Yates shuffle of the prefix of [1..id_space]. All generators are pure
functions of their arguments: same arguments, bit-identical graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InvalidParams, NotFound, ParseError
from .rng import keyed_rng

__all__ = [
    "OneHopView",
    "Graph",
    "gnp_graph",
    "unit_disk_graph",
    "disjoint_stars",
    "parse_edge_list",
    "format_edge_list",
]


@dataclass(frozen=True)
class OneHopView:
    """What a single node sees in one communication round: itself and Γ."""

    node_id: int
    neighbors: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "neighbors", frozenset(self.neighbors))
        if self.node_id < 1:
            raise InvalidParams(f"node id {self.node_id} must be >= 1")
        if self.node_id in self.neighbors:
            raise InvalidParams(f"view of {self.node_id} contains itself")
        if any(v < 1 for v in self.neighbors):
            raise InvalidParams("neighbor ids must be >= 1")

    @property
    def degree(self) -> int:
        return len(self.neighbors)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; adjacency keyed by node id."""

    id_space: int
    adj: dict[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "adj", {v: frozenset(nbrs) for v, nbrs in self.adj.items()}
        )
        if self.id_space < 1:
            raise InvalidParams("id space must be a positive integer")
        if len(self.adj) > self.id_space:
            raise InvalidParams("more nodes than ids in the id space")
        for v, nbrs in self.adj.items():
            if not 1 <= v <= self.id_space:
                raise InvalidParams(f"node id {v} outside [1, {self.id_space}]")
            if v in nbrs:
                raise InvalidParams(f"self-loop at node {v}")
            for u in nbrs:
                if u not in self.adj:
                    raise InvalidParams(f"edge {v}-{u} references unknown node {u}")
                if v not in self.adj[u]:
                    raise InvalidParams(f"adjacency not symmetric at {v}-{u}")

    @property
    def n(self) -> int:
        return len(self.adj)

    def node_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.adj))

    def has_node(self, v: int) -> bool:
        return v in self.adj

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self.adj[v]
        except KeyError:
            raise NotFound(f"no node with id {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adj.values()), default=0)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj.values()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (a, b) with a < b, sorted."""
        return sorted((v, u) for v in self.adj for u in self.adj[v] if v < u)

    def view(self, v: int) -> OneHopView:
        """The one-hop view of node v. Raises NotFound for unknown ids."""
        return OneHopView(v, self.neighbors(v))


def _draw_ids(rng, n: int, id_space: int) -> list[int]:
    """First n entries of a seeded Fisher-Yates shuffle of [1..id_space].

    Sparse bookkeeping keeps this O(n) even for huge id spaces; the output
    matches a full shuffle prefix draw for draw.
    """
    picked = []
    moved: dict[int, int] = {}
    for i in range(n):
        j = rng.randrange(i, id_space)
        vi = moved.get(i, i + 1)
        vj = moved.get(j, j + 1)
        picked.append(vj)
        moved[j] = vi
    return picked


def _from_index_edges(ids: list[int], index_edges, id_space: int) -> Graph:
    adj: dict[int, set[int]] = {v: set() for v in ids}
    for i, j in index_edges:
        adj[ids[i]].add(ids[j])
        adj[ids[j]].add(ids[i])
    return Graph(id_space, {v: frozenset(nbrs) for v, nbrs in adj.items()})


def gnp_graph(n: int, p: float, id_space: int, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) with IDs injected into [1, id_space]."""
    if id_space < 1:
        raise InvalidParams(f"id space must be >= 1, got {id_space}")
    if n < 0 or n > id_space:
        raise InvalidParams(f"need 0 <= n <= id_space, got n={n}, N={id_space}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"edge probability {p} outside [0, 1]")
    rng = keyed_rng("gnp", n, p, id_space, seed)
    ids = _draw_ids(rng, n, id_space)
    index_edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return _from_index_edges(ids, index_edges, id_space)


def unit_disk_graph(n: int, radius: float, id_space: int, seed: int) -> Graph:
    """n points uniform in the unit square; edge iff distance <= radius."""
    if id_space < 1:
        raise InvalidParams(f"id space must be >= 1, got {id_space}")
    if n < 0 or n > id_space:
        raise InvalidParams(f"need 0 <= n <= id_space, got n={n}, N={id_space}")
    if radius < 0:
        raise InvalidParams("radius must be >= 0")
    rng = keyed_rng("udg", n, radius, id_space, seed)
    ids = _draw_ids(rng, n, id_space)
    pts = [(rng.random(), rng.random()) for _ in range(n)]
    r2 = radius * radius
    index_edges = []
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            dx = xi - pts[j][0]
            dy = yi - pts[j][1]
            if dx * dx + dy * dy <= r2:
                index_edges.append((i, j))
    return _from_index_edges(ids, index_edges, id_space)


def disjoint_stars(count: int, leaves: int, id_space: int, seed: int) -> Graph:
    """count vertex-disjoint stars, each one center with `leaves` leaves."""
    if id_space < 1:
        raise InvalidParams(f"id space must be >= 1, got {id_space}")
    if count < 0 or leaves < 0:
        raise InvalidParams("count and leaves must be >= 0")
    n = count * (leaves + 1)
    if n > id_space:
        raise InvalidParams(
            f"{count} stars with {leaves} leaves need {n} ids, id space has {id_space}"
        )
    rng = keyed_rng("stars", count, leaves, id_space, seed)
    ids = _draw_ids(rng, n, id_space)
    index_edges = []
    for s in range(count):
        base = s * (leaves + 1)
        index_edges.extend((base, base + t) for t in range(1, leaves + 1))
    return _from_index_edges(ids, index_edges, id_space)


_HEADER_N = re.compile(r"^#\s*N\s*=\s*(\d+)\s*$")
_HEADER_NODES = re.compile(r"^#\s*nodes\s*=\s*([\d,\s]*)$")


def parse_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format.

    Lines: optional `# N=<int>` header fixing the id space, optional
    `# nodes=<id,id,...>` header declaring edge-free nodes, other `#` lines
    are comments, and every remaining nonempty line is one edge `<a> <b>`.
    Without a header the id space is the largest id seen.
    """
    id_space: int | None = None
    extra_nodes: list[tuple[int, int]] = []
    edges: list[tuple[int, int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_N.match(line)
            if m:
                if id_space is not None:
                    raise ParseError("duplicate N header", lineno)
                id_space = int(m.group(1))
                continue
            m = _HEADER_NODES.match(line)
            if m:
                for tok in m.group(1).replace(",", " ").split():
                    extra_nodes.append((int(tok), lineno))
                continue
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two ids, got {line!r}", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer id in {line!r}", lineno) from None
        if a == b:
            raise ParseError(f"self-loop at id {a}", lineno)
        if a < 1 or b < 1:
            raise ParseError("ids must be >= 1", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ParseError(f"duplicate edge {key[0]} {key[1]}", lineno)
        seen.add(key)
        edges.append((a, b, lineno))

    all_ids = [(a, ln) for a, b, ln in edges] + [(b, ln) for a, b, ln in edges]
    all_ids += extra_nodes
    if id_space is None:
        id_space = max((v for v, _ in all_ids), default=1)
    for v, ln in all_ids:
        if v > id_space:
            raise ParseError(f"id {v} exceeds id space {id_space}", ln)
        if v < 1:
            raise ParseError(f"id {v} must be >= 1", ln)
    adj: dict[int, set[int]] = {v: set() for v, _ in all_ids}
    for a, b, _ in edges:
        adj[a].add(b)
        adj[b].add(a)
    return Graph(id_space, {v: frozenset(nbrs) for v, nbrs in adj.items()})


def format_edge_list(g: Graph) -> str:
    """Render a graph in the edge-list format; inverse of parse_edge_list."""
    lines = [f"# N={g.id_space}"]
    isolated = sorted(v for v in g.adj if not g.adj[v])
    if isolated:
        lines.append("# nodes=" + ",".join(str(v) for v in isolated))
    lines.extend(f"{a} {b}" for a, b in g.edges())
    return "\n".join(lines) + "\n"

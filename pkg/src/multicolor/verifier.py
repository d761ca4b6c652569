"""Checking colorings, and exhaustive certificates over all possible views.

The neighborhood graph over an id space N with degree bound Delta has one
vertex per one-hop view (x, Gamma), 1 <= |Gamma| <= Delta, and an edge
between two views exactly when they could be adjacent nodes of one host
graph: x_u != x_v, x_u in Gamma_v \\ Gamma_u and x_v in Gamma_u \\ Gamma_v.
A deterministic algorithm whose outputs are disjoint across every edge of
this graph is conflict-free on every host graph at once.

All pass/fail arithmetic is exact (integers and Fractions); floats never
decide an outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .coloring import Multicoloring
from .errors import Incomplete, InvalidParams, TooLarge
from .graph import Graph, OneHopView

__all__ = [
    "VerificationReport",
    "verify",
    "NeighborhoodGraph",
    "neighborhood_graph",
    "nbr_vertex_count",
    "nbr_edge_count",
    "chromatic_number",
    "NeighborhoodCertificate",
    "certify_on_neighborhood",
]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a multicoloring against its graph.

    valid reflects disjointness only. Fraction targets are reported
    separately: rho_by_degree[d] is the worst fraction*(d+1) over nodes of
    degree d, and meets_target says whether every node reached
    (1-eps)/(degree+1) when an eps was supplied.
    """

    valid: bool
    palette_size: int
    node_count: int
    edge_count: int
    violations: list[tuple[int, int, int]]  # (u, v, shared color), capped
    violation_count: int
    fractions: dict[int, Fraction]
    worst_ratio: Fraction | None
    rho_by_degree: dict[int, Fraction]
    epsilon: Fraction | None = None
    meets_target: bool | None = None

    def summary(self) -> dict:
        return {
            "valid": self.valid,
            "palette_size": self.palette_size,
            "nodes": self.node_count,
            "edges": self.edge_count,
            "violations": self.violation_count,
            "worst_ratio": str(self.worst_ratio) if self.worst_ratio is not None else None,
            "rho_by_degree": {d: str(r) for d, r in sorted(self.rho_by_degree.items())},
            "meets_target": self.meets_target,
        }


def verify(
    g: Graph, m: Multicoloring, eps=None, violation_cap: int = 100
) -> VerificationReport:
    """Check edge disjointness and palette fractions of m on g."""
    missing = [v for v in g.node_ids() if v not in m.assignment]
    extra = [v for v in m.assignment if not g.has_node(v)]
    if missing or extra:
        raise Incomplete(
            f"coloring does not match the node set (missing {missing[:5]}, "
            f"extra {extra[:5]})"
        )
    violations = []
    violation_count = 0
    for u, v in g.edges():
        shared = m.assignment[u] & m.assignment[v]
        if shared:
            violation_count += len(shared)
            for c in sorted(shared):
                if len(violations) < violation_cap:
                    violations.append((u, v, c))
    fractions = {v: m.fraction_of(v) for v in g.node_ids()}
    worst_ratio = None
    rho: dict[int, Fraction] = {}
    target_ok = True
    e = Fraction(eps) if eps is not None else None
    for v in g.node_ids():
        d = g.degree(v)
        ratio = fractions[v] * (d + 1)
        if worst_ratio is None or ratio < worst_ratio:
            worst_ratio = ratio
        if d not in rho or ratio < rho[d]:
            rho[d] = ratio
        if e is not None and fractions[v] < (1 - e) / (d + 1):
            target_ok = False
    return VerificationReport(
        valid=violation_count == 0,
        palette_size=m.palette_size,
        node_count=g.n,
        edge_count=g.edge_count(),
        violations=violations,
        violation_count=violation_count,
        fractions=fractions,
        worst_ratio=worst_ratio,
        rho_by_degree=rho,
        epsilon=e,
        meets_target=None if e is None else target_ok,
    )


# ---------------------------------------------------------------------------
# the neighborhood graph of all possible views


def nbr_vertex_count(id_space: int, max_degree: int) -> int:
    """Closed-form vertex count: sum over delta of N * C(N-1, delta)."""
    return sum(
        id_space * math.comb(id_space - 1, d) for d in range(1, max_degree + 1)
    )


def nbr_edge_count(id_space: int, max_degree: int) -> int:
    """Closed-form edge count.

    An edge is an ordered choice of two distinct ids a, b plus independent
    rests of the two neighborhoods: C(N,2) * (sum_{s<=Delta-1} C(N-2,s))^2.
    """
    if id_space < 2:
        return 0
    rests = sum(math.comb(id_space - 2, s) for s in range(0, max_degree))
    return math.comb(id_space, 2) * rests * rests


def _iter_views(id_space: int, max_degree: int):
    """Yield (x, gamma) over all views, grouped by x, degree ascending."""
    ids = range(1, id_space + 1)
    for x in ids:
        others = [y for y in ids if y != x]
        for d in range(1, max_degree + 1):
            yield from ((x, gamma) for gamma in combinations(others, d))


@dataclass(frozen=True)
class NeighborhoodGraph:
    """Explicit graph of all one-hop views over an id space."""

    id_space: int
    max_degree: int
    vertices: tuple[OneHopView, ...]
    _edges: list[tuple[int, int]] | None = field(default=None, compare=False)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return nbr_edge_count(self.id_space, self.max_degree)

    def edge_list(self, max_edges: int = 10**7) -> list[tuple[int, int]]:
        """All edges as vertex index pairs; guarded against blowup."""
        if self._edges is not None:
            return self._edges
        total = self.edge_count
        if total > max_edges:
            raise TooLarge(f"{total} edges exceed the guard of {max_edges}")
        groups: dict[tuple[int, int], list[int]] = {}
        for idx, view in enumerate(self.vertices):
            for y in view.neighbors:
                groups.setdefault((view.node_id, y), []).append(idx)
        edges = []
        for (a, b), left in groups.items():
            if a >= b:
                continue
            right = groups.get((b, a), ())
            edges.extend((i, j) for i in left for j in right)
        assert len(edges) == total
        object.__setattr__(self, "_edges", edges)
        return edges


def neighborhood_graph(
    id_space: int, max_degree: int, max_views: int = 10**6
) -> NeighborhoodGraph:
    """Materialize the neighborhood graph; guarded by a view budget."""
    if id_space < 1 or max_degree < 0:
        raise InvalidParams("need id_space >= 1 and max_degree >= 0")
    total = nbr_vertex_count(id_space, max_degree)
    if total > max_views:
        raise TooLarge(f"{total} views exceed the guard of {max_views}")
    vertices = tuple(
        OneHopView(x, frozenset(gamma)) for x, gamma in _iter_views(id_space, max_degree)
    )
    return NeighborhoodGraph(id_space, max_degree, vertices)


# ---------------------------------------------------------------------------
# exact chromatic number (branch and bound on top of DSATUR)


def chromatic_number(ng: NeighborhoodGraph | Graph, max_vertices: int = 10**4) -> int:
    """Exact chromatic number via DSATUR branch and bound."""
    if isinstance(ng, NeighborhoodGraph):
        nv = ng.vertex_count
        edges = ng.edge_list()
    else:
        ids = ng.node_ids()
        pos = {v: i for i, v in enumerate(ids)}
        nv = len(ids)
        edges = [(pos[a], pos[b]) for a, b in ng.edges()]
    if nv > max_vertices:
        raise TooLarge(f"{nv} vertices exceed the guard of {max_vertices}")
    if nv == 0:
        return 0
    adj = [0] * nv
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    if not edges:
        return 1

    degree = [a.bit_count() for a in adj]

    # greedy clique for the lower bound
    clique: list[int] = []
    for v in sorted(range(nv), key=lambda v: -degree[v]):
        if all(adj[v] >> u & 1 for u in clique):
            clique.append(v)
    lower = len(clique)

    # DSATUR greedy for the upper bound
    def dsatur_greedy() -> int:
        color = [0] * nv
        neighbor_colors: list[set[int]] = [set() for _ in range(nv)]
        for _ in range(nv):
            v = max(
                (u for u in range(nv) if not color[u]),
                key=lambda u: (len(neighbor_colors[u]), degree[u]),
            )
            c = 1
            while c in neighbor_colors[v]:
                c += 1
            color[v] = c
            w = adj[v]
            while w:
                u = (w & -w).bit_length() - 1
                neighbor_colors[u].add(c)
                w &= w - 1
        return max(color)

    best = dsatur_greedy()
    if best == lower:
        return best

    color = [0] * nv
    # seed the search with the clique: those colors are forced anyway
    for i, v in enumerate(clique):
        color[v] = i + 1

    def expand(colored: int, used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if colored == nv:
            best = used
            return
        # most saturated uncolored vertex, ties by degree
        pick, pick_sat = -1, (-1, -1)
        for v in range(nv):
            if color[v]:
                continue
            seen = set()
            w = adj[v]
            while w:
                u = (w & -w).bit_length() - 1
                if color[u]:
                    seen.add(color[u])
                w &= w - 1
            sat = (len(seen), degree[v])
            if sat > pick_sat:
                pick, pick_sat = v, sat
        v = pick
        forbidden = set()
        w = adj[v]
        while w:
            u = (w & -w).bit_length() - 1
            if color[u]:
                forbidden.add(color[u])
            w &= w - 1
        for c in range(1, min(used + 1, best - 1) + 1):
            if c in forbidden:
                continue
            color[v] = c
            expand(colored + 1, max(used, c))
            color[v] = 0

    expand(len(clique), len(clique))
    return best


# ---------------------------------------------------------------------------
# exhaustive certificate for deterministic node computations


@dataclass(frozen=True)
class NeighborhoodCertificate:
    """Outcome of evaluating an algorithm on every possible view."""

    id_space: int
    max_degree: int
    palette_size: int
    views_checked: int
    edge_count: int
    disjoint: bool
    bound_ok: bool
    min_count_by_degree: dict[int, int]
    bound_failures: int
    violations: list[tuple[OneHopView, OneHopView, int]]  # sample pairs

    @property
    def passed(self) -> bool:
        return self.disjoint and self.bound_ok


def certify_on_neighborhood(
    view_colors: Callable[[OneHopView], object],
    id_space: int,
    max_degree: int,
    palette_size: int,
    min_colors: Callable[[int], int] | dict[int, int] | None = None,
    max_views: int = 10**7,
    violation_cap: int = 100,
) -> NeighborhoodCertificate:
    """Evaluate a deterministic algorithm on every view and certify it.

    Disjointness across every neighborhood-graph edge is established without
    enumerating edges: group the views by (own id a, witnessed neighbor b)
    and union their color masks; every edge joins some group (a, b) with the
    group (b, a), so all edges are conflict-free if and only if every such
    union pair is disjoint. On failure the offending groups are rescanned to
    name concrete view pairs.

    view_colors may return an int bitmask (bit i-1 = color i) or an iterable
    of 1-based colors. min_colors, if given, is the per-degree minimum count
    each view must keep.
    """
    total = nbr_vertex_count(id_space, max_degree)
    if total > max_views:
        raise TooLarge(f"{total} views exceed the guard of {max_views}")
    if min_colors is None:
        need = None
    elif callable(min_colors):
        need = {d: min_colors(d) for d in range(1, max_degree + 1)}
    else:
        need = dict(min_colors)

    def as_mask(result) -> int:
        if isinstance(result, int):
            return result
        mask = 0
        for c in result:
            mask |= 1 << (c - 1)
        return mask

    unions: dict[tuple[int, int], int] = {}
    min_by_degree: dict[int, int] = {}
    bound_failures = 0
    checked = 0
    for x, gamma in _iter_views(id_space, max_degree):
        view = OneHopView(x, frozenset(gamma))
        mask = as_mask(view_colors(view))
        if mask >> palette_size:
            raise InvalidParams(
                f"view ({x}, {sorted(gamma)}) selected a color beyond the palette"
            )
        checked += 1
        d = len(gamma)
        count = mask.bit_count()
        if d not in min_by_degree or count < min_by_degree[d]:
            min_by_degree[d] = count
        if need is not None and count < need.get(d, 0):
            bound_failures += 1
        for b in gamma:
            key = (x, b)
            unions[key] = unions.get(key, 0) | mask

    violations: list[tuple[OneHopView, OneHopView, int]] = []
    bad_pairs = [
        (a, b)
        for (a, b) in unions
        if a < b and (b, a) in unions and unions[(a, b)] & unions[(b, a)]
    ]
    for a, b in bad_pairs:
        if len(violations) >= violation_cap:
            break
        left = [
            (OneHopView(x, frozenset(gamma)), as_mask(view_colors(OneHopView(x, frozenset(gamma)))))
            for x, gamma in _iter_views(id_space, max_degree)
            if x == a and b in gamma
        ]
        right = [
            (OneHopView(x, frozenset(gamma)), as_mask(view_colors(OneHopView(x, frozenset(gamma)))))
            for x, gamma in _iter_views(id_space, max_degree)
            if x == b and a in gamma
        ]
        for u_view, u_mask in left:
            for v_view, v_mask in right:
                shared = u_mask & v_mask
                if shared and len(violations) < violation_cap:
                    violations.append(
                        (u_view, v_view, shared.bit_length())  # one shared color
                    )
    return NeighborhoodCertificate(
        id_space=id_space,
        max_degree=max_degree,
        palette_size=palette_size,
        views_checked=checked,
        edge_count=nbr_edge_count(id_space, max_degree),
        disjoint=not bad_pairs,
        bound_ok=bound_failures == 0,
        min_count_by_degree=min_by_degree,
        bound_failures=bound_failures,
        violations=violations,
    )

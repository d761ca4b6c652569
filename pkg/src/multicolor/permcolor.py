"""Permutation-based one-shot multicoloring.

Two constructions share the same selection principle: a node takes color i
exactly when it beats all its neighbors at position i.

Randomized: every node privately draws k numbers uniform from [1, k*n^4] and
takes the colors where its draw is strictly smallest among its neighborhood.
Ties waste the color on both sides (kept, since they are rare by design); an
optional flag breaks ties toward the smaller id instead. Draw values exceed
64 bits once k*n^4 does, so draws are plain Python integers throughout.

Shared-order: all nodes know k seeded global orders of the id space and a
node takes color i when it precedes all its neighbors in order i. Whether a
concrete family serves every possible one-hop view up to degree Delta can be
certified exhaustively; on failure the family is resampled from the next
derived seed rather than grown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice

from . import simulator
from .coloring import Multicoloring
from .errors import InvalidParams, TooLarge
from .graph import Graph, OneHopView
from .rng import keyed_rng
from .simulator import NodeProgram

__all__ = [
    "randomized_palette_size",
    "RandomDraws",
    "generate_draws",
    "select_colors",
    "run_randomized",
    "randomized_program",
    "shared_palette_size",
    "OrderFamily",
    "select_by_orders",
    "FamilyCertificate",
    "certify_family",
    "certified_family",
    "run_shared",
    "shared_program",
    "neighborhood_view_count",
]


def _check_eps(eps) -> Fraction:
    e = Fraction(eps)
    if not 0 < e <= 1:
        raise InvalidParams(f"epsilon {eps} outside (0, 1]")
    return e


def randomized_palette_size(n, max_degree: int, eps) -> int:
    """Palette size k = ceil(6*(Delta+1)*ln(n)/eps^2) for the randomized rule."""
    if n < 2:
        raise InvalidParams(f"need n >= 2, got {n}")
    if max_degree < 0:
        raise InvalidParams("max degree must be >= 0")
    e = float(_check_eps(eps))
    return math.ceil(6 * (max_degree + 1) * math.log(n) / (e * e))


def shared_palette_size(id_space, max_degree: int, eps, factor: int = 1) -> int:
    """Palette size k = factor * ceil(2*(Delta+1)^2*ln(N)/eps^2) shared orders."""
    if id_space < 2:
        raise InvalidParams(f"need id space >= 2, got {id_space}")
    if max_degree < 0:
        raise InvalidParams("max degree must be >= 0")
    if factor < 1:
        raise InvalidParams("factor must be a positive integer")
    e = float(_check_eps(eps))
    d1 = max_degree + 1
    return factor * math.ceil(2 * d1 * d1 * math.log(id_space) / (e * e))


# ---------------------------------------------------------------------------
# randomized construction


@dataclass(frozen=True)
class RandomDraws:
    """One node's private draws; draws[i-1] competes for color i."""

    node_id: int
    draws: tuple[int, ...]


def generate_draws(node_id: int, k: int, n: int, seed: int) -> RandomDraws:
    """Draw k values uniform in [1, k*n^4] from the node's keyed stream."""
    if k < 1:
        raise InvalidParams("palette size must be >= 1")
    if n < 1:
        raise InvalidParams("node count must be >= 1")
    hi = k * n**4
    rng = keyed_rng(seed, "draws", node_id)
    return RandomDraws(node_id, tuple(rng.randrange(1, hi + 1) for _ in range(k)))


def select_colors(
    own: RandomDraws,
    neighbors: tuple[RandomDraws, ...],
    tie_break_by_id: bool = False,
) -> frozenset[int]:
    """Colors where own draw is strictly below every neighbor draw.

    On an exact tie nobody takes the color, unless tie_break_by_id is set, in
    which case the smallest node id among the tied minimum wins.
    """
    k = len(own.draws)
    for nb in neighbors:
        if len(nb.draws) != k:
            raise InvalidParams(
                f"draw count mismatch: node {nb.node_id} has {len(nb.draws)}, expected {k}"
            )
    if not neighbors:
        return frozenset(range(1, k + 1))
    won = []
    columns = zip(own.draws, *(nb.draws for nb in neighbors))
    for i, col in enumerate(columns, start=1):
        own_d = col[0]
        m = min(islice(col, 1, None))
        if own_d < m:
            won.append(i)
        elif tie_break_by_id and own_d == m:
            tied = [nb.node_id for nb in neighbors if nb.draws[i - 1] == m]
            if all(own.node_id < t for t in tied):
                won.append(i)
    return frozenset(won)


def randomized_program(
    n: int, max_degree: int, eps, tie_break_by_id: bool = False
) -> NodeProgram:
    """Node computation for the randomized rule, ready for the harness."""
    k = randomized_palette_size(n, max_degree, eps)

    def generate_bits(node_id: int, seed: int) -> tuple:
        return generate_draws(node_id, k, n, seed).draws

    def compute(own, received) -> frozenset[int]:
        own_draws = RandomDraws(own.node_id, own.bits)
        nbr_draws = tuple(RandomDraws(e.node_id, e.bits) for e in received)
        return select_colors(own_draws, nbr_draws, tie_break_by_id)

    return NodeProgram(
        name="randomized",
        deterministic=False,
        palette_size=k,
        compute=compute,
        generate_bits=generate_bits,
        meta={
            "epsilon": float(Fraction(eps)),
            "n": n,
            "max_degree": max_degree,
            "palette_size": k,
            "tie_break_by_id": tie_break_by_id,
        },
    )


def run_randomized(
    g: Graph,
    eps,
    seed: int,
    max_degree: int | None = None,
    tie_break_by_id: bool = False,
) -> Multicoloring:
    """One-shot randomized multicoloring of g via the simulator harness."""
    delta = g.max_degree() if max_degree is None else max_degree
    if delta < g.max_degree():
        raise InvalidParams(
            f"declared degree bound {delta} below actual max degree {g.max_degree()}"
        )
    program = randomized_program(g.n, delta, eps, tie_break_by_id)
    coloring, _ = simulator.run_one_shot(g, program, seed)
    return coloring


# ---------------------------------------------------------------------------
# shared-order construction


class OrderFamily:
    """k seeded global orders of [1..id_space], shared by all nodes.

    ranks[i][x-1] is the position of id x in order i; a node takes color i+1
    when its rank is below every neighbor's rank in order i.
    """

    def __init__(self, k: int, id_space: int, seed: int):
        if k < 1:
            raise InvalidParams("order count must be >= 1")
        if id_space < 1:
            raise InvalidParams("id space must be >= 1")
        self.k = k
        self.id_space = id_space
        self.seed = seed
        rng = keyed_rng(seed, "orders", k, id_space)
        ids = list(range(1, id_space + 1))
        ranks = []
        for _ in range(k):
            order = ids[:]
            rng.shuffle(order)
            rank = [0] * id_space
            for pos, x in enumerate(order):
                rank[x - 1] = pos
            ranks.append(rank)
        self.ranks = ranks
        self._beats_row_id: int | None = None
        self._beats_row: list[int] | None = None

    def _check_id(self, x: int) -> None:
        if not 1 <= x <= self.id_space:
            raise InvalidParams(f"id {x} outside [1, {self.id_space}]")

    def beats_row(self, x: int) -> list[int]:
        """beats_row(x)[y-1] is the bitmask of orders where y precedes x.

        Cached for the most recent x, which makes view sweeps grouped by
        node id cheap.
        """
        if self._beats_row_id == x:
            assert self._beats_row is not None
            return self._beats_row
        self._check_id(x)
        row = [0] * self.id_space
        for i, rank in enumerate(self.ranks):
            bit = 1 << i
            rx = rank[x - 1]
            for y in range(1, self.id_space + 1):
                if rank[y - 1] < rx:
                    row[y - 1] |= bit
        self._beats_row_id = x
        self._beats_row = row
        return row

    def select_mask(self, node_id: int, neighbor_ids) -> int:
        """Bitmask of won colors (bit i-1 set means color i is taken)."""
        row = self.beats_row(node_id)
        lost = 0
        for y in neighbor_ids:
            self._check_id(y)
            lost |= row[y - 1]
        return ((1 << self.k) - 1) & ~lost


def select_by_orders(view: OneHopView, family: OrderFamily) -> frozenset[int]:
    """Colors whose order ranks the node before all of its neighbors."""
    family._check_id(view.node_id)
    for y in view.neighbors:
        family._check_id(y)
    x = view.node_id
    won = []
    for i, rank in enumerate(family.ranks, start=1):
        rx = rank[x - 1]
        if all(rx < rank[y - 1] for y in view.neighbors):
            won.append(i)
    return frozenset(won)


def neighborhood_view_count(id_space: int, max_degree: int) -> int:
    """Number of one-hop views (x, Gamma) with 1 <= |Gamma| <= max_degree."""
    return sum(
        id_space * math.comb(id_space - 1, d)
        for d in range(1, max_degree + 1)
    )


@dataclass(frozen=True)
class FamilyCertificate:
    """Outcome of exhaustively checking every view against its quota."""

    passed: bool
    id_space: int
    max_degree: int
    epsilon: Fraction
    palette_size: int
    views_checked: int
    failures: int
    min_required: dict[int, int]
    worst_view: OneHopView | None
    worst_count: int | None

    @property
    def worst_fraction(self) -> Fraction | None:
        if self.worst_count is None:
            return None
        return Fraction(self.worst_count, self.palette_size)


def min_colors_required(palette_size: int, eps, delta: int) -> int:
    """Smallest count c with c/k >= (1-eps)/(delta+1), computed exactly."""
    target = (1 - Fraction(eps)) * palette_size / (delta + 1)
    return math.ceil(target)


def certify_family(
    family: OrderFamily,
    max_degree: int,
    eps,
    max_views: int = 10**7,
) -> FamilyCertificate:
    """Check that every possible view up to max_degree meets its color quota.

    Walks all (x, Gamma) with 1 <= |Gamma| <= max_degree over the id space
    (degree-0 views get the whole palette and need no check) and compares each
    exact win count against ceil((1-eps)*k/(delta+1)). Exact integer
    arithmetic end to end.
    """
    e = _check_eps(eps)
    n_views = neighborhood_view_count(family.id_space, max_degree)
    if n_views > max_views:
        raise TooLarge(f"{n_views} views exceed the guard of {max_views}")
    k = family.k
    full = (1 << k) - 1
    required = {
        d: min_colors_required(k, e, d) for d in range(1, max_degree + 1)
    }
    failures = 0
    worst: tuple[int, tuple[int, ...], int] | None = None  # (x, gamma, count)
    worst_metric = None  # count*(d+1), proportional to the achieved ratio
    checked = 0
    for x in range(1, family.id_space + 1):
        row = family.beats_row(x)
        others = [y for y in range(1, family.id_space + 1) if y != x]
        for d in range(1, max_degree + 1):
            need = required[d]
            for gamma in combinations(others, d):
                lost = 0
                for y in gamma:
                    lost |= row[y - 1]
                count = k - (full & lost).bit_count()
                checked += 1
                if count < need:
                    failures += 1
                metric = count * (d + 1)
                if worst_metric is None or metric < worst_metric:
                    worst_metric = metric
                    worst = (x, gamma, count)
    return FamilyCertificate(
        passed=failures == 0,
        id_space=family.id_space,
        max_degree=max_degree,
        epsilon=e,
        palette_size=k,
        views_checked=checked,
        failures=failures,
        min_required=required,
        worst_view=OneHopView(worst[0], frozenset(worst[1])) if worst else None,
        worst_count=worst[2] if worst else None,
    )


def certified_family(
    id_space: int,
    max_degree: int,
    eps,
    seed: int,
    max_attempts: int = 3,
    factor: int = 1,
    max_views: int = 10**7,
) -> tuple[OrderFamily, FamilyCertificate, int]:
    """Build an order family and certify it, resampling the seed on failure.

    Returns (family, certificate, attempts). The certificate of the last
    attempt is returned even if it failed; callers decide how to proceed.
    """
    if max_attempts < 1:
        raise InvalidParams("need at least one attempt")
    k = shared_palette_size(id_space, max_degree, eps, factor)
    family = cert = None
    attempts = 0
    for a in range(max_attempts):
        attempts = a + 1
        family = OrderFamily(k, id_space, keyed_rng(seed, "attempt", a).getrandbits(64))
        cert = certify_family(family, max_degree, eps, max_views)
        if cert.passed:
            break
    assert family is not None and cert is not None
    return family, cert, attempts


def shared_program(family: OrderFamily, meta: dict | None = None) -> NodeProgram:
    """Node computation that selects by the given shared orders."""

    def compute(own, received) -> frozenset[int]:
        view = OneHopView(own.node_id, frozenset(e.node_id for e in received))
        return select_by_orders(view, family)

    return NodeProgram(
        name="shared-order",
        deterministic=True,
        palette_size=family.k,
        compute=compute,
        meta={
            "id_space": family.id_space,
            "palette_size": family.k,
            "family_seed": family.seed,
            **(meta or {}),
        },
    )


def run_shared(
    g: Graph,
    eps,
    seed: int,
    max_degree: int | None = None,
    factor: int = 1,
    certify_attempts: int = 0,
    max_views: int = 10**7,
) -> Multicoloring:
    """One-shot shared-order multicoloring of g via the simulator harness.

    With certify_attempts > 0 the family is exhaustively certified for every
    view over the id space first (resampling on failure), which is only
    feasible for small (N, Delta).
    """
    delta = g.max_degree() if max_degree is None else max_degree
    if delta < g.max_degree():
        raise InvalidParams(
            f"declared degree bound {delta} below actual max degree {g.max_degree()}"
        )
    meta: dict = {
        "epsilon": float(Fraction(eps)),
        "max_degree": delta,
        "factor": factor,
        "certified": False,
    }
    if certify_attempts > 0:
        family, cert, attempts = certified_family(
            g.id_space, delta, eps, seed, certify_attempts, factor, max_views
        )
        if not cert.passed:
            raise InvalidParams(
                f"no certified family within {attempts} attempts; "
                f"worst view holds {cert.worst_count}/{cert.palette_size}"
            )
        meta.update(certified=True, attempts=attempts)
    else:
        k = shared_palette_size(g.id_space, delta, eps, factor)
        family = OrderFamily(k, g.id_space, keyed_rng(seed, "attempt", 0).getrandbits(64))
    program = shared_program(family, meta)
    coloring, _ = simulator.run_one_shot(g, program, seed)
    return coloring


def _build_randomized(g: Graph, seed=None, eps=0.5, tie_break_by_id=False, **_):
    return randomized_program(g.n, g.max_degree(), eps, tie_break_by_id)


def _build_shared(g: Graph, seed=None, eps=0.5, factor=1, certify_attempts=0, **_):
    delta = g.max_degree()
    if certify_attempts > 0:
        family, cert, attempts = certified_family(
            g.id_space, delta, eps, seed, certify_attempts, factor
        )
        if not cert.passed:
            raise InvalidParams("family failed certification")
        return shared_program(
            family,
            {"epsilon": float(Fraction(eps)), "max_degree": delta,
             "factor": factor, "certified": True, "attempts": attempts},
        )
    k = shared_palette_size(g.id_space, delta, eps, factor)
    family = OrderFamily(k, g.id_space, keyed_rng(seed, "attempt", 0).getrandbits(64))
    return shared_program(
        family,
        {"epsilon": float(Fraction(eps)), "max_degree": delta,
         "factor": factor, "certified": False},
    )


simulator.register_builder("randomized", _build_randomized)
simulator.register_builder("shared-order", _build_shared)

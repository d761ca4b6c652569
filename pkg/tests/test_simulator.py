"""One-shot harness: envelopes, traces, registry, and locality replay."""

import pytest

from multicolor import (
    ContractViolation,
    Graph,
    InvalidParams,
    NodeEnvelope,
    NodeProgram,
    OneHopView,
    gnp_graph,
    parse_edge_list,
    replay_view,
    run_one_shot,
)
from multicolor import algebraic, permcolor
from multicolor.simulator import build_program, registered_algorithms

ALGOS = ("algebraic-basic", "algebraic-weighted", "randomized", "shared-order")


def constant_program(palette=4, colors=frozenset({1})):
    return NodeProgram(
        name="const",
        deterministic=True,
        palette_size=palette,
        compute=lambda own, received: colors,
    )


def test_payload_bytes():
    assert NodeEnvelope(1).payload_bytes() == 0
    assert NodeEnvelope(1, (0,)).payload_bytes() == 1
    assert NodeEnvelope(1, (255,)).payload_bytes() == 1
    assert NodeEnvelope(1, (256,)).payload_bytes() == 2
    assert NodeEnvelope(1, (2**64, 1)).payload_bytes() == 10


def test_all_four_algorithms_are_registered():
    assert registered_algorithms() == ALGOS


def test_unknown_algorithm_name():
    g = gnp_graph(4, 0.5, 4, seed=0)
    with pytest.raises(InvalidParams):
        build_program("nope", g)
    with pytest.raises(InvalidParams):
        run_one_shot(g, "nope")


def test_opts_require_a_name():
    g = gnp_graph(4, 0.5, 4, seed=0)
    with pytest.raises(InvalidParams):
        run_one_shot(g, constant_program(), eps=0.5)


def test_edgeless_graph_receives_nothing():
    g = Graph(3, {1: set(), 2: set(), 3: set()})
    coloring, trace = run_one_shot(g, constant_program())
    assert trace.message_count == 0
    assert all(t.received == () for t in trace.nodes.values())
    assert all(coloring.assignment[v] == {1} for v in (1, 2, 3))


def test_message_count_is_twice_the_edges():
    g = gnp_graph(20, 0.3, 50, seed=5)
    _, trace = run_one_shot(g, "algebraic-basic")
    assert trace.message_count == 2 * g.edge_count()
    assert trace.max_payload_bytes == 0  # deterministic, no bits on the wire
    for v, t in trace.nodes.items():
        assert len(t.received) == g.degree(v)
        assert [e.node_id for e in t.received] == sorted(g.neighbors(v))


def test_harness_equals_direct_view_computation_on_k2():
    g = parse_edge_list("# N=4\n1 2\n")
    params = algebraic.choose_tower(4, 1)
    coloring, _ = run_one_shot(g, algebraic.basic_program(params))
    for v in (1, 2):
        assert coloring.assignment[v] == algebraic.tower_color_indices(
            g.view(v), params
        )


def test_randomized_run_is_reproducible():
    g = gnp_graph(100, 0.05, 100, seed=1)
    a = run_one_shot(g, "randomized", seed=11, eps=1.0)
    b = run_one_shot(g, "randomized", seed=11, eps=1.0)
    assert a[0] == b[0]
    assert a[1] == b[1]
    c = run_one_shot(g, "randomized", seed=12, eps=1.0)
    assert a[0] != c[0]


def test_randomized_needs_a_seed():
    g = gnp_graph(6, 0.5, 6, seed=1)
    prog = permcolor.randomized_program(6, g.max_degree(), 0.5)
    with pytest.raises(InvalidParams):
        run_one_shot(g, prog)


def test_randomized_program_must_generate_bits():
    bad = NodeProgram(
        name="bad",
        deterministic=False,
        palette_size=2,
        compute=lambda own, received: frozenset(),
    )
    g = gnp_graph(4, 0.5, 4, seed=0)
    with pytest.raises(ContractViolation):
        run_one_shot(g, bad, seed=1)


def test_coloring_params_record_the_run():
    g = gnp_graph(8, 0.4, 8, seed=2)
    coloring, _ = run_one_shot(g, "randomized", seed=3, eps=0.5)
    assert coloring.params["algorithm"] == "randomized"
    assert coloring.params["seed"] == 3
    assert coloring.params["epsilon"] == 0.5


def test_build_program_forwards_options():
    g = gnp_graph(8, 0.4, 8, seed=2)
    prog = build_program("randomized", g, seed=1, eps=0.25)
    assert prog.meta["epsilon"] == 0.25


# -- replay_view ----------------------------------------------------------


def test_replay_of_degree_zero_view_gets_all_shared_colors():
    fam = permcolor.OrderFamily(9, 5, seed=2)
    prog = permcolor.shared_program(fam)
    out = replay_view(OneHopView(3, frozenset()), (), prog)
    assert out == frozenset(range(1, 10))


def test_replay_matches_runs_across_host_graphs():
    """The same view embedded in a path and in a star yields the same set."""
    path = parse_edge_list("# N=5\n1 2\n2 3\n")
    star = parse_edge_list("# N=5\n1 2\n2 3\n2 4\n2 5\n")
    view = path.view(1)  # (1, {2}) in both graphs
    assert view == star.view(1)
    params = algebraic.choose_tower(5, 4)
    prog = algebraic.basic_program(params)
    run_path, tr_path = run_one_shot(path, prog)
    run_star, tr_star = run_one_shot(star, prog)
    assert run_path.assignment[1] == run_star.assignment[1]
    replayed = replay_view(view, tr_path.nodes[1].received, prog)
    assert replayed == run_path.assignment[1]
    assert replayed == replay_view(view, tr_star.nodes[1].received, prog)


def test_replay_rejects_mismatched_envelopes():
    prog = constant_program()
    view = OneHopView(1, frozenset({2, 3}))
    with pytest.raises(InvalidParams):
        replay_view(view, (NodeEnvelope(2),), prog)
    with pytest.raises(InvalidParams):
        replay_view(view, (NodeEnvelope(2), NodeEnvelope(3), NodeEnvelope(3)), prog)


def test_replay_rejects_bits_for_deterministic_programs():
    prog = constant_program()
    view = OneHopView(1, frozenset({2}))
    with pytest.raises(ContractViolation):
        replay_view(view, (NodeEnvelope(2, (7,)),), prog)


def test_replay_regenerates_randomized_bits():
    g = gnp_graph(10, 0.4, 10, seed=4)
    prog = build_program("randomized", g, seed=21, eps=1.0)
    coloring, trace = run_one_shot(g, prog, seed=21)
    for v in g.node_ids():
        out = replay_view(g.view(v), trace.nodes[v].received, prog, seed=21)
        assert out == coloring.assignment[v]

import itertools

import networkx as nx
import numpy as np
import pytest

from structest_core.errors import ConfigurationError, GenerationError
from structest_core.graphs import (
    GraphSample,
    RegularGraph,
    SpinConfig,
    build_circulant,
    build_random_regular,
    cut_size,
    dumps_graph,
    loads_graph,
    pair_arrays,
    pair_index,
    quadratic_form,
    quadratic_form_direct,
    read_graph_sample,
    wedge_count,
    wedge_count_by_pairs,
    wedge_delta,
)


def test_circulant_c4(c4):
    assert c4.edges == ((0, 1), (0, 3), (1, 2), (2, 3))
    assert c4.adjacency == ((1, 3), (0, 2), (1, 3), (0, 2))


def test_circulant_offsets():
    g = build_circulant(6, 4)
    assert g.adjacency[0] == (1, 2, 4, 5)
    assert all(len(nbrs) == 4 for nbrs in g.adjacency)
    assert len(g.edges) == 12


def test_circulant_five_cycle_matches_networkx():
    g = build_circulant(5, 2)
    assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(5))


@pytest.mark.parametrize('n, d', [(5, 3), (4, 4), (6, 7)])
def test_circulant_rejects_bad_degree(n, d):
    with pytest.raises(ConfigurationError):
        build_circulant(n, d)


def test_random_regular_degrees_and_determinism():
    g = build_random_regular(10, 3, seed=1)
    assert all(deg == 3 for _, deg in g.to_networkx().degree())
    assert build_random_regular(10, 3, seed=1) == g


def test_random_regular_k4():
    g = build_random_regular(4, 3, seed=7)
    assert nx.is_isomorphic(g.to_networkx(), nx.complete_graph(4))


def test_random_regular_odd_product():
    with pytest.raises(ConfigurationError):
        build_random_regular(5, 3, seed=0)


def test_random_regular_larger_instance():
    g = build_random_regular(200, 10, seed=3)
    nxg = g.to_networkx()
    assert nx.number_of_selfloops(nxg) == 0
    assert nxg.number_of_edges() == 1000
    assert {deg for _, deg in nxg.degree()} == {10}


def test_random_regular_budget_exhaustion():
    with pytest.raises(GenerationError):
        build_random_regular(10, 3, seed=0, max_attempts=0)


def test_from_edges_rejects_irregular():
    with pytest.raises(ConfigurationError):
        RegularGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


def test_cut_size_examples(c4):
    assert cut_size(c4, {0, 1}) == 2
    assert cut_size(c4, set()) == 0
    assert cut_size(c4, {0, 2}) == 4


def test_cut_size_rejects_mask_of_wrong_length(c4):
    for size in (3, 5):
        with pytest.raises(ConfigurationError):
            cut_size(c4, np.ones(size, dtype=bool))
    assert cut_size(c4, np.array([True, True, False, False])) == 2


def test_cut_is_complement_symmetric(rng):
    g = build_random_regular(12, 3, seed=5)
    for _ in range(20):
        mask = rng.random(12) < 0.5
        assert cut_size(g, mask) == cut_size(g, ~mask)


def test_quadratic_form_examples(c4):
    assert quadratic_form(c4, SpinConfig([1, 1, 1, 1])) == 4
    assert quadratic_form(c4, SpinConfig([1, 1, -1, -1])) == 0
    assert quadratic_form(c4, SpinConfig([1, -1, 1, -1])) == -4


def test_quadratic_form_matches_direct_sum_exhaustively():
    g = build_random_regular(8, 3, seed=2)
    for bits in itertools.product([-1, 1], repeat=8):
        x = SpinConfig(bits)
        assert quadratic_form(g, x) == quadratic_form_direct(g, x)


def test_quadratic_form_matches_matrix_product(rng):
    g = build_circulant(30, 6)
    a = g.adjacency_matrix()
    for _ in range(10):
        spins = np.where(rng.random(30) < 0.5, 1, -1)
        assert 2 * quadratic_form(g, spins) == int(spins @ a @ spins)


def test_graph_text_round_trip(c4):
    text = dumps_graph(c4)
    assert text.splitlines()[0] == '4 2'
    assert loads_graph(text) == c4


def test_loads_graph_header_mismatch():
    with pytest.raises(ConfigurationError):
        loads_graph('4 3\n0 1\n1 2\n2 3\n0 3\n')


def test_spin_config_cache_and_flip():
    x = SpinConfig([1, -1, -1, 1, 1])
    assert x.plus_count == 3
    assert x.magnetization == pytest.approx(0.2)
    x.flip(1)
    assert x.plus_count == 4 and x.check()
    assert (x.magnetization_exact * x.n).denominator == 1


def test_spin_config_rejects_zero():
    with pytest.raises(ValueError):
        SpinConfig([1, 0, -1])


def test_pair_index_is_lexicographic():
    n = 6
    u, v = pair_arrays(n)
    for k, (a, b) in enumerate(zip(u.tolist(), v.tolist())):
        assert pair_index(n, a, b) == k
        assert pair_index(n, b, a) == k


def test_wedge_count_examples():
    assert wedge_count(GraphSample(4)) == 0
    assert wedge_count(GraphSample.from_edges(3, [(0, 1), (1, 2)])) == 1
    assert wedge_count(GraphSample.from_edges(3, [(0, 1), (1, 2), (0, 2)])) == 3


@pytest.mark.parametrize('n', [2, 3, 4, 5])
def test_wedge_count_formula_matches_pair_scan(n):
    N = n * (n - 1) // 2
    for bits in itertools.product([0, 1], repeat=N):
        s = GraphSample(n, bits)
        assert wedge_count(s) == wedge_count_by_pairs(s)
        assert 2 * s.edge_count == int(s.degrees.sum())


def test_wedge_count_formula_matches_pair_scan_n6(rng):
    for _ in range(200):
        s = GraphSample(6, rng.random(15) < 0.5)
        assert wedge_count(s) == wedge_count_by_pairs(s)


def test_wedge_delta_examples():
    s = GraphSample(4)
    assert wedge_delta(s, (0, 1)) == 0
    s = GraphSample.from_edges(3, [(0, 1)])
    assert wedge_delta(s, (1, 2)) == 1
    s = GraphSample.from_edges(3, [(0, 1), (1, 2)])
    assert wedge_delta(s, (1, 2)) == -1


def test_wedge_delta_accumulates_along_toggles(rng):
    n = 7
    s = GraphSample(n)
    start = wedge_count(s)
    total = 0
    for _ in range(300):
        u, v = rng.choice(n, size=2, replace=False)
        total += s.toggle(int(u), int(v))
        assert s.check()
    assert wedge_count(s) - start == total


def test_graph_sample_serialization(rng):
    s = GraphSample(5, rng.random(10) < 0.5)
    assert GraphSample.loads(s.dumps()) == s
    assert GraphSample.loads(s.dumps_line()) == s
    assert s.dumps().splitlines()[0] == '5'


def test_graph_sample_rejects_bad_line():
    with pytest.raises(ConfigurationError):
        GraphSample.loads('4:10101')


def test_read_graph_sample_formats(tmp_path):
    a = GraphSample.from_edges(4, [(0, 1), (1, 2)])
    b = GraphSample.from_edges(4, [(2, 3)])
    lines = tmp_path / 'lines.txt'
    lines.write_text(a.dumps_line() + "\n" + b.dumps_line() + "\n")
    assert read_graph_sample(lines, 1) == b
    with pytest.raises(ConfigurationError):
        read_graph_sample(lines, 2)

    edge_list = tmp_path / 'edges.txt'
    edge_list.write_text(a.dumps())
    assert read_graph_sample(edge_list) == a

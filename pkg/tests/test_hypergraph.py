import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedcore import _backend
from mixedcore.hypergraph import (
    Hypergraph,
    InvalidParams,
    edge_counts,
    generate_mixed,
    has_empty_core,
    peel,
)
from mixedcore.threshold import EdgeMix

MIX_3_16 = EdgeMix((3, 16), (0.88684, 0.11316))


def naive_core(h):
    """Recompute degrees from scratch and drop every edge touching a degree-1 node, until stable."""
    alive = set(range(h.m))
    edges = h.edges
    while True:
        deg = [0] * h.n
        for e in alive:
            for v in edges[e]:
                deg[v] += 1
        drop = {e for e in alive if any(deg[v] == 1 for v in edges[e])}
        if not drop:
            break
        alive -= drop
    nodes = {v for e in alive for v in edges[e]}
    return nodes, alive


def replay_is_legal(h, res):
    edges = h.edges
    alive = set(range(h.m))
    deg = [0] * h.n
    for e in alive:
        for v in edges[e]:
            deg[v] += 1
    gone = set()
    for v, e in res.removed_pairs:
        if v in gone or deg[v] > 1:
            return False
        if e is None:
            if deg[v] != 0:
                return False
        else:
            if e not in alive or v not in edges[e]:
                return False
            alive.remove(e)
            for u in edges[e]:
                deg[u] -= 1
        gone.add(v)
    return alive == res.core_edges()


def small_random(seed, n=200, c=0.8):
    return generate_mixed(n, int(c * n), EdgeMix((3, 5), (0.7, 0.3)), seed)


class TestHypergraph:
    def test_from_edges(self):
        h = Hypergraph.from_edges(5, [[0, 1, 2], [2, 3, 4]])
        assert h.m == 2
        assert h.edge(1) == [2, 3, 4]
        assert h.edge_sizes.tolist() == [3, 3]
        assert h.incidence[2] == [0, 1]

    def test_repeated_node_rejected(self):
        with pytest.raises(InvalidParams):
            Hypergraph.from_edges(5, [[0, 0, 1]])

    def test_out_of_range(self):
        with pytest.raises(InvalidParams):
            Hypergraph.from_edges(3, [[0, 1, 3]])

    def test_text_round_trip(self):
        h = small_random(3, n=50)
        h2 = Hypergraph.from_text(h.to_text())
        assert h2.n == h.n and h2.edges == h.edges

    def test_text_header_mismatch(self):
        with pytest.raises(InvalidParams):
            Hypergraph.from_text("4 2\n0 1 2\n")


class TestGenerate:
    def test_counts(self):
        h = generate_mixed(1000, 900, MIX_3_16, seed=1)
        sizes = h.edge_sizes
        assert h.m == 900
        assert (sizes == 3).sum() == 798 and (sizes == 16).sum() == 102
        # small edges first
        assert sizes[:798].max() == 3

    def test_edge_counts_rounding(self):
        assert edge_counts(900, MIX_3_16) == [798, 102]
        assert edge_counts(0, MIX_3_16) == [0, 0]

    def test_distinct_nodes(self):
        h = generate_mixed(30, 200, MIX_3_16, seed=5)
        assert all(len(set(e)) == len(e) for e in h.edges)

    def test_determinism(self):
        a = generate_mixed(500, 400, MIX_3_16, seed=42)
        b = generate_mixed(500, 400, MIX_3_16, seed=42)
        c = generate_mixed(500, 400, MIX_3_16, seed=43)
        assert np.array_equal(a.nodes, b.nodes)
        assert not np.array_equal(a.nodes, c.nodes)

    def test_n_equals_k(self):
        h = generate_mixed(3, 4, EdgeMix.uniform(3), seed=0)
        assert all(sorted(e) == [0, 1, 2] for e in h.edges)

    def test_n_too_small(self):
        with pytest.raises(InvalidParams):
            generate_mixed(10, 5, MIX_3_16, seed=0)

    def test_node_marginals_uniform(self):
        n, m = 100, 20_000
        h = generate_mixed(n, m, EdgeMix.uniform(3), seed=7)
        counts = np.bincount(h.nodes, minlength=n)
        p = 3 / n
        sd = np.sqrt(m * p * (1 - p))
        assert np.all(np.abs(counts - m * p) < 5 * sd)


class TestPeel:
    def test_single_edge(self):
        r = peel(Hypergraph.from_edges(3, [[0, 1, 2]]))
        assert r.is_empty and r.core_node_count == 0

    def test_two_identical_edges_form_core(self):
        r = peel(Hypergraph.from_edges(4, [[0, 1, 2], [0, 1, 2]]))
        assert r.core_edges() == {0, 1}
        assert r.core_nodes() == {0, 1, 2}

    def test_chain_peels(self):
        r = peel(Hypergraph.from_edges(7, [[0, 1, 2], [2, 3, 4], [4, 5, 6]]))
        assert r.is_empty

    def test_empty_graph(self):
        r = peel(Hypergraph.from_edges(4, []))
        assert r.is_empty and r.removed_nodes.size == 4
        assert all(e is None for _, e in r.removed_pairs)

    def test_removal_sequence_covers_nodes_once(self):
        h = small_random(11)
        r = peel(h)
        assert len(set(r.removed_nodes.tolist())) == r.removed_nodes.size
        assert r.core_node_count + r.removed_nodes.size == h.n

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_naive_oracle(self, seed):
        h = small_random(seed, c=0.75 + 0.01 * seed)
        r = peel(h)
        nodes, edges = naive_core(h)
        assert r.core_edges() == edges
        assert r.core_nodes() == nodes

    @pytest.mark.parametrize("seed", range(10))
    def test_replay_legal(self, seed):
        h = small_random(100 + seed, c=0.85)
        for order in ("fifo", "lifo", "random"):
            r = peel(h, order=order, rng=np.random.default_rng(seed))
            assert replay_is_legal(h, r)

    @pytest.mark.parametrize("seed", range(10))
    def test_order_independent(self, seed):
        h = small_random(200 + seed, c=0.85)
        ref = peel(h).core_edges()
        assert peel(h, order="lifo").core_edges() == ref
        for s in range(5):
            assert peel(h, order="random", rng=np.random.default_rng(s)).core_edges() == ref

    def test_core_has_min_degree_two(self):
        h = small_random(9, c=0.95)
        r = peel(h)
        assert not r.is_empty
        deg = np.zeros(h.n, dtype=int)
        for e in r.core_edges():
            for v in h.edge(e):
                deg[v] += 1
        assert all(deg[v] >= 2 for v in r.core_nodes())

    @settings(max_examples=60, deadline=None)
    @given(st.integers(4, 12).flatmap(lambda n: st.tuples(
        st.just(n),
        st.lists(st.lists(st.integers(0, n - 1), min_size=3, max_size=4, unique=True), max_size=15))))
    def test_property_matches_oracle(self, case):
        n, edges = case
        h = Hypergraph.from_edges(n, edges)
        r = peel(h, order="random", rng=np.random.default_rng(0))
        nodes, core = naive_core(h)
        assert r.core_edges() == core and r.core_nodes() == nodes
        assert replay_is_legal(h, r)


@pytest.mark.skipif(_backend.compiled_kernels is None, reason="compiled kernels not built")
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    h = small_random(300 + seed, n=2000, c=0.8 + 0.02 * seed)
    a = _backend.compiled_kernels.peel_csr(h.n, h.offsets, h.nodes)
    b = _backend.python_kernels.peel_csr(h.n, h.offsets, h.nodes)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]) and a[2] == b[2]


@pytest.mark.slow
def test_subcritical_large_graphs_peel():
    n = 100_000
    ok = sum(has_empty_core(generate_mixed(n, int(0.8 * n), EdgeMix.uniform(3), seed=s)) for s in range(100))
    assert ok >= 95


def test_pure_python_fallback_selected_by_env():
    code = ("from mixedcore import BACKEND, peel, Hypergraph;"
            "r = peel(Hypergraph.from_edges(4, [[0, 1, 2], [0, 1, 2]]));"
            "print(BACKEND, sorted(r.core_edges()))")
    env = dict(os.environ, MIXEDCORE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split(None, 1) == ["python", "[0, 1]\n"]

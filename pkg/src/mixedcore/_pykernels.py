"""Pure-Python peeling and XOR back-substitution.

Reference implementation of the compiled kernels in ``_kernels.pyx``; the two
must agree exactly. Hypergraphs are passed in CSR form: edge ``e`` consists of
``nodes[offsets[e]:offsets[e + 1]]``.
"""
from collections import deque

import numpy as np


def _incidence(n, offsets, nodes):
    inc = [[] for _ in range(n)]
    for e in range(len(offsets) - 1):
        for i in range(offsets[e], offsets[e + 1]):
            inc[nodes[i]].append(e)
    return inc


def peel_csr(n, offsets, nodes, order="fifo", rng=None):
    """Peel to the 2-core.

    Returns ``(removed_nodes, removed_edges, core_edge_count)``; the i-th
    removal takes node ``removed_nodes[i]`` together with edge
    ``removed_edges[i]`` (``-1`` if the node had degree 0). ``order`` picks
    which pending low-degree node goes next: ``"fifo"``, ``"lifo"`` or
    ``"random"`` (needs ``rng``, a ``numpy.random.Generator``).
    """
    offsets = [int(x) for x in offsets]
    nodes = [int(x) for x in nodes]
    m = len(offsets) - 1
    inc = _incidence(n, offsets, nodes)
    deg = [len(lst) for lst in inc]
    alive = [True] * m

    if order == "random" and rng is None:
        raise ValueError("random order needs an rng")
    pending = deque(v for v in range(n) if deg[v] <= 1)
    if order == "fifo":
        pop = pending.popleft
    elif order == "lifo":
        pop = pending.pop
    elif order == "random":
        pending = list(pending)

        def pop():
            j = int(rng.integers(len(pending)))
            pending[j], pending[-1] = pending[-1], pending[j]
            return pending.pop()
    else:
        raise ValueError(f"unknown order {order!r}")

    removed_nodes = []
    removed_edges = []
    edges_left = m
    while pending:
        v = pop()
        e = -1
        if deg[v] == 1:
            for cand in inc[v]:
                if alive[cand]:
                    e = cand
                    break
            alive[e] = False
            edges_left -= 1
            for i in range(offsets[e], offsets[e + 1]):
                u = nodes[i]
                deg[u] -= 1
                if u != v and deg[u] == 1:
                    pending.append(u)
        removed_nodes.append(v)
        removed_edges.append(e)
    return (np.array(removed_nodes, dtype=np.int64),
            np.array(removed_edges, dtype=np.int64),
            edges_left)


def xor_solve(n, offsets, nodes, removed_nodes, removed_edges, values):
    """Cells such that the XOR over every peeled edge equals its value.

    Walks the removal sequence backwards; cells never assigned stay 0.
    """
    cells = [0] * n
    for v, e in zip(reversed(removed_nodes.tolist()), reversed(removed_edges.tolist())):
        if e < 0:
            continue
        acc = int(values[e])
        for i in range(int(offsets[e]), int(offsets[e + 1])):
            u = int(nodes[i])
            if u != v:
                acc ^= cells[u]
        cells[v] = acc
    return np.array(cells, dtype=np.uint64)

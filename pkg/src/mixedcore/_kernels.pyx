# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled peeling and XOR back-substitution kernels.

Same contract as ``_pykernels`` (FIFO order only).
"""
import numpy as np
from libc.stdint cimport int64_t, uint64_t, uint8_t


def peel_csr(Py_ssize_t n, const int64_t[::1] offsets, const int64_t[::1] nodes):
    cdef Py_ssize_t m = offsets.shape[0] - 1
    cdef Py_ssize_t nnz = nodes.shape[0]
    cdef Py_ssize_t i, j, e, v, u, head = 0, tail = 0, removed = 0
    cdef Py_ssize_t edges_left = m

    deg_a = np.zeros(n, dtype=np.int64)
    inc_off_a = np.zeros(n + 1, dtype=np.int64)
    inc_a = np.empty(nnz, dtype=np.int64)
    alive_a = np.ones(m, dtype=np.uint8)
    queue_a = np.empty(n, dtype=np.int64)
    out_nodes_a = np.empty(n, dtype=np.int64)
    out_edges_a = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] deg = deg_a
    cdef int64_t[::1] inc_off = inc_off_a
    cdef int64_t[::1] inc = inc_a
    cdef uint8_t[::1] alive = alive_a
    cdef int64_t[::1] queue = queue_a
    cdef int64_t[::1] out_nodes = out_nodes_a
    cdef int64_t[::1] out_edges = out_edges_a

    with nogil:
        for i in range(nnz):
            deg[nodes[i]] += 1
        for v in range(n):
            inc_off[v + 1] = inc_off[v] + deg[v]
        # deg doubles as the fill cursor, then is restored
        for v in range(n):
            deg[v] = 0
        for e in range(m):
            for i in range(offsets[e], offsets[e + 1]):
                v = nodes[i]
                inc[inc_off[v] + deg[v]] = e
                deg[v] += 1

        for v in range(n):
            if deg[v] <= 1:
                queue[tail] = v
                tail += 1

        while head < tail:
            v = queue[head]
            head += 1
            e = -1
            if deg[v] == 1:
                for j in range(inc_off[v], inc_off[v + 1]):
                    if alive[inc[j]]:
                        e = inc[j]
                        break
                alive[e] = 0
                edges_left -= 1
                for i in range(offsets[e], offsets[e + 1]):
                    u = nodes[i]
                    deg[u] -= 1
                    if u != v and deg[u] == 1:
                        queue[tail] = u
                        tail += 1
            out_nodes[removed] = v
            out_edges[removed] = e
            removed += 1

    return out_nodes_a[:removed].copy(), out_edges_a[:removed].copy(), edges_left


def xor_solve(Py_ssize_t n, const int64_t[::1] offsets, const int64_t[::1] nodes,
              const int64_t[::1] removed_nodes, const int64_t[::1] removed_edges,
              const uint64_t[::1] values):
    cells_a = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] cells = cells_a
    cdef Py_ssize_t k, i, v, e, u
    cdef uint64_t acc
    with nogil:
        for k in range(removed_nodes.shape[0] - 1, -1, -1):
            e = removed_edges[k]
            if e < 0:
                continue
            v = removed_nodes[k]
            acc = values[e]
            for i in range(offsets[e], offsets[e + 1]):
                u = nodes[i]
                if u != v:
                    acc ^= cells[u]
            cells[v] = acc
    return cells_a

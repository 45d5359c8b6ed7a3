"""Random mixed hypergraphs and 2-core peeling.

Edges are stored in CSR form (``offsets``/``nodes`` int64 arrays). Random
hypergraphs follow the with-replacement model: every edge is an independent,
uniformly random set of ``k`` distinct nodes, and identical edges may occur
more than once.

Randomness comes from ``numpy.random.Generator`` with the PCG64 bit
generator; ``seed`` may be an int or a ``numpy.random.SeedSequence``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _backend
from .threshold import EdgeMix

SeedLike = Union[int, np.random.SeedSequence]


class InvalidParams(ValueError):
    pass


@dataclass
class Hypergraph:
    n: int
    offsets: np.ndarray
    nodes: np.ndarray
    _incidence: Optional[list] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        self.nodes = np.ascontiguousarray(self.nodes, dtype=np.int64)
        if self.offsets.ndim != 1 or self.offsets.size < 1 or self.offsets[0] != 0:
            raise InvalidParams("offsets must start at 0")
        if self.offsets[-1] != self.nodes.size:
            raise InvalidParams("offsets do not match node array length")
        if self.nodes.size and (self.nodes.min() < 0 or self.nodes.max() >= self.n):
            raise InvalidParams("node id out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        edges = [list(e) for e in edges]
        for e in edges:
            if len(set(e)) != len(e):
                raise InvalidParams(f"edge {e} repeats a node")
        offsets = np.zeros(len(edges) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([len(e) for e in edges], dtype=np.int64)
        nodes = np.fromiter((v for e in edges for v in e), dtype=np.int64, count=int(offsets[-1]))
        return cls(n, offsets, nodes)

    @property
    def m(self) -> int:
        return self.offsets.size - 1

    def edge(self, e: int) -> list[int]:
        return self.nodes[self.offsets[e]:self.offsets[e + 1]].tolist()

    @property
    def edges(self) -> list[list[int]]:
        return [self.edge(e) for e in range(self.m)]

    @property
    def edge_sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def incidence(self) -> list[list[int]]:
        """Per-node list of incident edge ids."""
        if self._incidence is None:
            inc = [[] for _ in range(self.n)]
            for e in range(self.m):
                for v in self.nodes[self.offsets[e]:self.offsets[e + 1]].tolist():
                    inc[v].append(e)
            self._incidence = inc
        return self._incidence

    def to_text(self) -> str:
        """Edge-list text: header ``"n m"``, then one edge per line."""
        lines = [f"{self.n} {self.m}"]
        lines += [" ".join(map(str, e)) for e in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise InvalidParams("missing 'n m' header")
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [[int(x) for x in r] for r in rows[1:]]
        if len(edges) != m:
            raise InvalidParams(f"header says {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges)


@dataclass(frozen=True)
class PeelResult:
    n: int
    m: int
    removed_nodes: np.ndarray
    removed_edges: np.ndarray
    core_edge_count: int

    @property
    def core_node_count(self) -> int:
        return self.n - self.removed_nodes.size

    @property
    def removed_pairs(self) -> list[tuple[int, Optional[int]]]:
        return [(v, e if e >= 0 else None)
                for v, e in zip(self.removed_nodes.tolist(), self.removed_edges.tolist())]

    @property
    def is_empty(self) -> bool:
        return self.core_edge_count == 0

    def core_nodes(self) -> set[int]:
        return set(range(self.n)) - set(self.removed_nodes.tolist())

    def core_edges(self) -> set[int]:
        return set(range(self.m)) - set(self.removed_edges[self.removed_edges >= 0].tolist())


def edge_counts(m: int, mix: EdgeMix) -> list[int]:
    """Edges per size: ``round(alpha_i * m)`` for all but the last size, which takes the rest."""
    counts = [int(math.floor(a * m + 0.5)) for a in mix.fractions[:-1]]
    rest = m - sum(counts)
    if rest < 0:
        raise InvalidParams(f"rounded edge counts {counts} exceed m={m}")
    return counts + [rest]


def random_distinct_rows(rng: np.random.Generator, rows: int, k: int, n: int) -> np.ndarray:
    """``rows`` independent uniform ``k``-subsets of ``range(n)`` (whole-row rejection)."""
    out = rng.integers(0, n, size=(rows, k), dtype=np.int64)
    if k < 2:
        return out
    bad = _rows_with_repeats(out)
    while bad.size:
        out[bad] = rng.integers(0, n, size=(bad.size, k), dtype=np.int64)
        bad = bad[_rows_with_repeats(out[bad])]
    return out


def _rows_with_repeats(block: np.ndarray) -> np.ndarray:
    s = np.sort(block, axis=1)
    return np.flatnonzero((s[:, 1:] == s[:, :-1]).any(axis=1))


def generate_mixed(n: int, m: int, mix: EdgeMix, seed: SeedLike) -> Hypergraph:
    """Random hypergraph on ``n`` nodes with ``m`` edges sized according to ``mix``.

    Edges of the first size come first in the edge list.
    """
    if m < 0:
        raise InvalidParams("m must be non-negative")
    if n < mix.max_size:
        raise InvalidParams(f"n={n} is smaller than the largest edge size {mix.max_size}")
    rng = np.random.default_rng(seed)
    blocks = []
    sizes = []
    for k, cnt in zip(mix.sizes, edge_counts(m, mix)):
        if cnt:
            blocks.append(random_distinct_rows(rng, cnt, k, n).ravel())
            sizes.append(np.full(cnt, k, dtype=np.int64))
    offsets = np.zeros(m + 1, dtype=np.int64)
    if blocks:
        np.cumsum(np.concatenate(sizes), out=offsets[1:])
        nodes = np.concatenate(blocks)
    else:
        nodes = np.zeros(0, dtype=np.int64)
    return Hypergraph(n, offsets, nodes)


def peel(h: Hypergraph, order: str = "fifo", rng: Optional[np.random.Generator] = None) -> PeelResult:
    """Remove degree <= 1 nodes (and their edge) until none is left.

    FIFO order runs on the active backend. ``"lifo"`` and ``"random"``
    orders use the pure-Python kernel; the resulting core is the same.
    """
    if order == "fifo":
        rn, re, left = _backend.peel_csr(h.n, h.offsets, h.nodes)
    else:
        rn, re, left = _backend.python_kernels.peel_csr(h.n, h.offsets, h.nodes, order=order, rng=rng)
    return PeelResult(h.n, h.m, rn, re, int(left))


def has_empty_core(h: Hypergraph) -> bool:
    return peel(h).core_edge_count == 0

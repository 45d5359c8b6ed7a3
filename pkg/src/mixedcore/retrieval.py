"""Static function retrieval over a mixed random hypergraph.

Each key is hashed to a hyperedge: a size class picked with the mixture's
fractions, then that many distinct cells. A key's value is the XOR of its
cells. Building peels the hypergraph and assigns cells in reverse peeling
order, which solves the XOR system in linear time whenever the 2-core is
empty.

Hashing: keys are reduced to a 64-bit BLAKE2b digest once; everything after
that is splitmix64 mixing of ``(digest, seed, counter)``. Counter 0 selects
the size class, counters ``1 + t*K + j`` give candidate ``j`` of attempt
``t`` (``K`` the largest edge size). An attempt with a repeated cell is
discarded as a whole.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .hypergraph import Hypergraph, InvalidParams, peel
from .threshold import EdgeMix

U64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MAGIC = b"MXRT"
VERSION = 1
_HEADER = struct.Struct("<4sHQQHH")


class BuildFailed(RuntimeError):
    pass


def key_digest(key: bytes) -> int:
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _fmix(x: int) -> int:
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & U64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & U64
    return x ^ (x >> 31)


def hash64(digest: int, seed: int, counter: int) -> int:
    return _fmix(digest ^ _fmix((seed + (counter + 1) * GOLDEN) & U64))


def _fmix_np(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _hash64_np(digests: np.ndarray, seed: int, counter: int) -> np.ndarray:
    salt = _fmix((seed + (counter + 1) * GOLDEN) & U64)
    return _fmix_np(digests ^ np.uint64(salt))


def _reduce(h: int, n: int) -> int:
    return ((h >> 32) * n) >> 32


def _class_cutoffs(mix: EdgeMix) -> list[int]:
    """Upper hash bounds per size class; the last class takes the rest."""
    cum = 0.0
    cuts = []
    for a in mix.fractions[:-1]:
        cum += a
        cuts.append(min(int(cum * 2.0 ** 64), U64))
    return cuts


@dataclass(frozen=True)
class EdgeAssignment:
    digest: int
    size_class: int
    nodes: tuple[int, ...]

    @property
    def is_small(self) -> bool:
        return self.size_class == 0


def _assign_digest(digest: int, seed: int, mix: EdgeMix, n: int, cuts: Sequence[int]) -> EdgeAssignment:
    u = hash64(digest, seed, 0)
    cls = next((i for i, cut in enumerate(cuts) if u < cut), len(cuts))
    k = mix.sizes[cls]
    stride = mix.max_size
    t = 0
    while True:
        base = 1 + t * stride
        nodes = tuple(_reduce(hash64(digest, seed, base + j), n) for j in range(k))
        if len(set(nodes)) == k:
            return EdgeAssignment(digest, cls, nodes)
        t += 1


def assign_edge(key: bytes, seed: int, mix: EdgeMix, n: int) -> EdgeAssignment:
    if n < mix.max_size:
        raise InvalidParams(f"n={n} is smaller than the largest edge size")
    return _assign_digest(key_digest(key), seed & U64, mix, n, _class_cutoffs(mix))


def _assign_all(digests: np.ndarray, seed: int, mix: EdgeMix, n: int) -> Hypergraph:
    """Vectorised ``assign_edge`` for a whole key set, in key order."""
    m = digests.size
    u = _hash64_np(digests, seed, 0)
    cls = np.zeros(m, dtype=np.int64)
    for cut in _class_cutoffs(mix):
        cls += (u >= np.uint64(cut)).astype(np.int64)
    sizes = np.asarray(mix.sizes, dtype=np.int64)[cls]
    offsets = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    nodes = np.empty(int(offsets[-1]), dtype=np.int64)
    stride = mix.max_size
    for ci, k in enumerate(mix.sizes):
        rows = np.flatnonzero(cls == ci)
        if rows.size == 0:
            continue
        d = digests[rows]
        block = np.empty((rows.size, k), dtype=np.int64)
        todo = np.arange(rows.size)
        t = 0
        while todo.size:
            for j in range(k):
                h = _hash64_np(d[todo], seed, 1 + t * stride + j)
                block[todo, j] = ((h >> np.uint64(32)) * np.uint64(n)) >> np.uint64(32)
            s = np.sort(block[todo], axis=1)
            todo = todo[(s[:, 1:] == s[:, :-1]).any(axis=1)]
            t += 1
        idx = offsets[rows][:, None] + np.arange(k)
        nodes[idx.ravel()] = block.ravel()
    return Hypergraph(n, offsets, nodes)


@dataclass(frozen=True)
class RetrievalStructure:
    cells: np.ndarray
    r: int
    mix: EdgeMix
    n: int
    m: int
    seed: int

    @property
    def alpha_star(self) -> float:
        return self.mix.fractions[0]

    def to_bytes(self) -> bytes:
        s = len(self.mix.sizes)
        out = [_HEADER.pack(MAGIC, VERSION, self.n, self.m, self.r, s)]
        out.append(struct.pack(f"<{s}I", *self.mix.sizes))
        out.append(struct.pack(f"<{s}d", *self.mix.fractions))
        out.append(struct.pack("<Q", self.seed))
        out.append(_pack_cells(self.cells, self.r))
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "RetrievalStructure":
        magic, version, n, m, r, s = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise ValueError("not a retrieval structure")
        if version != VERSION:
            raise ValueError(f"unsupported format version {version}")
        pos = _HEADER.size
        sizes = struct.unpack_from(f"<{s}I", data, pos)
        pos += 4 * s
        fractions = struct.unpack_from(f"<{s}d", data, pos)
        pos += 8 * s
        (seed,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        cells = _unpack_cells(data[pos:], n, r)
        return cls(cells, r, EdgeMix(sizes, fractions), n, m, seed)


def _pack_cells(cells: np.ndarray, r: int) -> bytes:
    shifts = np.arange(r, dtype=np.uint64)
    bits = ((cells[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def _unpack_cells(buf: bytes, n: int, r: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8), count=n * r, bitorder="little")
    bits = bits.reshape(n, r).astype(np.uint64)
    return (bits << np.arange(r, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)


def cell_count(m: int, c_build: float, mix: EdgeMix) -> int:
    return max(math.ceil(m / c_build), mix.max_size)


def build(pairs: Iterable[tuple[bytes, int]], c_build: float, mix: EdgeMix, r: int,
          seed: int, max_retries: int = 3) -> RetrievalStructure:
    """Build a retrieval structure for distinct keys.

    Uses ``n = ceil(m / c_build)`` cells (at least the largest edge size).
    A non-empty 2-core triggers a retry with ``seed + 1``, at most
    ``max_retries`` times, after which ``BuildFailed`` is raised.
    """
    if not 0.0 < c_build < 1.0:
        raise InvalidParams("c_build must lie in (0, 1)")
    if not 1 <= r <= 64:
        raise InvalidParams("r must lie in [1, 64]")
    pairs = list(pairs)
    m = len(pairs)
    limit = 1 << r
    values = np.empty(m, dtype=np.uint64)
    for i, (_, v) in enumerate(pairs):
        if not 0 <= v < limit:
            raise InvalidParams(f"value {v} does not fit in {r} bits")
        values[i] = v
    digests = np.fromiter((key_digest(k) for k, _ in pairs), dtype=np.uint64, count=m)
    n = cell_count(m, c_build, mix)

    for attempt in range(max_retries + 1):
        s = (seed + attempt) & U64
        h = _assign_all(digests, s, mix, n)
        res = peel(h)
        if res.core_edge_count == 0:
            cells = _backend.xor_solve(n, h.offsets, h.nodes, res.removed_nodes, res.removed_edges, values)
            return RetrievalStructure(cells, r, mix, n, m, s)
    raise BuildFailed(f"2-core non-empty after {max_retries + 1} attempts (m={m}, n={n}, c={c_build})")


def query(s: RetrievalStructure, key: bytes) -> int:
    a = _assign_digest(key_digest(key), s.seed, s.mix, s.n, _class_cutoffs(s.mix))
    acc = 0
    for v in a.nodes:
        acc ^= int(s.cells[v])
    return acc


def space_report(s: RetrievalStructure) -> tuple[float, float]:
    """``(bits_per_key, n / m)``."""
    if s.m <= 0:
        raise ValueError("space per key is undefined for an empty key set")
    return s.n * s.r / s.m, s.n / s.m

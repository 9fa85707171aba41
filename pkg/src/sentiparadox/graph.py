"""Immutable CSR adjacency for the friendship and follow networks."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

from . import _kernels


class ConnectionType(enum.Enum):
    FRIENDS = "friends"
    FOLLOWEES = "followees"
    FOLLOWERS = "followers"


class TriadMode(enum.Enum):
    UNDIRECTED = "undirected"
    DIRECTED = "directed"


class Triad(NamedTuple):
    members: tuple[int, int, int]
    mode: TriadMode


def csr_from_pairs(n, src, dst):
    """Sorted, duplicate-free CSR rows ``src -> dst`` over ``n`` nodes."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size:
        width = max(n, int(dst.max()) + 1)
        key = np.unique(src * width + dst)
        src, dst = key // width, key % width
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst.astype(np.int64)


@dataclass(frozen=True, eq=False)
class SocialGraph:
    """Undirected friend graph plus directed follow graph over dense indices.

    ``ids[i]`` is the original user id of dense index ``i``.
    """

    ids: np.ndarray
    friend_ptr: np.ndarray
    friend_idx: np.ndarray
    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray

    @property
    def n_users(self) -> int:
        return len(self.ids)

    @property
    def n_friend_edges(self) -> int:
        return len(self.friend_idx) // 2

    @property
    def n_follow_edges(self) -> int:
        return len(self.out_idx)

    @classmethod
    def from_edges(cls, n_users, friend_edges=(), follow_edges=(), ids=None):
        """Build from dense-index edge arrays; self-loops are dropped."""
        fe = np.asarray(friend_edges, dtype=np.int64).reshape(-1, 2)
        de = np.asarray(follow_edges, dtype=np.int64).reshape(-1, 2)
        fe = fe[fe[:, 0] != fe[:, 1]]
        de = de[de[:, 0] != de[:, 1]]
        for arr in (fe, de):
            if arr.size and (arr.min() < 0 or arr.max() >= n_users):
                raise ValueError("edge endpoint out of range")
        fptr, fidx = csr_from_pairs(n_users, np.r_[fe[:, 0], fe[:, 1]], np.r_[fe[:, 1], fe[:, 0]])
        optr, oidx = csr_from_pairs(n_users, de[:, 0], de[:, 1])
        iptr, iidx = csr_from_pairs(n_users, de[:, 1], de[:, 0])
        if ids is None:
            ids = np.arange(n_users, dtype=np.int64)
        return cls(np.asarray(ids, dtype=np.int64), fptr, fidx, optr, oidx, iptr, iidx)

    def adjacency(self, t: ConnectionType) -> tuple[np.ndarray, np.ndarray]:
        if t is ConnectionType.FRIENDS:
            return self.friend_ptr, self.friend_idx
        if t is ConnectionType.FOLLOWEES:
            return self.out_ptr, self.out_idx
        if t is ConnectionType.FOLLOWERS:
            return self.in_ptr, self.in_idx
        raise ValueError(f"unknown connection type {t!r}")

    def degree(self, t: ConnectionType) -> np.ndarray:
        ptr, _ = self.adjacency(t)
        return np.diff(ptr)

    def index_of(self, user_ids) -> np.ndarray:
        user_ids = np.asarray(user_ids, dtype=np.int64)
        pos = np.searchsorted(self.ids, user_ids)
        pos = np.minimum(pos, max(len(self.ids) - 1, 0))
        if len(self.ids) == 0 or np.any(self.ids[pos] != user_ids):
            raise KeyError("unknown user id")
        return pos

    def _check(self, u):
        if not 0 <= u < self.n_users:
            raise IndexError(f"user index {u} out of range [0, {self.n_users})")

    @cached_property
    def follow_sym(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetrized follow graph (pair joined by an edge in either direction)."""
        src = np.r_[np.repeat(np.arange(self.n_users), np.diff(self.out_ptr)), self.out_idx]
        dst = np.r_[self.out_idx, np.repeat(np.arange(self.n_users), np.diff(self.out_ptr))]
        return csr_from_pairs(self.n_users, src, dst)

    @cached_property
    def _out_keys(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n_users, dtype=np.int64), np.diff(self.out_ptr))
        return src * max(self.n_users, 1) + self.out_idx

    def has_follow(self, u, v) -> np.ndarray:
        """Vectorized test for follow edges ``u -> v``."""
        keys = self._out_keys
        q = np.asarray(u, dtype=np.int64) * max(self.n_users, 1) + np.asarray(v, dtype=np.int64)
        pos = np.searchsorted(keys, q)
        pos = np.minimum(pos, max(len(keys) - 1, 0))
        if len(keys) == 0:
            return np.zeros(np.shape(q), dtype=bool)
        return keys[pos] == q

    def triad_adjacency(self, mode: TriadMode):
        if mode is TriadMode.UNDIRECTED:
            return self.friend_ptr, self.friend_idx
        return self.follow_sym


def build_graph(bundle) -> SocialGraph:
    """Compact the bundle's user ids to dense indices and build adjacency."""
    ids = bundle.users
    fe = np.searchsorted(ids, bundle.friend_edges)
    de = np.searchsorted(ids, bundle.follow_edges)
    return SocialGraph.from_edges(len(ids), fe, de, ids=ids)


def connections(g: SocialGraph, u: int, t: ConnectionType) -> np.ndarray:
    g._check(u)
    ptr, idx = g.adjacency(t)
    return idx[ptr[u] : ptr[u + 1]]


def triad_array(g: SocialGraph, mode: TriadMode, threads: int = 1) -> np.ndarray:
    """``(k, 3)`` array of sorted triads in lexicographic order.

    Work is partitioned by lowest vertex; partitions are concatenated in
    vertex order so the result does not depend on ``threads``.
    """
    ptr, idx = g.triad_adjacency(mode)
    n = g.n_users
    if threads <= 1 or n < 2:
        return _kernels.triangles(ptr, idx)
    # balance partitions by adjacency volume
    bounds = np.searchsorted(ptr, np.linspace(0, ptr[-1], threads * 4 + 1)[1:-1])
    cuts = np.unique(np.r_[0, bounds, n])
    with ThreadPoolExecutor(threads) as ex:
        parts = list(ex.map(lambda ab: _kernels.triangles(ptr, idx, int(ab[0]), int(ab[1])), zip(cuts[:-1], cuts[1:])))
    return np.concatenate(parts) if parts else np.zeros((0, 3), dtype=np.int64)


def enumerate_triads(g: SocialGraph, mode: TriadMode = TriadMode.UNDIRECTED) -> Iterator[Triad]:
    for a, b, c in triad_array(g, mode).tolist():
        yield Triad((a, b, c), mode)


def triad_mode_for(t: ConnectionType) -> TriadMode:
    return TriadMode.UNDIRECTED if t is ConnectionType.FRIENDS else TriadMode.DIRECTED


def common_neighbor_partners(g: SocialGraph, u: int, t: ConnectionType) -> np.ndarray:
    """Connections of type ``t`` that share a triad with ``u``.

    For friends that means a common friend; for the directed types the
    common neighbor is taken in the symmetrized follow graph, so the pair
    co-occurs in a directed triad.
    """
    g._check(u)
    cand = connections(g, u, t)
    ptr, idx = g.triad_adjacency(triad_mode_for(t))
    mine = idx[ptr[u] : ptr[u + 1]]
    keep = [v for v in cand.tolist() if np.intersect1d(mine, idx[ptr[v] : ptr[v + 1]], assume_unique=True).size]
    return np.asarray(keep, dtype=np.int64)

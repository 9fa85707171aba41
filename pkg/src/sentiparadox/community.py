"""Bipartite user <-> community membership index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import ConnectionType, SocialGraph, csr_from_pairs


@dataclass(frozen=True, eq=False)
class CommunityIndex:
    """Memberships over dense user indices and dense community indices.

    ``community_ids[c]`` is the original id of community ``c``.
    """

    n_users: int
    community_ids: np.ndarray
    user_ptr: np.ndarray  # user -> sorted communities
    user_comm: np.ndarray
    comm_ptr: np.ndarray  # community -> sorted members
    comm_user: np.ndarray

    @property
    def n_communities(self) -> int:
        return len(self.community_ids)

    @classmethod
    def from_pairs(cls, n_users, users, communities, community_ids=None):
        """Build from dense ``(user, community)`` index pairs."""
        users = np.asarray(users, dtype=np.int64)
        communities = np.asarray(communities, dtype=np.int64)
        n_comm = int(communities.max()) + 1 if communities.size else 0
        if community_ids is None:
            community_ids = np.arange(n_comm, dtype=np.int64)
        n_comm = max(n_comm, len(community_ids))
        uptr, ucomm = csr_from_pairs(n_users, users, communities)
        cptr, cuser = csr_from_pairs(n_comm, communities, users)
        return cls(n_users, np.asarray(community_ids, dtype=np.int64), uptr, ucomm, cptr, cuser)

    def members(self, c: int) -> np.ndarray:
        return self.comm_user[self.comm_ptr[c] : self.comm_ptr[c + 1]]

    def communities_of(self, u: int) -> np.ndarray:
        return self.user_comm[self.user_ptr[u] : self.user_ptr[u + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.comm_ptr)

    def induced_connections(self, g: SocialGraph, c: int, t: ConnectionType) -> np.ndarray:
        """``(u, v)`` rows with ``v`` a type-``t`` connection of ``u`` inside ``c``."""
        mem = self.members(c)
        ptr, idx = g.adjacency(t)
        rows = []
        for u in mem.tolist():
            nb = idx[ptr[u] : ptr[u + 1]]
            inside = nb[np.isin(nb, mem, assume_unique=True)]
            rows.extend((u, v) for v in inside.tolist())
        return np.asarray(rows, dtype=np.int64).reshape(-1, 2)

    def induced_edge_count(self, g: SocialGraph, c: int, t: ConnectionType) -> int:
        n = len(self.induced_connections(g, c, t))
        return n // 2 if t is ConnectionType.FRIENDS else n


def build_communities(bundle, g: SocialGraph) -> CommunityIndex:
    m = bundle.memberships
    users = g.index_of(m[:, 0]) if len(m) else np.zeros(0, dtype=np.int64)
    cids, comm = np.unique(m[:, 1], return_inverse=True)
    return CommunityIndex.from_pairs(g.n_users, users, comm.ravel(), community_ids=cids)

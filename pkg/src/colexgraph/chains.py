"""Minimum chain partition and maximum antichain of a (partial) order.

The minimum chain partition of a transitively closed strict order is a minimum
path cover: n minus a maximum bipartite matching. Chains are recovered by
following matched pairs; the matching iterates vertices in ascending id so the
partition is deterministic. The Konig cover of the same matching yields a
maximum antichain, giving the width equality both ways.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .quotient import classes, induced_order
from .relation import Preorder

_INF = -1


@dataclass(frozen=True)
class ChainPartition:
    """Partition of class ids into chains, each totally ordered by the order."""

    chain_count: int
    chain_of: tuple[int, ...]
    pos_in_chain: tuple[int, ...]
    chains: tuple[tuple[int, ...], ...]


def _hopcroft_karp(adj: list[list[int]], n_left: int, n_right: int) -> list[int]:
    """Maximum matching; returns match_left (right partner of each left or -1)."""
    match_left = [-1] * n_left
    match_right = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        dq = deque()
        for u in range(n_left):
            if match_left[u] == -1:
                dist[u] = 0
                dq.append(u)
            else:
                dist[u] = _INF
        found = False
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w == -1:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    dq.append(w)
        return found

    def dfs(root: int) -> bool:
        # Iterative DFS over the layered graph. Each frame is [left vertex,
        # adjacency cursor]; pending[i] is the right vertex frame i used to
        # reach frame i+1, so a success augments the whole stack at once.
        stack = [[root, 0]]
        pending: list[int] = []
        while stack:
            u, idx = stack[-1]
            free_v = -1
            pushed = False
            while idx < len(adj[u]):
                v = adj[u][idx]
                idx += 1
                w = match_right[v]
                if w == -1:
                    free_v = v
                    break
                if dist[w] == dist[u] + 1:
                    stack[-1][1] = idx
                    pending.append(v)
                    stack.append([w, 0])
                    pushed = True
                    break
            if free_v != -1:
                match_left[u] = free_v
                match_right[free_v] = u
                stack.pop()
                while stack:
                    uu, _ = stack.pop()
                    vv = pending.pop()
                    match_left[uu] = vv
                    match_right[vv] = uu
                return True
            if pushed:
                continue
            dist[u] = _INF
            stack.pop()
            if pending:
                pending.pop()
        return False

    while bfs():
        for u in range(n_left):
            if match_left[u] == -1:
                dfs(u)
    return match_left


def _strict_adjacency(order: Preorder) -> list[list[int]]:
    strict = order.bits & ~np.eye(order.n, dtype=bool)
    return [[int(v) for v in np.nonzero(strict[u])[0]] for u in range(order.n)]


def min_chain_partition(order: Preorder) -> ChainPartition:
    """Minimum-size chain partition of a partial order.

    The order must be antisymmetric; its strict part is already transitively
    closed, so matched edges concatenate into chains.
    """
    if not isinstance(order, Preorder):
        order = Preorder(order.bits)
    if not order.is_antisymmetric():
        raise ValueError("order must be a partial order (antisymmetric)")
    n = order.n
    adj = _strict_adjacency(order)
    match_left = _hopcroft_karp(adj, n, n)
    matched_right = {v for v in match_left if v != -1}
    chains: list[tuple[int, ...]] = []
    chain_of = [-1] * n
    pos_in_chain = [-1] * n
    for head in range(n):
        if head in matched_right:
            continue
        chain = []
        cur = head
        while cur != -1:
            chain.append(cur)
            cur = match_left[cur]
        cid = len(chains)
        for pos, node in enumerate(chain):
            chain_of[node] = cid
            pos_in_chain[node] = pos
        chains.append(tuple(chain))
    return ChainPartition(len(chains), tuple(chain_of), tuple(pos_in_chain), tuple(chains))


def max_antichain(order: Preorder) -> frozenset[int]:
    """A maximum antichain, from the Konig cover of the path-cover matching."""
    if not order.is_antisymmetric():
        raise ValueError("order must be a partial order (antisymmetric)")
    n = order.n
    adj = _strict_adjacency(order)
    match_left = _hopcroft_karp(adj, n, n)
    match_right = [-1] * n
    for u, v in enumerate(match_left):
        if v != -1:
            match_right[v] = u
    # Alternating reachability from unmatched left vertices.
    in_z_left = [False] * n
    in_z_right = [False] * n
    dq = deque()
    for u in range(n):
        if match_left[u] == -1:
            in_z_left[u] = True
            dq.append(u)
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if match_left[u] == v or in_z_right[v]:
                continue
            in_z_right[v] = True
            w = match_right[v]
            if w != -1 and not in_z_left[w]:
                in_z_left[w] = True
                dq.append(w)
    # Cover = (L outside Z) plus (R inside Z); the antichain avoids both.
    return frozenset(v for v in range(n) if in_z_left[v] and not in_z_right[v])


def preorder_width(pre: Preorder) -> int:
    """Width of a preorder = width of its quotient partial order."""
    part = classes(pre)
    return min_chain_partition(induced_order(pre, part)).chain_count

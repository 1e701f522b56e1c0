"""Anti-centrality: rank vertices by the largest branch hanging off them.

For a tree T and vertex v, ``psi(v)`` is the size of the largest component
of T with v removed.  Small values are central: the minimizers are the
(at most two, adjacent) centroids.  All routines here run in O(n) using a
two-pass rerooting over CSR adjacency: orient the tree away from the
vertex with shape label 1, accumulate subtree sizes level by level, then
read off ``psi(v) = max(largest child subtree, n - subtree(v))``.  The
result does not depend on the reference label (the n - subtree term is 0
at the root itself).

Everything operates on :class:`~seed_archeology.trees.ShapeView` and is
pure; no floating point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RngHandle
from .trees import ShapeView

__all__ = [
    "CentralityProfile",
    "anti_centrality",
    "select_most_central",
    "branch_sizes_at",
]


@dataclass(frozen=True)
class CentralityProfile:
    """Per-vertex anti-centrality, with the rooted sizes that produced it.

    Attributes
    ----------
    n : int
        Vertex count.
    psi : numpy.ndarray
        Length ``n + 1``; ``psi[v]`` is the largest component size of the
        tree with v deleted.  Index 0 unused.
    rooted_subtree_size : numpy.ndarray
        Length ``n + 1``; subtree sizes when the tree is rooted at the
        vertex with shape label 1.
    centroids : frozenset of int
        Vertices attaining the minimum psi; one or two, and if two they
        are adjacent.
    """

    n: int
    psi: np.ndarray
    rooted_subtree_size: np.ndarray
    centroids: frozenset[int]

    def __post_init__(self) -> None:
        for name in ("psi", "rooted_subtree_size"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def anti_centrality(view: ShapeView) -> CentralityProfile:
    """Compute psi for every vertex of `view` in O(n).

    Raises
    ------
    ValueError
        If the view is empty.
    """
    n = view.n
    if n < 1:
        raise ValueError("cannot rank an empty tree")
    parent, levels = _orient_from(view, 1)
    size = np.ones(n + 1, dtype=np.int64)
    size[0] = 0
    # Children accumulate into parents one level at a time, deepest first;
    # add.at is required because siblings share a slot within a level.
    for level in reversed(levels[1:]):
        np.add.at(size, parent[level], size[level])
    non_root = np.flatnonzero(parent > 0)
    max_child = np.zeros(n + 1, dtype=np.int64)
    np.maximum.at(max_child, parent[non_root], size[non_root])
    psi = np.maximum(max_child, n - size)
    psi[0] = 0
    best = psi[1:].min()
    centroids = frozenset(int(v) for v in np.flatnonzero(psi[1:] == best) + 1)
    return CentralityProfile(n, psi, size, centroids)


def select_most_central(
    profile: CentralityProfile, k: int, rng: RngHandle
) -> frozenset[int]:
    """The k vertices of smallest psi, boundary ties broken uniformly.

    Every returned vertex has psi no larger than every excluded vertex;
    within the tied boundary value the choice is uniform from `rng`, so
    repeated calls realize each admissible set with equal probability.

    Raises
    ------
    ValueError
        If k is not in ``1..n``.
    """
    if not 1 <= k <= profile.n:
        raise ValueError(f"k must be in 1..{profile.n}, got {k}")
    labels = np.arange(1, profile.n + 1)
    return _take_extreme(labels, profile.psi[1:], k, rng, smallest=True)


def branch_sizes_at(view: ShapeView, v: int) -> dict[int, int]:
    """Component sizes of the tree with `v` deleted, keyed by neighbor.

    For each neighbor u of v, the value is the size of the component of
    T minus v that contains u.  Values sum to ``n - 1``.
    """
    if not 1 <= v <= view.n:
        raise ValueError(f"vertex {v} not in 1..{view.n}")
    parent, levels = _orient_from(view, 1)
    size = np.ones(view.n + 1, dtype=np.int64)
    size[0] = 0
    for level in reversed(levels[1:]):
        np.add.at(size, parent[level], size[level])
    out: dict[int, int] = {}
    for u in view.neighbors(v):
        u = int(u)
        if parent[u] == v:
            out[u] = int(size[u])
        else:
            # u is v's parent in the rooted orientation, so its side holds
            # everything outside v's subtree.
            out[u] = int(view.n - size[v])
    return out


def _orient_from(
    view: ShapeView, root: int
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Root the tree at `root` by frontier BFS.

    Returns the rooted parent array (0 for the root) and the BFS levels.
    Tree structure guarantees each vertex enters exactly one frontier, so
    no visited-set bookkeeping beyond the parent array is needed.
    """
    n = view.n
    parent = np.zeros(n + 1, dtype=np.int64)
    frontier = np.array([root], dtype=np.int64)
    levels = [frontier]
    while True:
        hosts, neigh = _gather_neighbors(view.indptr, view.indices, frontier)
        keep = neigh != parent[hosts]
        children = neigh[keep]
        if children.size == 0:
            break
        parent[children] = hosts[keep]
        frontier = children
        levels.append(frontier)
    return parent, levels


def _gather_neighbors(
    indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """All (host, neighbor) pairs for a frontier, via one CSR gather."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    hosts = np.repeat(frontier, counts)
    # Position arithmetic: for each pair, its offset inside the host's
    # neighbor run is a 0..count-1 ramp restarted at each host.
    ramp = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return hosts, indices[np.repeat(starts, counts) + ramp]


def _take_extreme(
    labels: np.ndarray,
    scores: np.ndarray,
    k: int,
    rng: RngHandle,
    smallest: bool,
) -> frozenset[int]:
    """k labels of extremal score; ties at the boundary drawn uniformly."""
    keyed = scores if smallest else -scores
    boundary = np.partition(keyed, k - 1)[k - 1]
    sure = labels[keyed < boundary]
    tied = labels[keyed == boundary]
    need = k - sure.size
    if need < tied.size:
        tied = rng.generator.choice(np.sort(tied), size=need, replace=False)
    return frozenset(int(v) for v in sure) | frozenset(int(v) for v in tied)

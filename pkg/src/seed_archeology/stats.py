"""Exact counters and estimators for grown-tree statistics.

Per-tree operations (histograms of descendant counts, singleton parents,
camouflaging vertices, deep vertices) work on a single
:class:`~seed_archeology.trees.ArrivalTree` and are exact integer counts.
Batched samplers (``urrt_parent_matrix`` and friends) draw many trees at
once as a ``(trials, n - 1)`` parent matrix and evaluate the same counts
column-wise in numpy; tests pin them to the per-tree versions on random
instances.  Closed forms (collision probabilities, tail bounds) live next
to the estimators they calibrate.

Rooted conventions: the root is vertex 1, the descendants of v are the
vertices of v's subtree other than v itself, and a leaf is a vertex with
no children.  A vertex is a *singleton* when it is its parent's only
descendant, i.e. the parent has exactly one child and that child is a
leaf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .rng import RngHandle
from .trees import ArrivalTree

__all__ = [
    "DescendantHistogram",
    "CamouflageReport",
    "UrnState",
    "TailCheckResult",
    "CollisionProbability",
    "rooted_subtree_sizes",
    "descendant_histogram",
    "deep_vertices",
    "singleton_parents",
    "count_camouflaging",
    "polya_draw",
    "polya_fraction_samples",
    "path_collision_probability",
    "star_collision_probability",
    "path_collision_frequency",
    "star_collision_frequency",
    "mcdiarmid_tail_check",
    "deep_tail_check",
    "urrt_parent_matrix",
    "subtree_size_matrix",
    "singleton_parent_counts",
    "camouflage_counts",
    "sample_camouflage_counts",
]


# ---------------------------------------------------------------------------
# per-tree exact counters


@dataclass(frozen=True)
class DescendantHistogram:
    """Counts of vertices by descendant number, for one tree.

    ``exactly[k]`` is the number of vertices with exactly k descendants
    (k = 0..n-1) and ``at_least[k]`` the number with at least k.  Since
    the root owns everyone else, ``exactly[n - 1] == 1`` and
    ``at_least[0] == n``.
    """

    n: int
    exactly: np.ndarray
    at_least: np.ndarray

    def __post_init__(self) -> None:
        for name in ("exactly", "at_least"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CamouflageReport:
    """Singleton-parents of a tree prefix and the camouflaged subset.

    `l` is the prefix size the conditions were evaluated against.
    `singleton_parents` contains every v whose only descendant in the
    prefix is a single leaf child; `camouflaging` is the subset that stays
    hidden at time 2l (empty when only the prefix itself was examined).
    """

    l: int
    singleton_parents: frozenset[int]
    camouflaging: frozenset[int]

    @property
    def S(self) -> int:
        return len(self.singleton_parents)

    @property
    def G(self) -> int:
        return len(self.camouflaging)


def rooted_subtree_sizes(tree: ArrivalTree) -> np.ndarray:
    """Subtree size of each vertex with the tree rooted at 1; index 0 unused."""
    sizes = np.ones(tree.n + 1, dtype=np.int64)
    sizes[0] = 0
    parent = tree.parent_of
    # parent[i] < i, so a single descending sweep settles every subtree.
    for i in range(tree.n, 1, -1):
        sizes[parent[i]] += sizes[i]
    return sizes


def descendant_histogram(tree: ArrivalTree) -> DescendantHistogram:
    """Exact histogram of descendant counts via one post-order pass."""
    descendants = rooted_subtree_sizes(tree)[1:] - 1
    exactly = np.bincount(descendants, minlength=tree.n)
    at_least = exactly[::-1].cumsum()[::-1]
    return DescendantHistogram(tree.n, exactly, at_least)


def deep_vertices(tree: ArrivalTree, a: float) -> frozenset[int]:
    """Vertices with at least `a` descendants (subtree size >= a + 1)."""
    if a < 0:
        raise ValueError(f"descendant threshold must be >= 0, got {a}")
    descendants = rooted_subtree_sizes(tree) - 1
    return frozenset(
        int(v) for v in np.flatnonzero(descendants[1:] >= a) + 1
    )


def singleton_parents(tree: ArrivalTree) -> CamouflageReport:
    """Vertices whose only descendant is a single leaf child.

    The returned report has an empty `camouflaging` set; use
    :func:`count_camouflaging` to evaluate the time-2l conditions.
    """
    if tree.n < 2:
        raise ValueError("a tree with one vertex has no parent/child pairs")
    child_count, only_child = _children_digest(tree.parent_of, tree.n)
    sp = _singleton_parent_set(child_count, only_child)
    return CamouflageReport(tree.n, sp, frozenset())


def count_camouflaging(tree: ArrivalTree, l: int) -> CamouflageReport:
    """Seed vertices whose singleton child stays covered up to time 2l.

    A vertex v of the size-l prefix qualifies when all three hold on the
    prefix of size 2l:

    1. in T_l, v has exactly one child d and d is a leaf of T_l;
    2. some vertex w arriving at time l+1..2l attached to v and is still
       a leaf at time 2l;
    3. d is still a leaf at time 2l.

    Raises
    ------
    ValueError
        If the tree has fewer than 2l vertices.
    """
    if l < 2:
        raise ValueError(f"prefix size must be >= 2, got {l}")
    if tree.n < 2 * l:
        raise ValueError(
            f"need at least 2l = {2 * l} vertices to evaluate the "
            f"camouflage conditions, got {tree.n}"
        )
    parent = tree.parent_of
    count_l, only_child = _children_digest(parent[: l + 1], l)
    count_2l = np.bincount(parent[2 : 2 * l + 1], minlength=2 * l + 1)
    sp = _singleton_parent_set(count_l, only_child)
    keep = []
    window = np.arange(l + 1, 2 * l + 1)
    window_parents = parent[window]
    window_is_leaf = count_2l[window] == 0
    for v in sp:
        d = int(only_child[v])
        if count_2l[d] != 0:
            continue
        if bool(np.any(window_is_leaf & (window_parents == v))):
            keep.append(v)
    return CamouflageReport(l, sp, frozenset(keep))


def _children_digest(
    parent: np.ndarray, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex child count and, where it is 1, the child's label.

    `only_child[v]` holds the sum of v's children's labels, which equals
    the child itself exactly when ``child_count[v] == 1``.
    """
    children = np.arange(2, n + 1)
    child_count = np.bincount(parent[2 : n + 1], minlength=n + 1)
    only_child = np.zeros(n + 1, dtype=np.int64)
    np.add.at(only_child, parent[2 : n + 1], children)
    return child_count, only_child


def _singleton_parent_set(
    child_count: np.ndarray, only_child: np.ndarray
) -> frozenset[int]:
    candidates = np.flatnonzero(child_count == 1)
    return frozenset(
        int(v)
        for v in candidates
        if v >= 1 and child_count[only_child[v]] == 0
    )


# ---------------------------------------------------------------------------
# Polya urn


@dataclass(frozen=True)
class UrnState:
    """Ball counts per color of a reinforcement urn."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts:
            raise ValueError("urn needs at least one color")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative ball count in {self.counts}")
        if sum(self.counts) < 1:
            raise ValueError("urn must start with at least one ball")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def fraction(self, color: int = 0) -> float:
        return self.counts[color] / self.total


def polya_draw(state: UrnState, draws: int, rng: RngHandle) -> UrnState:
    """Draw `draws` times, each time duplicating the ball drawn.

    A ball is picked with probability proportional to its color's count
    and one more of the same color is added.  Returns the final state;
    the input is unchanged.
    """
    if draws < 0:
        raise ValueError(f"draws must be >= 0, got {draws}")
    counts = list(state.counts)
    gen = rng.generator
    for _ in range(draws):
        total = sum(counts)
        u = int(gen.integers(0, total))
        for color, c in enumerate(counts):
            if u < c:
                counts[color] += 1
                break
            u -= c
    return UrnState(tuple(counts))


def polya_fraction_samples(
    red: int, blue: int, draws: int, runs: int, rng: RngHandle
) -> np.ndarray:
    """Final red fraction of `runs` independent two-color urns.

    Vectorized across runs: the total count is deterministic (it grows by
    one per draw), so one uniform integer per (run, draw) decides the
    color by comparison with the current red count.  Exact integer
    arithmetic throughout.
    """
    UrnState((red, blue))  # validate
    reds = np.full(runs, red, dtype=np.int64)
    gen = rng.generator
    for step in range(draws):
        total = red + blue + step
        u = gen.integers(0, total, size=runs)
        reds += u < reds
    return reds / (red + blue + draws)


# ---------------------------------------------------------------------------
# closed forms and tail checks


class CollisionProbability(NamedTuple):
    """An exact event probability, carried in log space as well."""

    log_value: float
    value: float


def path_collision_probability(l: int) -> CollisionProbability:
    """P{the tree at time 2l is a path with the seed path at an end}.

    For a path seed of size l this is ``2 (l-1)! / (2l-1)!``: the l
    arrivals must each extend the path at the non-seed end, on one of the
    two sides.  Exact rational arithmetic for small l; log space (via
    lgamma) past l = 20 to dodge factorial overflow.
    """
    if l < 2:
        raise ValueError(f"need a path seed of size >= 2, got {l}")
    log_value = math.log(2.0) + math.lgamma(l) - math.lgamma(2 * l)
    if l <= 20:
        denominator = math.prod(range(l, 2 * l))
        value = float(Fraction(2, denominator))
    else:
        value = math.exp(log_value)
    return CollisionProbability(log_value, value)


def star_collision_probability(l: int) -> CollisionProbability:
    """P{every arrival up to time 2l attaches to the seed star's center}.

    The star analogue of :func:`path_collision_probability`, provided for
    exploration only (no matching published bound): the product of
    1/(i - 1) over arrivals i = l+1..2l is ``(l-1)! / (2l-1)!``.
    """
    if l < 2:
        raise ValueError(f"need a star seed of size >= 2, got {l}")
    log_value = math.lgamma(l) - math.lgamma(2 * l)
    if l <= 20:
        value = float(Fraction(1, math.prod(range(l, 2 * l))))
    else:
        value = math.exp(log_value)
    return CollisionProbability(log_value, value)


def path_collision_frequency(l: int, trials: int, rng: RngHandle) -> float:
    """Monte Carlo frequency of the path-collision event at time 2l.

    Grows a path seed of size l to 2l vertices `trials` times and tests
    the event structurally: every degree is at most 2 (the tree is a
    path) and one of the seed endpoints kept degree 1 (the seed segment
    sits at an end).  Independent of the closed form, which multiplies
    attachment probabilities instead.
    """
    if l < 2:
        raise ValueError(f"need a path seed of size >= 2, got {l}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n = 2 * l
    deg = np.ones((trials, n + 1), dtype=np.int64)
    deg[:, 0] = 0
    deg[:, 2:l] = 2  # path interior
    parents = _grown_parent_matrix(l, n, trials, rng)
    rows = np.arange(trials)
    for j in range(parents.shape[1]):
        deg[rows, parents[:, j]] += 1
    is_path = deg[:, 1:].max(axis=1) <= 2
    at_end = (deg[:, 1] == 1) | (deg[:, l] == 1)
    return float(np.mean(is_path & at_end))


def star_collision_frequency(l: int, trials: int, rng: RngHandle) -> float:
    """Monte Carlo frequency of the all-arrivals-hit-the-center event.

    Structural test: the seed center ends with degree 2l - 1, which for a
    tree on 2l vertices means it is adjacent to everything.
    """
    if l < 2:
        raise ValueError(f"need a star seed of size >= 2, got {l}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    n = 2 * l
    parents = _grown_parent_matrix(l, n, trials, rng)
    center_hits = (parents == 1).sum(axis=1)
    return float(np.mean(center_hits == l))


@dataclass(frozen=True)
class TailCheckResult:
    """An empirical tail frequency next to its theoretical bound."""

    empirical: float
    theoretical: float
    trials: int

    @property
    def se(self) -> float:
        p = self.empirical
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def passed(self) -> bool:
        return self.empirical <= self.theoretical + 3.0 * self.se


def mcdiarmid_tail_check(
    l: int, t: float, trials: int, rng: RngHandle
) -> TailCheckResult:
    """Lower-tail frequency of the camouflage count against exp(-t^2 / 2l).

    Simulates `trials` copies of G_l (camouflaging vertices of a tree
    grown to 2l from a urrt seed, which is itself a urrt at size 2l) and
    returns the frequency of ``G_l <= l/384 - t`` with the concentration
    bound.  The caller asserts ``frequency <= bound + 3 SE``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    counts = sample_camouflage_counts(l, trials, rng)
    threshold = l / 384.0 - t
    empirical = float(np.mean(counts <= threshold))
    bound = math.exp(-(t * t) / (2.0 * l))
    return TailCheckResult(empirical, bound, trials)


def deep_tail_check(
    n: int, k: int, trials: int, rng: RngHandle
) -> TailCheckResult:
    """Frequency of {M <= n/(3k)} against the bound k exp(-n / (32 k^2)).

    M counts the non-root vertices with at least k descendants in a
    recursive tree holding a root plus n arrivals (n + 1 vertices); that
    is the convention under which the exact mean is (n+1)/(k+1) - 1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n <= k + 1:
        raise ValueError(f"need n > k + 1, got n={n}, k={k}")
    parents = urrt_parent_matrix(n + 1, trials, rng)
    sizes = subtree_size_matrix(parents)
    deep = (sizes[:, 2:] - 1 >= k).sum(axis=1)
    empirical = float(np.mean(deep <= n / (3.0 * k)))
    bound = k * math.exp(-n / (32.0 * k * k))
    return TailCheckResult(empirical, bound, trials)


# ---------------------------------------------------------------------------
# batched samplers


def urrt_parent_matrix(n: int, trials: int, rng: RngHandle) -> np.ndarray:
    """Parent choices of `trials` independent size-`n` recursive trees.

    Row t holds the parents of vertices 2..n of tree t; column j draws
    uniformly from {1..j+1}.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    return rng.generator.integers(
        1, np.arange(2, n + 1), size=(trials, n - 1), dtype=np.int64
    )


def _grown_parent_matrix(
    l: int, n: int, trials: int, rng: RngHandle
) -> np.ndarray:
    """Uniform-attachment parents for arrivals l+1..n, one row per trial."""
    return rng.generator.integers(
        1, np.arange(l + 1, n + 1), size=(trials, n - l), dtype=np.int64
    )


def subtree_size_matrix(parents: np.ndarray) -> np.ndarray:
    """Rooted subtree sizes for every tree of a parent matrix.

    Input is ``(trials, n - 1)`` as from :func:`urrt_parent_matrix`;
    output is ``(trials, n + 1)`` with column v the subtree size of vertex
    v (column 0 unused).  Columns are settled in descending vertex order,
    mirroring :func:`rooted_subtree_sizes` row-wise.
    """
    trials, cols = parents.shape
    n = cols + 1
    sizes = np.ones((trials, n + 1), dtype=np.int64)
    sizes[:, 0] = 0
    rows = np.arange(trials)
    # One (row, column) pair per row within each step, so plain fancy
    # indexing accumulates correctly and avoids the add.at slow path.
    for i in range(n, 1, -1):
        sizes[rows, parents[:, i - 2]] += sizes[:, i]
    return sizes


def singleton_parent_counts(parents: np.ndarray) -> np.ndarray:
    """S (number of singleton parents) for every tree of a parent matrix."""
    trials, cols = parents.shape
    n = cols + 1
    child_count, only_child = _children_digest_matrix(parents, n)
    d = np.clip(only_child, 0, n)
    d_children = np.take_along_axis(child_count, d, axis=1)
    hits = (child_count == 1) & (d_children == 0)
    return hits[:, 1:].sum(axis=1)


def camouflage_counts(parents: np.ndarray, l: int) -> np.ndarray:
    """G for every tree of a ``(trials, 2l - 1)`` parent matrix.

    Same three conditions as :func:`count_camouflaging`, evaluated
    column-wise for all trials at once.
    """
    trials, cols = parents.shape
    if cols != 2 * l - 1:
        raise ValueError(
            f"parent matrix has {cols} columns, expected 2l - 1 = {2 * l - 1}"
        )
    n = 2 * l
    rows = np.arange(trials)
    count_l, only_child = _children_digest_matrix(parents[:, : l - 1], l)
    count_2l = np.zeros((trials, n + 1), dtype=np.int64)
    for j in range(cols):
        count_2l[rows, parents[:, j]] += 1
    d = np.clip(only_child, 0, l)
    d_count_l = np.take_along_axis(count_l, d, axis=1)
    d_count_2l = np.take_along_axis(count_2l[:, : l + 1], d, axis=1)
    # Window arrivals that are still leaves at time 2l, scattered onto
    # their parents: marks v when some leaf w in l+1..2l attached to it.
    leafy_parent = np.zeros((trials, n + 1), dtype=np.int64)
    for j in range(l - 1, cols):
        w = j + 2
        is_leaf = count_2l[:, w] == 0
        leafy_parent[rows, parents[:, j]] |= is_leaf
    hits = (
        (count_l == 1)
        & (d_count_l == 0)
        & (d_count_2l == 0)
        & (leafy_parent[:, : l + 1] == 1)
    )
    return hits[:, 1:].sum(axis=1)


def sample_camouflage_counts(
    l: int, trials: int, rng: RngHandle
) -> np.ndarray:
    """G over `trials` trees grown to 2l from urrt seeds of size l."""
    if l < 2:
        raise ValueError(f"need l >= 2, got {l}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    parents = urrt_parent_matrix(2 * l, trials, rng)
    return camouflage_counts(parents, l)


def _children_digest_matrix(
    parents: np.ndarray, n: int
) -> tuple[np.ndarray, np.ndarray]:
    """Matrix version of ``_children_digest``: counts and only-child sums."""
    trials, cols = parents.shape
    rows = np.arange(trials)
    child_count = np.zeros((trials, n + 1), dtype=np.int64)
    only_child = np.zeros((trials, n + 1), dtype=np.int64)
    for j in range(cols):
        p = parents[:, j]
        child_count[rows, p] += 1
        only_child[rows, p] += j + 2
    return child_count, only_child

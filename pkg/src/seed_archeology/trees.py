"""Recursive trees grown by uniform attachment from a seed.

A tree on labels ``{1..n}`` is *recursive* when every vertex ``i >= 2``
attaches to a parent with a smaller label.  Growth by uniform attachment
starts from a seed tree on ``{1..l}`` and repeatedly joins the next vertex
``i`` to a uniformly random vertex of the current tree.  Three seed
families are built in (path, star, uniform random recursive tree) plus
arbitrary recursive seeds supplied as a parent array.

Two views of a grown tree exist.  :class:`ArrivalTree` carries arrival
order and is the ground truth used for scoring.  :class:`ShapeView` is the
same graph under a uniformly random relabeling; seed finders receive only
this view, with the relabeling retained in a field that scoring code alone
may read.

Both types are immutable after construction and safe to share between
worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .rng import RngHandle

__all__ = [
    "SeedKind",
    "SeedSpec",
    "ArrivalTree",
    "ShapeView",
    "build_seed",
    "grow",
    "scramble",
    "identity_view",
]


class SeedKind(str, Enum):
    PATH = "path"
    STAR = "star"
    URRT = "urrt"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SeedSpec:
    """Declarative description of a seed tree on ``{1..l}``.

    Parameters
    ----------
    kind : SeedKind
        One of path, star, urrt, custom.
    l : int
        Seed size (vertex count), at least 1.
    parents : tuple of int, optional
        For custom seeds only: ``parents[j]`` is the parent of vertex
        ``j + 2`` and must lie in ``1..j+1`` (recursive labeling).

    Notes
    -----
    Canonical labelings: a path seed has parent ``i - 1`` for vertex ``i``;
    a star seed has center 1 and parent 1 for every other vertex.  A urrt
    seed defers its parent draws to :func:`build_seed`.
    """

    kind: SeedKind
    l: int
    parents: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        # Accept plain strings for kind; build_seed dispatches on the
        # enum members by identity.
        object.__setattr__(self, "kind", SeedKind(self.kind))
        if self.l < 1:
            raise ValueError(f"seed size must be >= 1, got {self.l}")
        if self.kind is SeedKind.CUSTOM:
            if self.parents is None:
                raise ValueError("custom seed requires a parent array")
            if len(self.parents) != self.l - 1:
                raise ValueError(
                    f"custom seed of size {self.l} needs {self.l - 1} parent "
                    f"entries, got {len(self.parents)}"
                )
            for j, p in enumerate(self.parents):
                if not 1 <= p <= j + 1:
                    raise ValueError(
                        f"parents[{j}] = {p} is out of range for vertex "
                        f"{j + 2}; must be in 1..{j + 1}"
                    )
        elif self.parents is not None:
            raise ValueError(f"{self.kind.value} seed does not take parents")

    @classmethod
    def path(cls, l: int) -> "SeedSpec":
        return cls(SeedKind.PATH, l)

    @classmethod
    def star(cls, l: int) -> "SeedSpec":
        return cls(SeedKind.STAR, l)

    @classmethod
    def urrt(cls, l: int) -> "SeedSpec":
        return cls(SeedKind.URRT, l)

    @classmethod
    def custom(cls, parents) -> "SeedSpec":
        parents = tuple(int(p) for p in parents)
        return cls(SeedKind.CUSTOM, len(parents) + 1, parents)


@dataclass(frozen=True, eq=False)
class ArrivalTree:
    """A recursive tree with arrival order, grown from a seed of size `l`.

    Attributes
    ----------
    n : int
        Vertex count; labels are ``1..n`` in arrival order.
    l : int
        Seed size; vertices ``1..l`` with their induced edges are the seed.
    parent_of : numpy.ndarray
        Length ``n + 1``; ``parent_of[i]`` is the parent of vertex ``i``
        for ``2 <= i <= n``.  Slots 0 and 1 are 0 (the root has no parent).
        Read-only.
    """

    n: int
    l: int
    parent_of: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.l <= self.n:
            raise ValueError(f"need 1 <= l <= n, got l={self.l}, n={self.n}")
        p = np.ascontiguousarray(self.parent_of, dtype=np.int64)
        if p.shape != (self.n + 1,):
            raise ValueError(
                f"parent_of must have length n + 1 = {self.n + 1}, "
                f"got {p.shape}"
            )
        idx = np.arange(self.n + 1)
        bad = np.flatnonzero((idx >= 2) & ((p < 1) | (p >= idx)))
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"parent_of[{i}] = {int(p[i])} is not in 1..{i - 1}"
            )
        p.setflags(write=False)
        object.__setattr__(self, "parent_of", p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArrivalTree):
            return NotImplemented
        return (
            self.n == other.n
            and self.l == other.l
            and bool(np.array_equal(self.parent_of, other.parent_of))
        )

    def prefix(self, m: int) -> "ArrivalTree":
        """The tree as it stood after vertex `m` arrived."""
        if not 1 <= m <= self.n:
            raise ValueError(f"prefix size must be in 1..{self.n}, got {m}")
        return ArrivalTree(m, min(self.l, m), self.parent_of[: m + 1].copy())

    def degrees(self) -> np.ndarray:
        """Degree of each vertex; index 0 unused."""
        deg = np.bincount(self.parent_of[2:], minlength=self.n + 1)
        deg[2:] += 1
        return deg

    def to_text(self) -> str:
        """Serialize as a header line ``n=<n> l=<l>`` plus one
        ``<child> <parent>`` line per vertex 2..n in arrival order."""
        lines = [f"n={self.n} l={self.l}"]
        lines.extend(
            f"{i} {int(self.parent_of[i])}" for i in range(2, self.n + 1)
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ArrivalTree":
        header, rows = _split_header(text)
        n = _header_int(header, "n")
        l = _header_int(header, "l")
        parent_of = np.zeros(n + 1, dtype=np.int64)
        if len(rows) != n - 1:
            raise ValueError(
                f"expected {n - 1} edge lines for n={n}, got {len(rows)}"
            )
        for k, row in enumerate(rows):
            child, parent = _edge_fields(row, k + 2)
            if child != k + 2:
                raise ValueError(
                    f"line {k + 2}: expected child {k + 2} (arrival order), "
                    f"got {child}"
                )
            parent_of[child] = parent
        return cls(n, l, parent_of)


@dataclass(frozen=True, eq=False)
class ShapeView:
    """A tree with its labels scrambled, as handed to seed finders.

    Adjacency is stored in CSR form with neighbor lists sorted by label, so
    nothing about arrival order survives in the data a finder can touch.
    The relabeling needed for scoring lives in ``_arrival_of`` and is read
    through :meth:`arrival_labels_of` by the experiment harness only;
    finder code must not touch it (a test runs every finder against a view
    with this field poisoned to enforce that).

    Attributes
    ----------
    n : int
        Vertex count; shape labels are ``1..n``.
    indptr, indices : numpy.ndarray
        CSR adjacency over 1-based labels: the neighbors of ``v`` are
        ``indices[indptr[v]:indptr[v + 1]]``, ascending.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    _arrival_of: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        for name in ("indptr", "indices"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self._arrival_of is not None:
            perm = np.ascontiguousarray(self._arrival_of, dtype=np.int64)
            perm.setflags(write=False)
            object.__setattr__(self, "_arrival_of", perm)

    def neighbors(self, v: int) -> np.ndarray:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} not in 1..{self.n}")
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} not in 1..{self.n}")
        return int(self.indptr[v + 1] - self.indptr[v])

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list, smaller label first, sorted."""
        out = []
        for v in range(1, self.n + 1):
            for u in self.neighbors(v):
                if v < u:
                    out.append((v, int(u)))
        return out

    # -- scoring-harness surface; not for finders ------------------------

    def arrival_labels_of(self, vertices) -> set[int]:
        """Map shape labels back to arrival labels.  Scoring harness only."""
        if self._arrival_of is None:
            raise ValueError(
                "this view has no recorded relabeling (deserialized views "
                "cannot be scored)"
            )
        return {int(self._arrival_of[v]) for v in vertices}

    def permutation_to_text(self) -> str:
        """Serialize the hidden relabeling as ``<shape> <arrival>`` lines."""
        if self._arrival_of is None:
            raise ValueError("this view has no recorded relabeling")
        lines = [
            f"{v} {int(self._arrival_of[v])}" for v in range(1, self.n + 1)
        ]
        return "\n".join(lines) + "\n"

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Header ``n=<n>`` plus sorted undirected edge lines.

        Edges are written smaller label first and sorted, never in arrival
        order, so the file carries no trace of the hidden relabeling.
        """
        lines = [f"n={self.n}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ShapeView":
        header, rows = _split_header(text)
        if "l=" in header:
            raise ValueError(
                "found an l= field: this is an arrival tree, not a shape view"
            )
        n = _header_int(header, "n")
        if len(rows) != n - 1:
            raise ValueError(
                f"expected {n - 1} edge lines for n={n}, got {len(rows)}"
            )
        us = np.empty(n - 1, dtype=np.int64)
        vs = np.empty(n - 1, dtype=np.int64)
        for k, row in enumerate(rows):
            us[k], vs[k] = _edge_fields(row, k + 2)
        if n > 1 and (us.min() < 1 or us.max() > n or vs.min() < 1 or vs.max() > n):
            raise ValueError(f"edge endpoint out of range 1..{n}")
        view = _view_from_edges(n, us, vs, arrival_of=None)
        _check_connected_recursive_free(view)
        return view


def build_seed(spec: SeedSpec, rng: RngHandle) -> ArrivalTree:
    """Construct the seed tree described by `spec`.

    Path, star, and custom seeds are deterministic and do not draw from
    `rng`; a urrt seed draws each parent uniformly from the earlier labels.
    """
    l = spec.l
    parent_of = np.zeros(l + 1, dtype=np.int64)
    if l >= 2:
        if spec.kind is SeedKind.PATH:
            parent_of[2:] = np.arange(1, l)
        elif spec.kind is SeedKind.STAR:
            parent_of[2:] = 1
        elif spec.kind is SeedKind.URRT:
            parent_of[2:] = rng.generator.integers(1, np.arange(2, l + 1))
        else:
            parent_of[2:] = spec.parents
    return ArrivalTree(l, l, parent_of)


def grow(tree: ArrivalTree, n: int, rng: RngHandle) -> ArrivalTree:
    """Extend `tree` to `n` vertices by uniform attachment.

    Each new vertex ``i`` attaches to a parent drawn uniformly from
    ``{1..i-1}``, independently.  The input tree is not modified.

    Raises
    ------
    ValueError
        If ``n < tree.n``.
    """
    if n < tree.n:
        raise ValueError(f"cannot shrink a tree: n={n} < {tree.n}")
    parent_of = np.zeros(n + 1, dtype=np.int64)
    parent_of[: tree.n + 1] = tree.parent_of
    if n > tree.n:
        # integers() takes an array-valued exclusive upper bound, so one
        # call draws every arrival's parent from its own range {1..i-1}.
        parent_of[tree.n + 1 :] = rng.generator.integers(
            1, np.arange(tree.n + 1, n + 1)
        )
    return ArrivalTree(n, tree.l, parent_of)


def scramble(tree: ArrivalTree, rng: RngHandle) -> ShapeView:
    """Hide arrival order behind a uniformly random relabeling.

    Returns a :class:`ShapeView` whose adjacency is the input tree's under
    a fresh uniform permutation of ``{1..n}``, with the permutation
    recorded for the scoring harness.
    """
    n = tree.n
    shape_of = np.zeros(n + 1, dtype=np.int64)
    shape_of[1:] = rng.generator.permutation(n) + 1
    arrival_of = np.zeros(n + 1, dtype=np.int64)
    arrival_of[shape_of[1:]] = np.arange(1, n + 1)
    children = np.arange(2, n + 1)
    us = shape_of[children]
    vs = shape_of[tree.parent_of[children]]
    return _view_from_edges(n, us, vs, arrival_of)


def identity_view(tree: ArrivalTree) -> ShapeView:
    """A :class:`ShapeView` whose labels coincide with arrival labels.

    Used where adjacency algorithms should run on the ground truth itself,
    e.g. computing centrality of a deserialized arrival tree.
    """
    n = tree.n
    children = np.arange(2, n + 1)
    return _view_from_edges(
        n, children, tree.parent_of[children], np.arange(n + 1, dtype=np.int64)
    )


def _view_from_edges(
    n: int,
    us: np.ndarray,
    vs: np.ndarray,
    arrival_of: np.ndarray | None,
) -> ShapeView:
    """Build CSR adjacency (sorted neighbor lists) from n-1 undirected edges."""
    ends_a = np.concatenate([us, vs])
    ends_b = np.concatenate([vs, us])
    order = np.lexsort((ends_b, ends_a))
    ends_a = ends_a[order]
    ends_b = ends_b[order]
    indptr = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(np.bincount(ends_a, minlength=n + 2)[:-1], out=indptr[1:])
    return ShapeView(n, indptr, ends_b, arrival_of)


def _check_connected_recursive_free(view: ShapeView) -> None:
    """Reject serialized shape input that is not a tree (cycle or forest)."""
    n = view.n
    if n == 1:
        return
    seen = np.zeros(n + 1, dtype=bool)
    seen[1] = True
    frontier = [1]
    count = 1
    while frontier:
        nxt = []
        for v in frontier:
            for u in view.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    count += 1
                    nxt.append(int(u))
        frontier = nxt
    if count != n:
        raise ValueError(
            f"edge list is not a connected tree: reached {count} of {n} "
            "vertices from label 1"
        )


def _split_header(text: str) -> tuple[str, list[str]]:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty tree text")
    return lines[0], lines[1:]


def _header_int(header: str, key: str) -> int:
    for tok in header.split():
        if tok.startswith(f"{key}="):
            try:
                value = int(tok[len(key) + 1 :])
            except ValueError as exc:
                raise ValueError(f"bad header field {tok!r}") from exc
            if value < 1:
                raise ValueError(f"header field {key}={value} must be >= 1")
            return value
    raise ValueError(f"header {header!r} lacks required field {key}=")


def _edge_fields(row: str, lineno: int) -> tuple[int, int]:
    parts = row.split()
    if len(parts) != 2:
        raise ValueError(f"line {lineno}: expected two fields, got {row!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ValueError(f"line {lineno}: non-integer field in {row!r}") from exc

"""Finite-depth truncations of rooted trees.

Vertices are numbered breadth-first, so level ``n`` always occupies the
contiguous id range ``tree.levels[n]``.  Every per-vertex field in the
package is a flat numpy array indexed by these ids.
"""

from __future__ import annotations

import warnings
from typing import Optional, Sequence

import numpy as np

from .errors import LevelOutOfRange, MalformedTree

__all__ = [
    "BoundedLevelSizesWarning",
    "TruncatedTree",
    "build_explicit",
    "build_from_level_sizes",
    "build_homogeneous",
    "level_sizes",
    "levels_look_unbounded",
]


class BoundedLevelSizesWarning(UserWarning):
    """Level sizes show no growth; most operator results degenerate."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class TruncatedTree:
    """Rooted tree cut off at depth ``D``.

    Attributes
    ----------
    depth : int
        Truncation depth ``D``.
    parent : ndarray[int]
        Parent id per vertex, ``-1`` for the root (id 0).
    level_of : ndarray[int]
        Distance to the root per vertex.
    levels : tuple[range, ...]
        Vertex ids of each level, ``levels[n]`` for ``n = 0..D``.
    sizes : ndarray[int]
        ``sizes[n]`` is the number of vertices on level ``n``.

    Instances are immutable after construction.
    """

    __slots__ = ("depth", "parent", "level_of", "levels", "sizes")

    def __init__(self, parents: Sequence[Optional[int]], *, warn: bool = True):
        parents = list(parents)
        if not parents:
            raise MalformedTree("a tree needs at least the root")
        if parents[0] is not None:
            raise MalformedTree("vertex 0 must be the root (parent null)")

        n = len(parents)
        parent = np.empty(n, dtype=np.int64)
        level_of = np.empty(n, dtype=np.int64)
        parent[0] = -1
        level_of[0] = 0
        for v in range(1, n):
            p = parents[v]
            if p is None:
                raise MalformedTree(f"vertex {v} is a second root")
            if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
                raise MalformedTree(f"parent of vertex {v} is not an integer id: {p!r}")
            p = int(p)
            if not 0 <= p < v:
                raise MalformedTree(
                    f"vertex {v} references parent {p}; parents must be earlier ids")
            parent[v] = p
            level_of[v] = level_of[p] + 1
            if level_of[v] < level_of[v - 1]:
                raise MalformedTree(
                    f"vertex {v} at level {level_of[v]} follows a level-{level_of[v - 1]} "
                    "vertex; ids must be in breadth-first order")

        depth = int(level_of[-1])
        sizes = np.bincount(level_of, minlength=depth + 1)
        starts = np.concatenate(([0], np.cumsum(sizes)))
        self.depth = depth
        self.parent = _frozen(parent)
        self.level_of = _frozen(level_of)
        self.sizes = _frozen(sizes.astype(np.int64))
        self.levels = tuple(range(int(starts[k]), int(starts[k + 1])) for k in range(depth + 1))

        if warn and not levels_look_unbounded(self):
            warnings.warn(
                f"level sizes {self.sizes.tolist()} show no growth; the theory assumes "
                "unbounded level sizes", BoundedLevelSizesWarning, stacklevel=3)

    @property
    def num_vertices(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return 0

    def level(self, n: int) -> range:
        if not 0 <= n <= self.depth:
            raise LevelOutOfRange(f"level {n} outside 0..{self.depth}")
        return self.levels[n]

    def level_slice(self, n: int) -> slice:
        r = self.level(n)
        return slice(r.start, r.stop)

    def parents_list(self) -> list:
        return [None] + [int(p) for p in self.parent[1:]]

    def __len__(self) -> int:
        return self.num_vertices

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedTree):
            return NotImplemented
        return np.array_equal(self.parent, other.parent)

    def __hash__(self) -> int:
        return hash(self.parent.tobytes())

    def __repr__(self) -> str:
        return f"TruncatedTree(depth={self.depth}, sizes={self.sizes.tolist()})"


def levels_look_unbounded(tree: TruncatedTree) -> bool:
    """True when the deepest level is strictly the largest one seen.

    A finite size list is always bounded; this is the best finite evidence
    that the sizes keep growing.
    """
    if tree.depth == 0:
        return False
    return int(tree.sizes[-1]) > int(tree.sizes[:-1].max())


def build_homogeneous(arity: int, depth: int) -> TruncatedTree:
    """Every vertex above depth ``depth`` has ``arity`` children."""
    if arity < 1:
        raise MalformedTree(f"arity must be >= 1, got {arity}")
    if depth < 0:
        raise MalformedTree(f"depth must be >= 0, got {depth}")
    parents: list = [None]
    start, width = 0, 1
    for _ in range(depth):
        parents.extend(start + j // arity for j in range(width * arity))
        start, width = start + width, width * arity
    return TruncatedTree(parents)


def build_explicit(parents: Sequence[Optional[int]]) -> TruncatedTree:
    return TruncatedTree(parents)


def build_from_level_sizes(sizes: Sequence[int]) -> TruncatedTree:
    """Tree with prescribed level sizes.

    Children on level ``n`` are attached round-robin to the vertices of
    level ``n - 1``; only the sizes matter to every quantity computed here.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or sizes[0] != 1:
        raise MalformedTree(f"level sizes must start with a single root, got {sizes}")
    if any(s < 1 for s in sizes):
        raise MalformedTree(f"every level needs at least one vertex, got {sizes}")
    parents: list = [None]
    prev_start = 0
    for n in range(1, len(sizes)):
        prev = sizes[n - 1]
        parents.extend(prev_start + (j % prev) for j in range(sizes[n]))
        prev_start += prev
    return TruncatedTree(parents)


def level_sizes(tree: TruncatedTree) -> list:
    return tree.sizes.tolist()

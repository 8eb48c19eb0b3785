"""Weights, tree functions and the weighted Hardy norms on a truncation.

For a weight ``sigma`` and exponent ``0 < p < inf`` the level mean is

    M(n, f) = ((1/c_n) * sum_{|x|=n} sigma(x)^p |f(x)|^p)^(1/p)

and the norm is its maximum over the levels of the truncation.  For
``p = inf`` the norm is ``max_x sigma(x)|f(x)|``.  Every maximum over the
truncation is a lower approximation of the supremum over the infinite tree.

Values are real; every quantity depends on moduli only.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import LevelOutOfRange, NoWitness, ValidationError, WrongExponents
from .tree import TruncatedTree

INF = math.inf
DEFAULT_TOL = 1e-9


def check_exponent(p) -> float:
    """Validate an exponent: a real ``p > 0`` or ``inf``."""
    if isinstance(p, str) and p.strip().lower() in ("inf", "infinity"):
        return INF
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise WrongExponents(f"exponent must be a positive number or 'inf', got {p!r}") from None
    if math.isnan(p) or p <= 0:
        raise WrongExponents(f"exponent must be > 0, got {p}")
    return p


def is_finite_exponent(p: float) -> bool:
    return not math.isinf(p)


# --------------------------------------------------------------------------
# value types


class _VertexField:
    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError("per-vertex values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("per-vertex values must be finite")
        arr.setflags(write=False)
        self.values = arr

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, x):
        return self.values[x]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.values.tolist()!r})"

    def check_tree(self, tree: TruncatedTree, name: str = "field") -> None:
        if len(self.values) != tree.num_vertices:
            raise ValidationError(
                f"{name} has {len(self.values)} values but the tree has "
                f"{tree.num_vertices} vertices")


class Weight(_VertexField):
    """Strictly positive per-vertex weight."""

    __slots__ = ()

    def __init__(self, values):
        super().__init__(values)
        if not np.all(self.values > 0):
            raise ValidationError("weights must be strictly positive")

    @classmethod
    def one(cls, tree: TruncatedTree) -> "Weight":
        return cls(np.ones(tree.num_vertices))

    @classmethod
    def by_level(cls, tree: TruncatedTree, fn: Callable[[int], float]) -> "Weight":
        table = np.array([fn(n) for n in range(tree.depth + 1)], dtype=np.float64)
        return cls(table[tree.level_of])

    @classmethod
    def poly(cls, tree: TruncatedTree, exponent: float) -> "Weight":
        """``(1 + |x|) ** exponent``"""
        return cls.by_level(tree, lambda n: (1.0 + n) ** exponent)

    @classmethod
    def exp(cls, tree: TruncatedTree, base: float) -> "Weight":
        """``base ** |x|``"""
        if base <= 0:
            raise ValidationError(f"exponential weight needs base > 0, got {base}")
        return cls.by_level(tree, lambda n: float(base) ** n)

    def is_constant_one(self) -> bool:
        return bool(np.all(self.values == 1.0))


class TreeFunction(_VertexField):
    """Real-valued function on the vertices of a truncation."""

    __slots__ = ()

    @classmethod
    def zeros(cls, tree: TruncatedTree) -> "TreeFunction":
        return cls(np.zeros(tree.num_vertices))

    @classmethod
    def constant(cls, tree: TruncatedTree, c: float = 1.0) -> "TreeFunction":
        return cls(np.full(tree.num_vertices, float(c)))

    @classmethod
    def indicator(cls, tree: TruncatedTree, entries) -> "TreeFunction":
        """Sparse function from ``{vertex: value}`` or ``[(vertex, value), ...]``."""
        vals = np.zeros(tree.num_vertices)
        items = entries.items() if isinstance(entries, dict) else entries
        for v, val in items:
            v = int(v)
            if not 0 <= v < tree.num_vertices:
                raise ValidationError(f"vertex {v} is outside the truncation")
            vals[v] = float(val)
        return cls(vals)

    @classmethod
    def by_level(cls, tree: TruncatedTree, fn: Callable[[int], float]) -> "TreeFunction":
        table = np.array([fn(n) for n in range(tree.depth + 1)], dtype=np.float64)
        return cls(table[tree.level_of])

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def __add__(self, other):
        if not isinstance(other, TreeFunction):
            return NotImplemented
        return TreeFunction(self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, TreeFunction):
            return NotImplemented
        return TreeFunction(self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, (int, float, np.floating, np.integer)):
            return TreeFunction(self.values * float(c))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return TreeFunction(-self.values)

    def extended(self, tree: TruncatedTree) -> "TreeFunction":
        """Extend by zero to a deeper truncation with the same top levels."""
        if tree.num_vertices < len(self.values):
            raise ValidationError("target tree is smaller than the function's support")
        vals = np.zeros(tree.num_vertices)
        vals[: len(self.values)] = self.values
        return TreeFunction(vals)


def _values(obj) -> np.ndarray:
    return obj.values if isinstance(obj, _VertexField) else np.asarray(obj, dtype=np.float64)


# --------------------------------------------------------------------------
# norms


def _power_mean(a: np.ndarray, p: float, count: int) -> float:
    """``((1/count) * sum a_i^p)^(1/p)`` for ``a >= 0``, overflow-safe.

    The largest entry is factored out so nothing above 1 is raised to the
    power ``p``; the remaining sum is compensated.
    """
    if a.size == 0:
        return 0.0
    m = float(a.max())
    if m == 0.0:
        return 0.0
    s = math.fsum(((a / m) ** p).tolist())
    return m * (s / count) ** (1.0 / p)


def level_mean(tree: TruncatedTree, sigma: Weight, p: float, n: int, f: TreeFunction) -> float:
    """Weighted ``p``-power mean of ``f`` over level ``n``."""
    p = check_exponent(p)
    if math.isinf(p):
        raise WrongExponents("level means are defined for finite exponents only")
    if not 0 <= n <= tree.depth:
        raise LevelOutOfRange(f"level {n} outside 0..{tree.depth}")
    sl = tree.level_slice(n)
    a = _values(sigma)[sl] * np.abs(_values(f)[sl])
    return _power_mean(a, p, int(tree.sizes[n]))


def level_means(tree: TruncatedTree, sigma: Weight, p: float, f: TreeFunction) -> list:
    """Per-level contributions to the norm.

    For finite ``p`` these are the level means; for ``p = inf`` they are the
    per-level maxima of ``sigma|f|``.
    """
    p = check_exponent(p)
    if math.isinf(p):
        a = _values(sigma) * np.abs(_values(f))
        return [float(a[tree.level_slice(n)].max()) for n in range(tree.depth + 1)]
    return [level_mean(tree, sigma, p, n, f) for n in range(tree.depth + 1)]


def norm(tree: TruncatedTree, sigma: Weight, p: float, f: TreeFunction) -> float:
    """Norm of ``f`` in the weighted space with exponent ``p`` (``inf`` allowed)."""
    p = check_exponent(p)
    if math.isinf(p):
        return float(np.max(_values(sigma) * np.abs(_values(f))))
    return max(level_means(tree, sigma, p, f))


def batch_norm(tree: TruncatedTree, sigma, p: float, F: np.ndarray) -> np.ndarray:
    """Norms of the rows of ``F`` (shape ``(R, V)``), vectorised.

    Uses numpy summation instead of compensated sums; meant for search
    loops, not for reported values.
    """
    p = check_exponent(p)
    A = np.abs(np.atleast_2d(F)) * _values(sigma)[None, :]
    if math.isinf(p):
        return A.max(axis=1)
    starts = np.array([r.start for r in tree.levels])
    peak = np.maximum.reduceat(A, starts, axis=1)
    scale = np.where(peak > 0, peak, 1.0)
    ratio = A / np.repeat(scale, tree.sizes, axis=1)
    sums = np.add.reduceat(ratio ** p, starts, axis=1)
    means = peak * (sums / tree.sizes[None, :]) ** (1.0 / p)
    return means.max(axis=1)


def evaluate(f: TreeFunction, x: int) -> float:
    return float(_values(f)[x])


# --------------------------------------------------------------------------
# growth estimate and extremal indicators


def growth_bound(tree: TruncatedTree, sigma: Weight, p: float, x: int) -> float:
    """Best constant ``K`` with ``|f(x)| <= K * ||f||`` for every ``f``."""
    p = check_exponent(p)
    c = int(tree.sizes[tree.level_of[x]])
    root = 1.0 if math.isinf(p) else c ** (1.0 / p)
    return root / float(_values(sigma)[x])


def indicator_unit(tree: TruncatedTree, sigma: Weight, p: float, y: int) -> TreeFunction:
    """Unit-norm multiple of the indicator of ``y`` that attains the growth bound."""
    vals = np.zeros(tree.num_vertices)
    vals[y] = growth_bound(tree, sigma, p, y)
    return TreeFunction(vals)


# --------------------------------------------------------------------------
# inclusions between spaces


def inclusion_constant(sigma1: Weight, sigma2: Weight) -> float:
    """``max sigma2/sigma1``: norm of the identity map between the two spaces."""
    return float(np.max(_values(sigma2) / _values(sigma1)))


def _pick_one_per_level(tree: TruncatedTree, sigma: Weight,
                        accept: Callable[[float, float], bool],
                        thresholds: Iterable[float]) -> list:
    # Greedy: for each threshold take the shallowest unused level holding an
    # acceptable vertex, smallest id on that level.
    s = _values(sigma)
    used: set = set()
    picks = []
    for t in thresholds:
        found = None
        for n in range(tree.depth + 1):
            if n in used:
                continue
            for v in tree.levels[n]:
                if accept(s[v], t):
                    found = (v, t)
                    break
            if found:
                used.add(n)
                break
        if found is None:
            break
        picks.append(found)
    return picks


def _default_thresholds(tree: TruncatedTree) -> range:
    return range(1, tree.depth + 2)


def witness_unbounded_sigma(tree: TruncatedTree, sigma: Weight, p: float,
                            thresholds: Optional[Sequence[float]] = None) -> TreeFunction:
    """Function of unweighted norm 1 whose weighted norm is ``max sigma(v_n)``.

    ``v_n`` is a vertex with ``sigma(v_n) > thresholds[n]`` (default
    thresholds 1, 2, 3, ...), at most one per level.  A large ratio of the
    two norms is finite-depth evidence that the unweighted space is not
    contained in the weighted one.

    Raises ``NoWitness`` unless at least two thresholds are exceeded.
    """
    p = check_exponent(p)
    if math.isinf(p):
        raise WrongExponents("witness construction needs a finite exponent")
    ts = _default_thresholds(tree) if thresholds is None else thresholds
    picks = _pick_one_per_level(tree, sigma, lambda s, t: s > t, ts)
    if len(picks) < 2:
        raise NoWitness("the weight does not exceed two successive thresholds at this depth")
    vals = np.zeros(tree.num_vertices)
    for v, _ in picks:
        vals[v] = tree.sizes[tree.level_of[v]] ** (1.0 / p)
    return TreeFunction(vals)


def witness_sigma_not_bounded_away(tree: TruncatedTree, sigma: Weight, p: float) -> TreeFunction:
    """Function with weighted norm ``<= 1`` and unweighted level mean ``n`` at ``v_n``.

    ``v_n`` satisfies ``sigma(v_n) < 1/n``, one per level; the growing
    unweighted level means are finite-depth evidence that the weighted
    space is not contained in the unweighted one.

    Raises ``NoWitness`` unless a vertex with ``sigma < 1/2`` exists.
    """
    p = check_exponent(p)
    if math.isinf(p):
        raise WrongExponents("witness construction needs a finite exponent")
    picks = _pick_one_per_level(tree, sigma, lambda s, t: s < 1.0 / t,
                                _default_thresholds(tree))
    if len(picks) < 2:
        raise NoWitness("the weight does not drop below 1/n for two successive n at this depth")
    vals = np.zeros(tree.num_vertices)
    for v, t in picks:
        vals[v] = t * tree.sizes[tree.level_of[v]] ** (1.0 / p)
    return TreeFunction(vals)

"""Self-maps, operator instances and preimage bookkeeping.

``W(f) = psi * (f o phi)``.  With ``psi = 1`` this is the composition
operator, with ``phi = id`` the multiplication operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import ValidationError
from .spaces import TreeFunction, Weight, check_exponent
from .tree import TruncatedTree


class SelfMap:
    """Arbitrary map from the vertices of a truncation to itself.

    No adjacency is respected; constant maps are allowed.
    """

    __slots__ = ("target",)

    def __init__(self, target: Sequence[int], tree: Optional[TruncatedTree] = None):
        arr = np.array(target, dtype=np.int64)
        if arr.ndim != 1:
            raise ValidationError("self-map targets must be a flat list")
        size = len(arr) if tree is None else tree.num_vertices
        if tree is not None and len(arr) != size:
            raise ValidationError(f"self-map has {len(arr)} targets for {size} vertices")
        if len(arr) and (arr.min() < 0 or arr.max() >= size):
            raise ValidationError("self-map target outside the truncation")
        arr.setflags(write=False)
        self.target = arr

    @classmethod
    def identity(cls, tree: TruncatedTree) -> "SelfMap":
        return cls(np.arange(tree.num_vertices), tree)

    @classmethod
    def constant(cls, tree: TruncatedTree, v: int = 0) -> "SelfMap":
        return cls(np.full(tree.num_vertices, int(v)), tree)

    @classmethod
    def level_collapse(cls, tree: TruncatedTree,
                       targets: Optional[Sequence[int]] = None) -> "SelfMap":
        """Send every vertex on level ``n`` to ``targets[n]``.

        Default targets are the smallest id on each level.
        """
        if targets is None:
            targets = [r.start for r in tree.levels]
        if len(targets) != tree.depth + 1:
            raise ValidationError(f"need one target per level ({tree.depth + 1}), got {len(targets)}")
        table = np.array([int(t) for t in targets], dtype=np.int64)
        return cls(table[tree.level_of], tree)

    @classmethod
    def parity_collapse(cls, tree: TruncatedTree, even_targets: Optional[Sequence[int]] = None,
                        odd_target: int = 0) -> "SelfMap":
        """Even levels collapse to one vertex each, odd levels to ``odd_target``."""
        if even_targets is None:
            even_targets = [r.start for r in tree.levels]
        if len(even_targets) != tree.depth + 1:
            raise ValidationError("even_targets needs one entry per level")
        table = np.array([int(even_targets[n]) if n % 2 == 0 else int(odd_target)
                          for n in range(tree.depth + 1)], dtype=np.int64)
        return cls(table[tree.level_of], tree)

    def __len__(self) -> int:
        return len(self.target)

    def __getitem__(self, x):
        return self.target[x]

    def __call__(self, x: int) -> int:
        return int(self.target[x])

    def __eq__(self, other):
        if not isinstance(other, SelfMap):
            return NotImplemented
        return np.array_equal(self.target, other.target)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SelfMap({self.target.tolist()!r})"

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.target, np.arange(len(self.target))))

    def is_onto(self) -> bool:
        hit = np.zeros(len(self.target), dtype=bool)
        hit[self.target] = True
        return bool(hit.all())


@dataclass(frozen=True, eq=True)
class OperatorInstance:
    """One operator ``W: T(sigma1, p) -> T(sigma2, q)`` on a truncation."""

    tree: TruncatedTree
    sigma1: Weight
    sigma2: Weight
    p: float
    q: float
    psi: TreeFunction
    phi: SelfMap

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        object.__setattr__(self, "q", check_exponent(self.q))
        self.sigma1.check_tree(self.tree, "sigma1")
        self.sigma2.check_tree(self.tree, "sigma2")
        self.psi.check_tree(self.tree, "psi")
        if len(self.phi) != self.tree.num_vertices:
            raise ValidationError("phi is defined on a different truncation")

    @classmethod
    def build(cls, tree: TruncatedTree, *, p=2.0, q=None, sigma1=None, sigma2=None,
              psi=None, phi=None) -> "OperatorInstance":
        """Convenience constructor; omitted parts default to weight 1, psi 1, identity."""
        return cls(
            tree=tree,
            sigma1=sigma1 if sigma1 is not None else Weight.one(tree),
            sigma2=sigma2 if sigma2 is not None else Weight.one(tree),
            p=p,
            q=p if q is None else q,
            psi=psi if psi is not None else TreeFunction.constant(tree, 1.0),
            phi=phi if phi is not None else SelfMap.identity(tree),
        )

    def with_(self, **changes) -> "OperatorInstance":
        from dataclasses import replace
        return replace(self, **changes)

    @property
    def same_exponent(self) -> bool:
        return self.p == self.q

    def is_composition(self) -> bool:
        """``psi = 1`` and both weights ``1``: the plain composition operator on T_p."""
        return (bool(np.all(self.psi.values == 1.0)) and self.sigma1.is_constant_one()
                and self.sigma2.is_constant_one())

    def is_multiplication(self) -> bool:
        return self.phi.is_identity()


def apply(inst: OperatorInstance, f: TreeFunction) -> TreeFunction:
    """``x -> psi(x) * f(phi(x))``"""
    f.check_tree(inst.tree, "f")
    return TreeFunction(inst.psi.values * f.values[inst.phi.target])


def weighted_symbol(inst: OperatorInstance) -> TreeFunction:
    """``psi / (sigma1 o phi)``"""
    return TreeFunction(inst.psi.values / inst.sigma1.values[inst.phi.target])


def symbol_ratio(inst: OperatorInstance) -> np.ndarray:
    """``sigma2(x) |psi(x)| / sigma1(phi(x))`` per vertex."""
    return inst.sigma2.values * np.abs(inst.psi.values) / inst.sigma1.values[inst.phi.target]


def preimage_counts(phi: SelfMap, tree: TruncatedTree, n: int) -> Dict[int, int]:
    """How many level-``n`` vertices land on each target (zero counts omitted)."""
    targets = phi.target[tree.level_slice(n)]
    ids, counts = np.unique(targets, return_counts=True)
    return {int(w): int(c) for w, c in zip(ids, counts)}


def max_preimage(phi: SelfMap, tree: TruncatedTree, m: int, n: int) -> Tuple[int, Optional[int]]:
    """Largest number of level-``n`` vertices sent to a single level-``m`` vertex.

    Returns ``(count, witness)``; the witness is the smallest id attaining
    the count, or ``None`` when nothing on level ``n`` maps into level ``m``.
    """
    tree.level(m)
    counts = np.bincount(phi.target[tree.level_slice(n)], minlength=tree.num_vertices)
    on_level = counts[tree.level_slice(m)]
    best = int(on_level.max())
    if best == 0:
        return 0, None
    return best, tree.levels[m].start + int(np.argmax(on_level))


def image_levels(phi: SelfMap, tree: TruncatedTree, n: int) -> Set[int]:
    """Levels hit by the images of level ``n``."""
    return {int(k) for k in np.unique(tree.level_of[phi.target[tree.level_slice(n)]])}


def is_finite(p: float) -> bool:
    return not math.isinf(p)

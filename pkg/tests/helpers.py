"""Random instance generators shared by the test modules."""

import math

import numpy as np

from tree_hardy import (OperatorInstance, SelfMap, TreeFunction, Weight, build_from_level_sizes,
                        build_homogeneous)

# criterion number -> (passed, detail); filled by test_acceptance, printed by conftest
ACCEPTANCE_RESULTS: dict = {}

# random instances, shared by the oracle and acceptance tests


def random_tree(rng, max_depth=5):
    if rng.random() < 0.5:
        return build_homogeneous(int(rng.integers(2, 4)), int(rng.integers(1, min(max_depth, 4) + 1)))
    depth = int(rng.integers(1, max_depth + 1))
    sizes = [1]
    for _ in range(depth):
        sizes.append(sizes[-1] + int(rng.integers(0, 4)))
    return build_from_level_sizes(sizes)


def random_weight(rng, tree, spread=1.0):
    return Weight(np.exp(rng.uniform(-spread, spread, tree.num_vertices)))


def random_function(rng, tree, zero_prob=0.3):
    vals = rng.normal(size=tree.num_vertices)
    vals[rng.random(tree.num_vertices) < zero_prob] = 0.0
    return TreeFunction(vals)


def random_selfmap(rng, tree, kind=None):
    kind = kind or rng.choice(["arbitrary", "level", "identity", "constant"])
    V = tree.num_vertices
    if kind == "identity":
        return SelfMap.identity(tree)
    if kind == "constant":
        return SelfMap.constant(tree, int(rng.integers(V)))
    if kind == "level":
        # every level lands inside one target level
        target_level = rng.integers(0, tree.depth + 1, size=tree.depth + 1)
        out = np.empty(V, dtype=np.int64)
        for n in range(tree.depth + 1):
            lv = tree.levels[int(target_level[n])]
            sl = tree.level_slice(n)
            out[sl] = rng.integers(lv.start, lv.stop, size=sl.stop - sl.start)
        return SelfMap(out, tree)
    return SelfMap(rng.integers(0, V, size=V), tree)


def random_instance(rng, p, q=None, tree=None, phi_kind=None, psi_zero_prob=0.2):
    tree = tree or random_tree(rng)
    psi = random_function(rng, tree, psi_zero_prob)
    if not np.any(psi.values):
        psi = TreeFunction.constant(tree, 1.0)
    return OperatorInstance(tree=tree, sigma1=random_weight(rng, tree),
                            sigma2=random_weight(rng, tree), p=p, q=p if q is None else q,
                            psi=psi, phi=random_selfmap(rng, tree, phi_kind))


def rel_close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def leq(a, b, tol):
    return a <= b + tol * max(1.0, abs(b))


INF = math.inf

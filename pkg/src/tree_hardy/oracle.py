"""Brute-force operator norms over the unit ball of a truncation.

Nothing here uses the closed forms in ``criteria``: every value is obtained
by building test functions, applying the operator and measuring the result
with ``spaces.norm``.

``concentration``
    Exact.  Write ``t_w = (sigma1(w)|f(w)|)^p``; the unit ball for finite
    ``p`` is a product over levels of scaled simplices ``sum t_w <= c_m``.
    The ``q``-th power of a target level mean is ``sum_w a_w t_w^(q/p)``,
    with the coefficients ``a_w`` read off by probing the operator with the
    unit indicator of ``w``.  Per source level this is maximised in closed
    form (all mass on the argmax when ``q >= p``, the power-mean optimum
    otherwise), and the operator norm is the best target level.  From a
    sup-space the extremal is ``1/sigma1``; into a sup-space it is a single
    unit indicator.

``random_ascent``
    Random restarts with coordinate ascent on ``sigma1|f|`` and per-level
    renormalisation.  A lower bound, kept as an independent sanity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .operators import OperatorInstance, apply
from .spaces import TreeFunction, batch_norm, indicator_unit, level_mean, norm

CONCENTRATION = "concentration"
RANDOM_ASCENT = "random_ascent"
STRATEGIES = (CONCENTRATION, RANDOM_ASCENT)

DEFAULT_RESTARTS = 1000
DEFAULT_SWEEPS = 50


@dataclass(frozen=True)
class OracleResult:
    value: float
    extremal: TreeFunction
    strategy: str
    iterations: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "extremal": self.extremal.values.tolist(),
            "strategy": self.strategy,
            "iterations": self.iterations,
        }


def oracle_opnorm(inst: OperatorInstance, strategy: str = CONCENTRATION,
                  budget: int | None = None, seed: int | None = None,
                  sweeps: int = DEFAULT_SWEEPS) -> OracleResult:
    """Operator norm of ``inst`` by search over the unit ball.

    ``budget`` is the number of restarts for ``random_ascent`` (default
    1000) and is ignored by ``concentration``.  ``random_ascent`` needs an
    explicit ``seed``.
    """
    if strategy == CONCENTRATION:
        return _concentration(inst)
    if strategy == RANDOM_ASCENT:
        if seed is None:
            raise ValidationError("random_ascent needs an explicit seed")
        restarts = DEFAULT_RESTARTS if budget is None else int(budget)
        if restarts < 1:
            raise ValidationError("budget must be >= 1")
        return _random_ascent(inst, restarts, int(sweeps), int(seed))
    raise ValidationError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")


def _measure(inst: OperatorInstance, f: TreeFunction) -> float:
    return norm(inst.tree, inst.sigma2, inst.q, apply(inst, f))


def _concentration(inst: OperatorInstance) -> OracleResult:
    tree = inst.tree
    if math.isinf(inst.p):
        f = TreeFunction(1.0 / inst.sigma1.values)
        return OracleResult(_measure(inst, f), f, CONCENTRATION, 1)

    probes = [indicator_unit(tree, inst.sigma1, inst.p, w) for w in range(tree.num_vertices)]

    if math.isinf(inst.q):
        values = [_measure(inst, e) for e in probes]
        best = int(np.argmax(values))
        return OracleResult(values[best], probes[best], CONCENTRATION, len(probes))

    p, q = inst.p, inst.q
    r = q / p
    images = [apply(inst, e) for e in probes]
    c_src = tree.sizes[tree.level_of].astype(np.float64)
    # coef[n, w]: q-th power of level-n mean of W(chi_w) per unit of t_w^(q/p)
    coef = np.array([
        [level_mean(tree, inst.sigma2, q, n, g) ** q for g in images]
        for n in range(tree.depth + 1)
    ]) / c_src[None, :] ** r

    best_val, best_t = -1.0, None
    for n in range(tree.depth + 1):
        t = np.zeros(tree.num_vertices)
        total = 0.0
        for m in range(tree.depth + 1):
            sl = tree.level_slice(m)
            a = coef[n, sl]
            c_m = float(tree.sizes[m])
            if a.max() <= 0:
                continue
            if r >= 1:
                k = int(np.argmax(a))
                t[sl.start + k] = c_m
                total += a[k] * c_m ** r
            else:
                weights = a ** (1.0 / (1.0 - r))
                t[sl] = c_m * weights / weights.sum()
                total += c_m ** r * weights.sum() ** (1.0 - r)
        if total > best_val:
            best_val, best_t = total, t

    f = TreeFunction(best_t ** (1.0 / p) / inst.sigma1.values)
    return OracleResult(_measure(inst, f), f, CONCENTRATION, len(probes))


def _renormalise(G: np.ndarray, tree, p: float) -> np.ndarray:
    # scale each level so its p-power mean is exactly 1 (or clip to 1 for p=inf)
    if math.isinf(p):
        return np.minimum(G, 1.0)
    out = G.copy()
    for n in range(tree.depth + 1):
        sl = tree.level_slice(n)
        block = out[:, sl]
        peak = block.max(axis=1, keepdims=True)
        safe = np.where(peak > 0, peak, 1.0)
        mean = safe * (((block / safe) ** p).mean(axis=1, keepdims=True)) ** (1.0 / p)
        out[:, sl] = np.where(peak > 0, block / np.where(mean > 0, mean, 1.0), 1.0)
    return out


def _random_ascent(inst: OperatorInstance, restarts: int, sweeps: int, seed: int) -> OracleResult:
    tree = inst.tree
    rng = np.random.default_rng(seed)
    s1 = inst.sigma1.values
    phi = inst.phi.target
    abspsi = np.abs(inst.psi.values)

    def objective(G):
        return batch_norm(tree, inst.sigma2, inst.q, abspsi[None, :] * (G / s1[None, :])[:, phi])

    G = _renormalise(rng.random((restarts, tree.num_vertices)), tree, inst.p)
    score = objective(G)
    factors = (0.0, 0.5, 2.0, 4.0)
    evaluations = restarts
    for _ in range(sweeps):
        improved = False
        for w in rng.permutation(tree.num_vertices):
            for fac in factors:
                trial = G.copy()
                trial[:, w] = trial[:, w] * fac if fac else 0.0
                trial = _renormalise(trial, tree, inst.p)
                s = objective(trial)
                evaluations += restarts
                better = s > score
                if better.any():
                    improved = True
                    G[better] = trial[better]
                    score[better] = s[better]
        if not improved:
            break

    best = int(np.argmax(score))
    f = TreeFunction(G[best] / s1)
    return OracleResult(_measure(inst, f), f, RANDOM_ASCENT, evaluations)

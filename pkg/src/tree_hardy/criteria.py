"""Closed-form operator norms, bounds, compactness tails and isometry checks.

Throughout, ``r(x) = sigma2(x)|psi(x)| / sigma1(phi(x))``.  All suprema run
over the truncation, so every value is the depth-``D`` approximation of the
corresponding infinite-tree quantity.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .errors import NoSuitableLevel, NotApplicable, UnknownCriterion, WrongExponents
from .operators import OperatorInstance, apply, symbol_ratio, weighted_symbol
from .spaces import DEFAULT_TOL, INF, TreeFunction, norm

EXACT = "exact"
LOWER = "lower_bound"
UPPER = "upper_bound"

DERIVED_NOTE = "DERIVED-AT-TRUNCATION"


@dataclass(frozen=True)
class NormReport:
    value: float
    kind: str
    formula_id: str
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(p: float) -> str:
    return "inf" if math.isinf(p) else repr(p)


def _require(inst: OperatorInstance, p: str, q: str) -> None:
    # 'inf' / 'finite' / 'same-finite' / 'any'
    def ok(val, want):
        return want == "any" or (want == "inf") == math.isinf(val)

    if not (ok(inst.p, p) and ok(inst.q, q)):
        raise WrongExponents(
            f"formula needs p={p}, q={q}; instance has p={_fmt(inst.p)}, q={_fmt(inst.q)}")


def _require_pp(inst: OperatorInstance) -> None:
    if math.isinf(inst.p) or inst.p != inst.q:
        raise WrongExponents(
            f"formula needs equal finite exponents; instance has p={_fmt(inst.p)}, q={_fmt(inst.q)}")


# --------------------------------------------------------------------------
# operator norms


def opnorm_inf_to_p(inst: OperatorInstance) -> NormReport:
    """Exact norm from the sup-space: the target norm of ``psi/(sigma1 o phi)``."""
    _require(inst, "inf", "any")
    value = norm(inst.tree, inst.sigma2, inst.q, weighted_symbol(inst))
    return NormReport(value, EXACT, "thm-inf-to-p")


def opnorm_p_to_inf(inst: OperatorInstance) -> NormReport:
    """Exact norm into the sup-space: ``max_x r(x) c_{|phi(x)|}^(1/p)``."""
    _require(inst, "finite", "inf")
    tree = inst.tree
    c_img = tree.sizes[tree.level_of[inst.phi.target]].astype(np.float64)
    value = float(np.max(symbol_ratio(inst) * c_img ** (1.0 / inst.p)))
    return NormReport(value, EXACT, "thm-p-to-inf")


def _pp_scaled(inst: OperatorInstance):
    # r^p is computed as (r/R)^p with R = max r so large p cannot overflow;
    # the final value is R * S^(1/p).
    r = symbol_ratio(inst)
    R = float(r.max())
    a = (r / R) ** inst.p if R > 0 else np.zeros_like(r)
    return R, a


def _finish(R: float, per_level: List[float], p: float) -> float:
    if R == 0:
        return 0.0
    return R * max(per_level) ** (1.0 / p)


def _level_data(inst: OperatorInstance, n: int):
    tree = inst.tree
    sl = tree.level_slice(n)
    xs = np.arange(sl.start, sl.stop)
    w = inst.phi.target[sl]
    return xs, w, tree.level_of[w]


def opnorm_pp_lower(inst: OperatorInstance) -> NormReport:
    """Lower bound from test functions concentrated at the most-hit vertex of each level."""
    _require_pp(inst)
    tree = inst.tree
    R, a = _pp_scaled(inst)
    per_level = []
    for n in range(tree.depth + 1):
        xs, w, wl = _level_data(inst, n)
        terms = []
        for m in np.unique(wl):
            counts = np.bincount(w[wl == m], minlength=tree.num_vertices)[tree.level_slice(int(m))]
            v = tree.levels[int(m)].start + int(np.argmax(counts))
            terms.append(math.fsum(a[xs[w == v]].tolist()) * tree.sizes[m])
        per_level.append(math.fsum(terms) / tree.sizes[n])
    return NormReport(_finish(R, per_level, inst.p), LOWER, "thm-pp-lower")


def opnorm_pp_upper(inst: OperatorInstance) -> NormReport:
    """Upper bound from the growth estimate applied vertex by vertex."""
    _require_pp(inst)
    tree = inst.tree
    R, a = _pp_scaled(inst)
    per_level = []
    for n in range(tree.depth + 1):
        xs, _, wl = _level_data(inst, n)
        per_level.append(math.fsum((a[xs] * tree.sizes[wl]).tolist()) / tree.sizes[n])
    return NormReport(_finish(R, per_level, inst.p), UPPER, "thm-pp-upper")


def opnorm_pp_nmn_bound(inst: OperatorInstance) -> NormReport:
    """Upper bound using the maximal preimage counts ``N_{m,n}``."""
    _require_pp(inst)
    tree = inst.tree
    R, a = _pp_scaled(inst)
    per_level = []
    for n in range(tree.depth + 1):
        xs, w, wl = _level_data(inst, n)
        terms = []
        for m in np.unique(wl):
            sel = wl == m
            n_mn = int(np.bincount(w[sel]).max())
            terms.append(n_mn * tree.sizes[m] * float(a[xs[sel]].max()))
        per_level.append(math.fsum(terms) / tree.sizes[n])
    return NormReport(_finish(R, per_level, inst.p), UPPER, "prop-pp-nmn")


def opnorm_pp_exact(inst: OperatorInstance) -> NormReport:
    """Exact norm between equal finite exponents on the truncation.

    With ``t_w = sigma1(w)^p |f(w)|^p`` the unit ball is the product over
    levels ``m`` of ``{t >= 0, sum_{|w|=m} t_w <= c_m}`` and the ``p``-th
    power of each target level mean is linear in ``t``.  The maximum over
    the ball therefore puts all of level ``m``'s mass on the vertex ``w``
    with the largest ``sum_{phi(x)=w, |x|=n} r(x)^p``:

        ||W||^p = max_n (1/c_n) sum_m c_m max_{|w|=m} sum_{x in D_n, phi(x)=w} r(x)^p
    """
    _require_pp(inst)
    tree = inst.tree
    R, a = _pp_scaled(inst)
    per_level = []
    for n in range(tree.depth + 1):
        xs, w, wl = _level_data(inst, n)
        load = np.zeros(tree.num_vertices)
        np.add.at(load, w, a[xs])
        terms = [tree.sizes[m] * float(load[tree.level_slice(int(m))].max()) for m in np.unique(wl)]
        per_level.append(math.fsum(terms) / tree.sizes[n])
    return NormReport(_finish(R, per_level, inst.p), EXACT, "derived-pp-exact", DERIVED_NOTE)


def opnorm_composition_pp(inst: OperatorInstance) -> NormReport:
    """``||C_phi||^p = max_n (1/c_n) sum_m N_{m,n} c_m`` on the unweighted space."""
    _require_pp(inst)
    if not inst.is_composition():
        raise NotApplicable("composition formula needs psi = 1 and both weights = 1")
    tree = inst.tree
    per_level = []
    for n in range(tree.depth + 1):
        _, w, wl = _level_data(inst, n)
        counts = np.bincount(w, minlength=tree.num_vertices)
        terms = [int(counts[tree.level_slice(int(m))].max()) * int(tree.sizes[m]) for m in np.unique(wl)]
        per_level.append(sum(terms) / tree.sizes[n])
    return NormReport(max(per_level) ** (1.0 / inst.p), EXACT, "rem-composition-pp")


def opnorm_mult_pp(inst: OperatorInstance) -> NormReport:
    """``||M_psi|| = max_x sigma2(x)|psi(x)|/sigma1(x)`` for equal exponents."""
    if inst.p != inst.q:
        raise WrongExponents("multiplication formula needs equal exponents")
    if not inst.is_multiplication():
        raise NotApplicable("multiplication formula needs phi = identity")
    return NormReport(float(symbol_ratio(inst).max()), EXACT, "thm-mult-pp")


def applicable_reports(inst: OperatorInstance) -> List[NormReport]:
    """Every formula that applies to the instance's exponents and shape."""
    p, q = inst.p, inst.q
    if math.isinf(p):
        reports = [opnorm_inf_to_p(inst)]
        if math.isinf(q) and inst.is_multiplication():
            reports.append(opnorm_mult_pp(inst))
        return reports
    if math.isinf(q):
        return [opnorm_p_to_inf(inst)]
    if p != q:
        raise WrongExponents(
            f"no closed-form norm for finite p != q (p={_fmt(p)}, q={_fmt(q)}); use the oracle")
    reports = [opnorm_pp_lower(inst), opnorm_pp_exact(inst),
               opnorm_pp_upper(inst), opnorm_pp_nmn_bound(inst)]
    if inst.is_composition():
        reports.append(opnorm_composition_pp(inst))
    if inst.is_multiplication():
        reports.append(opnorm_mult_pp(inst))
    return reports


# --------------------------------------------------------------------------
# compactness tails

DECAYING = "DECAYING"
FLAT = "FLAT"
INCONCLUSIVE = "INCONCLUSIVE"

TAIL_CRITERIA = ("inf_inf", "p_inf", "inf_p", "pp_sufficient", "pp_necessary", "mult")


@dataclass(frozen=True)
class TailSequence:
    """``values[m]`` for cutoffs ``m = 0..D``; evidence only, never a compactness verdict."""

    values: List[float]
    criterion_id: str
    verdict: str
    label: str = field(default="tail diagnostic")

    def to_dict(self) -> dict:
        return asdict(self)


def tail_verdict(values, tol: float = DEFAULT_TOL) -> str:
    first, last = values[0], values[-1]
    if last <= tol:
        return DECAYING
    ratio = last / first
    if ratio <= 0.1 and len(values) >= 3 and values[-3] > values[-2] > values[-1]:
        return DECAYING
    if ratio >= 0.9:
        return FLAT
    return INCONCLUSIVE


def _suffix_max(per_key: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(per_key[::-1])[::-1]


def _sup_tail(values: np.ndarray, keys: np.ndarray, depth: int) -> np.ndarray:
    per_key = np.zeros(depth + 1)
    np.maximum.at(per_key, keys, values)
    return _suffix_max(per_key)


def _sum_tail(inst: OperatorInstance, terms: np.ndarray) -> np.ndarray:
    # S[n, k] = sum of terms over x on level n with |phi(x)| = k; the tail at
    # m sums k >= m, so a reversed cumulative sum is nonincreasing in m.
    tree = inst.tree
    D = tree.depth
    S = np.zeros((D + 1, D + 1))
    np.add.at(S, (tree.level_of, tree.level_of[inst.phi.target]), terms)
    rev = np.cumsum(S[:, ::-1], axis=1)[:, ::-1]
    return (rev / tree.sizes[:, None]).max(axis=0)


def tail(inst: OperatorInstance, criterion: str, tol: float = DEFAULT_TOL) -> TailSequence:
    """Tail sequence of a compactness criterion, indexed by the cutoff level ``m``.

    ``inf_inf`` and ``p_inf`` take the maximum over ``{x : |phi(x)| >= m}``;
    ``inf_p``, ``pp_sufficient`` and ``pp_necessary`` take the maximum over
    ``n`` of level-normalised sums over that set (``p``-th powers, no root);
    ``mult`` takes the maximum of ``sigma2|psi|/sigma1`` over ``|x| >= m``.
    """
    if criterion not in TAIL_CRITERIA:
        raise UnknownCriterion(f"unknown tail criterion {criterion!r}; choose from {TAIL_CRITERIA}")
    tree = inst.tree
    D = tree.depth
    img_level = tree.level_of[inst.phi.target]
    r = symbol_ratio(inst)
    if criterion == "inf_inf":
        _require(inst, "inf", "inf")
        vals = _sup_tail(r, img_level, D)
    elif criterion == "p_inf":
        _require(inst, "finite", "inf")
        vals = _sup_tail(r * tree.sizes[img_level] ** (1.0 / inst.p), img_level, D)
    elif criterion == "inf_p":
        _require(inst, "inf", "finite")
        vals = _sum_tail(inst, r ** inst.q)
    elif criterion == "pp_sufficient":
        _require_pp(inst)
        vals = _sum_tail(inst, r ** inst.p * tree.sizes[img_level])
    elif criterion == "pp_necessary":
        _require_pp(inst)
        vals = _sum_tail(inst, r ** inst.p)
    else:
        if inst.p != inst.q:
            raise WrongExponents("multiplication tail needs equal exponents")
        mult = inst.sigma2.values * np.abs(inst.psi.values) / inst.sigma1.values
        vals = _sup_tail(mult, tree.level_of, D)
    values = [float(v) for v in vals]
    return TailSequence(values, criterion, tail_verdict(values, tol))


# --------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class IsometryVerdict:
    isometric: bool
    reason: Optional[str] = None
    vertex: Optional[int] = None
    value: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def _fiber_sups(values: np.ndarray, phi_target: np.ndarray, size: int) -> np.ndarray:
    sups = np.zeros(size)
    np.maximum.at(sups, phi_target, values)
    return sups


def isometry_inf_inf_check(inst: OperatorInstance, tol: float = DEFAULT_TOL) -> IsometryVerdict:
    """Sup-space isometry test: ``phi`` onto and every fibre supremum of ``r`` equal to 1.

    Onto means onto the truncated vertex set.
    """
    _require(inst, "inf", "inf")
    if not inst.phi.is_onto():
        return IsometryVerdict(False, "not onto")
    sups = _fiber_sups(symbol_ratio(inst), inst.phi.target, inst.tree.num_vertices)
    bad = np.nonzero(np.abs(sups - 1.0) > tol)[0]
    if bad.size:
        y = int(bad[0])
        return IsometryVerdict(False, f"fibre supremum at vertex {y} is {sups[y]!r}, not 1",
                               y, float(sups[y]))
    return IsometryVerdict(True)


@dataclass(frozen=True)
class Refutation:
    """Two-point test function separating ``||g||`` from ``||Wg||``.

    ``predicted_image_norm`` is the value ``||Wg||`` must take whenever the
    fibre condition holds; ``image_norm`` is the computed value for this
    instance.
    """

    witness: TreeFunction
    level: int
    vertices: tuple
    domain_norm: float
    image_norm: float
    predicted_image_norm: float
    necessary_condition: bool
    not_isometric: bool

    @property
    def gap(self) -> float:
        return abs(self.domain_norm - self.image_norm)

    def to_dict(self) -> dict:
        return {
            "witness": self.witness.values.tolist(),
            "level": self.level,
            "vertices": list(self.vertices),
            "domain_norm": self.domain_norm,
            "image_norm": self.image_norm,
            "predicted_image_norm": self.predicted_image_norm,
            "necessary_condition": self.necessary_condition,
            "not_isometric": self.not_isometric,
            "gap": self.gap,
        }


def isometry_p_inf_refuter(inst: OperatorInstance, tol: float = DEFAULT_TOL) -> Refutation:
    """Exhibit why ``W: T(sigma1, p) -> T(sigma2, inf)`` is never an isometry.

    On the first level with two vertices ``y1, y2`` take
    ``g = chi_{y1}/(2 sigma1) + chi_{y2}/(3 sigma1)``.  Then
    ``||g||^p = (2^-p + 3^-p)/c_m``, while an operator meeting the fibre
    condition maps it to norm ``(2^-p / c_m)^(1/p)``.
    """
    _require(inst, "finite", "inf")
    tree, p = inst.tree, inst.p
    m = next((k for k in range(tree.depth + 1) if tree.sizes[k] >= 2), None)
    if m is None:
        raise NoSuitableLevel("every level of the truncation has a single vertex")
    y1, y2 = tree.levels[m][0], tree.levels[m][1]
    s1 = inst.sigma1.values
    g = TreeFunction.indicator(tree, {y1: 1.0 / (2.0 * s1[y1]), y2: 1.0 / (3.0 * s1[y2])})

    c_img = tree.sizes[tree.level_of[inst.phi.target]]
    normalised = symbol_ratio(inst) * c_img ** (1.0 / p)
    sups = _fiber_sups(normalised, inst.phi.target, tree.num_vertices)
    condition = inst.phi.is_onto() and bool(np.all(np.abs(sups - 1.0) <= tol))

    domain_norm = norm(tree, inst.sigma1, p, g)
    image_norm = norm(tree, inst.sigma2, INF, apply(inst, g))
    predicted = 0.5 / tree.sizes[m] ** (1.0 / p)
    differs = abs(domain_norm - image_norm) > tol * max(1.0, domain_norm)
    return Refutation(g, m, (y1, y2), domain_norm, image_norm, predicted,
                      condition, (not condition) or differs)

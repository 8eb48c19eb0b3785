"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line (printed in the pytest terminal
summary) before asserting.  Run alone with::

    pytest tests/test_acceptance.py -v
"""

import math

import numpy as np

from helpers import (ACCEPTANCE_RESULTS, INF, leq, random_function, random_instance,
                     random_selfmap, random_tree, random_weight, rel_close)
from tree_hardy import (OperatorInstance, SelfMap, TreeFunction, Weight, apply, build_homogeneous,
                        example, growth_bound, indicator_unit, level_means, norm, oracle_opnorm)
from tree_hardy import criteria

ASCENT = dict(strategy="random_ascent", budget=40, sweeps=20)


def record(k, ok, detail):
    ACCEPTANCE_RESULTS[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_growth_estimate_sharpness():
    rng = np.random.default_rng(1)
    worst_ratio, worst_eq = 0.0, 0.0
    for _ in range(50):
        tree = random_tree(rng, max_depth=5)
        sigma = random_weight(rng, tree, spread=2.0)
        p = float(rng.choice([0.5, 1.0, 1.5, 2.0, 3.0, INF]))
        fs = [random_function(rng, tree) for _ in range(20)]
        norms = [norm(tree, sigma, p, f) for f in fs]
        for x in range(tree.num_vertices):
            K = growth_bound(tree, sigma, p, x)
            for f, nf in zip(fs, norms):
                if nf > 0:
                    worst_ratio = max(worst_ratio, abs(f(x)) / (K * nf))
            e = indicator_unit(tree, sigma, p, x)
            worst_eq = max(worst_eq, abs(norm(tree, sigma, p, e) - 1.0), abs(e(x) - K) / K)
    record(1, worst_ratio <= 1 + 1e-12 and worst_eq <= 1e-12,
           f"max |f(x)|/(K||f||) = {worst_ratio:.15f}, indicator deviation {worst_eq:.1e}")


def _quadrant(k, pairs, formula):
    rng = np.random.default_rng(100 + k)
    worst, ascent_excess = 0.0, -math.inf
    for i in range(20):
        p, q = pairs[i % len(pairs)]
        inst = random_instance(rng, p, q, tree=build_homogeneous(2, 4))
        value = formula(inst).value
        conc = oracle_opnorm(inst).value
        asc = oracle_opnorm(inst, seed=i, **ASCENT).value
        worst = max(worst, abs(conc - value) / max(1.0, value))
        ascent_excess = max(ascent_excess, asc - value - 1e-9 * max(1.0, value))
    return worst, ascent_excess


def test_criterion_02_inf_to_p():
    pairs = [(INF, q) for q in (0.5, 1.0, 2.0, INF)]
    worst, excess = _quadrant(2, pairs, criteria.opnorm_inf_to_p)
    record(2, worst <= 1e-9 and excess <= 0,
           f"max rel |oracle - formula| = {worst:.1e}; random_ascent never above formula: {excess <= 0}")


def test_criterion_03_p_to_inf():
    pairs = [(p, INF) for p in (0.5, 1.0, 2.0)]
    worst, excess = _quadrant(3, pairs, criteria.opnorm_p_to_inf)
    record(3, worst <= 1e-9 and excess <= 0,
           f"max rel |oracle - formula| = {worst:.1e}; random_ascent never above formula: {excess <= 0}")


def test_criterion_04_pp_sandwich_and_exact():
    rng = np.random.default_rng(4)
    order_ok, worst = True, 0.0
    for i in range(50):
        p = float(rng.choice([0.5, 1.0, 1.5, 2.0, 3.0]))
        inst = random_instance(rng, p, phi_kind=["arbitrary", "level", "constant"][i % 3])
        lo = criteria.opnorm_pp_lower(inst).value
        hi = criteria.opnorm_pp_upper(inst).value
        nmn = criteria.opnorm_pp_nmn_bound(inst).value
        exact = criteria.opnorm_pp_exact(inst).value
        brute = oracle_opnorm(inst).value
        order_ok &= leq(lo, brute, 1e-12) and leq(brute, hi, 1e-12) and leq(brute, nmn, 1e-12)
        worst = max(worst, abs(brute - exact) / max(1.0, exact))
    record(4, order_ok and worst <= 1e-9,
           f"lower <= oracle <= upper, nmn on all 50: {order_ok}; "
           f"max rel |oracle - exact| = {worst:.1e}")


def test_criterion_05_multiplication():
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(20):
        p = [0.5, 1.0, 2.0, 3.0, INF][i % 5]
        inst = random_instance(rng, p, phi_kind="identity")
        value = criteria.opnorm_mult_pp(inst).value
        worst = max(worst, abs(oracle_opnorm(inst).value - value) / max(1.0, value))
    record(5, worst <= 1e-9, f"max rel |oracle - formula| = {worst:.1e}")


def test_criterion_06_composition():
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(20):
        tree = random_tree(rng, max_depth=4)
        p = float(rng.choice([0.5, 1.0, 2.0, 3.0]))
        phi = random_selfmap(rng, tree, "level" if i < 10 else "arbitrary")
        inst = OperatorInstance.build(tree, p=p, phi=phi)
        value = criteria.opnorm_composition_pp(inst).value
        worst = max(worst, abs(oracle_opnorm(inst).value - value) / max(1.0, value))
    record(6, worst <= 1e-9, f"max rel |oracle - formula| = {worst:.1e} over 10 level-respecting + 10 arbitrary")


def test_criterion_07_tails():
    D = 10
    tree = build_homogeneous(2, D)
    s1, s2 = Weight.poly(tree, 1.0), Weight.poly(tree, 2.0)
    psi = TreeFunction.by_level(tree, lambda n: (1.0 / (1 + n)) * (1 + n) / (1 + n) ** 2)
    ex4 = OperatorInstance.build(tree, sigma1=s1, sigma2=s2, psi=psi)
    t = criteria.tail(ex4, "mult")
    exact_ok = all(abs(v - 1.0 / (1 + m)) <= 1e-12 for m, v in enumerate(t.values))
    flat = criteria.tail(OperatorInstance.build(build_homogeneous(2, 4)), "mult").verdict

    rng = np.random.default_rng(7)
    monotone = True
    for i in range(50):
        tree_i = random_tree(rng)
        p = float(rng.choice([0.5, 1.0, 2.0]))
        for (a, b), names in (((p, p), ("pp_sufficient", "pp_necessary", "mult")),
                              ((INF, INF), ("inf_inf",)), ((p, INF), ("p_inf",)),
                              ((INF, p), ("inf_p",))):
            inst = random_instance(rng, a, b, tree=tree_i)
            for name in names:
                v = criteria.tail(inst, name).values
                monotone &= all(x >= y for x, y in zip(v, v[1:]))
    ok = exact_ok and t.verdict == criteria.DECAYING and flat == criteria.FLAT and monotone
    record(7, ok, f"mult tail = 1/(1+m) at depth {D}: {exact_ok}, verdict {t.verdict}; "
                  f"identity {flat}; six tails nonincreasing on 50 draws: {monotone}")


def _isometric_instance(rng, tree):
    V = tree.num_vertices
    # an onto self-map of a finite vertex set is a permutation
    target = rng.permutation(V)
    s1, s2 = random_weight(rng, tree), random_weight(rng, tree)
    phi = SelfMap(target, tree)
    signs = rng.choice([-1.0, 1.0], size=V)
    psi = TreeFunction(signs * s1.values[target] / s2.values)
    return OperatorInstance(tree, s1, s2, INF, INF, psi, phi)


def test_criterion_08_isometry():
    rng = np.random.default_rng(8)
    worst, verdicts = 0.0, True
    for i in range(10):
        tree = random_tree(rng, max_depth=4)
        inst = _isometric_instance(rng, tree)
        verdicts &= criteria.isometry_inf_inf_check(inst).isometric
        for _ in range(100):
            f = random_function(rng, tree, zero_prob=0.1)
            a = norm(tree, inst.sigma2, INF, apply(inst, f))
            b = norm(tree, inst.sigma1, INF, f)
            worst = max(worst, abs(a - b) / max(1.0, b))

    gaps = {}
    tree = build_homogeneous(2, 4)
    for p in (1.0, 2.0):
        s1 = Weight.one(tree)
        inst = OperatorInstance.build(
            tree, p=p, q=INF, sigma1=s1,
            psi=TreeFunction(1.0 / tree.sizes[tree.level_of] ** (1.0 / p)))
        ref = criteria.isometry_p_inf_refuter(inst)
        gaps[p] = (ref.domain_norm, ref.image_norm, ref.gap, ref.necessary_condition)
    p1 = gaps[1.0]
    arithmetic = rel_close(p1[0], 5 / 12, 1e-12) and rel_close(p1[1], 1 / 4, 1e-12)
    gaps_ok = all(g[2] >= 1e-3 and g[3] for g in gaps.values())
    ok = worst <= 1e-12 and verdicts and arithmetic and gaps_ok
    record(8, ok, f"sup-norm preserved (max dev {worst:.1e}), checks agree {verdicts}; "
                  f"p=1 refuter {p1[0]:.6f} vs {p1[1]:.6f}, p=2 gap {gaps[2.0][2]:.4f}")


def test_criterion_09_examples():
    failed, growth = [], {}
    bounded_ok = True
    for k in range(1, 7):
        values = []
        for D in (3, 4, 5):
            case = example(k, build_homogeneous(2, D))
            if not case.passed:
                failed.append((k, D, [c.name for c in case.checks if not c.passed]))
            values.append(case.unbounded_report[1])
            bounded_ok &= case.bounded_report[1] <= 1 + 1e-12
        growth[k] = values
    increasing = all(a < b < c for k, (a, b, c) in growth.items() if k in (1, 2, 3, 5, 6))
    ok = not failed and increasing and bounded_ok
    record(9, ok, f"failed checks {failed}; unbounded reports strictly increase: {increasing}; "
                  f"W norms <= 1: {bounded_ok}")


def test_criterion_10_norm_identity_and_monotonicity():
    rng = np.random.default_rng(10)
    identity_dev, mono_ok = 0.0, True
    for _ in range(100):
        tree = random_tree(rng)
        sigma = random_weight(rng, tree, spread=2.0)
        f = random_function(rng, tree)
        p, q = sorted(rng.uniform(0.3, 6.0, size=2))
        one = Weight.one(tree)
        sf = TreeFunction(sigma.values * f.values)
        for e in (p, q, INF):
            a, b = norm(tree, sigma, e, f), norm(tree, one, e, sf)
            identity_dev = max(identity_dev, abs(a - b) / max(1.0, a))
        lp = level_means(tree, sigma, p, f)
        lq = level_means(tree, sigma, q, f)
        linf = level_means(tree, sigma, INF, f)
        mono_ok &= all(leq(a, b, 1e-12) and leq(b, c, 1e-12) for a, b, c in zip(lp, lq, linf))
    record(10, identity_dev <= 1e-12 and mono_ok,
           f"max |norm - unweighted norm of sigma f| = {identity_dev:.1e}; power means monotone: {mono_ok}")

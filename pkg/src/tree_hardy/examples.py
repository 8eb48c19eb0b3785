"""Registry of the six comparison examples.

Each example pits ``W = M_psi C_phi`` against its factors: one factor (or
both) is unbounded while ``W`` stays bounded or compact.  The arbitrary
choice of a vertex ``x_n`` on level ``n`` is pinned to the smallest id on
that level, and the subsequence used by example 3 is ``n_k = k``.

``example(k, tree)`` returns an ``ExampleCase`` whose checks are all
decidable on the truncation.  ``unbounded_report`` is the quantity that
grows without bound as the depth increases; ``bounded_report`` is the norm
of ``W``, which stays at most 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from .criteria import (opnorm_composition_pp, opnorm_mult_pp, opnorm_pp_exact, tail)
from .errors import UnknownExample, WrongExponents
from .io import instance_to_json
from .operators import OperatorInstance, SelfMap, apply
from .oracle import oracle_opnorm
from .spaces import (TreeFunction, Weight, growth_bound, inclusion_constant, level_mean, norm)
from .tree import TruncatedTree

TIGHT = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: object
    rhs: object

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ExampleCase:
    id: int
    title: str
    instance: OperatorInstance
    checks: List[Check]
    unbounded_report: Tuple[str, float]
    bounded_report: Tuple[str, float]
    extra_reports: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "instance": instance_to_json(self.instance),
            "assertions": [c.to_dict() for c in self.checks],
            "unbounded_report": {"name": self.unbounded_report[0], "value": self.unbounded_report[1]},
            "bounded_report": {"name": self.bounded_report[0], "value": self.bounded_report[1]},
            "reports": dict(self.extra_reports),
            "passed": self.passed,
        }


def _close(a: float, b: float, tol: float = TIGHT) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _eq(name: str, lhs: float, rhs: float) -> Check:
    return Check(name, _close(lhs, rhs), float(lhs), float(rhs))


def _all_eq(name: str, lhs, rhs) -> Check:
    lhs = [float(v) for v in lhs]
    rhs = [float(v) for v in rhs]
    ok = len(lhs) == len(rhs) and all(_close(a, b) for a, b in zip(lhs, rhs))
    return Check(name, ok, lhs, rhs)


def _le(name: str, lhs: float, rhs: float) -> Check:
    return Check(name, lhs <= rhs + TIGHT * max(1.0, abs(rhs)), float(lhs), float(rhs))


def _first(tree: TruncatedTree, n: int) -> int:
    return tree.levels[n].start


def _spike_f(tree: TruncatedTree, sigma1: Weight, p: float) -> TreeFunction:
    # f(x_n) = c_n^(1/p) / sigma1(x_n), zero elsewhere; every level mean is 1
    return TreeFunction.indicator(tree, {
        _first(tree, n): tree.sizes[n] ** (1.0 / p) / sigma1.values[_first(tree, n)]
        for n in range(tree.depth + 1)})


def _contraction_checks(inst: OperatorInstance) -> Tuple[List[Check], float]:
    exact = opnorm_pp_exact(inst).value
    brute = oracle_opnorm(inst).value
    return [_le("w_norm_at_most_one", exact, 1.0),
            _le("w_norm_at_most_one_oracle", brute, 1.0)], exact


def _composition_part(inst: OperatorInstance) -> OperatorInstance:
    return inst.with_(psi=TreeFunction.constant(inst.tree, 1.0))


def _multiplication_part(inst: OperatorInstance) -> OperatorInstance:
    return inst.with_(phi=SelfMap.identity(inst.tree))


def _composition_norm(inst: OperatorInstance) -> float:
    c = _composition_part(inst)
    return opnorm_composition_pp(c).value if c.is_composition() else opnorm_pp_exact(c).value


def example_1(tree: TruncatedTree, p: float) -> ExampleCase:
    psi = TreeFunction.indicator(tree, {_first(tree, n): 1.0 for n in range(tree.depth + 1)})
    inst = OperatorInstance.build(tree, p=p, psi=psi, phi=SelfMap.level_collapse(tree))
    f = _spike_f(tree, inst.sigma1, p)
    cf = apply(_composition_part(inst), f)
    checks = [
        _eq("spike_f_unit_norm", norm(tree, inst.sigma1, p, f), 1.0),
        _all_eq("composition_level_means_equal_c_n",
                [level_mean(tree, inst.sigma2, p, n, cf) ** p for n in range(tree.depth + 1)],
                tree.sizes.tolist()),
    ]
    more, w_norm = _contraction_checks(inst)
    c_norm = _composition_norm(inst)
    checks += more
    checks.append(_eq("composition_norm_is_c_D_root", c_norm, tree.sizes[-1] ** (1.0 / p)))
    return ExampleCase(1, "W bounded while C_phi is not", inst, checks,
                       ("composition_norm", c_norm), ("w_norm", w_norm))


def example_2(tree: TruncatedTree, p: float) -> ExampleCase:
    psi = TreeFunction.indicator(tree, {_first(tree, n): tree.sizes[n] ** (1.0 / p)
                                        for n in range(tree.depth + 1)})
    inst = OperatorInstance.build(tree, p=p, psi=psi, phi=SelfMap.constant(tree, tree.root))
    m_norm = opnorm_mult_pp(_multiplication_part(inst)).value
    checks = [_eq("multiplication_norm_is_max_c_n_root", m_norm,
                  max(tree.sizes.tolist()) ** (1.0 / p))]
    more, w_norm = _contraction_checks(inst)
    checks += more
    probes = [TreeFunction.constant(tree, 1.0), _spike_f(tree, inst.sigma1, p)]
    checks.append(_all_eq("w_norm_equals_root_value",
                          [norm(tree, inst.sigma2, p, apply(inst, g)) for g in probes],
                          [abs(g(tree.root)) for g in probes]))
    return ExampleCase(2, "W bounded while M_psi is not", inst, checks,
                       ("multiplication_norm", m_norm), ("w_norm", w_norm))


def example_3(tree: TruncatedTree, p: float) -> ExampleCase:
    # n_k = k: psi lives on odd levels n = n_{2k+1} with k >= 1, i.e. n >= 3
    psi = TreeFunction.indicator(tree, {_first(tree, n): tree.sizes[n] ** (1.0 / p)
                                        for n in range(3, tree.depth + 1, 2)})
    inst = OperatorInstance.build(tree, p=p, psi=psi, phi=SelfMap.parity_collapse(tree))
    f = _spike_f(tree, inst.sigma1, p)
    cf = apply(_composition_part(inst), f)
    even = list(range(0, tree.depth + 1, 2))
    w_one = apply(inst, TreeFunction.constant(tree, 1.0))
    checks = [
        _eq("spike_f_unit_norm", norm(tree, inst.sigma1, p, f), 1.0),
        _all_eq("composition_even_level_means_equal_c_n",
                [level_mean(tree, inst.sigma2, p, n, cf) ** p for n in even],
                [tree.sizes[n] for n in even]),
        _all_eq("w_vanishes_on_even_levels",
                [level_mean(tree, inst.sigma2, p, n, w_one) for n in even], [0.0] * len(even)),
    ]
    more, w_norm = _contraction_checks(inst)
    checks += more
    m_norm = opnorm_mult_pp(_multiplication_part(inst)).value
    c_norm = _composition_norm(inst)
    return ExampleCase(3, "W bounded while both M_psi and C_phi are not", inst, checks,
                       ("factor_norm_product", m_norm * c_norm), ("w_norm", w_norm),
                       {"multiplication_norm": m_norm, "composition_norm": c_norm})


def example_4(tree: TruncatedTree, p: float) -> ExampleCase:
    sigma1 = Weight.poly(tree, 1.0)
    sigma2 = Weight.poly(tree, 2.0)
    psi = TreeFunction((1.0 / (1.0 + tree.level_of)) * (sigma1.values / sigma2.values))
    inst = OperatorInstance.build(tree, p=p, sigma1=sigma1, sigma2=sigma2, psi=psi)
    mult_tail = tail(inst, "mult").values
    incl = inclusion_constant(sigma1, sigma2)
    w_norm = opnorm_mult_pp(inst).value
    checks = [
        _all_eq("mult_tail_is_harmonic", mult_tail,
                [1.0 / (1.0 + m) for m in range(tree.depth + 1)]),
        Check("mult_tail_nonincreasing",
              all(a >= b for a, b in zip(mult_tail, mult_tail[1:])), mult_tail, "nonincreasing"),
        _eq("inclusion_constant_is_depth_plus_one", incl, tree.depth + 1.0),
        _eq("w_norm_is_one", w_norm, 1.0),
        _eq("w_norm_matches_oracle", oracle_opnorm(inst).value, w_norm),
    ]
    return ExampleCase(4, "W compact while the inclusion between the weighted spaces is unbounded",
                       inst, checks,
                       ("identity_inclusion_constant", incl), ("w_norm", w_norm),
                       {"mult_tail_last": mult_tail[-1]})


def example_5(tree: TruncatedTree, p: float) -> ExampleCase:
    sigma1 = Weight.poly(tree, -1.0)
    sigma2 = Weight.one(tree)
    y = tree.root
    psi = TreeFunction(1.0 / sigma2.values)
    inst = OperatorInstance.build(tree, p=p, sigma1=sigma1, sigma2=sigma2, psi=psi,
                                  phi=SelfMap.constant(tree, y))
    m_norm = opnorm_mult_pp(_multiplication_part(inst)).value
    more, w_norm = _contraction_checks(inst)
    bound = growth_bound(tree, sigma1, p, y)
    probes = [TreeFunction.constant(tree, 1.0), TreeFunction(1.0 / sigma1.values),
              _spike_f(tree, sigma1, p)]
    checks = [
        _eq("psi_unit_norm", norm(tree, sigma2, p, psi), 1.0),
        _eq("multiplication_norm_is_depth_plus_one", m_norm, tree.depth + 1.0),
        _all_eq("w_norm_equals_value_at_y",
                [norm(tree, sigma2, p, apply(inst, g)) for g in probes],
                [abs(g(y)) for g in probes]),
        _eq("w_norm_equals_growth_bound_at_y", w_norm, bound),
    ] + more
    return ExampleCase(5, "W compact while M_psi is unbounded", inst, checks,
                       ("multiplication_norm", m_norm), ("w_norm", w_norm))


def example_6(tree: TruncatedTree, p: float) -> ExampleCase:
    sigma1 = Weight.poly(tree, -1.0)
    sigma2 = Weight.one(tree)
    psi = TreeFunction.indicator(tree, {_first(tree, n): 1.0 / sigma2.values[_first(tree, n)]
                                        for n in range(1, tree.depth + 1, 2)})
    inst = OperatorInstance.build(tree, p=p, sigma1=sigma1, sigma2=sigma2, psi=psi,
                                  phi=SelfMap.parity_collapse(tree))
    f = _spike_f(tree, sigma1, p)
    cf = apply(_composition_part(inst), f)
    even = list(range(0, tree.depth + 1, 2))
    s2p = [math.fsum((sigma2.values[tree.level_slice(n)] ** p).tolist()) ** (1.0 / p)
           for n in even]
    m_norm = opnorm_mult_pp(_multiplication_part(inst)).value
    c_norm = _composition_norm(inst)
    odd = [n for n in range(1, tree.depth + 1, 2)]
    probes = [TreeFunction.constant(tree, 1.0), TreeFunction(1.0 / sigma1.values), f]
    more, w_norm = _contraction_checks(inst)
    checks = [
        _eq("spike_f_unit_norm", norm(tree, sigma1, p, f), 1.0),
        _eq("multiplication_norm_is_max_inverse_sigma1_on_odd_levels", m_norm,
            max((1.0 / sigma1.values[_first(tree, n)] for n in odd), default=0.0)),
        _all_eq("composition_even_level_means",
                [level_mean(tree, sigma2, p, n, cf) for n in even],
                [s / sigma1.values[_first(tree, n)] for s, n in zip(s2p, even)]),
        Check("composition_even_level_means_dominate_inverse_sigma1",
              all(level_mean(tree, sigma2, p, n, cf) >= 1.0 / sigma1.values[_first(tree, n)] - TIGHT
                  for n in even),
              [level_mean(tree, sigma2, p, n, cf) for n in even],
              [1.0 / sigma1.values[_first(tree, n)] for n in even]),
        Check("w_bounded_by_root_value",
              all(norm(tree, sigma2, p, apply(inst, g)) <= abs(g(tree.root)) + TIGHT for g in probes),
              [norm(tree, sigma2, p, apply(inst, g)) for g in probes],
              [abs(g(tree.root)) for g in probes]),
    ] + more
    return ExampleCase(6, "W compact while both M_psi and C_phi are unbounded", inst, checks,
                       ("factor_norm_product", m_norm * c_norm), ("w_norm", w_norm),
                       {"multiplication_norm": m_norm, "composition_norm": c_norm})


REGISTRY: Dict[int, Callable[[TruncatedTree, float], ExampleCase]] = {
    1: example_1, 2: example_2, 3: example_3, 4: example_4, 5: example_5, 6: example_6,
}


def example(k: int, tree: TruncatedTree, p: float = 2.0) -> ExampleCase:
    if k not in REGISTRY:
        raise UnknownExample(f"no example {k}; choose 1..6")
    p = float(p)
    if not (p > 0 and math.isfinite(p)):
        raise WrongExponents("examples use a finite exponent p > 0")
    return REGISTRY[k](tree, p)

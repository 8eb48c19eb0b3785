import numpy as np
import pytest

from tree_hardy import (OperatorInstance, SelfMap, TreeFunction, ValidationError, Weight, apply,
                        build_homogeneous)
from tree_hardy.operators import (image_levels, max_preimage, preimage_counts, symbol_ratio,
                                  weighted_symbol)

TREE = build_homogeneous(2, 3)
V = TREE.num_vertices


def test_selfmap_constructors():
    assert SelfMap.identity(TREE).is_identity()
    assert SelfMap.identity(TREE).is_onto()
    c = SelfMap.constant(TREE, 5)
    assert set(c.target.tolist()) == {5} and not c.is_onto()
    lc = SelfMap.level_collapse(TREE)
    assert lc.target.tolist() == [0, 1, 1, 3, 3, 3, 3] + [7] * 8
    pc = SelfMap.parity_collapse(TREE)
    assert pc.target.tolist() == [0, 0, 0, 3, 3, 3, 3] + [0] * 8


def test_selfmap_validation():
    with pytest.raises(ValidationError):
        SelfMap([0, 1, 15], TREE)
    with pytest.raises(ValidationError):
        SelfMap([0, -1] + [0] * (V - 2), TREE)
    with pytest.raises(ValidationError):
        SelfMap.level_collapse(TREE, [0, 1])
    with pytest.raises(ValidationError):
        SelfMap([[0, 1]])


def test_apply_is_psi_times_f_of_phi():
    rng = np.random.default_rng(0)
    f = TreeFunction(rng.normal(size=V))
    psi = TreeFunction(rng.normal(size=V))
    phi = SelfMap(rng.integers(0, V, size=V), TREE)
    inst = OperatorInstance.build(TREE, psi=psi, phi=phi)
    out = apply(inst, f)
    for x in range(V):
        assert out(x) == psi(x) * f(phi(x))


def test_build_defaults_and_predicates():
    inst = OperatorInstance.build(TREE)
    assert inst.p == inst.q == 2.0
    assert inst.is_composition() and inst.is_multiplication()
    weighted = inst.with_(sigma1=Weight.poly(TREE, 1.0))
    assert not weighted.is_composition()
    assert inst.with_(q="inf").q == float("inf")


def test_instance_validation():
    small = build_homogeneous(2, 2)
    with pytest.raises(ValidationError):
        OperatorInstance.build(TREE, sigma1=Weight.one(small))
    with pytest.raises(ValidationError):
        OperatorInstance.build(TREE, psi=TreeFunction.zeros(small))
    with pytest.raises(ValidationError):
        OperatorInstance.build(TREE, phi=SelfMap.identity(small))
    with pytest.raises(ValidationError):
        OperatorInstance.build(TREE, p=0)


def test_symbols():
    s1 = Weight.poly(TREE, 1.0)
    s2 = Weight.poly(TREE, 2.0)
    inst = OperatorInstance.build(TREE, sigma1=s1, sigma2=s2, phi=SelfMap.constant(TREE, 0))
    # sigma1(root) = 1, so r = sigma2 and psi/(sigma1 o phi) = 1
    assert np.array_equal(symbol_ratio(inst), s2.values)
    assert np.array_equal(weighted_symbol(inst).values, np.ones(V))


def test_preimage_bookkeeping():
    phi = SelfMap.level_collapse(TREE, [0, 2, 1, 4])
    assert preimage_counts(phi, TREE, 3) == {4: 8}
    assert max_preimage(phi, TREE, 2, 3) == (8, 4)
    assert max_preimage(phi, TREE, 3, 3) == (0, None)
    assert image_levels(phi, TREE, 2) == {1}
    arb = SelfMap([0, 3, 4, 3, 3, 1, 1] + [2] * 8, TREE)
    assert max_preimage(arb, TREE, 2, 1) == (1, 3)
    assert max_preimage(arb, TREE, 2, 2) == (2, 3)
    assert max_preimage(arb, TREE, 3, 2) == (0, None)
    assert image_levels(arb, TREE, 2) == {1, 2}

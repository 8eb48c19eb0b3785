"""JSON encoding of trees, weights, functions, self-maps and instances.

Infinite exponents are written as the string ``"inf"``.  Floats go through
Python's shortest round-trip ``repr`` so an emitted instance re-parses to
an identical one.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from typing import Any, Mapping

import numpy as np

from .errors import ValidationError
from .operators import OperatorInstance, SelfMap
from .spaces import DEFAULT_TOL, TreeFunction, Weight, check_exponent
from .tree import TruncatedTree, build_explicit, build_from_level_sizes, build_homogeneous

MAX_VERTICES_ENV = "TREE_HARDY_MAX_VERTICES"
DEFAULT_MAX_VERTICES = 100_000


def max_vertices() -> int:
    raw = os.environ.get(MAX_VERTICES_ENV, str(DEFAULT_MAX_VERTICES))
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{MAX_VERTICES_ENV} must be an integer, got {raw!r}") from None


def _kind(obj: Any, what: str) -> str:
    if not isinstance(obj, Mapping) or "kind" not in obj:
        raise ValidationError(f"{what} must be an object with a 'kind' field")
    return obj["kind"]


def _field(obj: Mapping, key: str, what: str):
    if key not in obj:
        raise ValidationError(f"{what} of kind {obj['kind']!r} needs field {key!r}")
    return obj[key]


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{what} must be an integer, got {v!r}")
    return v


# --------------------------------------------------------------------------
# trees


def parse_tree(obj: Any) -> TruncatedTree:
    kind = _kind(obj, "tree")
    cap = max_vertices()
    if kind == "homogeneous":
        arity = _int(_field(obj, "arity", "tree"), "arity")
        depth = _int(_field(obj, "depth", "tree"), "depth")
        if arity < 1 or depth < 0:
            raise ValidationError("homogeneous tree needs arity >= 1 and depth >= 0")
        total = depth + 1 if arity == 1 else (arity ** (depth + 1) - 1) // (arity - 1)
        _check_cap(total, cap)
        return build_homogeneous(arity, depth)
    if kind == "explicit":
        parents = _field(obj, "parents", "tree")
        if not isinstance(parents, list):
            raise ValidationError("tree parents must be a list")
        _check_cap(len(parents), cap)
        return build_explicit(parents)
    if kind == "levels":
        sizes = _field(obj, "sizes", "tree")
        if not isinstance(sizes, list) or not all(isinstance(s, int) and not isinstance(s, bool)
                                                  for s in sizes):
            raise ValidationError("tree sizes must be a list of integers")
        _check_cap(sum(sizes), cap)
        return build_from_level_sizes(sizes)
    raise ValidationError(f"unknown tree kind {kind!r}")


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ValidationError(f"instance has {n} vertices; the cap is {cap} ({MAX_VERTICES_ENV})")


def tree_to_json(tree: TruncatedTree) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return _tree_to_json(tree)


def _tree_to_json(tree: TruncatedTree) -> dict:
    sizes = tree.sizes.tolist()
    if len(sizes) > 1 and all(s == sizes[1] ** n for n, s in enumerate(sizes)) \
            and tree == build_homogeneous(sizes[1], tree.depth):
        return {"kind": "homogeneous", "arity": sizes[1], "depth": tree.depth}
    if tree == build_from_level_sizes(sizes):
        return {"kind": "levels", "sizes": sizes}
    return {"kind": "explicit", "parents": tree.parents_list()}


# --------------------------------------------------------------------------
# weights and functions


def _float_list(values, n: int, what: str) -> list:
    if not isinstance(values, list) or len(values) != n:
        raise ValidationError(f"{what} needs a list of {n} numbers")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"{what} values must be numbers, got {v!r}")
    return [float(v) for v in values]


def parse_weight(obj: Any, tree: TruncatedTree) -> Weight:
    kind = _kind(obj, "weight")
    if kind == "one":
        return Weight.one(tree)
    if kind == "poly":
        return Weight.poly(tree, float(_field(obj, "exponent", "weight")))
    if kind == "exp":
        return Weight.exp(tree, float(_field(obj, "base", "weight")))
    if kind == "explicit":
        return Weight(_float_list(_field(obj, "values", "weight"), tree.num_vertices, "weight"))
    raise ValidationError(f"unknown weight kind {kind!r}")


def weight_to_json(w: Weight) -> dict:
    if w.is_constant_one():
        return {"kind": "one"}
    return {"kind": "explicit", "values": w.values.tolist()}


def parse_function(obj: Any, tree: TruncatedTree) -> TreeFunction:
    kind = _kind(obj, "function")
    if kind == "one":
        return TreeFunction.constant(tree, 1.0)
    if kind == "indicator":
        entries = _field(obj, "entries", "function")
        if not isinstance(entries, list) or not all(
                isinstance(e, list) and len(e) == 2 for e in entries):
            raise ValidationError("indicator entries must be [[vertex, value], ...]")
        return TreeFunction.indicator(tree, [(_int(v, "vertex"), val) for v, val in entries])
    if kind == "explicit":
        return TreeFunction(_float_list(_field(obj, "values", "function"), tree.num_vertices,
                                        "function"))
    raise ValidationError(f"unknown function kind {kind!r}")


def function_to_json(f: TreeFunction) -> dict:
    if np.all(f.values == 1.0):
        return {"kind": "one"}
    return {"kind": "explicit", "values": f.values.tolist()}


def parse_selfmap(obj: Any, tree: TruncatedTree) -> SelfMap:
    kind = _kind(obj, "self-map")
    if kind == "identity":
        return SelfMap.identity(tree)
    if kind == "constant":
        return SelfMap.constant(tree, _int(_field(obj, "target", "self-map"), "target"))
    if kind == "level-collapse":
        targets = obj.get("targets")
        if targets is not None:
            targets = [_int(t, "target") for t in targets]
        return SelfMap.level_collapse(tree, targets)
    if kind == "parity-collapse":
        even = obj.get("even_targets")
        if even is not None:
            even = [_int(t, "target") for t in even]
        return SelfMap.parity_collapse(tree, even, _int(obj.get("odd_target", 0), "odd_target"))
    if kind == "explicit":
        values = _field(obj, "values", "self-map")
        if not isinstance(values, list):
            raise ValidationError("self-map values must be a list")
        return SelfMap([_int(v, "target") for v in values], tree)
    raise ValidationError(f"unknown self-map kind {kind!r}")


def selfmap_to_json(phi: SelfMap) -> dict:
    if phi.is_identity():
        return {"kind": "identity"}
    return {"kind": "explicit", "values": phi.target.tolist()}


# --------------------------------------------------------------------------
# exponents and instances


def parse_exponent(v: Any) -> float:
    if isinstance(v, bool):
        raise ValidationError(f"exponent must be a number or 'inf', got {v!r}")
    return check_exponent(v)


def exponent_to_json(p: float):
    return "inf" if math.isinf(p) else p


def parse_instance(obj: Any):
    """Parse an instance file; returns ``(OperatorInstance, tol)``."""
    if not isinstance(obj, Mapping):
        raise ValidationError("instance file must be a JSON object")
    for key in ("tree", "p"):
        if key not in obj:
            raise ValidationError(f"instance file needs field {key!r}")
    tree = parse_tree(obj["tree"])
    p = parse_exponent(obj["p"])
    q = parse_exponent(obj.get("q", obj["p"]))
    tol = obj.get("tol", DEFAULT_TOL)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
        raise ValidationError(f"tol must be a nonnegative number, got {tol!r}")
    inst = OperatorInstance(
        tree=tree,
        sigma1=parse_weight(obj.get("sigma1", {"kind": "one"}), tree),
        sigma2=parse_weight(obj.get("sigma2", {"kind": "one"}), tree),
        p=p,
        q=q,
        psi=parse_function(obj.get("psi", {"kind": "one"}), tree),
        phi=parse_selfmap(obj.get("phi", {"kind": "identity"}), tree),
    )
    return inst, float(tol)


def instance_to_json(inst: OperatorInstance, tol: float | None = None) -> dict:
    out = {
        "tree": tree_to_json(inst.tree),
        "sigma1": weight_to_json(inst.sigma1),
        "sigma2": weight_to_json(inst.sigma2),
        "psi": function_to_json(inst.psi),
        "phi": selfmap_to_json(inst.phi),
        "p": exponent_to_json(inst.p),
        "q": exponent_to_json(inst.q),
    }
    if tol is not None:
        out["tol"] = tol
    return out


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot encode {type(o).__name__} as JSON")


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=True, allow_nan=False,
                      default=_plain)


def load_instance_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None
    return parse_instance(obj)

"""Command-line front end.

JSON on stdout is the contract; ``--pretty`` switches to a readable layout.
Exit codes: 0 success, 2 rejected input, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from . import criteria, io
from .errors import InvariantViolation, ValidationError, WrongExponents
from .examples import example
from .operators import apply
from .oracle import CONCENTRATION, RANDOM_ASCENT, STRATEGIES, oracle_opnorm
from .spaces import level_means, norm
from .tree import build_homogeneous

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


GLOBAL_DEFAULTS = {"input": None, "tol": None, "pretty": False, "seed": None,
                   "budget": None, "strategy": CONCENTRATION}


def _global_flags() -> argparse.ArgumentParser:
    # defaults are suppressed so a flag given before the subcommand is not
    # overwritten by the subparser's copy; GLOBAL_DEFAULTS fills the gaps
    s = argparse.SUPPRESS
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--input", metavar="FILE", default=s, help="instance file (JSON)")
    g.add_argument("--tol", type=float, default=s, help="comparison tolerance (default 1e-9)")
    g.add_argument("--pretty", action="store_true", default=s, help="human-readable output")
    g.add_argument("--seed", type=int, default=s)
    g.add_argument("--budget", type=int, default=s, help="random_ascent restarts")
    g.add_argument("--strategy", choices=STRATEGIES, default=s)
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="tree-hardy", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("norm", parents=[common], help="norm of a function under (sigma1, p)")
    p.add_argument("--function", default='{"kind": "one"}',
                   help="function JSON, inline or @path (default: constant one)")
    sub.add_parser("opnorm", parents=[common], help="every applicable operator-norm formula")
    p = sub.add_parser("tail", parents=[common], help="compactness tail diagnostic")
    p.add_argument("criterion", choices=criteria.TAIL_CRITERIA)
    sub.add_parser("isometry", parents=[common], help="isometry check or refutation")
    sub.add_parser("oracle", parents=[common], help="brute-force operator norm")
    p = sub.add_parser("example", parents=[common], help="run one of the six comparison examples")
    p.add_argument("id", type=int)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--p", type=float, default=2.0, dest="exponent")
    return parser


def parse_args(argv):
    ns = build_parser().parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(ns, key):
            setattr(ns, key, value)
    if ns.command is None:
        raise ValidationError("missing subcommand (norm, opnorm, tail, isometry, oracle, example)")
    return ns


def _load(ns):
    if not ns.input:
        raise ValidationError(f"{ns.command} needs --input FILE")
    inst, tol = io.load_instance_file(ns.input)
    if ns.tol is not None:
        tol = ns.tol
    return inst, tol


def _read_json_arg(text: str):
    try:
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except OSError as exc:
        raise ValidationError(f"cannot read {text[1:]}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--function is not valid JSON: {exc}") from None


def cmd_norm(ns) -> dict:
    inst, _ = _load(ns)
    f = io.parse_function(_read_json_arg(ns.function), inst.tree)
    return {
        "norm": norm(inst.tree, inst.sigma1, inst.p, f),
        "per_level_means": level_means(inst.tree, inst.sigma1, inst.p, f),
        "p": io.exponent_to_json(inst.p),
    }


def cmd_opnorm(ns) -> dict:
    inst, tol = _load(ns)
    reports = criteria.applicable_reports(inst)
    by_id = {r.formula_id: r.value for r in reports}
    if "derived-pp-exact" in by_id:
        lo, ex, hi = by_id["thm-pp-lower"], by_id["derived-pp-exact"], by_id["thm-pp-upper"]
        slack = 1e-12 * max(1.0, hi)
        if not (lo <= ex + slack and ex <= hi + slack and ex <= by_id["prop-pp-nmn"] + slack):
            raise InvariantViolation(f"bound ordering violated: {lo} <= {ex} <= {hi}")
    return {"p": io.exponent_to_json(inst.p), "q": io.exponent_to_json(inst.q),
            "reports": [r.to_dict() for r in reports]}


def cmd_tail(ns) -> dict:
    inst, tol = _load(ns)
    t = criteria.tail(inst, ns.criterion, tol)
    if any(a < b for a, b in zip(t.values, t.values[1:])):
        raise InvariantViolation(f"tail sequence increases: {t.values}")
    return {"criterion": t.criterion_id, "tail": t.values, "verdict": t.verdict, "label": t.label}


def cmd_isometry(ns) -> dict:
    inst, tol = _load(ns)
    if math.isinf(inst.p) and math.isinf(inst.q):
        return {"mode": "inf-inf check", **criteria.isometry_inf_inf_check(inst, tol).to_dict()}
    if not math.isinf(inst.p) and math.isinf(inst.q):
        return {"mode": "p-inf refutation", **criteria.isometry_p_inf_refuter(inst, tol).to_dict()}
    raise WrongExponents("isometry tools cover p = q = inf and finite p into inf only")


def cmd_oracle(ns) -> dict:
    inst, _ = _load(ns)
    if ns.strategy == RANDOM_ASCENT and ns.seed is None:
        raise ValidationError("random_ascent needs --seed")
    res = oracle_opnorm(inst, ns.strategy, budget=ns.budget, seed=ns.seed)
    feas = norm(inst.tree, inst.sigma1, inst.p, res.extremal)
    if feas > 1 + 1e-12:
        raise InvariantViolation(f"oracle extremal leaves the unit ball (norm {feas})")
    recheck = norm(inst.tree, inst.sigma2, inst.q, apply(inst, res.extremal))
    if abs(recheck - res.value) > 1e-12 * max(1.0, recheck):
        raise InvariantViolation("oracle value does not match its extremal")
    return res.to_dict()


def cmd_example(ns) -> dict:
    if ns.depth < 0 or ns.arity < 1:
        raise ValidationError("--depth must be >= 0 and --arity >= 1")
    tree = build_homogeneous(ns.arity, ns.depth)
    case = example(ns.id, tree, ns.exponent)
    out = case.to_dict()
    if not case.passed:
        failed = [c.name for c in case.checks if not c.passed]
        raise InvariantViolation(f"example {ns.id} assertions failed: {failed}", out)
    return out


COMMANDS = {
    "norm": cmd_norm, "opnorm": cmd_opnorm, "tail": cmd_tail,
    "isometry": cmd_isometry, "oracle": cmd_oracle, "example": cmd_example,
}


def _render(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, float)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- " + _render(v, indent + 1).lstrip() for v in obj)
    return pad + _scalar(obj)


def _scalar(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _format(obj, pretty: bool) -> str:
    return _render(obj) if pretty else io.dumps(obj)


def _emit(obj, pretty: bool) -> None:
    sys.stdout.write(_format(obj, pretty) + "\n")


def main(argv=None) -> int:
    pretty = "--pretty" in (sys.argv[1:] if argv is None else argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ns = parse_args(argv)
            result = COMMANDS[ns.command](ns)
            text = _format(result, pretty)
    except ValidationError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, pretty)
        return EXIT_INVALID
    except InvariantViolation as exc:
        payload = {"error": {"type": "InvariantViolation", "message": str(exc.args[0])}}
        if len(exc.args) > 1:
            payload["result"] = exc.args[1]
        _emit(payload, pretty)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - last-resort guard, still machine-readable
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, pretty)
        return EXIT_INTERNAL
    sys.stdout.write(text + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

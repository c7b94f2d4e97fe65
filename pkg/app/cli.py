"""
app/cli.py
Command-line surface.

Commands:
- validate FILE
- cycle FILE [--support a,b,...]
- special FILE
- disc FILE
- classify FILE
- chi FILE --divisor "E1:2,E2:1"
- rational FILE [--method auto|special|brute] [--bound N]
- blowup FILE --at id[,id]
- blowdown FILE --vertex id
- minimalize FILE
- catalogue cyclic --n N --q Q | catalogue fixture NAME | catalogue ade NAME

Exit codes: 0 ok (including "not numerically rational"), 1 internal error,
2 input/schema error, 3 precondition error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from app.config_file import dump_config, parse_config
from core.adjunction import chi_restriction, g_value
from core.birational import BlowupCenter, BirationalMap, blowdown, blowup, minimalize
from core.catalogue import ade, cyclic, fixture
from core.cycles import numerical_cycle, special_divisors
from core.discrepancy import classify, order_discrepancies, surface_discrepancies
from core.errors import InputError, NumratError
from core.lattice import Divisor, as_fraction
from core.model import OrderConfig, unramified, validate
from core.rationality import METHOD_ALIASES, Verdict, functional, is_numerically_rational, normalize_method
from services.settings import get_settings

logger = logging.getLogger("numrat.cli")


# -----------------------------
# Rendering
# -----------------------------
def fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def coeff_json(q: Fraction) -> Any:
    return q.numerator if q.denominator == 1 else fmt_q(q)


def divisor_json(D: Divisor, order: Sequence[str]) -> Dict[str, Any]:
    known = [vid for vid in order if vid in D.support]
    rest = sorted(D.support - set(known))
    return {vid: coeff_json(D[vid]) for vid in known + rest}


def fmt_divisor(D: Divisor, order: Sequence[str]) -> str:
    if D.is_zero():
        return "0"
    return ", ".join(f"{vid}:{fmt_q(D[vid])}" for vid in divisor_json(D, order))


def vector_json(ids: Sequence[str], values: Sequence[Fraction]) -> Dict[str, str]:
    return {vid: fmt_q(v) for vid, v in zip(ids, values)}


def parse_divisor(text: str) -> Divisor:
    """'E1:2,E2:1' -> Divisor; omitted ids mean 0."""
    coeffs: Dict[str, Fraction] = {}
    for item in (text or "").split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise InputError(f"divisor entry {item!r} must look like id:coeff")
        vid, raw = (s.strip() for s in item.split(":", 1))
        if not vid:
            raise InputError(f"divisor entry {item!r} has an empty id")
        coeffs[vid] = coeffs.get(vid, Fraction(0)) + as_fraction(raw)
    return Divisor(coeffs)


def parse_ids(text: Optional[str]) -> List[str]:
    return [s.strip() for s in (text or "").split(",") if s.strip()]


def verdict_json(v: Verdict, order: Sequence[str]) -> Dict[str, Any]:
    out: Dict[str, Any] = {"rational": v.rational, "method": v.method}
    if v.witness is not None:
        out["witness"] = divisor_json(v.witness, order)
        out["g"] = fmt_q(v.witness_value)
    if v.witness_chi is not None:
        out["chi"] = fmt_q(v.witness_chi)
    if v.bound_used is not None:
        out["bound"] = v.bound_used
    if v.nodes is not None:
        out["nodes"] = v.nodes
    return out


def map_json(bmap: BirationalMap) -> Dict[str, Any]:
    return {
        "kind": bmap.kind,
        "vertex": bmap.vertex,
        "through": list(bmap.through),
        "centre_index": bmap.centre_index,
        "e0": bmap.e0,
    }


def emit(args: argparse.Namespace, payload: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -----------------------------
# Commands
# -----------------------------
def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(parse_config(args.file))
    payload = {
        "ok": report.ok,
        "violations": [{"code": v.code, "location": v.location, "message": v.message} for v in report.violations],
    }
    lines = ["ok" if report.ok else f"{len(report.violations)} violation(s)"]
    lines += [f"  {v.code} at {v.location}: {v.message}" for v in report.violations]
    emit(args, payload, lines)
    return 0


def cmd_cycle(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    ids = config.graph.ids
    support = parse_ids(args.support) or list(ids)
    Z = numerical_cycle(config.graph, support)
    emit(args, {"support": config.graph.sort_ids(support), "cycle": divisor_json(Z, ids)}, [fmt_divisor(Z, ids)])
    return 0


def cmd_special(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    ids = config.graph.ids
    ell = functional(config)
    rows = [(D, g_value(config.graph.form, ell, D)) for D in special_divisors(config.graph)]
    payload = {"special": [{"divisor": divisor_json(D, ids), "g": fmt_q(g)} for D, g in rows]}
    lines = [f"{fmt_divisor(D, ids)}  g={fmt_q(g)}" for D, g in rows]
    emit(args, payload, lines)
    return 0


def cmd_disc(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    ids = config.graph.ids
    if all(v.genus == 0 for v in config.graph.vertices):
        alpha = surface_discrepancies(config.graph)
    else:
        alpha = order_discrepancies(unramified(config))
    a = order_discrepancies(config)
    payload = {"alpha": vector_json(ids, alpha), "a": vector_json(ids, a)}
    lines = [
        "alpha: " + ", ".join(f"{vid}={fmt_q(x)}" for vid, x in zip(ids, alpha)),
        "a:     " + ", ".join(f"{vid}={fmt_q(x)}" for vid, x in zip(ids, a)),
    ]
    emit(args, payload, lines)
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    c = classify(parse_config(args.file))
    payload = {
        "a": vector_json(c.ids, c.a),
        "alpha": vector_json(c.ids, c.alpha),
        "ae": vector_json(c.ids, c.ae),
        "min_ae": fmt_q(c.min_ae) if c.min_ae is not None else None,
        "crepant": c.crepant,
        "log_terminal": c.log_terminal,
        "minimal": c.minimal,
        "warnings": list(c.warnings),
    }
    lines = [
        f"min a_i e_i: {fmt_q(c.min_ae) if c.min_ae is not None else '-'}",
        f"crepant: {c.crepant}",
        f"log terminal: {c.log_terminal}",
        f"minimal: {c.minimal}",
    ] + [f"warning: {w}" for w in c.warnings]
    emit(args, payload, lines)
    return 0


def cmd_chi(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    D = parse_divisor(args.divisor)
    chi = chi_restriction(config, D)
    emit(args, {"divisor": divisor_json(D, config.graph.ids), "chi": fmt_q(chi)}, [fmt_q(chi)])
    return 0


def cmd_rational(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    v = is_numerically_rational(config, method=normalize_method(args.method), bound=args.bound)
    payload = verdict_json(v, config.graph.ids)
    lines = [f"numerically rational: {'yes' if v.rational else 'no'} (method {v.method})"]
    if v.witness is not None:
        lines.append(f"witness: {fmt_divisor(v.witness, config.graph.ids)}  g={fmt_q(v.witness_value)}")
    if v.witness_chi is not None:
        lines.append(f"chi: {fmt_q(v.witness_chi)}")
    if v.bound_used is not None:
        lines.append(f"searched up to {v.bound_used} x Z_num ({v.nodes} nodes)")
    emit(args, payload, lines)
    return 0


def _emit_config(args: argparse.Namespace, config: OrderConfig, extra: Dict[str, Any]) -> None:
    payload = dict(extra)
    payload["config"] = dump_config(config)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for k, v in extra.items():
            print(f"{k}: {json.dumps(v)}")
        print(json.dumps(payload["config"], indent=2))


def cmd_blowup(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    upper, bmap = blowup(config, BlowupCenter(tuple(parse_ids(args.at))))
    _emit_config(args, upper, {"map": map_json(bmap)})
    return 0


def cmd_blowdown(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    lower, bmap = blowdown(config, args.vertex)
    _emit_config(args, lower, {"map": map_json(bmap)})
    return 0


def cmd_minimalize(args: argparse.Namespace) -> int:
    config = parse_config(args.file)
    minimal, tower = minimalize(config)
    _emit_config(args, minimal, {"contracted": [b.vertex for b in reversed(tower.maps)]})
    return 0


def cmd_catalogue(args: argparse.Namespace) -> int:
    if args.kind == "cyclic":
        if args.n is None or args.q is None:
            raise InputError("catalogue cyclic needs --n and --q")
        config = OrderConfig(cyclic(args.n, args.q))
        _emit_config(args, config, {"name": f"cyclic_{args.n}_{args.q}"})
    elif args.kind == "ade":
        config = OrderConfig(ade(args.name or ""))
        _emit_config(args, config, {"name": args.name})
    else:
        fx = fixture(args.name or "")
        _emit_config(args, fx.config, {"name": fx.name, "description": fx.description})
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "cycle": cmd_cycle,
    "special": cmd_special,
    "disc": cmd_disc,
    "classify": cmd_classify,
    "chi": cmd_chi,
    "rational": cmd_rational,
    "blowup": cmd_blowup,
    "blowdown": cmd_blowdown,
    "minimalize": cmd_minimalize,
    "catalogue": cmd_catalogue,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="numrat", description="Numerical rationality of orders on surfaces.")
    parser.add_argument("--log-level", default=None, help="logging level (default: NUMRAT_LOG_LEVEL or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "special", "disc", "classify", "minimalize"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")

    p = sub.add_parser("cycle", parents=[common])
    p.add_argument("file")
    p.add_argument("--support", default=None, help="comma-separated vertex ids (default: all)")

    p = sub.add_parser("chi", parents=[common])
    p.add_argument("file")
    p.add_argument("--divisor", required=True, help='e.g. "E1:2,E2:1"')

    p = sub.add_parser("rational", parents=[common])
    p.add_argument("file")
    p.add_argument("--method", default="auto", help="auto | special | brute (aliases: " + ", ".join(sorted(METHOD_ALIASES)) + ")")
    p.add_argument("--bound", type=int, default=None)

    p = sub.add_parser("blowup", parents=[common])
    p.add_argument("file")
    p.add_argument("--at", default="", help="components through the centre: id[,id] (empty for a smooth point)")

    p = sub.add_parser("blowdown", parents=[common])
    p.add_argument("file")
    p.add_argument("--vertex", required=True)

    p = sub.add_parser("catalogue", parents=[common])
    p.add_argument("kind", choices=("cyclic", "fixture", "ade"))
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        level = (args.log_level or get_settings().log_level).upper()
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)

    try:
        return COMMANDS[args.command](args)
    except NumratError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except Exception:
        logger.exception("unexpected failure in %s", args.command)
        return 1

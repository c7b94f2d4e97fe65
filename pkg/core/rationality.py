"""
core/rationality.py
Numerical rationality: chi(A (x) O_E) > 0 for every exceptional E > 0.

Since chi = (r^2/2) g with g(E) = -E^2 + l(E) and l(E_i) = -K_A . E_i, every
check works with g directly.

- check_special: positivity on special divisors (log terminal graph, l <= 0, minimal)
- check_bruteforce: exact search of the box E <= bound * Z_num, pruned by the
  ellipsoid {g <= 0}; reports the lexicographically least counterexample
- is_numerically_rational: minimalize, then pick a method
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from core.adjunction import LinearFunctional, g_value
from core.birational import minimalize
from core.cycles import numerical_cycle, special_divisors
from core.discrepancy import is_log_terminal_graph, non_nef_vertices
from core.errors import InputError, InvariantError, PreconditionError, ValidationFailed
from core.lattice import Divisor, IntersectionForm, connected_components, ldl, solve_exact
from core.model import OrderConfig, ResolutionGraph, canonical_dot, validate
from services.settings import get_settings

logger = logging.getLogger("numrat.rationality")

SPECIAL = "special"
BRUTE = "brute"
AUTO = "auto"

METHOD_ALIASES = {
    "auto": AUTO,
    "default": AUTO,
    "special": SPECIAL,
    "special-divisors": SPECIAL,
    "brute": BRUTE,
    "bruteforce": BRUTE,
    "brute-force": BRUTE,
    "brute_force": BRUTE,
}


def normalize_method(method: str) -> str:
    m = (method or "").strip().lower()
    m = METHOD_ALIASES.get(m, m)
    if m not in (AUTO, SPECIAL, BRUTE):
        raise InputError(f"unknown method {method!r}; expected auto, special or brute")
    return m


@dataclass(frozen=True)
class Verdict:
    rational: bool
    method: str
    witness: Optional[Divisor] = None
    witness_value: Optional[Fraction] = None
    bound_used: Optional[int] = None
    witness_chi: Optional[Fraction] = None
    nodes: Optional[int] = None


def functional(config: OrderConfig) -> LinearFunctional:
    return LinearFunctional({vid: -canonical_dot(config, Divisor.basis(vid)) for vid in config.graph.ids})


def special_hypotheses(graph: ResolutionGraph, ell: LinearFunctional) -> List[str]:
    """Violated hypotheses of the special-divisor criterion (empty when it applies)."""
    failed = []
    if not is_log_terminal_graph(graph):
        failed.append("graph is not log terminal")
    positive = [vid for vid in graph.ids if ell.values.get(vid, Fraction(0)) > 0]
    if positive:
        failed.append(f"l(E_i) > 0 on {positive}")
    minus_one = [v.id for v in graph.vertices if v.genus == 0 and v.b == 1]
    if minus_one:
        failed.append(f"graph is not minimal: rational (-1)-curves {minus_one}")
    return failed


def check_special(graph: ResolutionGraph, ell: LinearFunctional) -> Verdict:
    failed = special_hypotheses(graph, ell)
    if failed:
        raise PreconditionError("special-divisor criterion does not apply: " + "; ".join(failed))
    form = graph.form
    for D in special_divisors(graph):
        value = g_value(form, ell, D)
        if value <= 0:
            logger.info("special divisor %r has g = %s", D, value)
            return Verdict(False, SPECIAL, witness=D, witness_value=value)
    return Verdict(True, SPECIAL)


def _permuted(form: IntersectionForm, order: List[str]) -> IntersectionForm:
    return IntersectionForm(
        tuple(order),
        tuple(tuple(form.entry(a, b) for b in order) for a in order),
    )


def check_bruteforce(
    graph: ResolutionGraph,
    ell: LinearFunctional,
    bound: Optional[int] = None,
    cap: Optional[int] = None,
) -> Verdict:
    settings = get_settings()
    bound = settings.brute_bound if bound is None else bound
    cap = settings.brute_cap if cap is None else cap
    if bound < 1:
        raise InputError(f"bound must be positive, got {bound}")
    ids = list(graph.ids)
    n = len(ids)
    if not n:
        return Verdict(True, BRUTE, bound_used=bound, nodes=0)
    form = graph.form

    Z = Divisor.zero()
    for comp in connected_components(form, ids):
        Z = Z + numerical_cycle(graph, comp)

    # Reverse the order so the depth-first search fixes ids[0] first and
    # the first counterexample reached is the lexicographically least.
    order = list(reversed(ids))
    sub = _permuted(form, order)
    lower, diag = ldl(sub)
    ells = [ell.values.get(vid, Fraction(0)) for vid in order]
    centre = solve_exact(sub, [l / 2 for l in ells])
    radius = sum(
        (-sub.entries[i][j] * centre[i] * centre[j] for i in range(n) for j in range(n)),
        Fraction(0),
    )
    upper = [bound * int(Z[vid]) for vid in order]

    x = [0] * n
    y: List[Fraction] = [Fraction(0)] * n
    nodes = 0

    def search(k: int, budget: Fraction) -> Optional[List[int]]:
        nonlocal nodes
        if k < 0:
            return list(x) if any(x) else None
        t = sum((lower[i][k] * y[i] for i in range(k + 1, n)), Fraction(0))
        for value in range(upper[k] + 1):
            nodes += 1
            if nodes > cap:
                raise PreconditionError(
                    f"brute-force search exceeded {cap} nodes (NUMRAT_BRUTE_CAP); use a smaller bound"
                )
            s = value - centre[k] + t
            term = diag[k] * s * s
            if term > budget:
                if s > 0:
                    break
                continue
            x[k] = value
            y[k] = value - centre[k]
            found = search(k - 1, budget - term)
            if found is not None:
                return found
        x[k] = 0
        y[k] = Fraction(0)
        return None

    hit = search(n - 1, radius)
    logger.debug("brute force: %d node(s), bound %d", nodes, bound)
    if hit is None:
        return Verdict(True, BRUTE, bound_used=bound, nodes=nodes)
    witness = Divisor.from_vector(order, hit)
    value = g_value(form, ell, witness)
    if value > 0:
        raise InvariantError(f"search returned {witness!r} with g = {value} > 0")
    return Verdict(False, BRUTE, witness=witness, witness_value=value, bound_used=bound, nodes=nodes)


def is_numerically_rational(
    config: OrderConfig,
    method: str = AUTO,
    bound: Optional[int] = None,
) -> Verdict:
    method = normalize_method(method)
    report = validate(config)
    if not report.ok:
        raise ValidationFailed(report)
    minimal, tower = minimalize(config)
    if tower.maps:
        logger.info("checking the minimal model: %d curve(s) contracted", len(tower.maps))
    negative = non_nef_vertices(minimal)
    if negative:
        logger.warning("K_A is not nef on the minimal model: K_A . E_i < 0 on %s", negative)
    graph = minimal.graph
    ell = functional(minimal)

    if method == AUTO:
        method = SPECIAL if not special_hypotheses(graph, ell) else BRUTE
    if method == SPECIAL:
        verdict = check_special(graph, ell)
    else:
        verdict = check_bruteforce(graph, ell, bound)

    if verdict.witness_value is not None:
        chi = Fraction(minimal.r2, 2) * verdict.witness_value
        verdict = Verdict(
            verdict.rational, verdict.method, verdict.witness, verdict.witness_value,
            verdict.bound_used, chi, verdict.nodes,
        )
    logger.info("numerical rationality: %s (method %s)", verdict.rational, verdict.method)
    return verdict

"""
core/discrepancy.py
Surface and order discrepancies, crepancy and the log terminal test.

K_{A'} = sigma^* K_A + sum a_i E_i, and sigma^* K_A pairs to zero with every
exceptional curve, so a solves I . a = (K_A . E_j)_j.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from core.errors import PreconditionError, ValidationFailed
from core.lattice import Divisor, is_negative_definite, solve_exact
from core.model import OrderConfig, ResolutionGraph, canonical_dot, unramified, validate

logger = logging.getLogger("numrat.discrepancy")


@dataclass(frozen=True)
class Classification:
    ids: Tuple[str, ...]
    a: Tuple[Fraction, ...]
    alpha: Tuple[Fraction, ...]
    ae: Tuple[Fraction, ...]
    min_ae: Optional[Fraction]
    crepant: bool
    log_terminal: bool
    minimal: bool = True
    warnings: Tuple[str, ...] = field(default_factory=tuple)


def _require_negative_definite(graph: ResolutionGraph) -> None:
    if len(graph) and not is_negative_definite(graph.form):
        raise PreconditionError("intersection form is not negative definite")


def surface_discrepancies(graph: ResolutionGraph) -> Tuple[Fraction, ...]:
    """alpha = -I^{-1} v with v_i = E_i^2 + 2 (rational curves only)."""
    for v in graph.vertices:
        if v.genus:
            raise PreconditionError(
                f"vertex {v.id} has genus {v.genus}; use order_discrepancies on the unramified config"
            )
    _require_negative_definite(graph)
    v = [vx.self_intersection + 2 for vx in graph.vertices]
    return tuple(-x for x in solve_exact(graph.form, v))


def order_discrepancies(config: OrderConfig) -> Tuple[Fraction, ...]:
    report = validate(config)
    if not report.ok:
        raise ValidationFailed(report)
    graph = config.graph
    _require_negative_definite(graph)
    target = [canonical_dot(config, Divisor.basis(vid)) for vid in graph.ids]
    return tuple(solve_exact(graph.form, target))


def non_minimal_vertices(config: OrderConfig) -> List[str]:
    """Genus-0 (-1)-vertices that pair negatively with K_A."""
    out = []
    for v in config.graph.vertices:
        if v.genus == 0 and v.b == 1 and canonical_dot(config, Divisor.basis(v.id)) < 0:
            out.append(v.id)
    return out


def is_minimal(config: OrderConfig) -> bool:
    return not non_minimal_vertices(config)


def non_nef_vertices(config: OrderConfig) -> List[str]:
    return [vid for vid in config.graph.ids if canonical_dot(config, Divisor.basis(vid)) < 0]


def is_nef(config: OrderConfig) -> bool:
    return not non_nef_vertices(config)


def classify(config: OrderConfig) -> Classification:
    a = order_discrepancies(config)
    alpha = order_discrepancies(unramified(config))
    ids = config.graph.ids
    ae = tuple(ai * config.e(vid) for ai, vid in zip(a, ids))
    min_ae = min(ae) if ae else None
    warnings = tuple(
        f"vertex {vid} is a K_A-negative (-1)-curve; the resolution is not minimal"
        for vid in non_minimal_vertices(config)
    )
    for w in warnings:
        logger.warning(w)
    return Classification(
        ids=ids,
        a=a,
        alpha=alpha,
        ae=ae,
        min_ae=min_ae,
        crepant=all(x == 0 for x in a),
        log_terminal=min_ae is None or min_ae > -1,
        minimal=not warnings,
        warnings=warnings,
    )


@lru_cache(maxsize=4096)
def is_log_terminal_graph(graph: ResolutionGraph) -> bool:
    if any(v.genus for v in graph.vertices):
        return False
    if not len(graph):
        return True
    if not is_negative_definite(graph.form):
        return False
    return all(x > -1 for x in surface_discrepancies(graph))

"""
core/adjunction.py
Adjunction for orders: chi(A (x) O_E) = -(r^2/2)(K_A + E).E, plus the
per-curve Euler characteristics it is assembled from.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping

from core.errors import InputError
from core.lattice import Divisor, IntersectionForm, as_fraction, pair
from core.model import OrderConfig, canonical_dot, delta_dot

logger = logging.getLogger("numrat.adjunction")


@dataclass(frozen=True)
class LinearFunctional:
    """l(E) = sum coeff_i * l(E_i); values given per vertex."""

    values: Dict[str, Fraction]

    def __init__(self, values: Mapping[str, Any]) -> None:
        object.__setattr__(self, "values", {str(k): as_fraction(v) for k, v in values.items()})

    @classmethod
    def zero(cls, ids) -> "LinearFunctional":
        return cls({vid: 0 for vid in ids})

    def __call__(self, E: Divisor) -> Fraction:
        total = Fraction(0)
        for vid, c in E.items():
            if vid not in self.values:
                raise InputError(f"functional is not defined on vertex {vid}")
            total += c * self.values[vid]
        return total

    def is_nonpositive(self) -> bool:
        return all(v <= 0 for v in self.values.values())


def g_value(form: IntersectionForm, ell: LinearFunctional, E: Divisor) -> Fraction:
    return -pair(form, E, E) + ell(E)


def f_value(config: OrderConfig, E: Divisor) -> Fraction:
    """-(K_A + E) . E"""
    return -(canonical_dot(config, E) + pair(config.graph.form, E, E))


def _require_positive_cycle(E: Divisor) -> None:
    if E.is_zero():
        raise InputError("divisor must be nonzero")
    if not E.is_effective():
        raise InputError(f"divisor must be effective: {E!r}")
    if not E.is_integral():
        raise InputError(f"divisor must be integral: {E!r}")


def chi_restriction(config: OrderConfig, E: Divisor) -> Fraction:
    _require_positive_cycle(E)
    return Fraction(config.r2, 2) * f_value(config, E)


def chi_of_curve(config: OrderConfig, vid: str) -> Fraction:
    """chi(A (x) O_{E_i}) = (r^2/2)(2 chi(O_{E_i}) - E_i . Delta_A)."""
    g = config.graph.genus(vid)
    return Fraction(config.r2, 2) * (2 * (1 - g) - delta_dot(config, Divisor.basis(vid)))


def chi_via_recursion(config: OrderConfig, E: Divisor) -> Fraction:
    """
    chi(E) = -r^2 E^2 / 2 + sum n_i (r^2 E_i^2 / 2 + chi(E_i)) for E = sum n_i E_i.
    The per-curve terms come from chi_of_curve, so K_A is never paired with E.
    """
    _require_positive_cycle(E)
    form = config.graph.form
    form.check_support(E)
    half = Fraction(config.r2, 2)
    total = -half * pair(form, E, E)
    for vid in config.graph.sort_ids(E.support):
        Ei = Divisor.basis(vid)
        total += E[vid] * (half * pair(form, Ei, Ei) + chi_of_curve(config, vid))
    return total


def cover_euler_char(config: OrderConfig, vertex: str) -> Fraction:
    """
    chi(O) of the cyclic cover of E_vertex, by Riemann-Hurwitz.
    Each ramified component D meeting the curve contributes (1 - 1/min(e, e_D)) per intersection point.
    """
    graph = config.graph
    e = config.e(vertex)
    g = graph.genus(vertex)
    branch = Fraction(0)
    for other, mult in graph.neighbours(vertex).items():
        eD = config.e(other)
        if eD > 1:
            branch += (1 - Fraction(1, min(e, eD))) * mult
    for c in config.curves:
        m = c.meet(vertex)
        if m:
            branch += (1 - Fraction(1, min(e, c.index))) * m
    return e * (1 - g) - Fraction(e, 2) * branch


def chi_A_mod_J(config: OrderConfig, vertex: str) -> Fraction:
    e = config.e(vertex)
    g = config.graph.genus(vertex)
    C = Divisor.basis(vertex)
    C2 = pair(config.graph.form, C, C)
    return Fraction(config.r2, 2 * e) * (2 * (1 - g) - delta_dot(config, C) + (1 - Fraction(1, e)) * C2)

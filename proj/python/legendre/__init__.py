"""Periods, Weierstrass functions and abelian integrals of the Legendre family."""

from ._core import (
    AbelMap,
    Lattice,
    LegendreError,
    compose_theorem_format,
    compute_periods,
    domain_change_growth,
    khovanskii_zero_bound,
    monodromy,
    reduce_lambda,
    run_suite,
)

__all__ = [
    "AbelMap",
    "Lattice",
    "LegendreError",
    "compose_theorem_format",
    "compute_periods",
    "domain_change_growth",
    "khovanskii_zero_bound",
    "monodromy",
    "reduce_lambda",
    "run_suite",
]

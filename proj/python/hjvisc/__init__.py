"""Interval-valued viscosity solutions of first-order Hamilton-Jacobi equations."""

from ._hjvisc import (
    EvalError,
    InputError,
    ParseError,
    PiecewiseFn,
    canonical,
    equal,
    evaluate,
    graph_completion,
    hausdorff_distance,
    is_h_continuous,
    is_s_continuous,
    lattice_inf,
    lattice_sup,
    leq,
    lower_envelope,
    lower_part,
    run,
    solve,
    upper_envelope,
    upper_part,
    verify_interval_solution,
    verify_subsolution,
    verify_supersolution,
)

__all__ = [name for name in dir() if not name.startswith("_")]

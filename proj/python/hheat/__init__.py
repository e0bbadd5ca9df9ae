"""Steady states and heat currents of boundary-driven harmonic lattices."""

import json

from ._core import (
    BathSpec,
    ChainClosedForm,
    ChainParams,
    ConfigError,
    DimensionError,
    DomainError,
    Error,
    IntegrationError,
    InvariantViolation,
    LatticeSpec,
    SingularSystemError,
    SolverError,
    ValidationError,
    build_generator,
    chain_closed_form,
    chain_current,
    dimension_study,
    evolve,
    fit_loglog,
    lattice_current,
    make_report,
    occupation_from_temperature,
    profile_study,
    run_checks,
    run_cli,
    solve_steady_state,
    sweep_dephasing,
    sweep_length,
    temperature_from_occupation,
    transverse_coherence_norm,
    validate_spec,
)

__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]


def spec_from_dict(d):
    """LatticeSpec from the same mapping accepted under "spec" in a run config."""
    return LatticeSpec.from_json(json.dumps(d))


def steady(spec, method="direct", tol=1e-10):
    """Solve and summarise one spec: returns (SteadyState, ObservableReport)."""
    if isinstance(spec, dict):
        spec = spec_from_dict(spec)
    G = build_generator(spec)
    ss = solve_steady_state(G, method=method, tol=tol)
    return ss, make_report(ss.C, G)


__all__ += ["spec_from_dict", "steady"]

"""Conformal analysis of lifted vector fields on tangent bundles."""

import json as _json

from ._liftlab import (
    ConfigError,
    CrossCheckError,
    DomainError,
    Expr,
    Field,
    GeometryError,
    LiftlabError,
    Manifold,
    ParseError,
    __version__,
    affine_field,
    catalog_fields,
    catalog_lift,
    catalog_manifolds,
    christoffel,
    classify,
    curvature,
    general_field,
    lie_derivative,
    lift,
    lift_metric,
    metric,
    nonlinear_connection,
    signature,
)
from ._liftlab import catalog_listing as _catalog_listing
from ._liftlab import run_config as _run_config


def catalog():
    """Catalog entries (manifolds, base fields, affine fields) as dicts."""
    return [_json.loads(line) for line in _catalog_listing().splitlines() if line.strip()]


def run(config, command="analyze", suites=()):
    """Runs a config given as a dict or JSON text; returns (exit_code, report dict)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    code, report = _run_config(text, command, list(suites))
    return code, _json.loads(report)


__all__ = [name for name in dir() if not name.startswith("_")]

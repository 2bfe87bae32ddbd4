"""Bakry-Emery curvature, spectra and isoperimetric constants of weighted graphs."""

import json

from ._curvegraph import (
    CurvegraphError,
    Graph,
    build_graph,
    cd_check,
    cheeger,
    curvature,
    curvature_profile,
    from_json,
    gamma,
    gamma2,
    generate,
    heat,
    multiway,
    product,
    report_json,
    run_cli,
    spectrum,
)


def verify(g, k_max=4, **options):
    """Full inequality report as a dict."""
    return json.loads(report_json(g, k_max, **options))


__all__ = [
    "CurvegraphError",
    "Graph",
    "build_graph",
    "cd_check",
    "cheeger",
    "curvature",
    "curvature_profile",
    "from_json",
    "gamma",
    "gamma2",
    "generate",
    "heat",
    "multiway",
    "product",
    "report_json",
    "run_cli",
    "spectrum",
    "verify",
]

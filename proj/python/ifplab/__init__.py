"""Python access to the ifplab library."""

import json

from ._core import (
    IfpError,
    __version__,
    egf_coeffs,
    hazard_ratio,
    hazard_ratio_exact,
    indep_deg2_count,
    kneser_params,
    matching_stop_distribution,
    r0_pmf,
    r0_pmf_exact,
)
from ._core import run_experiment as _run_experiment


def run_experiment(experiment, **options):
    """Run an experiment and return the parsed summary."""
    opts = {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in options.items()}
    return json.loads(_run_experiment(experiment, opts))


__all__ = [
    "IfpError",
    "__version__",
    "egf_coeffs",
    "hazard_ratio",
    "hazard_ratio_exact",
    "indep_deg2_count",
    "kneser_params",
    "matching_stop_distribution",
    "r0_pmf",
    "r0_pmf_exact",
    "run_experiment",
]

"""Secrecy-rate optimization and Monte-Carlo evaluation for the CTSF
(conceal-truth-show-fake) transmission scheme.

Everything lives in the compiled extension ``_ctsf``; this package re-exports
it and adds small dict-based conveniences on top of the JSON config format
shared with the CLI.
"""

import json as _json

try:
    from ._ctsf import *  # noqa: F401,F403  (installed package layout)
    from . import _ctsf as _impl
except ImportError:  # build-tree layout: the extension sits on sys.path
    from _ctsf import *  # type: ignore  # noqa: F401,F403
    import _ctsf as _impl

__version__ = _impl.__version__

_RECORD_FIELDS = (
    "sweep_value",
    "method",
    "mean_sum_secrecy",
    "mean_intercept_sinr",
    "mean_decoy_sinr",
    "interception_prob",
    "deception_prob",
    "feasible_fraction",
    "trials",
    "stderr_secrecy",
)


def scenario_from_dict(config):
    """Build a Scenario from a dict in the CLI config format."""
    return _impl.scenario_from_json(_json.dumps(config))


def scenario_to_dict(scenario):
    """Scenario back to a plain dict (round-trip stable with the above)."""
    return _json.loads(_impl.scenario_to_json(scenario))


def record_to_dict(record):
    """MetricsRecord as a plain dict, fields in CSV column order."""
    return {name: getattr(record, name) for name in _RECORD_FIELDS}

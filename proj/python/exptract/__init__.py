"""Python front end for the exptract core.

Sequence descriptors are plain dicts, e.g. {"family": "ExpPower", "alpha": 1, "beta": 1}.
"""
import json

from ._exptract import ExptractError
from . import _exptract as _core

__all__ = ["ExptractError", "j_of_eps", "d_of_eps", "count", "brute_force_count",
           "top_costs", "classify", "run"]


def _d(desc):
    return desc if isinstance(desc, str) else json.dumps(desc)


def j_of_eps(lam, E):
    return _core.j_of_eps(_d(lam), E)


def d_of_eps(gam, E):
    return _core.d_of_eps(_d(gam), E)


def count(lam, gam, E, d, node_budget=100_000_000):
    """Returns (count, nodes_visited, truncated_dimension); count is an exact int."""
    return _core.count(_d(lam), _d(gam), E, d, node_budget)


def brute_force_count(lam, gam, E, d, box):
    return _core.brute_force_count(_d(lam), _d(gam), E, d, box)


def top_costs(lam, gam, d, k):
    """log(1/eigenvalue) of the k largest eigenvalues, ascending."""
    return _core.top_costs(_d(lam), _d(gam), d, k)


def classify(lam, gam, notion, s=1.0, t=1.0):
    return json.loads(_core.classify(_d(lam), _d(gam), notion, s, t))


def run(command, config, base_dir="."):
    """Run a CLI subcommand on a config dict. Returns (exit_code, output_text)."""
    return _core.run(command, _d(config), base_dir)

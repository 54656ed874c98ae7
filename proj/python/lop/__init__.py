"""p-adic L-operators of quaternionic arithmetic groups.

Every function returns the same JSON document as the command-line tool, decoded into a dict.
The key ``exit_code`` carries the status the tool would exit with.
"""

import json

from . import _core
from ._core import BudgetExceeded, DomainError, PrecisionError

__all__ = ["fdomain", "basis", "linv", "slopes", "render_table", "BudgetExceeded", "DomainError", "PrecisionError"]


def _decode(report):
    out = json.loads(report.json)
    out["exit_code"] = report.exit_code
    return out


def fdomain(p, nminus, nplus=1, cache_dir="", seed=0, splitting_variant=0):
    return _decode(_core.fdomain(p, nminus, nplus, cache_dir, seed, splitting_variant))


def basis(p, nminus, weights, prec=10, nplus=1, cache_dir=""):
    return _decode(_core.basis(p, nminus, list(weights), prec, nplus, cache_dir))


def linv(p, nminus, weight, prec=10, nplus=1, cache_dir="", splitting_variant=0, base_point_variant=0,
         base_vertex_variant=0):
    return _decode(_core.linv(p, nminus, weight, prec, nplus, cache_dir, splitting_variant, base_point_variant,
                              base_vertex_variant))


def slopes(p, nminus, weights, prec=20, nplus=1, cache_dir="", budget_secs=0.0):
    return _decode(_core.slopes(p, nminus, list(weights), prec, nplus, cache_dir, budget_secs))


def render_table(command, document):
    doc = {k: v for k, v in document.items() if k != "exit_code"}
    return _core.render_table(command, json.dumps(doc))

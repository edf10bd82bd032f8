"""Achievable rate-distortion regions for state-dependent wiretap channels.

Thin dict-in/dict-out wrappers over the compiled core; payload schemas are
identical to the CLI's JSON file formats.
"""

import json as _json

from . import _core

__all__ = [
    "gauss_eval",
    "gauss_frontier",
    "dmc_eval",
    "dmc_search",
    "fme_scheme",
    "simulate",
]


def gauss_eval(scenario, params, mode=None):
    return _json.loads(
        _core.gauss_eval_json(_json.dumps(scenario), _json.dumps(params), mode or ""))


def gauss_frontier(scenario, mode=None, budget=200000, seed=1):
    return _json.loads(_core.gauss_frontier_json(_json.dumps(scenario), mode or "", budget, seed))


def dmc_eval(scenario, aux, mode=None):
    return _json.loads(_core.dmc_eval_json(_json.dumps(scenario), _json.dumps(aux), mode or ""))


def dmc_search(scenario, mode=None, nu=2, nv=2, budget=20000, seed=1):
    return _json.loads(
        _core.dmc_search_json(_json.dumps(scenario), mode or "", nu, nv, budget, seed))


def fme_scheme(i_us, i_uvs, i_vxz_u, i_uvy, i_vy_u):
    return _json.loads(_core.fme_scheme_json(i_us, i_uvs, i_vxz_u, i_uvy, i_vy_u))


def simulate(experiment):
    return _json.loads(_core.simulate_json(_json.dumps(experiment)))

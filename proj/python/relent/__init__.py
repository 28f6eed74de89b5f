# Copyright 2026 The relent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the relent toolkit."""

import json

from ._core import (
    PreconditionError,
    apply_channel,
    contour_grid,
    geometry_balance,
    geometry_presets,
    gibbs_state,
    monotonicity_gap,
    partial_trace,
    random_channel,
    random_density_matrix,
    relative_entropy,
    run_cli,
    trace_distance,
    verify_channel,
    von_neumann_entropy,
)
from . import _core

__all__ = [
    "PreconditionError",
    "apply_channel",
    "contour_grid",
    "flipped_reference",
    "geometry_balance",
    "geometry_presets",
    "gibbs_state",
    "lightcone_run",
    "monotonicity_gap",
    "partial_trace",
    "random_channel",
    "random_density_matrix",
    "relative_entropy",
    "run_cli",
    "secondlaw_ledger",
    "trace_distance",
    "verify_channel",
    "von_neumann_entropy",
]


def _matrix(m):
    """Matrix in the {re, im} layout used by the JSON configs."""
    import numpy as np

    a = np.asarray(m, dtype=complex)
    return {"rows": a.shape[0], "cols": a.shape[1], "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def secondlaw_ledger(ensemble, rho, kraus, tolerance=1e-8):
    """Second-law ledger for rho -> N(rho). `ensemble` is a config-style dict;
    numpy arrays under H, N and generalized observables are accepted."""
    spec = dict(ensemble)
    for key in ("H", "N"):
        if key in spec and not isinstance(spec[key], dict):
            spec[key] = _matrix(spec[key])
    if "generalized" in spec:
        spec["generalized"] = [
            {"weight": t["weight"], "observable": t["observable"] if isinstance(t["observable"], dict) else _matrix(t["observable"])}
            for t in spec["generalized"]
        ]
    return _core._secondlaw_ledger(json.dumps(spec), rho, list(kraus), tolerance)


def lightcone_run(chain, region, steps, rho0=None):
    """Runs the causal-diamond schedule; `chain` is a dict with n_sites, fields,
    beta, lambda, gate_time. Starts from the reference state when rho0 is None."""
    return _core._lightcone_run(json.dumps(chain), region[0], region[1], steps, rho0)


def flipped_reference(chain, site):
    """Reference state of the chain with one site replaced by |1><1|."""
    return _core._flipped_reference(json.dumps(chain), site)

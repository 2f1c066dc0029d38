# SPDX-License-Identifier: Apache-2.0
#
# arisac: covert beamforming for active-RIS-aided NOMA-ISAC systems
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------


"""Covert rate beamforming for active-RIS-aided NOMA-ISAC systems.

Configs and solutions are plain dicts with the same layout as the JSON files read by the
``arisac`` command-line tool.
"""

import json

import numpy as np

from . import _core

__all__ = [
    "beampattern",
    "desk_config",
    "derive_seed",
    "fisher_information",
    "kappa_from_epsilon",
    "kl_divergence",
    "min_dep",
    "minimum_crb",
    "normalize_config",
    "full_config",
    "run_experiment",
    "sic_admissible",
    "solve",
    "steering_vector",
    "transmit_problem",
    "verify",
]

kappa_from_epsilon = _core.kappa_from_epsilon
kl_divergence = _core.kl_divergence
min_dep = _core.min_dep
steering_vector = _core.steering_vector
derive_seed = _core.derive_seed


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def desk_config():
    return json.loads(_core.desk_config())


def full_config():
    return json.loads(_core.full_config())


def normalize_config(config):
    """Fills defaults and validates; raises ValueError on unknown keys or bad values."""
    return json.loads(_core.normalize_config(_dump(config)))


def solve(config, seed):
    """Runs the alternating optimization on one channel realization. Returns a solution dict
    with an extra ``trace`` list."""
    return json.loads(_core.solve(_dump(config), int(seed)))


def verify(solution):
    return json.loads(_core.verify(_dump(solution)))


def beampattern(solution, step=0.5):
    """(angles_deg, gain_db, maxima_deg) of the solution's transmit covariance, or of a
    covariance matrix passed directly."""
    if isinstance(solution, np.ndarray):
        a, g, m = _core.beampattern_of_covariance(np.asarray(solution, dtype=complex), step)
    else:
        a, g, m = _core.beampattern(_dump(solution), step)
    return np.asarray(a), np.asarray(g), list(m)


def minimum_crb(config, power=None):
    return _core.minimum_crb(_dump(config), power)


def fisher_information(config, R):
    return _core.fisher_information(_dump(config), np.asarray(R, dtype=complex))


def sic_admissible(config, seed):
    return _core.sic_admissible(_dump(config), int(seed))


def transmit_problem(config, seed, phi=None):
    """The transmit relaxation at a fixed reflection vector, as a solver-neutral dict, and the
    (status, objective) the native solver reaches on it."""
    p = None if phi is None else np.asarray(phi, dtype=complex)
    problem = json.loads(_core.transmit_problem(_dump(config), int(seed), p))
    status, objective = _core.solve_transmit_problem(_dump(config), int(seed), p)
    return problem, status, objective


def run_experiment(spec, workers=0, output_dir=""):
    return json.loads(_core.run_experiment(_dump(spec), int(workers), str(output_dir)))

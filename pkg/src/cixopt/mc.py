"""Monte Carlo cross-check of the copula quantities.

Simulates correlated defaults under the one-factor Gaussian copula with the
same conditional default probability the quadrature integrates, so any
disagreement points at the integration, not the model.

Paths are generated in fixed-size chunks, each on its own Philox stream jumped
from the base seed.  Estimates are therefore bit-identical for a given
(seed, n_paths, antithetic) no matter how the chunks would be scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .copula import COMONOTONE_EPS, CopulaParams, conditional_default_prob

CHUNK_PATHS = 1 << 16


@dataclass(frozen=True)
class McConfig:
    n_paths: int
    seed: int
    antithetic: bool = False

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")
        if self.antithetic and self.n_paths % 2:
            raise ValueError("antithetic sampling needs an even n_paths")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int


def _exact(value: float, cfg: McConfig) -> McEstimate:
    return McEstimate(mean=value, std_error=0.0, n_paths=cfg.n_paths)


def _simulate(params: CopulaParams, cfg: McConfig, path_stat: Callable) -> McEstimate:
    """Chunked simulation of ``path_stat(all_defaulted, default_count)`` per path.

    With antithetic sampling each drawn path is mirrored (-m, 1-u) and the pair
    average is the sampling unit, so the standard error is computed over pairs.
    """
    n = params.n_names
    base = np.random.Philox(key=cfg.seed)
    pairing = 2 if cfg.antithetic else 1
    units_left = cfg.n_paths // pairing
    acc_sum = 0.0
    acc_sq = 0.0
    n_units = units_left
    chunk = 0
    while units_left > 0:
        k = min(CHUNK_PATHS // pairing, units_left)
        rng = np.random.Generator(base.jumped(chunk))
        m = rng.standard_normal(k)
        u = rng.random((k, n))
        values = _stat_values(params, m, u, path_stat)
        if cfg.antithetic:
            values = 0.5 * (values + _stat_values(params, -m, 1.0 - u, path_stat))
        acc_sum += float(values.sum())
        acc_sq += float((values * values).sum())
        units_left -= k
        chunk += 1
    mean = acc_sum / n_units
    variance = max(acc_sq / n_units - mean * mean, 0.0)
    std_error = math.sqrt(variance / n_units) if n_units > 1 else math.inf
    return McEstimate(mean=mean, std_error=std_error, n_paths=cfg.n_paths)


def _stat_values(params: CopulaParams, m, u, path_stat) -> np.ndarray:
    pi = conditional_default_prob(params, m)
    defaulted = u < pi[:, None]
    all_defaulted = defaulted.all(axis=1)
    count = defaulted.sum(axis=1)
    return path_stat(all_defaulted, count)


def simulate_armageddon(params: CopulaParams, cfg: McConfig) -> McEstimate:
    """Estimate the all-names-default probability at the horizon.

    At the comonotone endpoint the indicator is a deterministic function of the
    factor and equals the single-name default event, so the known probability
    is returned with zero error, matching the quadrature's closed form.
    """
    if params.default_prob <= 0.0:
        return _exact(0.0, cfg)
    if params.rho >= 1.0 - COMONOTONE_EPS:
        return _exact(params.default_prob, cfg)
    return _simulate(params, cfg, lambda all_def, count: all_def.astype(float))


def simulate_loss_given_no_armageddon(params: CopulaParams, cfg: McConfig, recovery: float) -> McEstimate:
    """Estimate the expected portfolio loss restricted to no-wipe-out paths.

    Closed-form counterpart: (1-R) * (p - q_arm).
    """
    if params.default_prob <= 0.0 or params.rho >= 1.0 - COMONOTONE_EPS:
        # every defaulting path is a wipe-out in the comonotone limit
        return _exact(0.0, cfg)
    lgd = 1.0 - recovery
    n = params.n_names

    def stat(all_def, count):
        return lgd * (count / n) * ~all_def

    return _simulate(params, cfg, stat)

"""Shared helpers for sampling test points in and around the capacity region."""

import numpy as np

from macalloc import ChannelConfig, constraint_table


def random_config(rng, m, lo=0.5, hi=2.0, noise=1.0) -> ChannelConfig:
    return ChannelConfig(tuple(rng.uniform(lo, hi, m)), noise)


def min_slack(config, points) -> np.ndarray:
    """Minimum constraint slack for each row of ``points`` (shape (n, M))."""
    membership, capacities = constraint_table(config)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return (capacities[:, None] - membership @ pts.T).min(axis=0)


def boundary_scale(config, direction) -> float:
    """Largest t with t * direction still inside the region (direction >= 0)."""
    membership, capacities = constraint_table(config)
    loads = membership @ np.asarray(direction, dtype=float)
    positive = loads > 0
    if not positive.any():
        return np.inf
    return float((capacities[positive] / loads[positive]).min())


def random_feasible(rng, config) -> np.ndarray:
    direction = rng.uniform(0.05, 1.0, config.num_users)
    return direction * boundary_scale(config, direction) * rng.uniform(0.0, 1.0)


def random_infeasible(rng, config) -> np.ndarray:
    direction = rng.uniform(0.05, 1.0, config.num_users)
    return direction * boundary_scale(config, direction) * rng.uniform(1.02, 2.5)


def batch_feasible(config, points, tol=1e-9) -> np.ndarray:
    """Vectorized brute-force feasibility for each row of ``points``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ok_nonneg = (pts >= -tol).all(axis=1)
    return ok_nonneg & (min_slack(config, pts) >= -tol)

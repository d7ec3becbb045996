"""Fuzzy C-means clustering (standard Bezdek alternating updates).

Each point holds a graded membership in every cluster; memberships per point
sum to 1. Fitting alternates centroid and membership updates until the
largest membership change drops below `eps` or `max_iter` is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

DEFAULT_M = 2.0
DEFAULT_EPS = 1e-5
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class FcmModel:
    centroids: np.ndarray  # (c, d)
    m: float
    memberships: np.ndarray  # (n, c), rows sum to 1
    objective: float
    iterations: int
    converged: bool
    # objective after each completed iteration; non-increasing by construction
    objective_history: tuple[float, ...] = field(default=())

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]


def _memberships(points: np.ndarray, centroids: np.ndarray, m: float) -> np.ndarray:
    """Membership update for fixed centroids.

    u[i, k] = 1 / sum_j (d_ik / d_ij)^(2/(m-1)) with Euclidean d. Points that
    coincide with one or more centroids take membership 1/(number of
    coincident centroids) on those and 0 elsewhere.
    """
    d = np.sqrt(((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2))
    zero = d == 0.0
    coincident = zero.any(axis=1)

    u = np.zeros_like(d)
    regular = ~coincident
    if regular.any():
        power = np.power(d[regular], -2.0 / (m - 1.0))
        u[regular] = power / power.sum(axis=1, keepdims=True)
    if coincident.any():
        hits = zero[coincident].astype(np.float64)
        u[coincident] = hits / hits.sum(axis=1, keepdims=True)
    return u


def _objective(points, centroids, memberships, m) -> float:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return float((memberships**m * d2).sum())


def _validate_points(points: np.ndarray) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise InvalidArgumentError(f"points must be a non-empty N x D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("points contain non-finite coordinates")
    return arr


def fcm_fit(
    points: np.ndarray,
    c: int,
    m: float = DEFAULT_M,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
    init: np.ndarray | None = None,
) -> FcmModel:
    """Fit a fuzzy C-means model.

    Memberships are initialized from a generator seeded with `seed` (rows
    normalized) unless `init` supplies an explicit starting matrix, which
    makes label-permutation experiments reproducible. Deterministic for a
    fixed (points, c, m, eps, max_iter, seed/init).
    """
    x = _validate_points(points)
    n = x.shape[0]
    if not 1 <= c <= n:
        raise InvalidArgumentError(f"cluster count must satisfy 1 <= c <= {n}, got {c}")
    if m <= 1.0:
        raise InvalidArgumentError(f"fuzzifier must be > 1, got {m}")
    if eps <= 0.0:
        raise InvalidArgumentError(f"convergence tolerance must be > 0, got {eps}")
    if max_iter < 1:
        raise InvalidArgumentError(f"max_iter must be >= 1, got {max_iter}")

    if init is not None:
        u = np.asarray(init, dtype=np.float64)
        if u.shape != (n, c):
            raise InvalidArgumentError(f"init memberships must be {n} x {c}, got {u.shape}")
        u = u / u.sum(axis=1, keepdims=True)
    else:
        rng = np.random.default_rng(seed)
        u = rng.random((n, c))
        u /= u.sum(axis=1, keepdims=True)

    centroids = np.zeros((c, x.shape[1]))
    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        um = u**m
        weights = um.sum(axis=0)
        fresh = (um.T @ x) / np.where(weights == 0.0, 1.0, weights)[:, None]
        # A cluster can lose all mass under the coincidence rule; keep its
        # previous centroid rather than collapsing it to the origin.
        centroids = np.where(weights[:, None] == 0.0, centroids, fresh)

        new_u = _memberships(x, centroids, m)
        delta = float(np.abs(new_u - u).max())
        u = new_u
        history.append(_objective(x, centroids, u, m))
        if delta < eps:
            converged = True
            break

    centroids.setflags(write=False)
    u.setflags(write=False)
    return FcmModel(
        centroids=centroids,
        m=m,
        memberships=u,
        objective=history[-1],
        iterations=iterations,
        converged=converged,
        objective_history=tuple(history),
    )


def fcm_objective(model: FcmModel, points: np.ndarray) -> float:
    """J_m = sum_i sum_k u_ik^m ||x_i - v_k||^2 for the model's memberships."""
    x = _validate_points(points)
    if x.shape[0] != model.memberships.shape[0]:
        raise InvalidArgumentError(
            f"model holds {model.memberships.shape[0]} membership rows, got {x.shape[0]} points"
        )
    if x.shape[1] != model.centroids.shape[1]:
        raise InvalidArgumentError(
            f"dimension mismatch: centroids are {model.centroids.shape[1]}-D, points {x.shape[1]}-D"
        )
    return _objective(x, model.centroids, model.memberships, model.m)


def fcm_assign(model: FcmModel, point: np.ndarray) -> np.ndarray:
    """Membership vector of one point under frozen centroids; sums to 1."""
    p = np.asarray(point, dtype=np.float64)
    if p.ndim != 1 or p.shape[0] != model.centroids.shape[1]:
        raise InvalidArgumentError(
            f"point must be {model.centroids.shape[1]}-D, got shape {p.shape}"
        )
    if not np.all(np.isfinite(p)):
        raise InvalidArgumentError("point contains non-finite coordinates")
    return _memberships(p[None, :], model.centroids, model.m)[0]

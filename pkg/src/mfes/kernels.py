"""Covariance functions over parameters and (fidelity, parameter) pairs."""

from __future__ import annotations

import numpy as np

from .validation import check_augmented


class RationalQuadratic:
    """Rational quadratic covariance with per-dimension lengthscales.

    .. math::

        k(x, x') = \\sigma^2 \\left(1 + \\frac{r^2}{2\\alpha}\\right)^{-\\alpha},
        \\qquad r^2 = \\sum_d \\left(\\frac{x_d - x'_d}{\\ell_d}\\right)^2

    The shape parameter ``alpha`` mixes lengthscales: small values keep heavy
    tails (long-range correlation alongside short-range detail), while
    ``alpha -> inf`` recovers the squared exponential.

    Parameters
    ----------
    variance : float
        Signal variance ``sigma^2``, strictly positive.
    alpha : float
        Shape parameter, strictly positive.
    lengthscales : array-like
        Per-dimension lengthscales ``ell_d``, strictly positive. Length sets
        the input dimension.
    """

    def __init__(self, variance, alpha, lengthscales):
        variance = float(variance)
        alpha = float(alpha)
        lengthscales = np.atleast_1d(np.asarray(lengthscales, dtype=float))
        if not np.isfinite(variance) or variance <= 0.0:
            raise ValueError("variance must be a strictly positive finite number")
        if not np.isfinite(alpha) or alpha <= 0.0:
            raise ValueError("alpha must be a strictly positive finite number")
        if lengthscales.ndim != 1 or lengthscales.size == 0:
            raise ValueError("lengthscales must be a non-empty 1-D array")
        if not np.all(np.isfinite(lengthscales)) or np.any(lengthscales <= 0.0):
            raise ValueError("lengthscales must be strictly positive finite numbers")
        self.variance = variance
        self.alpha = alpha
        self.lengthscales = lengthscales

    @property
    def n_dims(self) -> int:
        return int(self.lengthscales.size)

    def _as_matrix(self, X, name: str) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.ndim != 2 or X.shape[1] != self.n_dims:
            raise ValueError(
                f"{name} must have {self.n_dims} columns, got shape {X.shape}"
            )
        if not np.all(np.isfinite(X)):
            raise ValueError(f"{name} must be finite")
        return X

    def __call__(self, X1, X2=None) -> np.ndarray:
        """Covariance matrix between two sets of row vectors."""
        X1 = self._as_matrix(X1, "X1")
        X2 = X1 if X2 is None else self._as_matrix(X2, "X2")
        # Explicit differences rather than the (a^2 + b^2 - 2ab) expansion:
        # coincident inputs then give r2 == 0.0 exactly, so k(x, x) == variance
        # without rounding residue. Sizes in this package stay small enough
        # that the O(n1*n2*d) broadcast is cheap.
        diff = (X1[:, None, :] - X2[None, :, :]) / self.lengthscales
        r2 = np.sum(diff * diff, axis=-1)
        return self.variance * np.power(1.0 + r2 / (2.0 * self.alpha), -self.alpha)

    def diag(self, X) -> np.ndarray:
        X = self._as_matrix(X, "X")
        return np.full(X.shape[0], self.variance)

    def __repr__(self):
        return (
            f"RationalQuadratic(variance={self.variance!r}, alpha={self.alpha!r}, "
            f"lengthscales={self.lengthscales.tolist()!r})"
        )


class MultiFidelityKernel:
    """Additive two-fidelity covariance over augmented inputs.

    .. math::

        k\\big((\\delta_i, x_i), (\\delta_j, x_j)\\big)
            = k_{sim}(x_i, x_j) + \\delta_i \\delta_j \\, k_{err}(x_i, x_j)

    The indicator product switches the error covariance on only when *both*
    evaluations come from the real system, so pairs of real observations
    covary through the simulation term and the sim-to-real error term, while
    any pair involving a simulation covaries through the simulation term
    alone.

    Parameters
    ----------
    k_sim : RationalQuadratic
        Covariance of the simulation objective.
    k_err : RationalQuadratic
        Covariance of the sim-to-real error. Must share ``k_sim``'s dimension.
    """

    def __init__(self, k_sim: RationalQuadratic, k_err: RationalQuadratic):
        if k_sim.n_dims != k_err.n_dims:
            raise ValueError(
                f"k_sim expects {k_sim.n_dims} dims but k_err expects {k_err.n_dims}"
            )
        self.k_sim = k_sim
        self.k_err = k_err

    @property
    def n_dims(self) -> int:
        return self.k_sim.n_dims

    def __call__(self, A1, A2=None) -> np.ndarray:
        A1 = check_augmented(A1, self.n_dims)
        A2 = A1 if A2 is None else check_augmented(A2, self.n_dims)
        d1, X1 = A1[:, 0], A1[:, 1:]
        d2, X2 = A2[:, 0], A2[:, 1:]
        return self.k_sim(X1, X2) + np.outer(d1, d2) * self.k_err(X1, X2)

    def diag(self, A) -> np.ndarray:
        A = check_augmented(A, self.n_dims)
        return self.k_sim.diag(A[:, 1:]) + A[:, 0] * self.k_err.diag(A[:, 1:])

    def __repr__(self):
        return f"MultiFidelityKernel(k_sim={self.k_sim!r}, k_err={self.k_err!r})"

"""Gaussian-process surrogate over augmented (fidelity, parameter) inputs.

The model couples a simulation objective and the real objective through one
GP: the prior mean is ``mu_sim + delta * mu_err`` and the covariance is the
additive :class:`~mfes.kernels.MultiFidelityKernel`. Observations from either
fidelity therefore inform predictions at both, with real observations tied
together by the extra error component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, column_or_1d

from .kernels import MultiFidelityKernel, RationalQuadratic
from .validation import REAL, check_augmented

__all__ = [
    "ModelFitError",
    "MultiFidelityGP",
    "KernelParams",
    "ModelParams",
    "build_gp",
    "default_model_params",
    "safe_cholesky",
]


class ModelFitError(RuntimeError):
    """Gram matrix could not be factorized even after jitter escalation.

    Signals ill-conditioned hyperparameters (for example, near-duplicate
    observations with zero noise and a huge signal variance).
    """


# Relative jitter ladder: a clean factorization is attempted first, then
# diagonal jitter starting at 1e-10 * sigma_sim^2 and escalating tenfold up
# to 1e-4 * sigma_sim^2.
_JITTER_LADDER = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)


def safe_cholesky(K: np.ndarray, scale: float) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of ``K`` with escalating diagonal jitter.

    Parameters
    ----------
    K : ndarray of shape (n, n)
        Symmetric positive semi-definite matrix.
    scale : float
        Reference variance; jitter levels are multiples of it.

    Returns
    -------
    L : ndarray
        Lower-triangular factor of ``K + jitter * I``.
    jitter : float
        The absolute jitter that was required (0.0 in the usual case).

    Raises
    ------
    ModelFitError
        If no ladder level yields a positive-definite matrix.
    """
    n = K.shape[0]
    if n == 0:
        return np.zeros((0, 0)), 0.0
    for level in _JITTER_LADDER:
        jitter = level * scale
        try:
            if jitter == 0.0:
                L = np.linalg.cholesky(K)
            else:
                L = np.linalg.cholesky(K + jitter * np.eye(n))
        except np.linalg.LinAlgError:
            continue
        return L, jitter
    raise ModelFitError(
        f"Cholesky factorization failed for a {n}x{n} Gram matrix even with "
        f"jitter {_JITTER_LADDER[-1] * scale:g}; hyperparameters are ill-conditioned"
    )


class MultiFidelityGP(RegressorMixin, BaseEstimator):
    """GP regressor over augmented inputs ``[delta, x_1, ..., x_d]``.

    Parameters
    ----------
    kernel_sim : RationalQuadratic
        Covariance of the simulation component.
    kernel_err : RationalQuadratic
        Covariance of the sim-to-real error component.
    mean_sim : float, default=0.0
        Constant prior mean of the simulation objective.
    mean_err : float, default=0.0
        Constant prior mean of the sim-to-real error; the real-fidelity prior
        mean is ``mean_sim + mean_err``.
    noise_sim : float, default=0.05
        Observation noise standard deviation for simulation evaluations.
    noise_real : float, default=0.05
        Observation noise standard deviation for real evaluations.

    Attributes
    ----------
    X_ : ndarray of shape (n, 1 + d)
        Training inputs (augmented).
    y_ : ndarray of shape (n,)
        Training targets.
    L_ : ndarray of shape (n, n)
        Cholesky factor of the noisy Gram matrix.
    alpha_ : ndarray of shape (n,)
        Precomputed weights ``K^-1 (y - prior_mean)``.
    jitter_ : float
        Diagonal jitter that the factorization required.

    Examples
    --------
    >>> k = RationalQuadratic(1.0, 0.25, [1.0])
    >>> gp = MultiFidelityGP(k, RationalQuadratic(1.0, 0.25, [1.0]))
    >>> gp.fit([[0.0, 0.5]], [2.0]).predict([[0.0, 0.5]])
    array([...])
    """

    def __init__(
        self,
        kernel_sim: RationalQuadratic | None = None,
        kernel_err: RationalQuadratic | None = None,
        mean_sim: float = 0.0,
        mean_err: float = 0.0,
        noise_sim: float = 0.05,
        noise_real: float = 0.05,
    ):
        self.kernel_sim = kernel_sim
        self.kernel_err = kernel_err
        self.mean_sim = mean_sim
        self.mean_err = mean_err
        self.noise_sim = noise_sim
        self.noise_real = noise_real

    # ------------------------------------------------------------------
    # fitting

    def _resolve_kernels(self, n_dims: int) -> MultiFidelityKernel:
        k_sim = self.kernel_sim
        k_err = self.kernel_err
        if k_sim is None:
            k_sim = RationalQuadratic(1.0, 0.25, np.ones(n_dims))
        if k_err is None:
            k_err = RationalQuadratic(1.0, 0.25, np.ones(n_dims))
        kernel = MultiFidelityKernel(k_sim, k_err)
        if kernel.n_dims != n_dims:
            raise ValueError(
                f"kernels expect {kernel.n_dims} parameter dims, data has {n_dims}"
            )
        return kernel

    def _prior_mean(self, A: np.ndarray) -> np.ndarray:
        return self.mean_sim + A[:, 0] * self.mean_err

    def _noise_std(self, A: np.ndarray) -> np.ndarray:
        return np.where(A[:, 0] == float(REAL), self.noise_real, self.noise_sim)

    def observation_noise(self, fidelity) -> float:
        """Observation noise standard deviation for one fidelity flag."""
        return float(self.noise_real if int(fidelity) == REAL else self.noise_sim)

    def fit(self, X, y):
        """Condition the GP on observations.

        An empty design (``n == 0``) is allowed and yields the prior, which
        is how optimization campaigns start.
        """
        for name in ("noise_sim", "noise_real"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be a finite non-negative number")

        X = check_augmented(X, allow_empty=True)
        n = X.shape[0]
        y = np.asarray(y, dtype=float).ravel() if n == 0 else column_or_1d(y)
        if y.shape[0] != n:
            raise ValueError(f"X has {n} rows but y has {y.shape[0]} entries")
        if n and not np.all(np.isfinite(y)):
            raise ValueError("targets must be finite")
        if self.kernel_sim is None and n == 0:
            raise ValueError(
                "cannot infer the parameter dimension from an empty design; "
                "pass kernel_sim explicitly"
            )

        n_dims = (
            X.shape[1] - 1 if n else self.kernel_sim.n_dims  # type: ignore[union-attr]
        )
        if n == 0:
            X = X.reshape(0, n_dims + 1)
        self.kernel_ = self._resolve_kernels(n_dims)
        self.n_dims_ = n_dims
        self.n_features_in_ = n_dims + 1

        K = self.kernel_(X) if n else np.zeros((0, 0))
        if n:
            K = K + np.diag(self._noise_std(X) ** 2)
        self.L_, self.jitter_ = safe_cholesky(K, self.kernel_.k_sim.variance)
        self.X_ = X
        self.y_ = y.astype(float)
        resid = self.y_ - self._prior_mean(X)
        self.alpha_ = (
            cho_solve((self.L_, True), resid) if n else np.zeros(0)
        )
        return self

    # ------------------------------------------------------------------
    # prediction

    def prior_mean(self, X) -> np.ndarray:
        """Prior mean ``mu_sim + delta * mu_err`` at augmented inputs."""
        A = check_augmented(X)
        return self._prior_mean(A)

    def predict(self, X, return_std: bool = False, return_cov: bool = False):
        """Posterior mean (optionally with std or full covariance).

        Noise-free latent predictions: the returned uncertainty does not
        include observation noise. Variances are clamped at zero, so tiny
        negative round-off never leaks out.
        """
        if return_std and return_cov:
            raise ValueError("at most one of return_std and return_cov")
        check_is_fitted(self, "X_")
        A = check_augmented(X, self.n_dims_)
        Ks = self.kernel_(A, self.X_) if self.X_.shape[0] else np.zeros((A.shape[0], 0))
        mean = self._prior_mean(A) + Ks @ self.alpha_
        if not (return_std or return_cov):
            return mean
        if return_cov:
            cov = self._posterior_cov_from_cross(A, None, Ks, None)
            return mean, cov
        prior_var = self.kernel_.diag(A)
        if self.X_.shape[0]:
            V = solve_triangular(self.L_, Ks.T, lower=True)
            var = prior_var - np.sum(V * V, axis=0)
        else:
            var = prior_var
        return mean, np.sqrt(np.maximum(var, 0.0))

    def posterior_cov(self, X1, X2=None) -> np.ndarray:
        """Posterior covariance block between two sets of augmented inputs.

        With ``X2 is None`` the diagonal is clamped at zero; cross blocks are
        returned as computed.
        """
        check_is_fitted(self, "X_")
        A1 = check_augmented(X1, self.n_dims_)
        A2 = None if X2 is None else check_augmented(X2, self.n_dims_)
        n = self.X_.shape[0]
        K1 = self.kernel_(A1, self.X_) if n else np.zeros((A1.shape[0], 0))
        K2 = None
        if A2 is not None:
            K2 = self.kernel_(A2, self.X_) if n else np.zeros((A2.shape[0], 0))
        return self._posterior_cov_from_cross(A1, A2, K1, K2)

    def _posterior_cov_from_cross(self, A1, A2, K1, K2) -> np.ndarray:
        prior = self.kernel_(A1) if A2 is None else self.kernel_(A1, A2)
        if self.X_.shape[0] == 0:
            cov = prior.copy()
        else:
            V1 = solve_triangular(self.L_, K1.T, lower=True)
            V2 = V1 if A2 is None else solve_triangular(self.L_, K2.T, lower=True)
            cov = prior - V1.T @ V2
        if A2 is None:
            d = np.arange(cov.shape[0])
            cov[d, d] = np.maximum(cov[d, d], 0.0)
        return cov


# ----------------------------------------------------------------------
# Configuration containers


@dataclass(frozen=True)
class KernelParams:
    """Serializable hyperparameters of one rational quadratic component."""

    variance: float
    alpha: float
    lengthscales: tuple[float, ...]

    def __post_init__(self):
        # Same domain as RationalQuadratic, checked at construction so bad
        # values fail where they are written (e.g. config parsing).
        self.build()

    def build(self) -> RationalQuadratic:
        return RationalQuadratic(self.variance, self.alpha, self.lengthscales)


@dataclass(frozen=True)
class ModelParams:
    """Full surrogate specification: both kernels, means, noise levels."""

    k_sim: KernelParams
    k_eps: KernelParams
    mu_sim: float = 0.0
    mu_eps: float = 0.0
    noise_sim: float = 0.05
    noise_real: float = 0.05


def build_gp(params: ModelParams) -> MultiFidelityGP:
    """Construct the estimator described by a :class:`ModelParams`."""
    return MultiFidelityGP(
        kernel_sim=params.k_sim.build(),
        kernel_err=params.k_eps.build(),
        mean_sim=params.mu_sim,
        mean_err=params.mu_eps,
        noise_sim=params.noise_sim,
        noise_real=params.noise_real,
    )


def default_model_params(bounds, mu_sim: float = 53.3502, mu_eps: float = -37.1385) -> ModelParams:
    """Documented default hyperparameters, scaled to a parameter box.

    Lengthscales are one eighth of each upper bound; signal deviations are
    2.48 / 2.07 (sim / error) for 2-D boxes and 2.07 / 1.79 for 4-D boxes,
    with alpha = 0.25. These match the gait-stabilization study the package
    mirrors; campaign configs typically override them for other objectives.
    """
    ell = tuple(np.asarray(bounds.upper, dtype=float) / 8.0)
    if bounds.dim <= 2:
        sd_sim, sd_eps = 2.48, 2.07
    else:
        sd_sim, sd_eps = 2.07, 1.79
    return ModelParams(
        k_sim=KernelParams(sd_sim**2, 0.25, ell),
        k_eps=KernelParams(sd_eps**2, 0.25, ell),
        mu_sim=mu_sim,
        mu_eps=mu_eps,
    )

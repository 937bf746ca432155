"""Regularized Gaussian-process regression core.

Everything here operates on the regularized covariance Kt = K + diag(sigma),
where sigma holds one non-negative noise variance per label. A ``GprState``
caches the Cholesky factor of Kt, alpha = Kt^-1 y, and the materialized
inverse with its diagonal; posterior prediction, the negative log-likelihood,
its gradients in sigma and in the kernel hyperparameters, and the closed-form
leave-one-out quantities are all cheap reads off that cache.

The NLL convention is ``log det Kt + y' Kt^-1 y`` with the additive constant
dropped; all tests and optimizers use the same convention.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, NumericalError
from .kernel import KernelParams, build_kernel_matrix, cross_kernel, eval_kernel

__all__ = [
    "GprState",
    "Posterior",
    "LoocvResult",
    "cholesky_with_jitter",
    "fit",
    "fit_matrix",
    "predict",
    "predict_batch",
    "nll",
    "grad_sigma",
    "grad_sigma_full_matrix",
    "grad_theta",
    "loocv",
]

log = logging.getLogger(__name__)

# Jitter ladder: first retry at 1e-10 * mean(diag K), then three escalations
# of 10x each. sigma >= 0 keeps Kt positive definite in exact arithmetic, so
# jitter only absorbs round-off (e.g. duplicate input points).
_JITTER_STEPS = (1e-10, 1e-9, 1e-8, 1e-7)


@dataclass(frozen=True)
class GprState:
    """Factorized regularized covariance plus the solves every reader needs.

    ``params`` and ``X`` are kept for prediction and are None for states
    built directly from a covariance matrix (``fit_matrix``).
    """

    params: KernelParams | None
    X: np.ndarray | None
    sigma: np.ndarray
    chol: np.ndarray  # lower Cholesky factor of Kt (+ applied jitter)
    jitter: float
    alpha: np.ndarray  # Kt^-1 y
    kinv: np.ndarray  # Kt^-1, materialized
    kinv_diag: np.ndarray

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Kt^-1 b via the cached factor."""
        return scipy.linalg.cho_solve((self.chol, True), b)


@dataclass(frozen=True)
class Posterior:
    mean: float
    variance: float  # clamped at 0


@dataclass(frozen=True)
class LoocvResult:
    errors: np.ndarray  # y_i - mu_{-i}, label units
    stds: np.ndarray  # leave-one-out posterior standard deviations


def cholesky_with_jitter(M: np.ndarray, diag_ref: float) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of M, retrying with escalating diagonal jitter.

    ``diag_ref`` scales the ladder (mean of the prior covariance diagonal).
    Raises ``NumericalError`` carrying the smallest eigenvalue of the final
    attempt once the ladder is exhausted.
    """
    jitters = (0.0,) + tuple(s * diag_ref for s in _JITTER_STEPS)
    for jitter in jitters:
        try:
            A = M if jitter == 0.0 else M + jitter * np.eye(M.shape[0])
            L = scipy.linalg.cholesky(A, lower=True)
            if jitter > 0.0:
                log.debug("cholesky needed jitter %.3e", jitter)
            return L, jitter
        except scipy.linalg.LinAlgError:
            continue
    pivot = float(np.min(scipy.linalg.eigvalsh(M)))
    raise NumericalError(
        f"covariance matrix not positive definite after jitter escalation "
        f"(smallest eigenvalue {pivot:.3e})",
        smallest_pivot=pivot,
    )


def _check_sigma(sigma, n: int) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (n,):
        raise InvalidInputError(f"sigma must have shape ({n},), got {sigma.shape}")
    if not np.all(np.isfinite(sigma)) or np.any(sigma < 0.0):
        raise InvalidInputError("sigma entries must be finite and non-negative")
    return sigma


def fit_matrix(
    K: np.ndarray,
    sigma,
    y,
    params: KernelParams | None = None,
    X: np.ndarray | None = None,
) -> GprState:
    """Factorize K + diag(sigma) and cache alpha, Kt^-1 and its diagonal.

    The full inverse is materialized by solving against the identity; its
    diagonal is what the noise update and LOOCV read, and the matrix itself
    feeds the full-matrix gradient. O(N^3), fine at the targeted scale.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    y = np.asarray(y, dtype=float)
    if y.shape != (n,):
        raise InvalidInputError(f"y must have shape ({n},), got {y.shape}")
    sigma = _check_sigma(sigma, n)
    Kt = K + np.diag(sigma)
    L, jitter = cholesky_with_jitter(Kt, diag_ref=float(np.mean(np.diag(K))))
    alpha = scipy.linalg.cho_solve((L, True), y)
    kinv = scipy.linalg.cho_solve((L, True), np.eye(n))
    return GprState(
        params=params,
        X=None if X is None else np.asarray(X, dtype=float),
        sigma=sigma,
        chol=L,
        jitter=jitter,
        alpha=alpha,
        kinv=kinv,
        kinv_diag=np.diag(kinv).copy(),
    )


def fit(params: KernelParams, sigma, X, y) -> GprState:
    """Fit the regularized GPR state for kernel ``params`` on (X, y)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    K = build_kernel_matrix(params, X)
    return fit_matrix(K, sigma, y, params=params, X=X)


def predict(state: GprState, x_star) -> Posterior:
    """Posterior mean and variance at a single query point."""
    if state.params is None or state.X is None:
        raise InvalidInputError("state carries no kernel/inputs; fit with fit() to predict")
    x_star = np.asarray(x_star, dtype=float).ravel()
    if not np.all(np.isfinite(x_star)):
        raise InvalidInputError("query point must be finite")
    k_star = cross_kernel(state.params, x_star[None, :], state.X)[0]
    mean = float(k_star @ state.alpha)
    var = eval_kernel(state.params, x_star, x_star) - float(k_star @ state.solve(k_star))
    if var < -1e-8:
        log.warning("posterior variance %.3e clamped to 0", var)
    return Posterior(mean=mean, variance=max(var, 0.0))


def predict_batch(state: GprState, X_star) -> tuple[np.ndarray, np.ndarray]:
    """Posterior means and (clamped) variances at many query points."""
    if state.params is None or state.X is None:
        raise InvalidInputError("state carries no kernel/inputs; fit with fit() to predict")
    X_star = np.asarray(X_star, dtype=float)
    if X_star.ndim == 1:
        X_star = X_star[:, None]
    Ks = cross_kernel(state.params, X_star, state.X)
    means = Ks @ state.alpha
    quad = np.einsum("ij,ji->i", Ks, state.solve(Ks.T))
    variances = state.params.signal_variance - quad
    low = variances < -1e-8
    if np.any(low):
        log.warning("posterior variance clamped to 0 at %d points", int(np.sum(low)))
    return means, np.maximum(variances, 0.0)


def nll(state: GprState, y) -> float:
    """Negative log-likelihood, log det Kt + y' Kt^-1 y (constant dropped)."""
    y = np.asarray(y, dtype=float)
    logdet = 2.0 * float(np.sum(np.log(np.diag(state.chol))))
    return logdet + float(y @ state.solve(y))


def grad_sigma(state: GprState, y) -> np.ndarray:
    """Gradient of the NLL in sigma: diag(Kt^-1) - (Kt^-1 y) ** 2."""
    a = state.solve(np.asarray(y, dtype=float))
    return state.kinv_diag - a * a


def grad_sigma_full_matrix(state: GprState, y) -> np.ndarray:
    """Full-matrix form Kt^-1 - (Kt^-1 y)(Kt^-1 y)'; its diagonal is grad_sigma."""
    a = state.solve(np.asarray(y, dtype=float))
    return state.kinv - np.outer(a, a)


def grad_theta(state: GprState, y, dK_dtheta) -> np.ndarray:
    """Gradient of the NLL in the kernel hyperparameters.

    One entry tr(Kt^-1 dK) - (Kt^-1 y)' dK (Kt^-1 y) per matrix in
    ``dK_dtheta``; the trace is an elementwise sum against the cached inverse.
    """
    a = state.solve(np.asarray(y, dtype=float))
    out = np.empty(len(dK_dtheta))
    for j, dK in enumerate(dK_dtheta):
        out[j] = float(np.sum(state.kinv * dK)) - float(a @ dK @ a)
    return out


def loocv(state: GprState, y) -> LoocvResult:
    """Closed-form leave-one-out errors and standard deviations.

    errors_i = (Kt^-1 y)_i / (Kt^-1)_ii and stds_i = (Kt^-1)_ii ^ -1/2,
    evaluated on the regularized matrix Kt.
    """
    a = state.solve(np.asarray(y, dtype=float))
    return LoocvResult(errors=a / state.kinv_diag, stds=1.0 / np.sqrt(state.kinv_diag))

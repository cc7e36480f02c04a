"""Small-scale numerical kernels: dense complex solves, eigenvalues of
small matrices, power-of-two FFTs and a seeded derivative-free minimizer.

Everything here is sized for desk-scale problems (matrices up to 64x64,
eigenvalue extraction up to 8x8, FFT lengths up to 2**22).
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize

from .errors import ContractError, NumericalError, SingularMatrixError

MAX_DENSE_N = 64
MAX_EIG_N = 8
MAX_FFT_LEN = 2**22

_DK_MAX_SWEEPS = 10000


@dataclass(frozen=True)
class MinimizerConfig:
    max_evaluations: int = 100_000
    simplex_tolerance: float = 1e-10
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.max_evaluations < 1:
            raise ContractError("max_evaluations must be >= 1")
        if not self.simplex_tolerance > 0:
            raise ContractError("simplex_tolerance must be > 0")
        if self.restarts < 1:
            raise ContractError("restarts must be >= 1")


def _as_square(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DENSE_N:
        raise ContractError(f"matrix order {a.shape[0]} exceeds {MAX_DENSE_N}")
    return a


def lu_solve(a, b):
    """Solve A x = b for a dense complex square A (LAPACK partial-pivot LU)."""
    a = _as_square(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise ContractError("dimension mismatch between A and b")
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("solution overflowed; matrix is singular to working precision")
    return x


def _char_poly_coeffs(a):
    """Characteristic polynomial coefficients by Faddeev-LeVerrier.

    Returns c such that det(lam*I - A) = lam^n + c[0]*lam^(n-1) + ... + c[n-1].
    """
    n = a.shape[0]
    coeffs = np.empty(n, dtype=complex)
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        am = a @ m
        c = -np.trace(am) / k
        coeffs[k - 1] = c
        m = am + c * np.eye(n, dtype=complex)
    return coeffs


def _polyval(coeffs, z):
    # Horner on the monic polynomial z^n + coeffs[0] z^(n-1) + ...
    acc = 1.0 + 0.0j
    for c in coeffs:
        acc = acc * z + c
    return acc


def durand_kerner(coeffs, tol=1e-14):
    """All roots of the monic polynomial z^n + coeffs[0] z^(n-1) + ... + coeffs[-1]."""
    n = len(coeffs)
    if n == 0:
        return np.empty(0, dtype=complex)
    radius = 1.0 + max(abs(c) for c in coeffs)
    # Non-real starting angle avoids symmetric stagnation.
    roots = radius * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)
    scale = max(radius, 1.0)
    for _ in range(_DK_MAX_SWEEPS):
        moved = 0.0
        for i in range(n):
            denom = 1.0 + 0.0j
            for j in range(n):
                if j != i:
                    denom *= roots[i] - roots[j]
            if denom == 0:
                # Collided starting points; nudge deterministically.
                roots[i] += 1e-8 * scale * (1 + 1j)
                continue
            delta = _polyval(coeffs, roots[i]) / denom
            roots[i] -= delta
            moved = max(moved, abs(delta))
        if moved <= tol * scale:
            return roots
    raise NumericalError("Durand-Kerner iteration did not converge")


def eigenvalues_small(a):
    """Eigenvalues of a complex matrix with n <= 8, via the characteristic
    polynomial (Faddeev-LeVerrier) and Durand-Kerner root finding.

    Consistency guarantee: the returned set matches the trace and determinant
    of A to ~1e-8 relative.
    """
    a = _as_square(a)
    if a.shape[0] > MAX_EIG_N:
        raise ContractError(f"eigenvalues_small supports n <= {MAX_EIG_N}")
    # Center at the mean eigenvalue and scale to O(1): eigenvalue clusters
    # (rad/s-scale resonances split by a much smaller coupling) are hopeless
    # for the raw characteristic polynomial in double precision.
    n = a.shape[0]
    mu = complex(np.trace(a)) / n
    b = a - mu * np.eye(n, dtype=complex)
    scale = float(np.max(np.abs(b)))
    if scale == 0.0:
        return np.full(n, mu, dtype=complex)
    return mu + scale * durand_kerner(_char_poly_coeffs(b / scale))


def _check_fft_length(n):
    if n < 1 or (n & (n - 1)) != 0:
        raise ContractError(f"length {n} is not a power of two (pad before calling)")
    if n > MAX_FFT_LEN:
        raise ContractError(f"length {n} exceeds {MAX_FFT_LEN}")


def dft(x):
    """Forward DFT of a power-of-two-length complex vector."""
    x = np.asarray(x, dtype=complex)
    _check_fft_length(len(x))
    return np.fft.fft(x)


def idft(x):
    """Inverse DFT of a power-of-two-length complex vector."""
    x = np.asarray(x, dtype=complex)
    _check_fft_length(len(x))
    return np.fft.ifft(x)


def nelder_mead(objective, x0, config=None, initial_step=None):
    """Minimize a scalar function by seeded multi-start Nelder-Mead.

    NaN objective values are treated as +inf so the simplex backs away from
    bad regions.  Restart k jitters the best point found so far with a
    deterministic perturbation drawn from `config.seed`.  Returns
    (x_min, f_min, evaluations) for the best point ever evaluated.
    """
    if config is None:
        config = MinimizerConfig()
    x0 = np.asarray(x0, dtype=float)
    evals = 0

    def wrapped(x):
        nonlocal evals
        evals += 1
        f = objective(np.asarray(x, dtype=float))
        if f is None or math.isnan(f):
            return math.inf
        return float(f)

    f0 = wrapped(x0)
    if math.isinf(f0):
        raise NumericalError("objective is not finite at the starting point")

    rng = np.random.default_rng(config.seed)
    best_x, best_f = x0.copy(), f0
    for start in range(config.restarts):
        budget = config.max_evaluations - evals
        if budget < 1:
            break
        if start == 0:
            xs = x0
        else:
            step = np.where(best_x != 0, np.abs(best_x), 1.0)
            xs = best_x + 0.05 * step * rng.standard_normal(len(best_x))
        options = {
            "maxfev": budget,
            "xatol": config.simplex_tolerance * max(1.0, float(np.max(np.abs(xs)))),
            "fatol": config.simplex_tolerance * max(1.0, abs(best_f)),
        }
        if initial_step is not None:
            steps = np.broadcast_to(np.asarray(initial_step, dtype=float), xs.shape)
            simplex = np.vstack([xs] + [xs + steps[k] * np.eye(len(xs))[k]
                                        for k in range(len(xs))])
            options["initial_simplex"] = simplex
        res = minimize(wrapped, xs, method="Nelder-Mead", options=options)
        if res.fun < best_f:
            best_f = float(res.fun)
            best_x = np.asarray(res.x, dtype=float)
        if best_f < 1e-20:
            break  # exact match; more restarts cannot help
    if math.isinf(best_f):
        raise NumericalError("objective was non-finite everywhere the simplex looked")
    return best_x, best_f, evals

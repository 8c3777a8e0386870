"""Dynamical stability and steady-state covariance of a linear Gaussian system."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError, UnstableError
from .model import LinearSystem

TOL_MARGIN = 1e-9
COND_WARN = 1e12


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    spectral_abscissa: float
    eigenvalues: tuple


@dataclass(frozen=True)
class CovarianceResult:
    """Steady-state covariance ``V`` with ``A V + V A^T = -D``.

    ``n_f_q`` is the phonon number from the position variance alone and
    ``n_f_sym`` the symmetric ``(V_qq + V_pp - 1)/2`` definition.
    """

    V: np.ndarray
    n_f_q: float
    n_f_sym: float
    lyapunov_residual: float
    condition: float
    warnings: tuple = ()


def check_stability(L: LinearSystem, tol_margin: float = TOL_MARGIN) -> StabilityVerdict:
    """Stable iff every eigenvalue of the drift matrix has real part < -tol_margin.

    Marginal points count as unstable.
    """
    try:
        eig = np.linalg.eigvals(L.A)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigenvalue solver failed for drift matrix\n{L.A}") from exc
    abscissa = float(np.max(eig.real))
    order = np.lexsort((eig.imag, eig.real))
    return StabilityVerdict(stable=abscissa < -tol_margin, spectral_abscissa=abscissa,
                            eigenvalues=tuple(complex(z) for z in eig[order]))


def lyapunov_operator(A: np.ndarray) -> np.ndarray:
    """Matrix of ``V -> A V + V A^T`` acting on row-major ``vec(V)``."""
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(A, eye) + np.kron(eye, A)


def solve_lyapunov(L: LinearSystem, verdict: StabilityVerdict | None = None) -> CovarianceResult:
    """Steady-state covariance by a direct solve of the vectorized Lyapunov equation.

    Raises
    ------
    UnstableError
        the drift matrix is not strictly stable, so no steady state exists.
    """
    verdict = verdict or check_stability(L)
    if not verdict.stable:
        raise UnstableError(f"drift matrix unstable (spectral abscissa "
                            f"{verdict.spectral_abscissa:.3e}); no steady-state covariance")
    A, D = L.A, L.D
    n = A.shape[0]
    op = lyapunov_operator(A)
    notes = []
    cond = float(np.linalg.cond(op))
    if cond > COND_WARN:
        notes.append(f"ill-conditioned Lyapunov solve (condition {cond:.2e})")
    V = np.linalg.solve(op, -D.reshape(-1)).reshape(n, n)
    V = 0.5 * (V + V.T)
    residual = float(np.linalg.norm(A @ V + V @ A.T + D, 2))
    iq, ip = L.index("q"), L.index("p")
    return CovarianceResult(
        V=V,
        n_f_q=float(V[iq, iq] - 0.5),
        n_f_sym=float(0.5 * (V[iq, iq] + V[ip, ip] - 1.0)),
        lyapunov_residual=residual,
        condition=cond,
        warnings=tuple(notes),
    )

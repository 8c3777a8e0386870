"""Hybrid optomechanical model: parameters, mean-field steady state, linearization.

A single cavity mode ``a`` couples to a collective two-level-system (TLS)
excitation ``c`` embedded in a mechanical resonator with quadratures ``q, p``.
The atom-light coupling depends on the resonator position,
``g(q) = g0 + g1 q``, which is what couples the mechanics to light.

All rates and detunings are expressed in units of the mechanical frequency.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq

from .errors import RegimeError, SolverError, ValidationError

UNITS = "omega_m"

#: quadrature ordering used for every doped-system matrix
BASIS = ("X", "Y", "x", "y", "q", "p")

SCAN_POINTS = 2048
ROOT_RTOL = 1e-12


@dataclass(frozen=True)
class Direct:
    """Linearized couplings given directly.

    ``g`` is the effective collective atom-field coupling and ``G`` the
    enhanced optomechanical coupling ``g1 * |a_bar|``.
    """

    g: float
    G: float

    mode = "direct"

    def __post_init__(self):
        for name in ("g", "G"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"coupling.{name}", f"must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class Physical:
    """Bare couplings plus the cavity drive amplitude.

    ``branch`` overrides the default steady-state branch selection (the
    branch reached by ramping the drive up from zero).
    """

    g0: float
    g1: float
    eta: float
    branch: Optional[int] = None

    mode = "physical"

    def __post_init__(self):
        for name in ("g0", "g1"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"coupling.{name}", f"must be finite, got {value!r}")
        if not np.isfinite(self.eta) or self.eta < 0:
            raise ValidationError("coupling.eta", f"must be finite and >= 0, got {self.eta!r}")
        if self.branch is not None and self.branch < 0:
            raise ValidationError("coupling.branch", "must be a non-negative index")


CouplingSpec = Union[Direct, Physical]


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the doped optomechanical system.

    ``defaulted`` lists the fields that were filled in from defaults when
    the parameters came from a config file; it does not take part in
    equality.
    """

    kappa: float
    gamma: float
    gamma_m: float
    coupling: CouplingSpec
    delta_a: float = 0.0
    delta_c: float = 0.0
    n_m: float = 0.0
    omega_m: float = 1.0
    defaulted: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("omega_m", "kappa", "gamma", "gamma_m"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValidationError(name, f"must be finite and > 0, got {value!r}")
        for name in ("delta_a", "delta_c"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")
        if not np.isfinite(self.n_m) or self.n_m < 0:
            raise ValidationError("n_m", f"must be finite and >= 0, got {self.n_m!r}")
        if not isinstance(self.coupling, (Direct, Physical)):
            raise ValidationError("coupling", "must be Direct or Physical")

    def replace(self, **changes) -> "ModelParams":
        """Copy with some fields changed. Coupling fields may be given by name."""
        coupling_changes = {k: changes.pop(k) for k in list(changes)
                            if k in self.coupling.__dataclass_fields__}
        coupling = changes.pop("coupling", self.coupling)
        if coupling_changes:
            coupling = type(coupling)(**{**coupling.__dict__, **coupling_changes})
        values = {**{k: getattr(self, k) for k in self.__dataclass_fields__}, **changes}
        values["coupling"] = coupling
        values["defaulted"] = tuple(f for f in self.defaulted if f not in changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class SteadyState:
    """Mean-field solution around which the dynamics are linearized.

    In direct mode the mean amplitudes are absorbed into ``G`` and left as
    ``None``.
    """

    a_bar: Optional[complex]
    c_bar: Optional[complex]
    q_bar: float
    g_eff: float
    G: float
    branch_count: int = 1
    selected_branch: int = 0
    intensities: tuple = ()
    residuals: tuple = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class LinearSystem:
    """Drift matrix ``A`` and diffusion matrix ``D`` of the fluctuations."""

    A: np.ndarray
    D: np.ndarray
    basis: tuple = BASIS

    def index(self, name: str) -> int:
        return self.basis.index(name)


# --------------------------------------------------------------------------
# steady state
# --------------------------------------------------------------------------

def _lorentz_denominator(p: ModelParams) -> float:
    return p.gamma**2 + p.delta_a**2


def _position_shift(p: ModelParams, intensity):
    """Mean displacement as a function of the intracavity intensity |a|^2."""
    c = p.coupling
    lor = _lorentz_denominator(p)
    num = 2.0 * c.g1 * c.g0 * p.delta_a * intensity / lor
    den = p.omega_m - 2.0 * p.delta_a * c.g1**2 * intensity / lor
    return num / den


def spring_margin(p: ModelParams, intensity: float) -> float:
    """``omega_m - 2 g1^2 |a|^2 delta_a / (gamma^2 + delta_a^2)``; must stay > 0."""
    c = p.coupling
    return p.omega_m - 2.0 * p.delta_a * c.g1**2 * intensity / _lorentz_denominator(p)


def _dressed_inverse(p: ModelParams, g):
    return p.kappa + 1j * p.delta_c + g**2 / (p.gamma + 1j * p.delta_a)


def self_consistency(p: ModelParams, intensity):
    """Residual ``f(I) = eta^2 / |kappa + i delta_c + g(I)^2/(gamma + i delta_a)|^2 - I``.

    Roots are the intracavity intensities of the steady states. Accepts
    scalars or arrays.
    """
    c = p.coupling
    intensity = np.asarray(intensity, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = c.g0 + c.g1 * _position_shift(p, intensity)
        val = c.eta**2 / np.abs(_dressed_inverse(p, g))**2 - intensity
    # at the spring pole g diverges and the drive term vanishes
    return np.where(np.isfinite(val), val, -intensity)


def mean_field_residuals(p: ModelParams, a_bar, c_bar, q_bar):
    """Absolute residuals of the three mean-field equations (cavity, TLS, mechanics)."""
    c = p.coupling
    g = c.g0 + c.g1 * q_bar
    r_a = -(p.kappa + 1j * p.delta_c) * a_bar - 1j * g * c_bar + c.eta
    r_c = -(p.gamma + 1j * p.delta_a) * c_bar - 1j * g * a_bar
    r_q = -p.omega_m * q_bar - c.g1 * 2.0 * (np.conj(a_bar) * c_bar).real
    return abs(r_a), abs(r_c), abs(r_q)


def find_intensity_roots(p: ModelParams, scan_points: int = SCAN_POINTS):
    """All roots of :func:`self_consistency` on ``[0, (eta/kappa)^2]``, ascending.

    Sign changes are located on a uniform scan and refined by bracketing.
    The bound holds because the dressed denominator has real part >= kappa.
    """
    c = p.coupling
    upper = (c.eta / p.kappa) ** 2
    upper = upper * (1.0 + 1e-6) + 1e-300
    grid = np.linspace(0.0, upper, scan_points)
    vals = self_consistency(p, grid)
    roots = []
    for i in range(scan_points - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            roots.append(grid[i])
        elif f0 * f1 < 0.0:
            root = brentq(lambda s: float(self_consistency(p, s)), grid[i], grid[i + 1],
                          xtol=1e-300, rtol=max(ROOT_RTOL, 4 * np.finfo(float).eps),
                          maxiter=500)
            roots.append(root)
    return roots


def solve_steady_state(p: ModelParams, branch: Optional[int] = None,
                       scan_points: int = SCAN_POINTS) -> SteadyState:
    """Mean-field steady state of the driven hybrid system.

    In direct mode the couplings already are the linearized ones, so the
    mean displacement is zero and ``g_eff = g``.

    In physical mode the intracavity intensity is found self-consistently;
    the position-dependent coupling may produce several branches. The
    default selection is the lowest-intensity root, which is the branch an
    adiabatic ramp of the drive from zero ends on. The drive is taken real,
    so ``a_bar`` carries the cavity phase and ``G = g1 * |a_bar|``.

    Raises
    ------
    SolverError
        no root was found.
    RegimeError
        the selected branch violates the optical-spring condition.
    """
    c = p.coupling
    if isinstance(c, Direct):
        return SteadyState(a_bar=None, c_bar=None, q_bar=0.0,
                           g_eff=c.g, G=c.G)

    if c.eta == 0.0:
        return SteadyState(a_bar=0j, c_bar=0j, q_bar=0.0, g_eff=c.g0, G=0.0,
                           intensities=(0.0,))

    roots = find_intensity_roots(p, scan_points)
    if not roots:
        raise SolverError("no steady-state intensity found on the scan interval")
    if branch is None:
        branch = c.branch if c.branch is not None else 0
    if branch >= len(roots):
        raise SolverError(f"branch {branch} requested but only {len(roots)} found")

    intensity = roots[branch]
    margin = spring_margin(p, intensity)
    if margin <= 0.0:
        raise RegimeError(f"optical spring condition violated on branch {branch}: "
                          f"omega_m - 2 g1^2 |a|^2 delta_a/(gamma^2+delta_a^2) = {margin:.6g}")
    q_bar = float(_position_shift(p, intensity))
    g = c.g0 + c.g1 * q_bar
    a_bar = c.eta / _dressed_inverse(p, g)
    c_bar = -1j * g / (p.gamma + 1j * p.delta_a) * a_bar
    residuals = mean_field_residuals(p, a_bar, c_bar, q_bar)
    scale = max(c.eta, p.kappa, p.omega_m)
    if max(residuals) > 1e-10 * scale:
        raise SolverError(f"steady-state residuals {residuals} exceed tolerance")
    return SteadyState(a_bar=complex(a_bar), c_bar=complex(c_bar), q_bar=q_bar,
                       g_eff=float(g), G=float(c.g1 * abs(a_bar)),
                       branch_count=len(roots), selected_branch=branch,
                       intensities=tuple(float(r) for r in roots),
                       residuals=tuple(float(r) for r in residuals))


# --------------------------------------------------------------------------
# linearization
# --------------------------------------------------------------------------

# complex fluctuation ordering: c, c^dag, a, a^dag, q, p
_MODES = ((0, 1), (2, 3))  # (annihilation, creation) index pairs
_REALS = (4, 5)


def complex_drift(p: ModelParams, s: SteadyState) -> np.ndarray:
    """Drift matrix of ``(c, c^dag, a, a^dag, q, p)`` linearized around ``s``.

    The cavity mean field is rotated to be real and positive; only ``g_eff``
    and ``G`` enter. Creation-operator rows are exact conjugates of the
    annihilation rows.
    """
    g, G = s.g_eff, s.G
    ga, gm = p.gamma + 1j * p.delta_a, p.gamma - 1j * p.delta_a
    M = np.zeros((6, 6), dtype=complex)
    # TLS:  dc/dt = -(gamma + i delta_a) c - i g a - i G q
    M[0, 0] = -ga
    M[0, 2] = -1j * g
    M[0, 4] = -1j * G
    # cavity: da/dt = -(kappa + i delta_c) a - i g c - i g1 c_bar q
    # with g1 c_bar = -i g G / (gamma + i delta_a)
    M[2, 2] = -(p.kappa + 1j * p.delta_c)
    M[2, 0] = -1j * g
    M[2, 4] = -g * G / ga
    M[1] = _conjugate_row(M[0])
    M[3] = _conjugate_row(M[2])
    # mechanics: dq/dt = omega_m p
    M[4, 5] = p.omega_m
    # dp/dt = -gamma_m p - omega_m q - g1 (a^dag c + c^dag a)
    #       = ... - G (c + c^dag) - g1 c_bar^* a - g1 c_bar a^dag
    M[5, 5] = -p.gamma_m
    M[5, 4] = -p.omega_m
    M[5, 0] = -G
    M[5, 1] = -G
    M[5, 2] = -1j * g * G / gm
    M[5, 3] = np.conj(M[5, 2])
    return M


def _conjugate_row(row: np.ndarray) -> np.ndarray:
    """Row of d(o^dag)/dt given the row of do/dt (swap a<->a^dag, conjugate)."""
    out = np.empty_like(row)
    for ann, cre in _MODES:
        out[ann] = np.conj(row[cre])
        out[cre] = np.conj(row[ann])
    for r in _REALS:
        out[r] = np.conj(row[r])
    return out


def realify(M: np.ndarray) -> np.ndarray:
    """Map a complex-mode drift matrix to the quadrature basis ``(X, Y, x, y, q, p)``.

    With ``o = (X + iY)/sqrt(2)``, a term ``alpha o_k + beta o_k^dag`` in
    ``do_j/dt`` contributes ``Re(alpha+beta) X_k - Im(alpha-beta) Y_k`` to
    ``dX_j/dt`` and ``Im(alpha+beta) X_k + Re(alpha-beta) Y_k`` to
    ``dY_j/dt``. Real parts are taken explicitly, so the result is real by
    construction; the equivalent similarity transform is
    :func:`quadrature_transform`.
    """
    n = M.shape[0]
    A = np.zeros((n, n))
    s2 = np.sqrt(2.0)
    for j, (ja, _) in enumerate(_MODES):
        rx, ry = 2 * j, 2 * j + 1
        for k, (ka, kc) in enumerate(_MODES):
            alpha, beta = M[ja, ka], M[ja, kc]
            A[rx, 2 * k] = (alpha + beta).real
            A[rx, 2 * k + 1] = -(alpha - beta).imag
            A[ry, 2 * k] = (alpha + beta).imag
            A[ry, 2 * k + 1] = (alpha - beta).real
        for r in _REALS:
            A[rx, r] = s2 * M[ja, r].real
            A[ry, r] = s2 * M[ja, r].imag
    for r in _REALS:
        for k, (ka, _) in enumerate(_MODES):
            sigma = M[r, ka]
            A[r, 2 * k] = s2 * sigma.real
            A[r, 2 * k + 1] = -s2 * sigma.imag
        for r2 in _REALS:
            A[r, r2] = M[r, r2].real
    return A


def quadrature_transform() -> np.ndarray:
    """Matrix ``T`` with ``(X, Y, x, y, q, p) = T (c, c^dag, a, a^dag, q, p)``."""
    T = np.zeros((6, 6), dtype=complex)
    h = 1.0 / np.sqrt(2.0)
    for j, (ann, cre) in enumerate(_MODES):
        T[2 * j, ann], T[2 * j, cre] = h, h
        T[2 * j + 1, ann], T[2 * j + 1, cre] = -1j * h, 1j * h
    T[4, 4] = T[5, 5] = 1.0
    return T


def diffusion(p: ModelParams) -> np.ndarray:
    return np.diag([p.gamma, p.gamma, p.kappa, p.kappa, 0.0,
                    p.gamma_m * (1.0 + 2.0 * p.n_m)])


def linearize(p: ModelParams, s: Optional[SteadyState] = None) -> LinearSystem:
    """Real drift and diffusion matrices of the quadrature fluctuations."""
    if s is None:
        s = solve_steady_state(p)
    A = realify(complex_drift(p, s))
    return LinearSystem(A=A, D=diffusion(p))

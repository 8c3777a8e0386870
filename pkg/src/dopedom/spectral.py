"""Effective mechanical susceptibility, noise kernels and position spectrum.

This is the frequency-domain route to the final phonon number: the
position fluctuations obey

    chi_eff(w)^-1 q(w) = Lambda(w) c_in + Upsilon(w) a_in + (conjugate terms) + xi

and the occupation follows from integrating the position spectrum. It
shares no code with the Lyapunov route in :mod:`dopedom.stability`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureError
from .model import ModelParams, SteadyState, solve_steady_state
from . import quadrature

TAIL_RTOL = 1e-8
QUAD_RTOL = 1e-9
MAX_REL_ERROR = 1e-6


@dataclass(frozen=True)
class SusceptibilityKernel:
    """Frequency-domain response of the mechanics dressed by the TLS and cavity.

    All evaluators are vectorized and accept complex frequencies (used to
    locate resonances); for real ``w`` they are the physical response
    functions. ``f*(-w)`` is implemented as ``conj(f(-conj(w)))``.
    """

    gamma: float
    delta_a: float
    kappa: float
    delta_c: float
    gamma_m: float
    omega_m: float
    g: float
    G: float

    # -- bare pieces ---------------------------------------------------
    def chi_m_inv(self, w):
        w = np.asarray(w)
        return (self.omega_m**2 - w**2 - 1j * self.gamma_m * w) / self.omega_m

    def _d(self, w):
        return self.gamma + 1j * self.delta_a - 1j * np.asarray(w)

    def theta(self, w):
        """Direct TLS contribution to the inverse susceptibility."""
        w = np.asarray(w)
        return -2.0 * self.G**2 * self.delta_a / ((self.gamma - 1j * w)**2 + self.delta_a**2)

    def chi_c(self, w):
        """Cavity susceptibility dressed by the TLS."""
        w = np.asarray(w)
        return 1.0 / (self.kappa + 1j * self.delta_c - 1j * w + self.g**2 / self._d(w))

    def A(self, w):
        w = np.asarray(w)
        lor = self.gamma**2 + self.delta_a**2
        num = (2 * self.gamma + 2j * self.delta_a - 1j * w) * (2j * self.delta_a - 1j * w)
        return 1j * self.g**2 / lor * num / self._d(w)**2

    def B(self, w):
        w = np.asarray(w)
        return (2j * self.delta_a - 1j * w) / self._d(w)

    def xi(self, w):
        """Cavity-mediated contribution to the inverse susceptibility."""
        w = np.asarray(w)
        wm = -np.conj(w)
        return -self.G**2 * (self.chi_c(w) * self.A(w) + np.conj(self.chi_c(wm) * self.A(wm)))

    def lam(self, w):
        """Weight of the TLS input noise ``c_in`` in the mechanical force."""
        pref = self.g**2 / (self.gamma - 1j * self.delta_a)
        return self.G / self._d(w) * (1.0 + pref * self.chi_c(w) * self.B(w))

    def upsilon(self, w):
        """Weight of the cavity input noise ``a_in`` in the mechanical force."""
        return self.G * 1j * self.g / (self.gamma - 1j * self.delta_a) * self.chi_c(w) * self.B(w)

    # -- assembled -------------------------------------------------------
    def chi_eff_inv(self, w):
        return self.chi_m_inv(w) + self.theta(w) + self.xi(w)

    def chi_eff(self, w):
        return 1.0 / self.chi_eff_inv(w)

    def position_spectrum(self, w, n_m: float):
        """Position noise spectrum ``S_q(w)`` for real ``w`` (not symmetrized)."""
        w = np.asarray(w, dtype=float)
        noise = (2 * self.gamma * np.abs(self.lam(w))**2
                 + 2 * self.kappa * np.abs(self.upsilon(w))**2
                 + self.gamma_m * (1 + 2 * n_m))
        return np.abs(self.chi_eff(w))**2 * noise

    # -- resonance structure -------------------------------------------
    def mechanical_pole(self, max_iter: int = 60):
        """Complex zero of ``chi_eff^-1`` continued from the bare mechanical pole.

        Strong optical springs can move the pole far from ``omega_m``; any
        zero of ``chi_eff^-1`` found is a genuine resonance. Returns ``None``
        if Newton's method does not settle.
        """
        bound = 100.0 * max(self.omega_m, abs(self.delta_a), abs(self.delta_c), abs(self.g))
        w = complex(np.sqrt(self.omega_m**2 - 0.25 * self.gamma_m**2), -0.5 * self.gamma_m)
        for _ in range(max_iter):
            h = 1e-7 * max(abs(w), 1e-3)
            f = complex(self.chi_eff_inv(w))
            df = complex(self.chi_eff_inv(w + h) - self.chi_eff_inv(w - h)) / (2 * h)
            if df == 0:
                return None
            step = f / df
            w -= step
            if not np.isfinite(w) or abs(w) > bound:
                return None
            if abs(step) < 1e-15 * max(abs(w), 1.0):
                return w
        return None

    def optical_poles(self):
        """Poles of the dressed cavity and TLS responses (complex frequencies)."""
        # (kappa + i dc - i w)(gamma + i da - i w) + g^2 = 0, with u = -i w
        k = self.kappa + 1j * self.delta_c
        a = self.gamma + 1j * self.delta_a
        us = np.roots([1.0, k + a, k * a + self.g**2])
        poles = [1j * u for u in us]
        poles.append(self.delta_a - 1j * self.gamma)
        return poles

    def resonances(self):
        """``(centre, width)`` pairs of every feature of ``S_q`` on the real axis."""
        out = []
        mech = self.mechanical_pole()
        if mech is None:
            out.append((self.omega_m, self.gamma_m))
        else:
            out.append((mech.real, abs(mech.imag)))
        for z in self.optical_poles():
            out.append((z.real, abs(z.imag)))
        mirrored = [(-c, w) for c, w in out]
        return out + mirrored


def kernel(p: ModelParams, s: SteadyState | None = None) -> SusceptibilityKernel:
    if s is None:
        s = solve_steady_state(p)
    return SusceptibilityKernel(gamma=p.gamma, delta_a=p.delta_a, kappa=p.kappa,
                                delta_c=p.delta_c, gamma_m=p.gamma_m, omega_m=p.omega_m,
                                g=s.g_eff, G=s.G)


def effective_damping(k: SusceptibilityKernel) -> float:
    """Total mechanical damping rate at ``w = omega_m``.

    Defined as ``-Im chi_eff(omega_m)^-1 = gamma_m - Im[Theta + Xi](omega_m)``;
    for the bare radiation-pressure kernel this is the usual
    ``gamma_m + Im[2 G^2 dc / ((kappa - i omega_m)^2 + dc^2)]``. Positive
    values damp (cool) the motion; negative values are antidamping.
    """
    w = k.omega_m
    return float(k.gamma_m - (k.theta(w) + k.xi(w)).imag)


@dataclass(frozen=True)
class FrequencyGrid:
    omega: np.ndarray

    @classmethod
    def linspace(cls, lo: float, hi: float, points: int) -> "FrequencyGrid":
        return cls(np.linspace(lo, hi, points))

    @classmethod
    def default(cls, k: SusceptibilityKernel, points: int = 2001) -> "FrequencyGrid":
        span = 2.0 * max(k.omega_m, abs(k.delta_a), abs(k.delta_c), abs(k.g) + k.omega_m)
        return cls.linspace(-span, span, points)


@dataclass(frozen=True)
class SpectrumResult:
    omega: np.ndarray
    S_q: np.ndarray
    n_f_spectral: float
    gamma_eff: float
    kernel_values: dict
    variance: float
    error: float
    rel_error: float
    intervals: int
    omega_max: float
    tail: float
    notes: tuple = field(default=())

    @property
    def samples(self):
        return list(zip(self.omega.tolist(), self.S_q.tolist()))


def integration_scale(k: SusceptibilityKernel) -> float:
    return 10.0 * max(k.omega_m, k.kappa, k.gamma, abs(k.delta_a), abs(k.delta_c), abs(k.g))


def breakpoints(k: SusceptibilityKernel, lo: float, hi: float) -> np.ndarray:
    """Subdivision points for ``[lo, hi]``: fixed features plus geometric
    ladders around every resonance so narrow peaks are never stepped over."""
    pts = [lo, hi]
    wm, g = k.omega_m, abs(k.g)
    for c in (wm, g + wm, g - wm, k.delta_a, k.delta_c):
        pts += [c, -c]
    span = hi - lo
    for centre, width in k.resonances():
        width = max(width, 1e-12 * max(wm, 1.0))
        offsets = width * 4.0 ** np.arange(-1, 40)
        offsets = offsets[offsets < span]
        pts.append(centre)
        pts.extend(centre + offsets)
        pts.extend(centre - offsets)
    pts = np.asarray(pts, dtype=float)
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(pts)


def spectrum(k: SusceptibilityKernel, n_m: float, grid: FrequencyGrid | None = None,
             rtol: float = QUAD_RTOL) -> SpectrumResult:
    """Sample ``S_q`` and integrate it to the final occupation.

    ``n_f = int S_q dw / 2 pi - 1/2`` over ``[-W, W]``; ``W`` starts at
    :func:`integration_scale` and doubles until the next shell
    ``W < |w| < 2W`` adds less than ``1e-8`` of the total. The caller is
    responsible for the system being stable.

    Raises
    ------
    QuadratureError
        the adaptive integration did not converge, or its error estimate
        exceeds ``1e-6`` of the result.
    """
    f = lambda w: k.position_spectrum(w, n_m)
    W = integration_scale(k)
    core = quadrature.integrate(f, breakpoints(k, -W, W), rtol=rtol)
    total, err, nint = core.value, core.error, core.intervals
    tail = np.inf
    for _ in range(30):
        right = quadrature.integrate(f, breakpoints(k, W, 2 * W), rtol=rtol)
        left = quadrature.integrate(f, breakpoints(k, -2 * W, -W), rtol=rtol)
        tail = right.value + left.value
        total += tail
        err += right.error + left.error
        nint += right.intervals + left.intervals
        W *= 2
        if abs(tail) < TAIL_RTOL * abs(total):
            break
    else:
        raise QuadratureError(f"spectrum tail did not decay (last shell {tail:.3e})")
    rel = err / abs(total)
    if rel > MAX_REL_ERROR:
        raise QuadratureError(f"quadrature relative error {rel:.2e} above {MAX_REL_ERROR}",
                              worst_interval=core.worst_interval)

    grid = grid if grid is not None else FrequencyGrid.default(k)
    S = f(grid.omega)
    if np.any(S < 0) or not np.all(np.isfinite(S)):
        raise QuadratureError("position spectrum negative or non-finite on the sample grid")
    wm = k.omega_m
    values = {}
    for name in ("theta", "xi", "lam", "upsilon"):
        fn = getattr(k, name)
        values[name] = (complex(fn(wm)), complex(fn(-wm)))
    variance = total / (2 * np.pi)
    return SpectrumResult(omega=grid.omega, S_q=S, n_f_spectral=float(variance - 0.5),
                          gamma_eff=effective_damping(k), kernel_values=values,
                          variance=float(variance), error=float(err / (2 * np.pi)),
                          rel_error=float(rel), intervals=int(nint), omega_max=float(W),
                          tail=float(tail / (2 * np.pi)))


def write_spectrum_csv(path, result: SpectrumResult) -> None:
    """Dump ``(omega, S_q)`` samples, ordered by frequency."""
    order = np.argsort(result.omega, kind="stable")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("omega,S_q\n")
        for w, s in zip(result.omega[order], result.S_q[order]):
            fh.write(f"{w:.12g},{s:.12g}\n")

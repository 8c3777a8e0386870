"""Closed-form comparators and regime formulas.

* the bare radiation-pressure optomechanics comparator (full 4x4 Lyapunov
  pipeline plus its textbook limits),
* cooperativity, dressed-cavity detuning and regime labels with the
  applicable cooling-rate estimate,
* the polariton picture for equal atomic and cavity detunings,
* the doped-versus-radiation-pressure force ratio.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .model import LinearSystem, ModelParams, solve_steady_state
from .stability import check_stability, solve_lyapunov

STANDARD_BASIS = ("x", "y", "q", "p")

#: factor separating "much smaller" from "comparable" in regime labels
SEPARATION = 3.0


# --------------------------------------------------------------------------
# standard radiation-pressure optomechanics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StandardOMParams:
    kappa: float
    delta_c: float
    gamma_m: float
    G_om: float
    n_m: float = 0.0
    omega_m: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "gamma_m", "omega_m"):
            if not getattr(self, name) > 0:
                raise ValidationError(name, "must be > 0")
        if self.n_m < 0:
            raise ValidationError("n_m", "must be >= 0")
        if self.G_om < 0:
            raise ValidationError("G_om", "must be >= 0")

    @classmethod
    def comparable_to(cls, p: ModelParams, G: Optional[float] = None) -> "StandardOMParams":
        """Bare cavity with the same rates and ``G_om`` equal to the doped ``G``."""
        if G is None:
            G = solve_steady_state(p).G
        return cls(kappa=p.kappa, delta_c=p.delta_c, gamma_m=p.gamma_m, G_om=G,
                   n_m=p.n_m, omega_m=p.omega_m)


def standard_om_system(p: StandardOMParams) -> LinearSystem:
    """Linearized radiation-pressure dynamics in the basis ``(x, y, q, p)``.

    ``da/dt = -(kappa + i dc) a - i G q``, ``dp/dt = ... - G (a + a^dag)``.
    """
    s2 = np.sqrt(2.0)
    A = np.array([
        [-p.kappa, p.delta_c, 0.0, 0.0],
        [-p.delta_c, -p.kappa, -s2 * p.G_om, 0.0],
        [0.0, 0.0, 0.0, p.omega_m],
        [-s2 * p.G_om, 0.0, -p.omega_m, -p.gamma_m],
    ])
    D = np.diag([p.kappa, p.kappa, 0.0, p.gamma_m * (1 + 2 * p.n_m)])
    return LinearSystem(A=A, D=D, basis=STANDARD_BASIS)


def standard_om_correction(w, G_om, kappa, delta_c):
    """Radiation-pressure term added to the inverse mechanical susceptibility."""
    w = np.asarray(w)
    return -2.0 * G_om**2 * delta_c / ((kappa - 1j * w)**2 + delta_c**2)


def standard_om_spectrum(p: StandardOMParams, w):
    """Position spectrum of the bare optomechanical system (not symmetrized)."""
    w = np.asarray(w, dtype=float)
    chi_inv = ((p.omega_m**2 - w**2 - 1j * p.gamma_m * w) / p.omega_m
               + standard_om_correction(w, p.G_om, p.kappa, p.delta_c))
    force = p.G_om / (p.kappa + 1j * p.delta_c - 1j * w)
    return (2 * p.kappa * np.abs(force)**2 + p.gamma_m * (1 + 2 * p.n_m)) / np.abs(chi_inv)**2


def standard_om_damping(p: StandardOMParams) -> float:
    """``gamma_m + Im[2 G^2 dc / ((kappa - i omega_m)^2 + dc^2)]``."""
    return float(p.gamma_m - standard_om_correction(p.omega_m, p.G_om, p.kappa, p.delta_c).imag)


@dataclass(frozen=True)
class StandardOMResult:
    n_f: Optional[float]
    gamma_eff: float
    stable: bool
    self_oscillation: bool
    n_f_closed_form: Optional[float]
    n_f_sym: Optional[float] = None


def standard_om_nf(p: StandardOMParams) -> StandardOMResult:
    """Final occupation of the bare optomechanical comparator.

    The Lyapunov value is always computed for stable points. The closed
    form ``n_m gamma_m / (gamma_m + G^2/kappa)`` is attached only in the
    good-cavity red-sideband regime where it applies.
    """
    L = standard_om_system(p)
    verdict = check_stability(L)
    gamma_eff = standard_om_damping(p)
    closed = None
    if p.kappa < p.omega_m / SEPARATION and abs(p.delta_c - p.omega_m) < p.kappa:
        closed = p.gamma_m * p.n_m / (p.gamma_m + p.G_om**2 / p.kappa)
    if not verdict.stable:
        return StandardOMResult(n_f=None, gamma_eff=gamma_eff, stable=False,
                                self_oscillation=True, n_f_closed_form=closed)
    cov = solve_lyapunov(L, verdict)
    return StandardOMResult(n_f=cov.n_f_q, gamma_eff=gamma_eff, stable=True,
                            self_oscillation=gamma_eff <= 0, n_f_closed_form=closed,
                            n_f_sym=cov.n_f_sym)


# --------------------------------------------------------------------------
# regimes of the doped system
# --------------------------------------------------------------------------

def cooperativity(g, kappa, gamma):
    return g**2 / (kappa * gamma)


def dressed_detuning(g, omega_m=1.0):
    """``omega_m - g^2 / omega_m``: where the TLS-dressed cavity sees the red sideband."""
    return omega_m - g**2 / omega_m


@dataclass(frozen=True)
class RegimeReport:
    cooperativity: float
    delta_0: float
    labels: dict
    gamma_prediction: Optional[float]
    formula: Optional[str]
    n_f_prediction: Optional[float]
    atomic_noise_floor: Optional[float] = None

    def to_text(self) -> str:
        """Flat ``key = value`` block for terminal display."""
        return "\n".join(f"{k} = {_fmt(v)}" for k, v in self.to_row().items())

    def to_row(self) -> dict:
        row = {"cooperativity": self.cooperativity, "delta_0": self.delta_0}
        row.update(self.labels)
        row["gamma_prediction"] = self.gamma_prediction
        row["formula"] = self.formula
        row["n_f_prediction"] = self.n_f_prediction
        row["atomic_noise_floor"] = self.atomic_noise_floor
        return row


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def regime_report(p: ModelParams) -> RegimeReport:
    """Regime labels and the closed-form cooling rate that applies, if any.

    Label thresholds use a factor :data:`SEPARATION` for "much smaller".
    Rates tried in order:

    * TLS driven on the red sideband (``|delta_a - omega_m| < gamma``,
      good dopant): ``G^2 / (gamma (1 + C))``;
    * resonant dopant with ``delta_c`` near ``delta_0``, good dressed
      cavity: ``(G^2/kappa)(g/gamma)^2``;
    * resonant dopant, bad dressed cavity (``kappa >> |delta_0|``):
      ``(G^2/kappa)(g/gamma)^2 (omega_m/kappa)``.

    For the resonant dopant the predicted occupation includes the extra
    atomic noise ``(1+C)^2/C (gamma/omega_m)^2``.
    """
    s = solve_steady_state(p)
    g, G, wm = s.g_eff, s.G, p.omega_m
    C = cooperativity(g, p.kappa, p.gamma)
    d0 = dressed_detuning(g, wm)
    sep = SEPARATION
    labels = {
        "good_cavity": p.kappa < wm / sep,
        "bad_cavity": p.kappa > sep * wm,
        "good_dopant": p.gamma < wm / sep,
        "weak_dopant": g < wm / sep,
        "strong_dopant": g > sep * wm,
        "resolved_sideband": p.kappa < wm / sep,
        "dressed_resolved": g**2 > wm * p.kappa,
        "resonant_dopant": abs(p.delta_a) < p.gamma,
        "red_sideband_dopant": abs(p.delta_a - wm) < p.gamma,
    }
    rate, formula, floor = None, None, None
    if labels["red_sideband_dopant"] and labels["good_dopant"]:
        rate, formula = G**2 / (p.gamma * (1 + C)), "G^2/(gamma(1+C))"
    elif labels["resonant_dopant"] and labels["good_dopant"]:
        if p.kappa < abs(d0) / sep and abs(p.delta_c - d0) < max(p.kappa, p.gamma):
            rate, formula = G**2 / p.kappa * (g / p.gamma)**2, "(G^2/kappa)(g/gamma)^2"
        elif p.kappa > sep * abs(d0):
            rate = G**2 / p.kappa * (g / p.gamma)**2 * (wm / p.kappa)
            formula = "(G^2/kappa)(g/gamma)^2(omega_m/kappa)"
        if rate is not None and C > 0:
            floor = (1 + C)**2 / C * (p.gamma / wm)**2
    n_f = None
    if rate is not None:
        n_f = p.gamma_m / (p.gamma_m + rate) * p.n_m + (floor or 0.0)
    return RegimeReport(cooperativity=C, delta_0=d0, labels=labels, gamma_prediction=rate,
                        formula=formula, n_f_prediction=n_f, atomic_noise_floor=floor)


# --------------------------------------------------------------------------
# polaritons
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolaritonModel:
    """Symmetric/antisymmetric atom-field modes for ``delta_a == delta_c``."""

    delta: float
    g: float
    kappa: float
    gamma: float
    G: float
    omega_m: float = 1.0

    @classmethod
    def from_params(cls, p: ModelParams) -> "PolaritonModel":
        if abs(p.delta_a - p.delta_c) >= 1e-12:
            raise ValidationError("delta_a", "polariton picture needs delta_a == delta_c")
        s = solve_steady_state(p)
        return cls(delta=p.delta_a, g=s.g_eff, kappa=p.kappa, gamma=p.gamma, G=s.G,
                   omega_m=p.omega_m)

    @property
    def frequencies(self):
        return (self.delta + self.g, self.delta - self.g)

    @property
    def kappa_bar(self):
        return 0.5 * (self.kappa + self.gamma)

    @property
    def sideband_targets(self):
        """Detunings where a polariton red sideband is driven: ``+-g + omega_m``."""
        return (self.g + self.omega_m, -self.g + self.omega_m)

    @property
    def delta_0(self):
        return dressed_detuning(self.g, self.omega_m)


def polariton_damping(m: PolaritonModel, delta: Optional[float] = None) -> float:
    """Interference damping near resonance,
    ``(Gg/gamma)^2 4 kappa d0 D / ((kappa^2 - d0^2 + D^2)^2 + 4 kappa^2 d0^2)``.

    Odd in the detuning ``D``; positive values cool.
    """
    D = m.delta if delta is None else delta
    k, d0 = m.kappa, m.delta_0
    pref = (m.G * m.g / m.gamma)**2
    return pref * 4 * k * d0 * D / ((k**2 - d0**2 + D**2)**2 + 4 * k**2 * d0**2)


# --------------------------------------------------------------------------
# force ratio
# --------------------------------------------------------------------------

def optical_depth(g, gamma, length, c):
    """Single-pass optical depth ``g^2 L / (c gamma)`` of the dopant."""
    return g**2 * length / (c * gamma)


def force_ratio(r, alpha=None, *, g=None, gamma=None, length=None, c=None):
    """Doped-to-radiation-pressure force ratio ``alpha / r``.

    Give ``alpha`` directly, or ``g, gamma, length, c`` to compute it.
    """
    if not r > 0:
        raise ValidationError("r", "reflectivity must be > 0")
    if alpha is None:
        if None in (g, gamma, length, c):
            raise ValidationError("alpha", "give alpha or all of g, gamma, length, c")
        alpha = optical_depth(g, gamma, length, c)
    return alpha / r

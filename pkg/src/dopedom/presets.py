"""Parameter sets and default sweep ranges for the reference cooling curves.

Every set shares ``gamma = 0.01``, ``gamma_m = 1e-5``, ``n_m = 1000`` and a
direct coupling ``G = 0.01``; only the cavity width, the dopant coupling and
the fixed detuning change. Sweep ranges bracket every feature of the
corresponding curve.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import Direct, ModelParams
from .workflows import SweepSpec

COMMON = dict(gamma=0.01, gamma_m=1e-5, n_m=1000.0)


@dataclass(frozen=True)
class Preset:
    name: str
    params: ModelParams
    axis: str
    lo: float
    hi: float
    summary: str

    def sweep(self, points: int = 200, **kw) -> SweepSpec:
        return SweepSpec(axis=self.axis, lo=self.lo, hi=self.hi, points=points, **kw)


def _p(kappa, g, **kw) -> ModelParams:
    return ModelParams(kappa=kappa, coupling=Direct(g=g, G=0.01), **COMMON, **kw)


PRESETS = {
    "fig2a": Preset("fig2a", _p(10.0, 0.01, delta_c=1.0), "delta_a", -2.0, 3.0,
                    "bad cavity, weak dopant, TLS detuning swept"),
    "fig2b": Preset("fig2b", _p(1.0, 0.1, delta_c=1.0), "delta_a", -2.0, 3.0,
                    "unresolved cavity, weak dopant: two cooling dips"),
    "fig3a_weak": Preset("fig3a_weak", _p(0.1, 0.1, delta_a=0.0), "delta_c", -20.0, 10.0,
                         "good cavity, resonant weak dopant, cavity detuning swept"),
    "fig3a": Preset("fig3a", _p(0.1, 3.0, delta_a=0.0), "delta_c", -20.0, 10.0,
                    "good cavity, resonant strong dopant"),
    "fig3b_weak": Preset("fig3b_weak", _p(10.0, 0.72, delta_a=0.0), "delta_c", -40.0, 20.0,
                         "bad cavity, resonant dopant with g^2 < kappa"),
    "fig3b": Preset("fig3b", _p(10.0, 4.0, delta_a=0.0), "delta_c", -40.0, 20.0,
                    "bad cavity resolved by the dressed mode, g^2 > kappa"),
    "fig4a": Preset("fig4a", _p(0.1, 6.0), "delta_polariton", -9.0, 9.0,
                    "equal detunings, polariton sidebands at +-g + omega_m"),
    "fig4b": Preset("fig4b", _p(0.1, 0.8), "delta_polariton", -2.0, 2.0,
                    "equal detunings, interference cooling near the dressed detuning"),
    "fig4c": Preset("fig4c", _p(0.1, 0.2), "delta_polariton", -2.0, 2.0,
                    "equal detunings, weak dopant"),
}

#: one set per reference figure panel, used for route-agreement checks
FIGURE_SETS = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c")

# The final occupation two ways: the steady-state covariance from the
# Lyapunov equation, and the integral of the position noise spectrum.

import time

import numpy as np

from dopedom.model import linearize
from dopedom.presets import FIGURE_SETS, PRESETS
from dopedom.spectral import FrequencyGrid, kernel, spectrum, write_spectrum_csv
from dopedom.stability import check_stability, solve_lyapunov
from dopedom.workflows import at_axis

# %% one point, both routes
p = at_axis(PRESETS["fig3a"].params, "delta_c", -8.0)
L = linearize(p)
cov = solve_lyapunov(L, check_stability(L))
res = spectrum(kernel(p), p.n_m, grid=FrequencyGrid.linspace(-12, 12, 4801))
print("lyapunov:", cov.n_f_q, " symmetric convention:", cov.n_f_sym)
print("spectral:", res.n_f_spectral, f"(rel. error {res.rel_error:.1e}, "
      f"{res.intervals} intervals, domain +-{res.omega_max:g})")
write_spectrum_csv("fig3a_spectrum.csv", res)

# %% the noise spectrum has its weight at the shifted mechanical resonance
S = res.S_q
peak = res.omega[np.argmax(S)]
print("spectral peak at omega =", peak, " dressed pole:", kernel(p).mechanical_pole())

# %% every stable point on every reference grid
start = time.perf_counter()
worst = 0.0
for name in FIGURE_SETS:
    pr = PRESETS[name]
    for x in np.linspace(pr.lo, pr.hi, 50):
        q = at_axis(pr.params, pr.axis, x)
        L = linearize(q)
        v = check_stability(L)
        if not v.stable:
            continue
        a = solve_lyapunov(L, v).n_f_q
        b = spectrum(kernel(q), q.n_m).n_f_spectral
        worst = max(worst, abs(a - b) / max(a, 0.01))
print(f"worst relative gap {worst:.1e} in {time.perf_counter() - start:.1f} s")

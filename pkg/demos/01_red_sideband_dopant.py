# Cooling through a dopant driven on the mechanical red sideband.
# Bad cavity (kappa = 10), weak dopant (g = 0.01); the TLS detuning is swept.

import numpy as np

from dopedom.analytics import StandardOMParams, regime_report, standard_om_nf
from dopedom.presets import PRESETS
from dopedom.workflows import evaluate_point, run_sweep

# %% the working point with the TLS one mechanical frequency below the drive
pr = PRESETS["fig2a"]
p = pr.params.replace(delta_a=1.0)
report = evaluate_point(p, "both", compare_standard=True)
print(report.to_text())

# %% the weak-coupling estimate n_m gamma_m / (gamma_m + G^2/(gamma (1+C)))
r = regime_report(p)
print("estimate:", r.n_f_prediction, " exact:", report.covariance.n_f_q)
# G equals gamma here, so the dopant and the mechanics hybridize and the
# estimate underestimates the residual occupation by half a phonon.

# %% the whole curve next to a bare cavity driven at the swept detuning
rows = run_sweep(pr.params, pr.sweep(101, compare_standard=True))
print(f"{'delta':>8} {'doped':>12} {'bare cavity':>12}")
for row in rows[::5]:
    doped = f"{row.n_f_lyapunov:12.4g}" if row.stable else f"{'unstable':>12}"
    bare = f"{row.n_f_standard:12.4g}" if row.n_f_standard is not None else f"{'unstable':>12}"
    print(f"{row.axis_value:8.3f} {doped} {bare}")

# %% the bare cavity is far from resolving the sideband and barely cools
best = min(standard_om_nf(StandardOMParams.comparable_to(p.replace(delta_c=x))).n_f or np.inf
           for x in np.linspace(0.5, 15, 60))
print("best bare-cavity n_f:", best)

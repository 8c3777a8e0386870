# A resonant dopant dresses the cavity: cooling moves to blue detunings
# around delta_0 = omega_m - g^2/omega_m, even for a bad cavity.

from dopedom.analytics import dressed_detuning, regime_report
from dopedom.presets import PRESETS
from dopedom.workflows import optimize_detuning, run_sweep

for name in ("fig3a_weak", "fig3a", "fig3b_weak", "fig3b"):
    pr = PRESETS[name]
    g = pr.params.coupling.g
    rows = run_sweep(pr.params, pr.sweep(121))
    stable = [r for r in rows if r.stable]
    unstable = [r.axis_value for r in rows if not r.stable]
    best = optimize_detuning(pr.params, "delta_c", pr.lo, pr.hi, scan_points=121)
    print(f"{name}: g={g}, delta_0={dressed_detuning(g):.2f}, "
          f"kappa={pr.params.kappa}, dressed-resolved={regime_report(pr.params).labels['dressed_resolved']}")
    print(f"  best n_f {best.n_f:.3f} at delta_c={best.x:.2f}")
    if unstable:
        print(f"  unstable for delta_c in [{min(unstable):.1f}, {max(unstable):.1f}] "
              f"({len(unstable)} of {len(rows)} points)")
    ground = [r.axis_value for r in stable if r.n_f_lyapunov < 1]
    if ground:
        print(f"  n_f < 1 for delta_c in [{min(ground):.1f}, {max(ground):.1f}]")

# %% the strong dopant in a bad cavity: the comparator never comes close
p = PRESETS["fig3b"].params
bare = optimize_detuning(p, "delta_c", 0.5, 15, standard=True)
print(f"bare cavity: best n_f {bare.n_f:.1f} at delta_c={bare.x:.2f} (n_m = {p.n_m:g})")

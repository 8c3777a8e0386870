"""Spec invariants evaluated on the reference parameter grids."""
import numpy as np
import pytest

from dopedom.model import linearize
from dopedom.presets import PRESETS
from dopedom.stability import check_stability, solve_lyapunov
from dopedom.workflows import at_axis

STEP = 1e-3


def covariance(p):
    L = linearize(p)
    v = check_stability(L)
    return solve_lyapunov(L, v) if v.stable else None


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_occupation_conventions_agree(name):
    pr = PRESETS[name]
    gaps = []
    for x in np.linspace(pr.lo, pr.hi, 200):
        c = covariance(at_axis(pr.params, pr.axis, x))
        if c is not None:
            assert c.n_f_q >= -1e-9
            gaps.append((abs(c.n_f_q - c.n_f_sym) / max(c.n_f_q, 1.0), x))
    worst, where = max(gaps)
    print(f"{name}: worst convention gap {worst:.3g} at {where:.3f}")
    assert worst < 0.05, f"convention gap {worst:.3g} at {pr.axis}={where:.3f}"


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_continuity_in_detuning(name):
    pr = PRESETS[name]
    checked = 0
    for x in np.linspace(pr.lo, pr.hi, 41):
        # points within 0.02 of an unstable detuning count as near a stability boundary
        probes = [covariance(at_axis(pr.params, pr.axis, x + d)) for d in (-0.02, 0.0, STEP, 0.02)]
        if any(c is None for c in probes):
            continue
        a, b = probes[1].n_f_q, probes[2].n_f_q
        assert abs(a - b) < 0.1 * max(a, b), f"jump {a:.6g} -> {b:.6g} at {x:.3f}"
        checked += 1
    assert checked > 10

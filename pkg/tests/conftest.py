import numpy as np
import pytest
from hypothesis import strategies as st

from dopedom.model import Direct, ModelParams, Physical

FIG2A = ModelParams(kappa=10.0, gamma=0.01, gamma_m=1e-5, n_m=1000.0,
                    delta_a=1.0, delta_c=1.0, coupling=Direct(g=0.01, G=0.01))

# three steady-state intensities; found by a random search over physical-mode parameters
TRISTABLE = ModelParams(kappa=0.6389371192795508, gamma=0.47485206312680506, gamma_m=1e-3,
                        delta_a=4.795012962816979, delta_c=4.541513368666424,
                        coupling=Physical(g0=2.409983720358448, g1=0.047749528217100004,
                                          eta=40.97865773826025))

rates = st.floats(1e-3, 20.0)
detunings = st.floats(-20.0, 20.0)
couplings = st.floats(0.0, 5.0)


@st.composite
def direct_params(draw):
    return ModelParams(kappa=draw(rates), gamma=draw(rates), gamma_m=draw(st.floats(1e-6, 1e-1)),
                       delta_a=draw(detunings), delta_c=draw(detunings),
                       n_m=draw(st.floats(0.0, 1e4)),
                       coupling=Direct(g=draw(couplings), G=draw(st.floats(0.0, 0.1))))


def hand_drift(p, g, G):
    """Quadrature drift written out entry by entry from the Langevin equations."""
    ga, da, k, dc, wm, gm = p.gamma, p.delta_a, p.kappa, p.delta_c, p.omega_m, p.gamma_m
    lor = ga**2 + da**2
    s2 = np.sqrt(2.0)
    return np.array([
        [-ga, da, 0, g, 0, 0],
        [-da, -ga, -g, 0, -s2 * G, 0],
        [0, g, -k, dc, -s2 * G * g * ga / lor, 0],
        [-g, 0, -dc, -k, s2 * G * g * da / lor, 0],
        [0, 0, 0, 0, 0, wm],
        [-s2 * G, 0, s2 * G * g * da / lor, s2 * G * g * ga / lor, -wm, -gm],
    ])


@pytest.fixture
def fig2a():
    return FIG2A


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def disk_point(draw, rmin=0.1, rmax=0.9):
    r = draw(st.floats(rmin, rmax))
    t = draw(st.floats(-np.pi, np.pi))
    return complex(r * np.cos(t), r * np.sin(t))


@st.composite
def disk_pair(draw, rmin=0.1, rmax=0.9, sep=0.05):
    a1 = draw(disk_point(rmin, rmax))
    a2 = draw(disk_point(rmin, rmax).filter(lambda z: abs(z - a1) > sep))
    return a1, a2


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])

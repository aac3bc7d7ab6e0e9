import cmath
import math

from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def to_complex(x):
    """Numerical image of a CycNumber under zeta_M -> exp(2 pi i / M) (test oracle only)."""
    M, ell = x.ring.M, x.ring.ell
    z = lambda k: cmath.exp(2j * math.pi * k / M)
    a = sum(float(c) * z(k) for k, c in enumerate(x.a_coeffs()))
    b = sum(float(c) * z(k) for k, c in enumerate(x.b_coeffs()))
    return a + b * math.sqrt(ell)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

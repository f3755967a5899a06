import pytest
from hypothesis import HealthCheck, settings

from lclab.linstrand import Ideal
from lclab.poly import ZZ, MultiPoly, gf

settings.register_profile(
    "repo", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

RP2_NONFACES = [
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6),
]
RP2_TEXT = "sr n=6 nonfaces=[123,124,135,146,156,236,245,256,345,346]"
RP2_COMPLEX = "n=6; nonfaces=123,124,135,146,156,236,245,256,345,346"


def polys(ring, n, texts):
    return [MultiPoly.parse(t, ring, n) for t in texts]


def rp2_ideal(p):
    ring = gf(p) if p else ZZ
    return Ideal(polys(ring, 6, ["*".join(f"x{v}" for v in f) for f in RP2_NONFACES]), ring, 6)


def fermat(p):
    ring = gf(p) if p else ZZ
    return Ideal(polys(ring, 3, ["x1^3 + x2^3 + x3^3"]), ring, 3)


def det2x3(p):
    ring = gf(p) if p else ZZ
    return Ideal(polys(ring, 6, ["x1*x5 - x2*x4", "x1*x6 - x3*x4", "x2*x6 - x3*x5"]), ring, 6)


@pytest.fixture
def criterion_line(request):
    """Write a PASS/FAIL line for an acceptance criterion straight to the terminal."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(text):
        if tr is not None:
            tr.write_line(text)
        else:
            print(text)

    return emit

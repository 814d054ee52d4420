from fractions import Fraction

import pytest

from gdtune.instances import InstanceDistribution, draw_instance
from gdtune.objective import GDConfig, PwPolyObjective
from gdtune.polynomials import MultiPoly


def report(number: int, ok: bool, detail: str = "") -> None:
    """Print the one-line verdict for an acceptance criterion, then assert it."""
    print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, detail


def scalar_quadratic(c) -> PwPolyObjective:
    return PwPolyObjective.polynomial(MultiPoly(1, {(2,): Fraction(c) / 2}))


def random_poly_case(k: int, seed: int = 2024, **extra):
    """The k-th mixed random instance: d in {1, 2}, degree in {2, 3}, p in {0, 1, 2}, H in 4..6."""
    d = 1 + k % 2
    degree = 2 + (k % 2 == 0)
    p = (k // 2) % 3
    params = {"d": d, "degree": degree, "p": p, "coeff_range": [-1, 1],
              "x0_range": [-1, 1], "denominator": 16, **extra}
    inst = draw_instance(InstanceDistribution("random_poly", params, seed), 0, k)
    return inst, 4 + k % 3


@pytest.fixture
def quad_cfg():
    return GDConfig(5, Fraction(1, 10), (0, 2))

import math

import numpy as np
import pytest

from smoothsum.quadrature import integrate_adaptive


def test_gaussian_integral():
    res, l1 = integrate_adaptive(
        lambda x: np.exp(-(x**2) / 2.0), -10.0, 10.0, 1e-12
    )
    assert res.value.real == pytest.approx(math.sqrt(2.0 * math.pi), abs=1e-12)
    assert abs(res.value.real - math.sqrt(2 * math.pi)) <= res.quad_error + 1e-13
    assert l1 == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-10)


def test_oscillatory_complex():
    res, _ = integrate_adaptive(lambda x: np.exp(25j * x), 0.0, 1.0, 1e-12, split_points=())
    exact = (np.exp(25j) - 1.0) / 25j
    assert abs(res.value - exact) <= max(res.quad_error, 1e-12)


def test_split_point_respected():
    # |x| has a kink at 0; a panel straddling it would stall convergence
    res, _ = integrate_adaptive(lambda x: np.abs(x), -1.0, 1.0, 1e-13)
    assert res.value.real == pytest.approx(1.0, abs=1e-13)


def test_refinement_tolerance_contract():
    f = lambda x: 1.0 / (1.0 + 50.0 * x**2)
    coarse, _ = integrate_adaptive(f, -3.0, 3.0, 1e-6)
    fine, _ = integrate_adaptive(f, -3.0, 3.0, 1e-7)
    assert abs(coarse.value - fine.value) <= coarse.quad_error + coarse.tail_bound


def test_deterministic():
    f = lambda x: np.exp(-np.abs(x)) * np.cos(7 * x)
    a, _ = integrate_adaptive(f, -5.0, 5.0, 1e-10)
    b, _ = integrate_adaptive(f, -5.0, 5.0, 1e-10)
    assert a.value == b.value and a.node_count == b.node_count


def test_bad_interval():
    with pytest.raises(ValueError):
        integrate_adaptive(lambda x: x, 1.0, 0.0, 1e-6)

import math

import numpy as np
import pytest

from smoothsum import (
    SumParams,
    brute_S,
    g_product,
    make_gaussian,
    make_test_constant,
    rankin_tail,
)


@pytest.fixture(scope="module")
def f_const():
    return make_test_constant()


@pytest.fixture(scope="module")
def f_gauss():
    return make_gaussian(1, 0.4)


def test_alpha_zero_single_term(f_gauss):
    r = brute_S(SumParams(0, 2, 1000), f_gauss)
    assert r.terms_used == 1
    assert r.value == complex(np.complex128(f_gauss.eval_f(0.0)))
    assert r.tail_certificate == 0.0


def test_full_sum_equals_product(f_const):
    cases = [
        (1, 2, 10, 576 / 210),
        (2, 2, 3, 10 / 3),
        (1, 3, 10, None),
        (0.5 + 0.5j, 3, 30, None),
        (-1, 2, 61, None),
    ]
    for alpha, k, N, closed in cases:
        p = SumParams(alpha, k, N)
        r = brute_S(p, f_const, math.inf)
        g = g_product(p, 1.0).value
        assert abs(r.value - g) <= 1e-12 * abs(g)
        if closed is not None:
            assert r.value.real == pytest.approx(closed, rel=1e-13)


def test_term_counts(f_const):
    assert brute_S(SumParams(1, 2, 10), f_const, math.inf).terms_used == 16
    assert brute_S(SumParams(2, 2, 3), f_const, math.inf).terms_used == 4
    assert brute_S(SumParams(1, 3, 30), f_const, math.inf).terms_used == 3**10


def test_conjugation_symmetry(f_gauss):
    a = brute_S(SumParams(0.6 + 0.8j, 3, 30), f_gauss)
    b = brute_S(SumParams(0.6 - 0.8j, 3, 30), f_gauss)
    assert b.value == pytest.approx(a.value.conjugate(), rel=1e-14)


def test_monotone_refinement(f_gauss):
    p = SumParams(1, 2, 30)
    r1 = brute_S(p, f_gauss, 2.0)
    r2 = brute_S(p, f_gauss, 3.5)
    assert abs(r2.value - r1.value) <= r1.tail_certificate
    assert r2.tail_certificate < r1.tail_certificate


def test_default_cutoff_below_quad_noise(f_gauss):
    r = brute_S(SumParams(1, 2, 30), f_gauss)
    assert r.u_cutoff == pytest.approx(1 + 0.4 * math.sqrt(60.0))
    assert r.tail_certificate < 1e-11


def test_thread_counts_bitwise_identical(f_gauss):
    p = SumParams(0.5 + 0.5j, 3, 30)
    vals = {brute_S(p, f_gauss, threads=t).value for t in (1, 2, 8)}
    assert len(vals) == 1


def test_rankin_tail_never_exceeds_trivial(f_gauss):
    p = SumParams(1, 2, 10)
    cutoff = 3.0
    trivial = brute_S(p, f_gauss, cutoff).tail_certificate
    sharp = rankin_tail(p, f_gauss.sup_tail, cutoff)
    assert sharp <= trivial
    assert sharp < trivial  # strictly smaller on this instance
    assert rankin_tail(p, f_gauss.sup_tail, math.inf) == 0.0


def test_rankin_delta_zero_reduces_to_trivial(f_gauss):
    p = SumParams(1, 2, 10)
    cutoff = 3.0
    only_trivial = rankin_tail(p, f_gauss.sup_tail, cutoff, deltas=[0.0])
    trivial = brute_S(p, f_gauss, cutoff).tail_certificate
    assert only_trivial == pytest.approx(trivial, rel=1e-12)

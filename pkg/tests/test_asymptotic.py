import math

import numpy as np
import pytest
import scipy.integrate

from smoothsum import (
    EtaTooSmall,
    EXP_EULER_GAMMA,
    F_weight,
    SumParams,
    brute_S,
    error_decomposition,
    exact_integral,
    main_term,
    make_gaussian,
    make_tabulated,
    make_test_constant,
    rho_hat,
    sieve_primes,
    tenenbaum_check,
    theorem2_report,
    zeta,
    zeta_partial,
)
from smoothsum.asymptotic import log_n_power


@pytest.fixture(scope="module")
def f():
    return make_gaussian(1, 0.4)


def test_sum_params_validation():
    with pytest.raises(ValueError):
        SumParams(1, 1, 100)
    with pytest.raises(ValueError):
        SumParams(1, 2, 1)


def test_gaussian_basics():
    g = make_gaussian(0, 1)
    assert g.eval_f(0.0) == 1.0
    res = scipy.integrate.quad(lambda x: g.eval_fhat(x).real, -g.fhat_cutoff, g.fhat_cutoff)[0]
    assert res == pytest.approx(1.0, abs=1e-10)  # int fhat = f(0) = 1
    assert make_gaussian(1, 0.5).eval_f(1.0) == 1.0  # peak value
    assert g.fhat_tail_bound <= 1e-14


def test_gaussian_transform_quadrature():
    g = make_gaussian(0, 1)
    re = scipy.integrate.quad(
        lambda x: (g.eval_fhat(x) * np.exp(-1j * x * 2.0)).real, -g.fhat_cutoff, g.fhat_cutoff
    )[0]
    assert re == pytest.approx(math.exp(-2.0), abs=1e-10)


def test_gaussian_validation():
    with pytest.raises(ValueError):
        make_gaussian(0, -1)


def test_tabulated_accepts_correct_convention():
    g = make_gaussian(0.5, 0.8)
    t = make_tabulated(
        g.eval_f, g.eval_fhat, 4.0, g.fhat_cutoff, g.fhat_tail_bound,
        g.sup_tail, g.default_u_cutoff,
    )
    assert not t.test_only


def test_tabulated_rejects_wrong_sign_convention():
    g = make_gaussian(0.5, 0.8)
    bad_fhat = lambda x: g.eval_fhat(x).conjugate()  # e^{-i mu x}: wrong sign
    with pytest.raises(ValueError):
        make_tabulated(
            g.eval_f, bad_fhat, 4.0, g.fhat_cutoff, g.fhat_tail_bound,
            g.sup_tail, g.default_u_cutoff,
        )


def test_exact_integral_alpha_zero(f):
    res = exact_integral(SumParams(0, 2, 30), f, 1e-8)
    f0 = complex(np.complex128(f.eval_f(0.0)))
    assert abs(res.value - f0) <= 1e-8


def test_exact_integral_matches_brute(f):
    for alpha, k in ((1, 2), (-1, 2), (0.5 + 0.5j, 3)):
        p = SumParams(alpha, k, 30)
        ex = exact_integral(p, f, 1e-7)
        br = brute_S(p, f)
        assert abs(ex.value - br.value) <= ex.quad_error + ex.tail_bound + br.tail_certificate


def test_exact_integral_refinement_contract(f):
    p = SumParams(1, 2, 100)
    coarse = exact_integral(p, f, 1e-5)
    fine = exact_integral(p, f, 1e-6)
    assert abs(coarse.value - fine.value) <= coarse.quad_error + coarse.tail_bound


def test_exact_integral_rejects_test_mode(f):
    with pytest.raises(ValueError):
        exact_integral(SumParams(1, 2, 30), make_test_constant(), 1e-7)
    with pytest.raises(ValueError):
        exact_integral(SumParams(1, 2, 30), f, 1e-2)


def test_main_term_alpha_zero(f):
    res = main_term(SumParams(0, 2, 100), f, 1e-8)
    f0 = complex(np.complex128(f.eval_f(0.0)))
    # only the gaussian mass outside |x| <= 3 log N is missing
    assert abs(res.value - f0) <= 1e-6


def test_main_term_eta_guard():
    low_eta = make_gaussian(1, 0.4, eta=0.5)
    with pytest.raises(EtaTooSmall):
        main_term(SumParams(1, 2, 100), low_eta, 1e-6)
    # Re alpha = -2 needs eta > 3
    mid_eta = make_gaussian(1, 0.4, eta=2.0)
    with pytest.raises(EtaTooSmall):
        main_term(SumParams(-2, 2, 100), mid_eta, 1e-6)


def test_main_term_n_floor(f):
    with pytest.raises(ValueError):
        main_term(SumParams(1, 2, 10), f, 1e-6)


def test_main_term_integer_power_route(f):
    p = SumParams(1, 2, 100)
    a = main_term(p, f, 1e-8, h_tol=1e-7)
    b = main_term(p, f, 1e-8, h_tol=1e-7, use_integer_powers=True)
    assert abs(a.value - b.value) <= 1e-9
    with pytest.raises(ValueError):
        main_term(SumParams(0.5, 2, 100), f, 1e-6, use_integer_powers=True)


def test_log_n_power_modulus_identity():
    for alpha in (1.0, -1.0, 0.5 + 0.5j, 2.3 - 1.1j):
        for N in (100, 10**5):
            pw = log_n_power(alpha, N)
            assert abs(pw) == pytest.approx(math.log(N) ** alpha.real, rel=5e-15)


def test_theorem2_alpha_zero_row(f):
    rows = theorem2_report([SumParams(0, 2, 100)], f, tol=1e-7)
    assert rows[0].e_measured <= 1e-6
    assert rows[0].log_n_pow == 1.0


def test_tenenbaum_mertens_row():
    rows = tenenbaum_check([10**4], [0.0])
    zn = zeta_partial(sieve_primes(10**4), 1.0).value.real
    mertens_err = abs(zn / (math.log(10**4) * EXP_EULER_GAMMA) - 1.0)
    assert rows[0].max_rel_err == pytest.approx(mertens_err, rel=1e-9)


def test_tenenbaum_ladder_and_leps():
    rows = tenenbaum_check([10**3, 10**4], np.linspace(-3, 3, 13))
    assert rows[0].max_rel_err > rows[1].max_rel_err
    assert rows[1].l_eps == pytest.approx(math.exp(math.log(10**4) ** 0.5), rel=1e-12)
    with pytest.raises(ValueError):
        tenenbaum_check([100], [0.0])


def test_tenenbaum_conjugate_symmetry():
    # all players are real on the real axis, so the error is even in tau
    log_n = math.log(10**4)
    primes = sieve_primes(10**4)
    for tau in (0.5, 1.5, 3.0):
        errs = []
        for t in (tau, -tau):
            lhs = zeta_partial(primes, 1 + 1j * t).value
            rhs = zeta(1 + 1j * t).regular * log_n * rho_hat(t * log_n).value
            errs.append(abs(lhs / rhs - 1.0))
        assert errs[0] == pytest.approx(errs[1], rel=1e-12)


def test_error_decomposition_gaussian_window(f):
    d = error_decomposition(SumParams(1, 2, 1000), f)
    assert d.i2_abs <= 1e-10  # super-polynomial fhat decay
    assert d.e2_abs > 0


def test_error_decomposition_e2_shrinks(f):
    d3 = error_decomposition(SumParams(1, 2, 1000), f)
    d4 = error_decomposition(SumParams(1, 2, 10000), f)
    # 1/(N log N) scaling: a decade of N shrinks E2 by >= 8
    assert d3.e2_abs / d4.e2_abs >= 8.0


def test_error_decomposition_alpha_zero_closed_form(f):
    d = error_decomposition(SumParams(0, 2, 100), f)
    w = 3.0 * math.log(100)
    # independent quadrature of the tail integral int_{|x|>w} fhat
    tail = 2.0 * scipy.integrate.quad(
        lambda x: (f.eval_fhat(x)).real, w, f.fhat_cutoff, limit=200
    )[0]
    assert d.i2_abs == pytest.approx(abs(tail), rel=1e-4)
    assert d.i2_abs <= math.erfc(0.4 * w / math.sqrt(2.0))  # |tail| envelope


def test_f_weight_cases(f):
    assert F_weight(f, 0.0, 0.7) == complex(np.complex128(f.eval_fhat(0.7)))
    expect0 = complex(np.complex128(f.eval_fhat(0.0))) * np.exp((0.5 + 0.5j) * math.log(EXP_EULER_GAMMA))
    assert F_weight(f, 0.5 + 0.5j, 0.0) == pytest.approx(expect0, rel=1e-12)
    direct = complex(np.complex128(f.eval_fhat(1.0))) * rho_hat(1.0).value
    assert F_weight(f, 1.0, 1.0) == pytest.approx(direct, rel=1e-12)

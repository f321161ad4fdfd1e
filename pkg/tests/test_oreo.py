from fractions import Fraction

import pytest

from infinifood import (
    DomainError,
    NonConvergence,
    OreoParams,
    anderson_cross_check,
    c_step,
    ell_from_package,
    m0_from_masses,
    p_from_ell,
    solve_infinity_oreo,
    w_star_closed_form,
    w_step,
)
from infinifood import constants
from infinifood._kernels import w_iterate

# the measured parameter chain, kept exact for oracle arithmetic
MS, MW = 10, 8
ELL = Fraction(210, 219)
M0 = Fraction(10, 18)
P = Fraction(265, 292)

PARAMS = OreoParams(ms=10.0, mw=8.0, p=float(P), c0=1.0)


def _w_step_exact(w: Fraction) -> Fraction:
    return (1 - P) * MS * (MW + w) / (MS + P * (MW + w))


def test_m0_from_masses():
    assert m0_from_masses(10, 8) == pytest.approx(float(M0), abs=1e-15)
    assert m0_from_masses(1, 1) == 0.5
    assert m0_from_masses(4, 10) == pytest.approx(float(Fraction(4, 14)), abs=1e-15)
    with pytest.raises(DomainError):
        m0_from_masses(0, 8)
    with pytest.raises(DomainError):
        m0_from_masses(10, -1)


def test_ell_from_package():
    assert ell_from_package(219, 21, 10) == pytest.approx(float(ELL), abs=1e-15)
    assert ell_from_package(210, 21, 10) == 1.0
    assert ell_from_package(220, 20, 10) == pytest.approx(float(Fraction(10, 11)), abs=1e-15)
    with pytest.raises(DomainError):
        ell_from_package(219, 21, 10.5)  # mean filling lighter than the creme alone
    with pytest.raises(DomainError):
        ell_from_package(-1, 21, 10)


def test_p_from_ell():
    assert p_from_ell(float(ELL), float(M0)) == pytest.approx(float(P), abs=1e-15)
    assert p_from_ell(0.5, 0.5) == 0.0
    assert p_from_ell(1.0, 0.5) == 1.0
    with pytest.raises(DomainError):
        p_from_ell(0.4, 0.5)
    with pytest.raises(DomainError):
        p_from_ell(1.0, 1.0)


def test_parameter_chain_is_consistent():
    p = p_from_ell(ell_from_package(219, 21, 10), m0_from_masses(10, 8))
    assert p == pytest.approx(float(P), abs=1e-15)


def test_w_step_first_iteration_matches_the_exact_rational():
    expected = _w_step_exact(Fraction(0))
    assert expected == Fraction(3, 7)          # the per-cookie crumb excess, 9 g over 21 cookies
    assert expected == Fraction(9, 21)
    assert w_step(0.0, PARAMS) == pytest.approx(float(expected), abs=1e-12)


def test_w_step_with_pure_creme_filling_adds_no_crumbs():
    params = OreoParams(ms=10.0, mw=8.0, p=1.0)
    for w in (0.0, 0.4, 3.0):
        assert w_step(w, params) == 0.0


def test_w_step_rejects_negative_mass():
    with pytest.raises(DomainError):
        w_step(-0.1, PARAMS)


def test_w_star_is_a_fixed_point_with_tiny_quadratic_residual():
    w_star, m_star = w_star_closed_form(PARAMS)
    assert w_step(w_star, PARAMS) == pytest.approx(w_star, abs=1e-12)
    p = PARAMS.p
    residual = p * w_star**2 + p * (10 + 8) * w_star - (1 - p) * 10 * 8
    assert abs(residual) <= 1e-9 * max(1.0, 10.0 * 8.0)
    assert m_star == pytest.approx((10 + w_star) / (18 + w_star), abs=1e-15)


def test_w_star_closed_form_headline_values():
    w_star, m_star = w_star_closed_form(PARAMS)
    assert w_star == pytest.approx(0.44, abs=5e-3)
    assert m_star == pytest.approx(0.566, abs=5e-4)
    assert w_star == pytest.approx(0.4419777269503449, abs=1e-12)
    assert m_star == pytest.approx(0.566207045770957, abs=1e-12)


def test_w_star_degenerate_boundaries():
    w_star, m_star = w_star_closed_form(OreoParams(ms=10.0, mw=8.0, p=1.0))
    assert w_star == 0.0
    assert m_star == pytest.approx(10 / 18, abs=1e-15)
    with pytest.raises(DomainError):
        w_star_closed_form(OreoParams(ms=10.0, mw=8.0, p=0.0))


def test_long_iteration_agrees_with_the_closed_form():
    w_star, _ = w_star_closed_form(PARAMS)
    iterated = w_iterate(PARAMS.p, 10.0, 8.0, 0.0, 10**6)
    assert abs(iterated - w_star) <= 1e-12


def test_c_step_reproduces_the_loaded_fraction_from_a_pure_start():
    assert c_step(1.0, float(M0), float(P)) == pytest.approx(float(ELL), abs=1e-15)
    assert c_step(0.7, 0.5, 1.0) == 1.0
    assert c_step(0.0, 0.5, float(P)) == float(P)


def test_solution_headline_values():
    sol = solve_infinity_oreo(PARAMS)
    assert sol.c_star == pytest.approx(0.958, abs=1e-3)
    assert sol.c_star == pytest.approx(0.957672987004213, abs=1e-12)
    assert sol.w_star == pytest.approx(0.4419777269503449, abs=1e-12)
    assert sol.iterations > 0
    # the trace ends where the closed form says it should
    _, c_final, w_final, _ = sol.trace[-1]
    assert c_final == pytest.approx(sol.c_star, abs=1e-11)
    assert w_final == pytest.approx(sol.w_star, abs=1e-11)


def test_trace_starts_at_the_initial_conditions_and_follows_the_maps():
    sol = solve_infinity_oreo(PARAMS)
    n0, c0, w0, m0 = sol.trace[0]
    assert (n0, c0, w0) == (0, 1.0, 0.0)
    assert m0 == pytest.approx(float(M0), abs=1e-15)
    for (n_prev, c_prev, w_prev, m_prev), (n, c, w, m) in zip(sol.trace, sol.trace[1:]):
        assert n == n_prev + 1
        assert w == pytest.approx(w_step(w_prev, PARAMS), abs=1e-15)
        assert c == pytest.approx(c_step(c_prev, m_prev, PARAMS.p), abs=1e-15)
        assert m == pytest.approx((10 + w) / (18 + w), abs=1e-15)


def test_fifty_manual_steps_land_on_the_fixed_point():
    sol = solve_infinity_oreo(PARAMS)
    c, w, m = 1.0, 0.0, float(M0)
    for _ in range(50):
        w_next = w_step(w, PARAMS)
        c = c_step(c, m, PARAMS.p)
        w = w_next
        m = (10 + w) / (18 + w)
    assert abs(c - sol.c_star) <= 1e-12
    assert abs(w - sol.w_star) <= 1e-12


def test_limit_is_independent_of_the_starting_fraction():
    finals = []
    for c0 in (0.0, 0.25, 0.5, 0.75, 1.0):
        sol = solve_infinity_oreo(OreoParams(ms=10.0, mw=8.0, p=float(P), c0=c0))
        finals.append(sol.trace[-1][1])
        assert sol.c_star == pytest.approx(0.957672987004213, abs=1e-12)
    assert max(finals) - min(finals) <= 1e-10


def test_crumb_map_contracts_by_at_least_one_minus_p():
    w_star, _ = w_star_closed_form(PARAMS)
    shrink = 1.0 - PARAMS.p
    for w in (0.0, 0.1, 0.44, 1.0, 5.0, 50.0):
        assert abs(w_step(w, PARAMS) - w_star) <= shrink * abs(w - w_star) + 1e-15


def test_creme_map_contracts_toward_the_instantaneous_target():
    sol = solve_infinity_oreo(OreoParams(ms=10.0, mw=8.0, p=float(P), c0=0.0))
    p = PARAMS.p
    for (_, c_prev, _, m_prev), (_, c, _, _) in zip(sol.trace, sol.trace[1:]):
        target = p / (1.0 - (1.0 - p) * m_prev)
        assert abs(c - target) <= (1.0 - p) * abs(c_prev - target) + 1e-14


def test_trace_values_stay_in_their_ranges():
    for c0 in (0.0, 0.5, 1.0):
        sol = solve_infinity_oreo(OreoParams(ms=10.0, mw=8.0, p=float(P), c0=c0))
        low = min(c0, PARAMS.p)
        m0 = float(M0)
        for n, c, w, m in sol.trace:
            assert low - 1e-12 <= c <= 1.0 + 1e-12
            assert w >= 0.0
            if n >= 1:
                assert m0 < m < 1.0


def test_solver_rejects_degenerate_parameters():
    with pytest.raises(DomainError):
        solve_infinity_oreo(OreoParams(ms=10.0, mw=8.0, p=1.0))
    with pytest.raises(DomainError):
        solve_infinity_oreo(OreoParams(ms=10.0, mw=8.0, p=0.0))
    with pytest.raises(DomainError):
        solve_infinity_oreo(PARAMS, tol=0.0)
    with pytest.raises(DomainError):
        solve_infinity_oreo(PARAMS, max_iter=0)


def test_solver_reports_non_convergence_with_the_partial_trace():
    with pytest.raises(NonConvergence) as excinfo:
        solve_infinity_oreo(PARAMS, max_iter=2)
    partial = excinfo.value.partial
    assert len(partial) == 3
    assert partial[0][0] == 0


def test_params_validation():
    with pytest.raises(DomainError):
        OreoParams(ms=0.0, mw=8.0, p=0.5)
    with pytest.raises(DomainError):
        OreoParams(ms=10.0, mw=8.0, p=1.2)
    with pytest.raises(DomainError):
        OreoParams(ms=10.0, mw=8.0, p=0.5, c0=-0.1)


def test_default_params_match_the_measured_chain():
    params = constants.default_oreo_params()
    assert params.ms == 10.0
    assert params.mw == 8.0
    assert params.p == pytest.approx(float(P), abs=1e-15)


def test_anderson_cross_check_values():
    assert anderson_cross_check(2.68, 0.29) == pytest.approx(0.522592791823561, abs=1e-12)
    assert anderson_cross_check(2.68, 0.29) == pytest.approx(0.5226, abs=5e-5)
    assert anderson_cross_check(1.0, 0.29) == 0.29
    assert anderson_cross_check(1.86, 0.29) == pytest.approx(0.43172722906995353, abs=1e-12)
    with pytest.raises(DomainError):
        anderson_cross_check(0.0, 0.29)
    with pytest.raises(DomainError):
        anderson_cross_check(2.68, 1.0)

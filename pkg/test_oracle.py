import os
from itertools import product
from math import comb
import pytest
from termcolor import cprint
import settings
from oracle import (
    TermBudgetError,
    cone_series,
    det_coefficients,
    det_valuation,
    enumerate_cone_points,
    in_weyl_cone,
    lex_minimal_attains,
    oracle_compare,
    r_sum,
    theta1_closed,
    theta1_counting_check,
    theta1_direct,
    theta2,
    torus_valuations,
    valuations_monotone,
)
from polyring import LaurentPoly, series_expand
from zetacore import local_zeta, zeta_parameters

ENV_KEYS = ["PROISO_TERM_BUDGET", "PROISO_WORKERS", "PROISO_VERBOSE"]


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Keep budget and worker settings local to each test"""
    original_env = {key: os.environ.get(key) for key in ENV_KEYS}
    try:
        for key in ENV_KEYS:
            os.environ.pop(key, None)
        settings.reset()
        yield
    finally:
        settings.reset()
        for key, value in original_env.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value


def small_points(n: int, total: int):
    """All e in N^{n+1} with sum(e) <= total."""
    return [e for e in product(range(total + 1), repeat=n + 1) if sum(e) <= total]


def q_poly(*exponents: int) -> LaurentPoly:
    return LaurentPoly({(eq, 0): 1 for eq in exponents})


def test_torus_valuations_examples():
    assert torus_valuations(1, 2, (0, 1, 0)) == ((1, 0), 0)
    assert torus_valuations(2, 2, (1, 0, 0)) == ((1, 1), 2)
    assert torus_valuations(3, 4, (0,) * 5) == ((0,) * 4, 0)
    with pytest.raises(ValueError):
        torus_valuations(1, 2, (0, 1))
    with pytest.raises(ValueError):
        torus_valuations(1, 2, (0, -1, 0))


def test_valuations_are_monotone():
    for m in range(1, 5):
        for n in range(2, 5):
            for e in small_points(n, 3):
                assert valuations_monotone(torus_valuations(m, n, e)), (m, n, e)


def test_weyl_cone_membership():
    assert in_weyl_cone((0, 1, 0, 5), (1, 0))
    assert not in_weyl_cone((3, 0, 1, 0), (1, 0))
    assert in_weyl_cone((0, 0, 0), (0,))


def test_det_valuation_examples():
    assert det_valuation(1, 2, (0, 1, 0)) == 2 == zeta_parameters(1, 2).B[1]
    assert det_valuation(2, 2, (0, 0, 1)) == 5 == comb(3, 2) + 2
    assert det_valuation(3, 3, (0, 0, 0, 0)) == 0


def test_det_coefficients_match_parameters():
    for m in range(1, 6):
        for n in range(2, 7):
            params = zeta_parameters(m, n)
            coefficients = det_coefficients(m, n)
            assert coefficients[0] == params.Btilde0
            assert coefficients[-1] == params.Btilden
            assert list(coefficients[1:-1]) == list(params.B[1:n])


def test_det_valuation_two_ways():
    for m in range(1, 4):
        for n in range(2, 5):
            for e in small_points(n, 3):
                det_valuation(m, n, e)


def test_theta1_examples():
    assert theta1_direct(1, 2, (0, 1, 0)) == 1
    assert theta1_direct(2, 2, (0, 0, 0)) == 0
    assert theta1_direct(2, 2, (0, 1, 0)) == 3
    assert theta1_closed(1, 2, (0, 1, 0)) == 1
    assert theta2(1, 2, (0, 1, 0)) == 3


def test_theta1_closed_top_coefficient():
    for m in range(1, 6):
        for n in range(2, 6):
            e = (0,) * n + (1,)
            assert theta1_closed(m, n, e) == comb(2 * m + n - 2, n - 1)


def test_theta1_direct_equals_closed_form():
    for m in range(1, 5):
        for n in range(2, 5):
            for e in small_points(n, 6):
                assert theta1_direct(m, n, e) == theta1_closed(m, n, e), (m, n, e)


def test_lex_minimal_f_attains_minimum():
    for m in range(1, 4):
        for n in range(2, 4):
            assert theta1_counting_check(m, n)
            for e in small_points(n, 3):
                assert lex_minimal_attains(m, n, e)


def test_r_sum_vanishes():
    for m in range(1, 31):
        for n in range(1, 31):
            assert r_sum(m, n) == 0, (m, n)


def test_enumeration_respects_degree_bound():
    coefficients = det_coefficients(2, 3)
    points = enumerate_cone_points(2, 3, 12)
    assert (0, 0, 0, 0) in points
    assert all(sum(c * x for c, x in zip(coefficients, e)) <= 12 for e in points)
    assert len(points) == len(set(points))


def test_term_budget_is_enforced():
    os.environ["PROISO_TERM_BUDGET"] = "3"
    with pytest.raises(TermBudgetError):
        enumerate_cone_points(1, 2, 10)


def test_cone_series_grenham_n2():
    series = cone_series(1, 2, 5)
    assert list(series.coeffs) == [q_poly(0), LaurentPoly(), q_poly(4, 5), q_poly(6), q_poly(8, 9, 10), q_poly(10, 11)]
    assert series == series_expand(local_zeta(1, 2), 5)


def test_cone_series_m2_n2_degree_four():
    assert cone_series(2, 2, 4).coefficient(4) == q_poly(10)


def test_cone_series_at_degree_zero():
    for m, n in [(1, 2), (3, 3), (2, 5)]:
        assert list(cone_series(m, n, 0).coeffs) == [LaurentPoly.one()]


@pytest.mark.parametrize("m,n,K", [(1, 2, 10), (2, 2, 10), (3, 2, 8), (1, 3, 10), (2, 3, 8), (1, 4, 8), (2, 4, 6)])
def test_oracle_matches_closed_form(m, n, K):
    assert oracle_compare(m, n, K)


def test_oracle_grid_depth_ten():
    for m in range(1, 4):
        for n in range(2, 5):
            assert oracle_compare(m, n, 10), (m, n)


def test_oracle_with_workers():
    settings.configure(workers=2)
    assert oracle_compare(2, 3, 8)


def test_oracle_detects_wrong_theta1():
    def shifted(m, n, e):
        value = theta1_direct(m, n, e)
        if e[n] > 0 and not any(e[:n]):
            value += 1
        return value

    assert not oracle_compare(1, 2, 10, theta1=shifted)


def test_cone_series_rejects_bad_input():
    with pytest.raises(ValueError):
        cone_series(1, 7, 2)
    with pytest.raises(ValueError):
        cone_series(0, 2, 2)
    with pytest.raises(ValueError):
        cone_series(1, 2, -1)


if __name__ == "__main__":
    cprint("Running oracle tests...", "yellow")
    pytest.main([__file__, "-v"])

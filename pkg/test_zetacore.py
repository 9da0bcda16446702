from math import comb, factorial
import pytest
from termcolor import cprint
from polyring import LaurentPoly, RationalFnQT, rational_equal, series_expand
from zetacore import (
    RangeError,
    compose,
    descent_length_table,
    dstar_zeta,
    functional_equation_check,
    gl_integral_identity,
    grenham_display_one,
    grenham_display_two,
    grenham_identity_check,
    local_zeta,
    longest_element,
    parameter_relations_hold,
    poincare_polynomial,
    q_factorial,
    subgroup_counts,
    theta1_coefficients,
    weyl_element,
    weyl_elements,
    weyl_numerator_terms,
    weyl_symmetry_check,
    zeta_parameters,
)


def test_parameters_grenham_case():
    params = zeta_parameters(1, 2)
    assert (params.A[1], params.B[1]) == (5, 2)
    assert (params.Atilde0, params.Btilde0) == (6, 3)
    assert (params.Atilden, params.Btilden) == (8, 4)
    assert (params.fe_a, params.fe_b) == (15, -7)
    assert params.A[0] == params.B[0] == 0


def test_parameters_m2_n2():
    params = zeta_parameters(2, 2)
    assert (params.A[1], params.B[1]) == (19, 7)
    assert (params.Atilde0, params.Btilde0) == (10, 4)
    assert (params.Atilden, params.Btilden) == (14, 5)
    assert (params.fe_a, params.fe_b) == (25, -9)
    assert params.factor_pairs() == [(19, 7), (10, 4), (14, 5)]


def test_parameter_relations_on_full_grid():
    for m in range(1, 61):
        for n in range(2, 21):
            assert parameter_relations_hold(m, n), (m, n)


def test_theta1_coefficients_end_in_top_binomial():
    for m in range(1, 6):
        for n in range(2, 6):
            assert theta1_coefficients(m, n)[-1] == m * comb(2 * m + n - 2, n - 1)


def test_parameters_reject_bad_input():
    with pytest.raises(ValueError):
        zeta_parameters(0, 2)
    with pytest.raises(ValueError):
        zeta_parameters(2, 1)


def test_weyl_group_n2_and_n3():
    elements = weyl_elements(2)
    assert sorted((w.length, w.descent) for w in elements) == [(0, (0,)), (1, (1,))]
    elements = weyl_elements(3)
    assert sorted(w.length for w in elements) == [0, 1, 1, 2, 2, 3]
    full = [w for w in elements if w.descent == (1, 1)]
    assert len(full) == 1
    assert full[0] == longest_element(3)
    assert full[0].length == 3


def test_weyl_element_validation():
    with pytest.raises(ValueError):
        weyl_element((1, 1, 2))
    assert compose(weyl_element((2, 1, 3)), weyl_element((2, 1, 3))) == weyl_element((1, 2, 3))


@pytest.mark.parametrize("n", range(2, 7))
def test_poincare_polynomial_is_q_factorial(n):
    assert poincare_polynomial(n) == q_factorial(n)
    assert sum(descent_length_table(n).values()) == factorial(n)
    assert weyl_symmetry_check(n)


def test_poincare_polynomial_n4():
    assert poincare_polynomial(4) == [1, 3, 5, 6, 5, 3, 1]


def test_local_zeta_grenham_n2():
    expected = RationalFnQT(LaurentPoly.one(), [(4, 2), (5, 2), (6, 3)])
    assert rational_equal(local_zeta(1, 2), expected)


def test_local_zeta_m2_n2():
    expected = RationalFnQT(LaurentPoly({(0, 0): 1, (18, 7): 1}), [(19, 7), (10, 4), (14, 5)])
    assert local_zeta(2, 2) == expected


def test_local_zeta_grenham_n3():
    expected = RationalFnQT(LaurentPoly.one(), [(12, 4)] + [(4 + i, 2) for i in range(1, 4)])
    assert rational_equal(local_zeta(1, 3), expected)


def test_dstar_closed_form():
    assert dstar_zeta(1) == RationalFnQT(LaurentPoly({(0, 0): 1, (4, 2): 1}), [(5, 2), (6, 3), (8, 4)])
    assert (18, 7) in dstar_zeta(2).numerator.terms
    for m in range(1, 7):
        assert rational_equal(local_zeta(m, 2), dstar_zeta(m)), m
    with pytest.raises(ValueError):
        dstar_zeta(0)


@pytest.mark.parametrize("n", range(2, 7))
def test_grenham_identities(n):
    assert grenham_identity_check(n)
    assert rational_equal(grenham_display_one(n), grenham_display_two(n))


@pytest.mark.parametrize("n", range(2, 8))
def test_gl_integral_identity(n):
    lhs, rhs = gl_integral_identity(n)
    assert rational_equal(lhs, rhs)


def test_mutated_gl_identity_fails():
    lhs, rhs = gl_integral_identity(3, exponent_shift=1)
    assert not rational_equal(lhs, rhs)


def test_functional_equation_examples():
    report = functional_equation_check(1, 2)
    assert (report.holds, report.sign, report.a, report.b) == (True, -1, 15, -7)
    report = functional_equation_check(2, 2)
    assert (report.holds, report.sign, report.a, report.b) == (True, -1, 25, -9)
    assert functional_equation_check(1, 3).sign == 1


def test_functional_equation_grid():
    for m in range(1, 5):
        for n in range(2, 6):
            report = functional_equation_check(m, n)
            params = zeta_parameters(m, n)
            assert report.holds, (m, n)
            assert report.sign == (-1) ** (n - 1)
            assert (report.a, report.b) == (params.fe_a, params.fe_b)


def test_numerator_has_one_term_per_weyl_element():
    for m in range(1, 4):
        for n in range(2, 6):
            terms = weyl_numerator_terms(m, n)
            assert len(terms) == factorial(n)
            if n <= 3:
                assert len({(eq, et) for _, eq, et in terms}) == factorial(n)


def test_weyl_range_cap():
    with pytest.raises(RangeError):
        local_zeta(1, 10)
    with pytest.raises(RangeError):
        functional_equation_check(1, 9)


def test_subgroup_counts_at_two():
    assert subgroup_counts(1, 2, 2, 4) == [1, 0, 48, 64, 1792]


def test_series_coefficients_are_counts():
    for m in range(1, 4):
        for n in range(2, 5):
            assert series_expand(local_zeta(m, n), 12).has_nonnegative_coefficients(), (m, n)


if __name__ == "__main__":
    cprint("Running zeta function tests...", "yellow")
    pytest.main([__file__, "-v"])

"""Tests for the analytic toy problems"""

import numpy as np
import pytest

from tsrom.errors import DuplicateParameterError, OutOfDomainError
from tsrom.toyprobs import (
    ADVECTION_DIFFUSION,
    VARCOEF_BVP,
    adv_diff_solution,
    bvp_solution,
    fd_solve,
    generate,
    get_problem,
    midpoints,
    ode_residual,
    solution,
)


class TestClosedForms:
    """Test suite for the closed-form solutions"""

    @pytest.mark.parametrize("s", [2.0, 5.5, 11.0, 20.0])
    def test_adv_diff_boundary_conditions(self, s):
        """f(-10) = f(10) = 0 exactly"""
        assert adv_diff_solution(-10.0, s) == 0.0
        assert adv_diff_solution(10.0, s) == 0.0

    @pytest.mark.parametrize("s", [0.1, 0.5, 0.9])
    def test_bvp_boundary_conditions(self, s):
        """f(0) = f(1) = 0 exactly"""
        assert bvp_solution(0.0, s) == 0.0
        assert bvp_solution(1.0, s) == 0.0

    def test_bvp_midpoint_value(self):
        """f(0.5, 0.5) = ln(2) / 4"""
        assert bvp_solution(0.5, 0.5) == pytest.approx(0.25 * np.log(2.0), rel=1e-14)

    def test_bvp_peak_increases_with_s(self):
        """f(0.5, s) is strictly increasing over 100 values of s"""
        peaks = np.array([bvp_solution(0.5, s) for s in np.linspace(0.1, 0.9, 100)])

        assert np.all(np.diff(peaks) > 0)

    def test_vectorized(self):
        """Arrays in, arrays out"""
        x = np.linspace(0.0, 1.0, 7)

        values = bvp_solution(x, 0.3)

        assert values.shape == (7,)
        assert np.all(values[1:-1] > 0)

    @pytest.mark.parametrize("s", [2.0, 3.0, 8.0, 20.0])
    def test_adv_diff_residual(self, s):
        """Closed form satisfies f' + s f'' = -1"""
        x = np.linspace(-9.99, 9.99, 201)

        assert np.max(np.abs(ode_residual(ADVECTION_DIFFUSION, s, x))) <= 1e-3

    @pytest.mark.parametrize("s", [0.1, 0.4, 0.7, 0.85])
    def test_bvp_residual(self, s):
        """Closed form satisfies -(a f')' = 1"""
        x = np.linspace(0.001, 0.999, 201)

        assert np.max(np.abs(ode_residual(VARCOEF_BVP, s, x))) <= 1e-3

    def test_bvp_residual_near_singular_coefficient(self):
        """Away from x = 0.5 the residual stays small for s > 0.85"""
        x = np.linspace(0.001, 0.999, 201)
        x = x[np.abs(x - 0.5) > 0.1]

        assert np.max(np.abs(ode_residual(VARCOEF_BVP, 0.9, x))) <= 1e-3

    def test_out_of_domain(self):
        """Test s and x outside the problem domain"""
        with pytest.raises(OutOfDomainError):
            adv_diff_solution(0.0, 1.0)
        with pytest.raises(OutOfDomainError):
            bvp_solution(0.5, 0.95)
        with pytest.raises(OutOfDomainError):
            bvp_solution(1.5, 0.5)

    def test_dispatch(self):
        """solution dispatches on the problem kind"""
        assert solution(get_problem("varcoef_bvp"), 0.5, 0.5) == bvp_solution(0.5, 0.5)
        with pytest.raises(ValueError):
            get_problem("heat")


class TestFiniteDifference:
    """Test suite for the finite-difference oracle"""

    @pytest.mark.parametrize("problem,s", [(VARCOEF_BVP, 0.5), (ADVECTION_DIFFUSION, 4.0)])
    def test_second_order_convergence(self, problem, s):
        """Halving h cuts the error by about four"""
        errors = []
        for m_points in (101, 201):
            x, f = fd_solve(problem, s, m_points)
            errors.append(np.max(np.abs(f - solution(problem, x, s))))

        assert errors[1] < errors[0] / 3.0
        assert errors[1] < 1e-2

    def test_boundary_values(self):
        """Dirichlet values are zero"""
        x, f = fd_solve(VARCOEF_BVP, 0.3, 51)

        assert x[0] == 0.0 and x[-1] == 1.0
        assert f[0] == 0.0 and f[-1] == 0.0


class TestGenerate:
    """Test suite for column generation"""

    def test_bvp_columns(self):
        """11 training columns with m_points rows each"""
        columns = generate(VARCOEF_BVP, 101, np.linspace(0.1, 0.9, 11))

        assert len(columns) == 11
        assert all(len(column) == 101 for column in columns)
        assert np.array_equal(columns[0].row_ids, np.arange(101))
        assert columns[0].values[0] == 0.0

    def test_adv_diff_columns(self):
        """15 columns on [2, 20]"""
        columns = generate(ADVECTION_DIFFUSION, 51, np.linspace(2.0, 20.0, 15))

        assert [column.parameter_value for column in columns] == list(np.linspace(2.0, 20.0, 15))

    def test_values_match_closed_form(self):
        """Grid includes both endpoints"""
        column = generate(VARCOEF_BVP, 5, [0.3])[0]

        np.testing.assert_array_equal(column.values, bvp_solution(np.linspace(0.0, 1.0, 5), 0.3))

    def test_duplicate_parameter(self):
        """Test repeated s values"""
        with pytest.raises(DuplicateParameterError):
            generate(VARCOEF_BVP, 11, [0.2, 0.2])

    def test_out_of_domain(self):
        """Test s outside the domain"""
        with pytest.raises(OutOfDomainError):
            generate(ADVECTION_DIFFUSION, 11, [1.0, 3.0])

    def test_too_few_points(self):
        """Test m_points below three"""
        with pytest.raises(ValueError):
            generate(VARCOEF_BVP, 2, [0.3])

    def test_midpoints(self):
        """Test interval midpoints"""
        np.testing.assert_allclose(midpoints([0.0, 1.0, 3.0]), [0.5, 2.0])

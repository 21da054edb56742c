"""Reproduction runs on the two toy problem families.

These build the full 1999-row instances and are marked slow.
"""

import numpy as np
import pytest
from scipy.stats import spearmanr

from tsrom.core.tsqr import tssvd
from tsrom.models.calibration import calibrate
from tsrom.models.qoi import QuantityOfInterest
from tsrom.models.response_surface import ResponseSurface
from tsrom.models.rom import RomModel, predict_with_split, variation_profile
from tsrom.storage import assemble
from tsrom.toyprobs import ADVECTION_DIFFUSION, VARCOEF_BVP, bvp_solution, generate, midpoints

pytestmark = pytest.mark.slow

M_POINTS = 1999


def nearest(sites, target):
    return int(np.argmin(np.abs(np.asarray(sites) - target)))


@pytest.fixture(scope="module")
def bvp():
    """Variable-coefficient instance: 11 training columns, midpoint testing sites"""
    grid = np.linspace(0.1, 0.9, 11)
    training = generate(VARCOEF_BVP, M_POINTS, grid)
    sites = midpoints(grid)
    testing = generate(VARCOEF_BVP, M_POINTS, sites)
    factors = tssvd(assemble(training, chunk_rows=256))
    return {"grid": grid, "training": training, "sites": sites, "testing": testing, "factors": factors}


@pytest.fixture(scope="module")
def bvp_report(bvp):
    model = RomModel(bvp["factors"])
    report = calibrate(model, bvp["testing"], n_candidates=20)
    return model, report


class TestVariationRange:
    """Variation metric on the variable-coefficient instance"""

    def test_tau_range(self, bvp):
        """tau over the testing sites spans roughly 0.1 to 42.8"""
        taus = np.concatenate([variation_profile(bvp["factors"], s) for s in bvp["sites"]])

        assert taus.min() >= 0.05
        assert taus.max() <= 90.0
        assert np.any((taus >= 0.05) & (taus <= 0.2))
        assert np.any((taus >= 42.8 / 2) & (taus <= 42.8 * 2))

    def test_oscillation_near_transition(self, bvp):
        """Higher modes vary faster near s = 0.9"""
        factors = bvp["factors"]

        assert variation_profile(factors, 0.86)[6] > variation_profile(factors, 0.14)[6]

    def test_oscillation_at_high_advection(self):
        """Higher modes vary faster at small s for advection-diffusion"""
        grid = np.linspace(2.0, 20.0, 15)
        factors = tssvd(assemble(generate(ADVECTION_DIFFUSION, M_POINTS, grid), chunk_rows=256))

        assert variation_profile(factors, 2.5)[6] > variation_profile(factors, 19.0)[6]

    def test_neighbor_differences_grow_near_transition(self, bvp):
        """Around s = 0.85 the neighbor differences |V[j+1, k] - V[j, k]| grow over the leading modes"""
        factors = bvp["factors"]
        j = int(np.searchsorted(bvp["grid"], 0.85)) - 1
        differences = np.abs(factors.v[j + 1] - factors.v[j])

        increasing = 1
        while increasing < differences.size and (
            differences[increasing] > differences[increasing - 1]
        ):
            increasing += 1

        assert bvp["grid"][j] < 0.85 < bvp["grid"][j + 1]
        assert increasing >= 2


class TestSingularValues:
    """Decay of the singular values of the variable-coefficient instance"""

    def test_decay_by_eighth_value(self, bvp):
        """sigma_k / sigma_1 falls below 1e-4 by k = 8 and matches a dense SVD"""
        dense = np.column_stack([column.values for column in bvp["training"]])
        oracle = np.linalg.svd(dense, compute_uv=False)
        sigma = bvp["factors"].sigma

        np.testing.assert_allclose(sigma[:8], oracle[:8], rtol=1e-10)
        assert sigma[7] / sigma[0] < 1e-4


class TestCalibratedSplit:
    """Split and error pattern at the calibrated threshold"""

    def test_split_pattern(self, bvp_report):
        """Few terms are interpolated near s = 0.855, many near s = 0.2325"""
        _, report = bvp_report
        sites = report.testing_sites

        assert report.site_splits[nearest(sites, 0.855)] <= 3
        assert report.site_splits[nearest(sites, 0.2325)] >= 5
        assert report.site_splits[nearest(sites, 0.86)] < report.site_splits[nearest(sites, 0.14)]

    def test_error_magnitude(self, bvp_report):
        _, report = bvp_report

        assert report.site_errors.max() <= 0.03

    def test_error_grows_toward_transition(self, bvp_report):
        """Errors trend upward with s"""
        _, report = bvp_report

        correlation, _ = spearmanr(report.testing_sites, report.site_errors)

        assert correlation > 0

    def test_model_holds_chosen_threshold(self, bvp_report):
        model, report = bvp_report

        assert model.tau_bar == report.chosen_tau_bar
        assert report.chosen_tau_bar in report.candidate_thresholds


class TestQoiComparison:
    """ROM-derived QoIs against the PCHIP response surface, both built on PCHIP"""

    def _errors(self, bvp, qoi, s):
        model = RomModel(bvp["factors"], interpolant_kind="pchip")
        truth = bvp["testing"][nearest(bvp["sites"], s)]
        surface = ResponseSurface(
            [
                (column.parameter_value, qoi(column.row_ids, column.values))
                for column in bvp["training"]
            ],
            "pchip",
        )
        prediction = predict_with_split(model, truth.parameter_value, bvp["factors"].n_cols)

        q_truth = qoi(truth.row_ids, truth.values)
        rom_error = abs(qoi(prediction.row_ids, prediction.mean) - q_truth)
        surface_error = abs(surface(truth.parameter_value) - q_truth)
        return q_truth, rom_error, surface_error

    def test_sharp_transition(self, bvp):
        """Exceedance of the peak value at s = 0.56 switches on inside the interval [0.5, 0.58]"""
        transition = 0.56
        qoi = QuantityOfInterest(kind="exceedance", threshold=float(bvp_solution(0.5, transition)))
        order = np.argsort(np.abs(bvp["sites"] - transition))
        closest = sorted(float(s) for s in bvp["sites"][order[:2]])

        assert closest == pytest.approx([0.54, 0.62])
        for s in closest:
            _, rom_error, surface_error = self._errors(bvp, qoi, s)
            assert rom_error < surface_error

    def test_sharp_transition_truth(self, bvp):
        """The QoI is zero below the transition and positive above it"""
        qoi = QuantityOfInterest(kind="exceedance", threshold=float(bvp_solution(0.5, 0.56)))

        below, _, _ = self._errors(bvp, qoi, 0.54)
        above, _, _ = self._errors(bvp, qoi, 0.62)

        assert below == 0.0
        assert above > 0.0

    def test_smooth_mean(self, bvp):
        """ROM and surface errors on the mean QoI agree within a factor of 3"""
        qoi = QuantityOfInterest(kind="mean")

        results = [self._errors(bvp, qoi, s) for s in bvp["sites"]]
        rom_worst = max(rom_error for _, rom_error, _ in results)
        surface_worst = max(surface_error for _, _, surface_error in results)

        assert rom_worst <= 3.0 * surface_worst
        assert surface_worst <= 3.0 * rom_worst
        for q_truth, rom_error, surface_error in results:
            assert rom_error < 0.05 * abs(q_truth)
            assert surface_error < 0.05 * abs(q_truth)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isodw import DomainTooSmall, SpectralProblem, eigen_lowest, isospectral_report, quartic_seed, razavy_seed
from isodw.spectra import count_nodes, family_box

HARMONIC = lambda x: x * x


class TestEigenLowest:
    def test_harmonic_levels(self):
        res = eigen_lowest(SpectralProblem(HARMONIC, (-10, 10), 4000), 3)
        np.testing.assert_allclose(res.values, [1, 3, 5], atol=1e-3)

    def test_second_order_convergence(self):
        errs = []
        for n in (1000, 2000, 4000):
            v = eigen_lowest(SpectralProblem(HARMONIC, (-10, 10), n), 3).values
            errs.append(np.abs(v - [1, 3, 5]))
        for coarse, fine in zip(errs, errs[1:]):
            np.testing.assert_allclose(coarse / fine, 4.0, rtol=0.05)

    def test_nodes_and_ordering(self):
        res = eigen_lowest(SpectralProblem(HARMONIC, (-10, 10), 2000), 5, vectors=True)
        assert np.all(np.diff(res.values) > 0)
        assert [count_nodes(res.vectors[:, n]) for n in range(5)] == list(range(5))

    def test_vectors_normalised(self):
        res = eigen_lowest(SpectralProblem(HARMONIC, (-10, 10), 2000), 2, vectors=True)
        h = res.x[1] - res.x[0]
        np.testing.assert_allclose(np.sum(res.vectors**2, axis=0) * h, 1.0, rtol=1e-12)

    def test_box_too_small(self):
        with pytest.raises(DomainTooSmall):
            eigen_lowest(SpectralProblem(HARMONIC, (-2, 2), 1000), 3)

    def test_quartic_v1_ground_level(self):
        # supersymmetry of the bare quartic pair is broken: the ground level is positive
        ev = eigen_lowest(SpectralProblem(quartic_seed(0.0).v1, (-5, 6), 4000), 1).values
        assert ev[0] == pytest.approx(0.04043, abs=1e-4)

    def test_quartic_family_ground_level_is_zero(self):
        _, _, vg, box = family_box(quartic_seed(0.0), -7.0)
        assert eigen_lowest(SpectralProblem(vg, box, 4000), 1).values[0] == pytest.approx(0.0, abs=5e-3)

    def test_razavy_ground_level(self):
        s = razavy_seed(0.0)
        ev = eigen_lowest(SpectralProblem(s.v1, s.spectral_domain, 4000), 1).values
        assert ev[0] == pytest.approx(-2 * (1 + math.sqrt(2)), abs=5e-3)

    @pytest.mark.parametrize("kw", [{"domain": (1, 0)}, {"n_points": 100}])
    def test_rejects_bad_problem(self, kw):
        args = {"potential": HARMONIC, "domain": (-5, 5), "n_points": 400} | kw
        with pytest.raises(ValueError):
            SpectralProblem(**args)

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            eigen_lowest(SpectralProblem(HARMONIC, (-5, 5), 400), 0)


class TestIsospectralReport:
    def test_identical_potentials(self):
        rep = isospectral_report(HARMONIC, HARMONIC, (-10, 10), 1000, k=4)
        assert rep.offset == 0 and rep.max_delta == 0.0

    def test_quartic_family(self):
        v1, _, vg, box = family_box(quartic_seed(0.0), -10.0)
        deltas = [isospectral_report(v1, vg, box, n, k=4) for n in (4000, 8000)]
        assert deltas[0].max_delta < 1e-2
        assert deltas[1].max_delta < deltas[0].max_delta

    def test_quartic_partner_offset(self):
        # the bare quartic pair is broken SUSY, so V1 and V2 share every level
        v1, v2, _, box = family_box(quartic_seed(0.0), -10.0)
        rep = isospectral_report(v1, v2, box, 4000, k=3)
        assert rep.offset == 0 and rep.max_delta < 1e-2

    def test_razavy_partner_missing_ground_level(self):
        s = razavy_seed(0.0)
        rep = isospectral_report(s.v1, s.v2, s.spectral_domain, 4000, k=3)
        assert rep.offset == -1 and rep.max_delta < 1e-2

    @settings(max_examples=4, deadline=None)
    @given(g=st.sampled_from([-5.0, -7.0, -10.0, -40.0]))
    def test_refinement_shrinks_delta(self, g):
        v1, _, vg, box = family_box(quartic_seed(0.0), g)
        d = [isospectral_report(v1, vg, box, n, k=4).max_delta for n in (2000, 4000, 8000)]
        assert d[0] > d[1] > d[2]

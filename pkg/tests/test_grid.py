import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from isodw.errors import NonConvergence, NonFinite
from isodw.grid import (
    QuadSettings,
    SampledFunction,
    cumulative,
    fd_second,
    find_extrema,
    find_roots,
    integrate,
)
from oracles import quartic_gamma_s, quartic_mu


class TestQuadSettings:
    @pytest.mark.parametrize("kw", [{"abs_tol": 0}, {"rel_tol": -1e-3}, {"max_depth": 9}])
    def test_rejects_bad_values(self, kw):
        with pytest.raises(ValueError):
            QuadSettings(**kw)


class TestSampledFunction:
    def test_interpolates_cubic_exactly(self):
        xs = np.linspace(0, 1, 11)
        sf = SampledFunction(xs, xs**2)
        assert sf(0.35) == pytest.approx(0.35**2, abs=1e-12)

    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            SampledFunction(np.array([0.0, 0.0, 1.0]), np.zeros(3))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            SampledFunction(np.array([0.0, 1.0]), np.zeros(3))

    def test_is_read_only(self):
        sf = SampledFunction(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            sf.ys[0] = 5.0


class TestIntegrate:
    def test_polynomial(self):
        assert integrate(lambda x: x**2, 0, 1) == pytest.approx(1 / 3, abs=1e-14)

    def test_gaussian(self):
        assert integrate(lambda x: np.exp(-x * x), -8, 8) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_quartic_plateau_matches_scipy(self):
        val = integrate(lambda x: np.exp(-2 * x * (x * x - 3) / 3), 0, 8)
        assert val == pytest.approx(4.63107, abs=1e-4)
        assert val == pytest.approx(-quartic_gamma_s(0.0), rel=1e-10)

    def test_empty_interval(self):
        assert integrate(np.exp, 2.0, 2.0) == 0.0

    def test_reversed_limits_rejected(self):
        with pytest.raises(ValueError):
            integrate(np.exp, 1.0, 0.0)

    def test_non_finite_integrand(self):
        with pytest.raises(NonFinite):
            with np.errstate(divide="ignore"):
                integrate(lambda x: 1.0 / (x - 0.5), 0.0, 1.0)

    def test_nonconvergence_on_tight_budget(self):
        q = QuadSettings(abs_tol=1e-15, rel_tol=1e-15, max_depth=10)
        with pytest.raises(NonConvergence):
            integrate(lambda x: np.abs(x - 0.3) ** 0.5 * np.sin(40 * x), 0.0, 1.0, q)

    def test_scalar_only_callable(self):
        assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(
        a=st.floats(-3, 0),
        w1=st.floats(0.01, 3),
        w2=st.floats(0.01, 3),
        k=st.floats(0.1, 4),
    )
    def test_additivity(self, a, w1, w2, k):
        f = lambda x: np.exp(-k * x * x) * np.cos(k * x)
        b, c = a + w1, a + w1 + w2
        q = QuadSettings()
        whole = integrate(f, a, c, q)
        parts = integrate(f, a, b, q) + integrate(f, b, c, q)
        tol = 2 * max(q.abs_tol, q.rel_tol * abs(whole))
        assert abs(whole - parts) <= tol

    @settings(max_examples=30, deadline=None)
    @given(c=st.floats(-2, 2), hi=st.floats(0.5, 6))
    def test_agrees_with_scipy(self, c, hi):
        ref, _ = quad(quartic_mu, 0.0, hi, args=(c,), epsabs=1e-13, epsrel=1e-13)
        got = integrate(lambda x: np.exp(-(2 * x / 3) * (x * x - 3 * c * x + 3 * c * c - 3)), 0.0, hi)
        assert got == pytest.approx(ref, rel=1e-9, abs=1e-12)


class TestCumulative:
    def test_constant(self):
        out = cumulative(lambda x: np.ones_like(x), 0.0, [-1.0, 0.0, 1.0])
        np.testing.assert_allclose(out.ys, [-1, 0, 1], atol=1e-14)

    def test_linear(self):
        out = cumulative(lambda x: 2 * x, 0.0, [0.0, 1.0, 2.0])
        np.testing.assert_allclose(out.ys, [0, 1, 4], atol=1e-13)

    def test_quartic_weight_at_eight(self):
        out = cumulative(lambda x: np.exp(-2 * x * (x * x - 3) / 3), 0.0, np.linspace(-1, 8, 91))
        assert out.ys[-1] == pytest.approx(4.63107, abs=1e-4)

    def test_base_point_must_be_bracketed(self):
        with pytest.raises(ValueError):
            cumulative(lambda x: np.ones_like(x), 0.0, [1.0, 2.0])

    @settings(max_examples=25, deadline=None)
    @given(x0=st.floats(-1, 1))
    def test_antisymmetric_under_reversal(self, x0):
        f = lambda x: np.exp(-x * x) * (2 + np.sin(3 * x))
        xs = np.linspace(-2, 2, 9)
        fwd = cumulative(f, x0, xs).ys
        for x, v in zip(xs, fwd):
            back = integrate(f, min(x, x0), max(x, x0))
            assert v == pytest.approx(math.copysign(back, x - x0) if x != x0 else 0.0, abs=1e-12)


class TestFindRoots:
    def test_cos(self):
        assert find_roots(np.cos, 0, 2) == pytest.approx([math.pi / 2], abs=1e-12)

    def test_parabola(self):
        assert find_roots(lambda x: x * x - 1, -2, 2) == pytest.approx([-1, 1], abs=1e-12)

    def test_no_sign_change(self):
        assert find_roots(lambda x: x * x + 1, -2, 2) == []

    def test_tangent_root_not_detected(self):
        assert find_roots(lambda x: (x - 0.3) ** 2, -1, 1, 200) == []

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-0.9, 0.9), min_size=1, max_size=4, unique=True))
    def test_residual_bound(self, centres):
        centres = sorted(centres)
        if len(centres) > 1 and np.min(np.diff(centres)) < 0.01:
            return
        f = lambda x: np.prod([np.asarray(x) - r for r in centres], axis=0)
        mesh = np.linspace(-1, 1, 2001)
        scale = 1 + np.max(np.abs(f(mesh)))
        roots = find_roots(f, -1, 1)
        assert roots == sorted(roots)
        assert len(roots) == len(centres)
        for r in roots:
            assert abs(f(r)) < 1e-10 * scale


class TestFindExtrema:
    def test_downward_parabola(self):
        ext = find_extrema(lambda x: -x * x, -1, 1)
        assert [e.kind for e in ext] == ["max"]
        assert ext[0].x == pytest.approx(0, abs=1e-8)

    def test_cubic(self):
        ext = find_extrema(lambda x: x**3 - 3 * x, -2, 2)
        assert [(round(e.x, 6), e.kind) for e in ext] == [(-1.0, "max"), (1.0, "min")]

    @settings(max_examples=30, deadline=None)
    @given(k=st.floats(1, 6), phase=st.floats(0, 3))
    def test_agrees_with_brute_force(self, k, phase):
        f = lambda x: np.sin(k * x + phase) * np.exp(-0.1 * x * x)
        a, b, n = -3.0, 3.0, 2001
        fine = np.linspace(a, b, 10 * n)
        y = f(fine)
        for e in find_extrema(f, a, b, n):
            i = int(np.argmin(np.abs(fine - e.x)))
            nb = y[max(i - 20, 0): i + 21]
            if e.kind == "max":
                assert y[i] >= nb.max() - 1e-9
            else:
                assert y[i] <= nb.min() + 1e-9


class TestFdSecond:
    def test_square(self):
        assert fd_second(lambda x: x * x, 0.7, 1e-3) == pytest.approx(2, abs=1e-6)

    def test_sin_at_zero(self):
        assert fd_second(np.sin, 0.0, 1e-3) == pytest.approx(0, abs=1e-6)

    def test_constant(self):
        assert fd_second(lambda x: 3.0 + 0 * x, 1.2, 1e-3) == pytest.approx(0, abs=1e-9)

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError):
            fd_second(np.sin, 0.0, 0.0)

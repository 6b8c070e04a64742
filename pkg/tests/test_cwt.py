import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import integrate
from sklearn.base import clone

from deltal.cwt import (
    CWTScalegram,
    cwt_coefficient,
    default_scales,
    mother_wavelet,
    scalegram,
    skeleton,
)
from deltal.exceptions import BoundsError, DomainError
from deltal.signals import GeneratorSpec, generate

from oracles import brute_cwt


class TestMotherWavelet:
    def test_haar_values(self):
        assert mother_wavelet("haar", 0.25) == 1.0
        assert mother_wavelet("haar", 0.75) == -1.0
        assert mother_wavelet("haar", 1.5) == 0.0
        assert mother_wavelet("haar", 0.0) == 1.0
        assert mother_wavelet("haar", 0.5) == -1.0
        assert mother_wavelet("haar", 1.0) == 0.0

    def test_gauss2_values(self):
        assert mother_wavelet("gauss2", 0.0) == 1.0
        assert mother_wavelet("gauss2", 1.0) == 0.0
        assert mother_wavelet("gauss2", -1.0) == 0.0

    @pytest.mark.parametrize("kind, lo, hi, points", [("haar", 0.0, 1.0, [0.5]), ("gauss2", -np.inf, np.inf, None)])
    def test_zero_mean(self, kind, lo, hi, points):
        f = lambda u: float(mother_wavelet(kind, u))
        if points:
            val, _ = integrate.quad(f, lo, hi, points=points)
        else:
            val, _ = integrate.quad(f, lo, hi)
        assert abs(val) <= 1e-6

    def test_unknown(self):
        with pytest.raises(ValueError):
            mother_wavelet("morlet", 0.0)


class TestCoefficient:
    @pytest.mark.parametrize("a", [0.0, -1.0])
    def test_non_positive_scale(self, a):
        with pytest.raises(DomainError):
            cwt_coefficient([1.0, 2.0], "gauss2", a, 1)

    def test_small_haar_scale(self):
        with pytest.raises(DomainError):
            cwt_coefficient([1.0, 2.0, 3.0], "haar", 1.5, 1)

    @pytest.mark.parametrize("kind, a", [("gauss2", 3.0), ("gauss2", 7.5), ("haar", 4.0), ("haar", 5.3)])
    def test_constant_annihilated(self, kind, a):
        x = np.full(300, 2.5)
        b = 150.0 if kind == "gauss2" else 100.0
        assert abs(cwt_coefficient(x, kind, a, b)) <= 1e-6 * a * 2.5

    def test_impulse_gauss2(self):
        x = np.zeros(50)
        x[19] = 1.0
        for a in (1.0, 2.5, 8.0):
            for b in (5, 20, 33):
                expected = mother_wavelet("gauss2", (20 - b) / a) / np.sqrt(a)
                assert cwt_coefficient(x, "gauss2", a, b) == pytest.approx(expected, abs=1e-15)

    def test_gauss2_matches_brute(self):
        x = np.random.default_rng(0).standard_normal(40)
        psi = lambda u: (1 - u * u) * np.exp(-u * u / 2)
        for a, b in [(1.0, 1), (3.3, 17.5), (12.0, 40)]:
            assert cwt_coefficient(x, "gauss2", a, b) == pytest.approx(brute_cwt(x, psi, a, b), abs=1e-12)

    def test_haar_matches_point_sampling_at_even_scales(self):
        x = np.random.default_rng(1).standard_normal(60)
        psi = lambda u: 1.0 if 0 <= u < 0.5 else (-1.0 if 0.5 <= u < 1 else 0.0)
        for a in (2.0, 4.0, 10.0, 16.0):
            for b in (1, 7, 30, 55):
                assert cwt_coefficient(x, "haar", a, b) == pytest.approx(brute_cwt(x, psi, a, b), abs=1e-12)

    def test_haar_step_extremum(self):
        # brute force over all shifts: the uncentred haar peaks a/2 before the step
        n, ts = 128, 65
        x = (np.arange(1, n + 1) >= ts).astype(float)
        for a in (4.0, 8.0, 16.0, 32.0):
            w = np.array([abs(cwt_coefficient(x, "haar", a, b)) for b in range(1, n + 1)])
            assert np.argmax(w) + 1 == ts - a / 2


class TestScalegram:
    def test_shape_and_finite(self):
        g = scalegram(np.random.default_rng(0).standard_normal(70), "gauss2", [1.0, 2.0, 4.0])
        assert g.values.shape == (3, 70)
        assert np.all(np.isfinite(g.values))
        assert g.boundary_mask.shape == g.values.shape

    @pytest.mark.parametrize("kind", ["gauss2", "haar"])
    def test_matches_coefficient(self, kind):
        x = np.random.default_rng(2).standard_normal(45)
        scales = [2.0, 3.7, 9.0]
        g = scalegram(x, kind, scales)
        off = 0.5 if kind == "haar" else 0.0
        for i, a in enumerate(scales):
            for b in (1, 10, 23, 45):
                assert g.values[i, b - 1] == pytest.approx(cwt_coefficient(x, kind, a, b - off * a), abs=1e-12)

    def test_uncentred_matches_coefficient(self):
        x = np.random.default_rng(3).standard_normal(30)
        g = scalegram(x, "haar", [4.0, 6.0], centered=False)
        for i, a in enumerate((4.0, 6.0)):
            for b in range(1, 31):
                assert g.values[i, b - 1] == pytest.approx(cwt_coefficient(x, "haar", a, b), abs=1e-12)

    @pytest.mark.parametrize("kind, scales", [("gauss2", np.geomspace(1, 40, 20)), ("haar", np.geomspace(2, 60, 20))])
    def test_constant_interior_near_zero(self, kind, scales):
        c = -3.0
        g = scalegram(np.full(400, c), kind, scales)
        interior = ~g.boundary_mask
        assert interior.sum() > 0
        bound = 1e-6 * abs(c) * np.sqrt(scales)[:, None]
        assert np.all(np.abs(g.values)[interior] <= np.broadcast_to(bound, g.values.shape)[interior])

    def test_sinusoid_periodic_in_shift(self):
        x = generate(GeneratorSpec("sinusoid")).samples
        g = scalegram(x, "gauss2", default_scales(366)[:10])
        both = ~g.boundary_mask[:, :-14] & ~g.boundary_mask[:, 14:]
        diff = np.abs(g.magnitude[:, :-14] - g.magnitude[:, 14:])[both]
        assert diff.max() <= 1e-6 * g.magnitude.max()

    def test_sinusoid_peak_scale_tracks_period(self):
        scales = np.geomspace(1, 20, 60)
        best = []
        for period in (14.0, 28.0):
            x = generate(GeneratorSpec("sinusoid", n=600, period=period)).samples
            g = scalegram(x, "gauss2", scales)
            energy = np.where(g.boundary_mask, np.nan, g.magnitude)
            best.append(scales[np.nanargmax(np.nanmean(energy, axis=1))])
        assert best[1] / best[0] == pytest.approx(2.0, rel=0.1)

    def test_spike_argmax(self):
        x = np.zeros(128)
        x[63] = 1.0
        g = scalegram(x, "gauss2", [1.0, 2.0, 3.0, 5.0])
        assert np.all(np.argmax(g.magnitude, axis=1) == 63)

    def test_bad_scales(self):
        with pytest.raises(BoundsError):
            scalegram(np.zeros(10), "gauss2", [])
        with pytest.raises(BoundsError):
            scalegram(np.zeros(10), "gauss2", [2.0, 1.0])
        with pytest.raises(DomainError):
            scalegram(np.zeros(10), "haar", [1.0, 2.0])

    @settings(max_examples=20, deadline=None)
    @given(
        arrays(np.float64, 32, elements=st.floats(-10, 10)),
        arrays(np.float64, 32, elements=st.floats(-10, 10)),
        st.floats(-5, 5),
        st.sampled_from(["gauss2", "haar"]),
    )
    def test_linearity(self, x, y, c, kind):
        scales = [2.0, 4.5, 8.0]
        gx = scalegram(x, kind, scales).values
        gy = scalegram(y, kind, scales).values
        gxy = scalegram(x + y, kind, scales).values
        gc = scalegram(c * x, kind, scales).values
        tol = 1e-12 * 32 * (np.abs(x).max() + np.abs(y).max() + 1) * 10
        np.testing.assert_allclose(gxy, gx + gy, atol=tol)
        np.testing.assert_allclose(gc, c * gx, atol=tol * (abs(c) + 1))

    def test_threads_deterministic(self):
        x = generate(GeneratorSpec("white_noise", n=300, seed=5)).samples
        a = scalegram(x, "haar", default_scales(300), n_jobs=1)
        b = scalegram(x, "haar", default_scales(300), n_jobs=6)
        assert a.values.tobytes() == b.values.tobytes()


def _impulses(n, positions):
    x = np.zeros(n)
    x[np.asarray(positions) - 1] = 1.0
    return x


class TestSkeleton:
    def test_zero_matrix(self):
        g = scalegram(np.zeros(50), "gauss2", [1.0, 2.0, 4.0])
        assert len(skeleton(g)) == 0

    def test_single_impulse_one_line_through_it(self):
        t0 = 100
        scales = np.geomspace(2, 32, 17)
        g = scalegram(_impulses(200, [t0]), "gauss2", scales)
        lines = skeleton(g).lines
        through = [ln for ln in lines if any(b == t0 for _, b in ln)]
        assert len(through) == 1
        main = through[0]
        assert [s for s, _ in main] == list(range(len(scales)))
        assert all(b == t0 for _, b in main)
        top = lambda ln: max(g.magnitude[s, b - 1] for s, b in ln)
        assert top(main) == max(top(ln) for ln in lines)

    def test_two_impulses_two_disjoint_lines(self):
        t1, t2 = 80, 220
        g = scalegram(_impulses(300, [t1, t2]), "gauss2", np.geomspace(2, 16, 13))
        lines = skeleton(g).lines
        l1 = [ln for ln in lines if any(b == t1 for _, b in ln)]
        l2 = [ln for ln in lines if any(b == t2 for _, b in ln)]
        assert len(l1) == 1 and len(l2) == 1
        assert set(l1[0]).isdisjoint(l2[0])
        assert len(l1[0]) == len(l2[0]) == 13

    def test_points_are_strict_maxima_and_chained(self):
        x = generate(GeneratorSpec("composite", n=300, seed=3, position=150, height=4.0)).samples
        g = scalegram(x, "gauss2", default_scales(300))
        sk = skeleton(g, drift=2)
        assert len(sk) > 0
        mag = g.magnitude
        for line in sk:
            for s, b in line:
                assert 1 < b < g.n
                assert mag[s, b - 1] > mag[s, b - 2] and mag[s, b - 1] > mag[s, b]
            for (s0, b0), (s1, b1) in zip(line, line[1:]):
                assert s1 == s0 + 1 and abs(b1 - b0) <= 2

    def test_floor_discards_weak_lines(self):
        g = scalegram(_impulses(200, [100]), "gauss2", np.geomspace(2, 32, 17))
        assert len(skeleton(g, floor=0.0)) >= len(skeleton(g, floor=0.05)) >= len(skeleton(g, floor=0.99))
        assert len(skeleton(g, floor=0.99)) == 1

    def test_needs_two_scales(self):
        with pytest.raises(ValueError):
            skeleton(scalegram(np.zeros(10), "gauss2", [1.0]))


class TestTransformer:
    def test_fit_transform(self):
        x = generate(GeneratorSpec("white_noise", n=128, seed=0)).samples
        est = CWTScalegram(wavelet="haar", scales=[2.0, 4.0, 8.0])
        out = est.fit_transform(x)
        assert out.shape == (3, 128)
        np.testing.assert_array_equal(out, est.scalegram_.values)
        assert est.n_features_in_ == 128

    def test_default_scales(self):
        s = default_scales(512)
        assert s[0] == 2.0 and s[-1] == pytest.approx(128.0)

    def test_clone(self):
        est = CWTScalegram(wavelet="haar", drift=3)
        assert clone(est).get_params() == est.get_params()

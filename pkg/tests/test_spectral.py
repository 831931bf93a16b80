"""DFT, periodogram kernels, smoothing and pooling against brute-force
oracles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from speceq import (FunctionalSample, InputDataError, center, dft,
                    make_weight_kernel, periodogram_kernel, pooled, smooth)
from speceq.simulate import MaProcessSpec, generate_ma, true_spectral_kernel


def random_centered(T, k, seed):
    rng = np.random.default_rng(seed)
    return center(FunctionalSample.from_values(rng.standard_normal((T, k))))


def dft_bruteforce(sample, t):
    """O(T^2) direct evaluation of the finite Fourier transform."""
    T = sample.n_curves
    lam = 2 * np.pi * t / T
    u = np.arange(1, T + 1)
    return (2 * np.pi * T) ** -0.5 * np.sum(
        sample.values * np.exp(-1j * u * lam)[:, None], axis=0)


def periodogram_bruteforce(sample, t):
    """Direct double sum J(s_i) conj(J(s_j)) without the outer-product
    shortcut."""
    T = sample.n_curves
    lam = 2 * np.pi * t / T
    acc = np.zeros((sample.n_points, sample.n_points), dtype=complex)
    for s1 in range(1, T + 1):
        for s2 in range(1, T + 1):
            acc += np.outer(sample.values[s1 - 1], sample.values[s2 - 1]) * np.exp(
                -1j * lam * (s1 - s2))
    return acc / (2 * np.pi * T)


def wrap_to_pi(x):
    return np.pi - np.mod(np.pi - x, 2 * np.pi)


class TestDft:
    def test_requires_centered(self):
        s = FunctionalSample.from_values(np.ones((6, 2)))
        with pytest.raises(InputDataError):
            dft(s)

    def test_zero_sample(self):
        s = FunctionalSample.from_values(np.zeros((8, 2)), centered=True)
        d = dft(s)
        assert_allclose(d.values, 0.0)

    def test_impulse_flat_spectrum(self):
        # unit impulse at u=1 spreads its energy evenly: |J_t| = (2 pi T)^{-1/2}
        T = 8
        values = np.zeros((T, 1))
        values[0, 0] = 1.0
        s = center(FunctionalSample.from_values(values))
        d = dft(s)
        # centering subtracts 1/T; the impulse part dominates at t != 0
        for t in range(1, d.N + 1):
            assert abs(d.entry(t)[0]) == pytest.approx((2 * np.pi * T) ** -0.5, rel=1e-12)

    @pytest.mark.parametrize("T", [16, 17])
    def test_matches_bruteforce(self, T):
        s = random_centered(T, 3, seed=42)
        d = dft(s)
        for t in range(-d.N, d.N + 1):
            assert np.max(np.abs(d.entry(t) - dft_bruteforce(s, t))) < 1e-10

    def test_conjugate_symmetry_exact(self):
        d = dft(random_centered(12, 2, seed=1))
        for t in range(d.N + 1):
            assert np.array_equal(d.entry(-t), np.conj(d.entry(t)))

    def test_parseval(self):
        # Energy identity on the Fourier grid; exact for odd T (for even
        # T the index set -N..N excludes the Nyquist bin by design).
        s = random_centered(17, 3, seed=3)
        d = dft(s)
        lhs = sum(np.sum(np.abs(d.entry(t)) ** 2) for t in range(-d.N, d.N + 1))
        rhs = np.sum(s.values**2) / (2 * np.pi)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_roundtrip_reconstruction(self):
        # x_u = sqrt(2 pi / T) sum_t J_t e^{i u lambda_t} for odd T
        s = random_centered(15, 2, seed=4)
        d = dft(s)
        T = s.n_curves
        u = np.arange(1, T + 1)
        recon = np.zeros((T, s.n_points), dtype=complex)
        for t in range(-d.N, d.N + 1):
            lam = 2 * np.pi * t / T
            recon += np.exp(1j * u * lam)[:, None] * d.entry(t)[None, :]
        recon *= np.sqrt(2 * np.pi / T)
        assert np.max(np.abs(recon - s.values)) < 1e-9


class TestPeriodogram:
    def test_rank_one_hermitian(self):
        d = dft(random_centered(14, 4, seed=5))
        for t in (-5, 0, 3):
            p = periodogram_kernel(d, t)
            assert_allclose(p, np.conj(p.T), atol=1e-14)
            assert np.all(np.diag(p).real >= 0.0)
            sv = np.linalg.svd(p, compute_uv=False)
            assert sv[1] < 1e-10 * sv[0]

    def test_index_out_of_range(self):
        d = dft(random_centered(10, 2, seed=6))
        with pytest.raises(IndexError):
            periodogram_kernel(d, d.N + 1)

    def test_top_frequency_cosine_concentrates(self):
        # A cosine at the largest included Fourier frequency puts all its
        # energy into the +-N bins: |J_N|^2 = T/(8 pi), zero elsewhere.
        # (A +-1 alternating signal would instead live at the Nyquist
        # frequency pi, which the index set -N..N never contains.)
        T = 12
        N = (T - 1) // 2
        u = np.arange(1, T + 1)
        values = np.cos(u * 2 * np.pi * N / T)[:, None]
        s = center(FunctionalSample.from_values(values))
        d = dft(s)
        for t in range(N + 1):
            power = abs(d.entry(t)[0]) ** 2
            if t == N:
                assert power == pytest.approx(T / (8 * np.pi), rel=1e-12)
            else:
                assert power < 1e-12

    def test_matches_double_sum(self):
        s = random_centered(12, 2, seed=7)
        d = dft(s)
        for t in (-5, -1, 0, 2, 5):
            assert np.max(np.abs(periodogram_kernel(d, t)
                                 - periodogram_bruteforce(s, t))) < 1e-10


class TestSmooth:
    def test_bandwidth_range(self):
        d = dft(random_centered(16, 2, seed=8))
        w = make_weight_kernel("epanechnikov-pi")
        for b in (0.0, 1.0, -0.2, 2.0):
            with pytest.raises(InputDataError):
                smooth(d, w, b)

    def test_single_term_window(self):
        # b < 2/T: only t = l contributes, so F_l = W(0) p_l / (bT)
        T, b = 16, 0.1
        d = dft(random_centered(T, 3, seed=9))
        w = make_weight_kernel("epanechnikov-pi")
        f = smooth(d, w, b)
        for l in range(f.N + 1):
            expected = w.evaluate(np.zeros(1))[0] * periodogram_kernel(d, l) / (b * T)
            assert_allclose(f.entry(l), expected, atol=1e-14)

    @pytest.mark.parametrize("kernel_name", ["epanechnikov-pi", "uniform-pi"])
    @pytest.mark.parametrize("T", [12, 13])
    def test_matches_direct_sum(self, kernel_name, T):
        d = dft(random_centered(T, 2, seed=10 + T))
        w = make_weight_kernel(kernel_name)
        b = 0.35
        f = smooth(d, w, b)
        for l in range(-f.N, f.N + 1):
            lam_l = 2 * np.pi * l / T
            acc = np.zeros((2, 2), dtype=complex)
            for t in range(-f.N, f.N + 1):
                lam_t = 2 * np.pi * t / T
                weight = w.evaluate(np.array([wrap_to_pi(lam_l - lam_t) / b]))[0]
                acc += weight * periodogram_kernel(d, t)
            assert np.max(np.abs(f.entry(l) - acc / (b * T))) < 1e-12

    def test_field_invariants_on_random_input(self):
        w = make_weight_kernel("epanechnikov-pi")
        for seed in range(6):
            T = 10 + 3 * seed
            f = smooth(dft(random_centered(T, 3, seed=seed)), w, 0.25)
            f.validate()  # Hermitian, real nonnegative diagonal
            for t in range(f.N + 1):
                assert np.array_equal(f.entry(-t), np.conj(f.entry(t)))
            # nonnegative definite up to roundoff: W >= 0 and p rank-one PSD
            for t in range(f.N + 1):
                eig = np.linalg.eigvalsh(f.entry(t))
                assert eig.min() > -1e-10

    def test_quadratic_homogeneity(self):
        # linear in the periodogram field: scaling the data by c scales F by c^2
        rng = np.random.default_rng(11)
        values = rng.standard_normal((14, 2))
        w = make_weight_kernel("epanechnikov-pi")
        c = 3.0
        f1 = smooth(dft(center(FunctionalSample.from_values(values))), w, 0.3)
        f2 = smooth(dft(center(FunctionalSample.from_values(c * values))), w, 0.3)
        assert_allclose(f2.values, c**2 * f1.values, rtol=1e-12)

    def test_white_noise_spectrum_is_flat(self):
        # Monte Carlo: diagonal average of F is ~constant over frequency.
        w = make_weight_kernel("epanechnikov-pi")
        T, k, reps = 512, 3, 100
        rng = np.random.default_rng(12)
        acc = None
        for _ in range(reps):
            s = center(FunctionalSample.from_values(rng.standard_normal((T, k))))
            f = smooth(dft(s), w, 0.2)
            diag = np.diagonal(f.values, axis1=1, axis2=2).real.mean(axis=1)
            acc = diag if acc is None else acc + diag
        acc /= reps
        rel_variation = (acc.max() - acc.min()) / acc.mean()
        assert rel_variation < 0.30

    def test_ma1_matches_closed_form_kernel(self):
        # Lemma-style oracle: MA(1) spectral kernel on the single-point
        # grid {0.5} is |1 + a e^{-i lambda}|^2 * 0.25 / (2 pi).
        spec = MaProcessSpec(coefficients=(0.8,), T=1024, k=1)
        w = make_weight_kernel("epanechnikov-pi")

        def ise(T, seed):
            s = MaProcessSpec(coefficients=(0.8,), T=T, k=1)
            sample = center(generate_ma(s, np.random.default_rng(seed)))
            f = smooth(dft(sample), w, 0.1)
            err = 0.0
            for l in range(f.N + 1):
                lam = 2 * np.pi * l / T
                truth = true_spectral_kernel(s, lam)[0, 0].real
                err += (f.entry(l)[0, 0].real - truth) ** 2
            return err / (f.N + 1)

        sample = center(generate_ma(spec, np.random.default_rng(13)))
        f = smooth(dft(sample), w, 0.1)
        lam = 2 * np.pi * np.arange(f.N + 1) / spec.T
        truth = np.array([true_spectral_kernel(spec, x)[0, 0].real for x in lam])
        est = f.values[:, 0, 0].real
        # pointwise ratio is noisy; the mean level should be right
        assert est.mean() / truth.mean() == pytest.approx(1.0, abs=0.1)
        # integrated squared error shrinks with T (averaged over seeds)
        ise_small = np.mean([ise(256, 100 + i) for i in range(3)])
        ise_large = np.mean([ise(1024, 200 + i) for i in range(3)])
        assert ise_large < ise_small


class TestPooled:
    def setup_method(self):
        self.w = make_weight_kernel("epanechnikov-pi")
        self.fx = smooth(dft(random_centered(16, 2, seed=20)), self.w, 0.3)
        self.fy = smooth(dft(random_centered(16, 2, seed=21)), self.w, 0.3)

    def test_idempotent_on_equal_inputs(self):
        assert_allclose(pooled(self.fx, self.fx).values, self.fx.values)

    def test_halves_when_other_is_zero(self):
        from speceq import SpectralKernelField
        zero = SpectralKernelField(values=np.zeros_like(self.fx.values),
                                   grid=self.fx.grid, T=self.fx.T,
                                   bandwidth=self.fx.bandwidth)
        assert_allclose(pooled(self.fx, zero).values, self.fx.values / 2)

    def test_hermitian_preserved(self):
        pooled(self.fx, self.fy).validate()

    def test_mismatch_rejected(self):
        other = smooth(dft(random_centered(16, 2, seed=22)), self.w, 0.2)
        with pytest.raises(InputDataError):
            pooled(self.fx, other)
        bigger = smooth(dft(random_centered(18, 2, seed=23)), self.w, 0.3)
        with pytest.raises(InputDataError):
            pooled(self.fx, bigger)

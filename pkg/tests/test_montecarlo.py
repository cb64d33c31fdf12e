import math

import numpy as np
import pytest
from scipy import integrate, stats

from pinchsec import (
    LOWER_BOUND_PAS,
    McConfig,
    sample_offset_sq,
    sample_snr_eve,
    simulate_lower_bound_event,
    simulate_sop_fpa,
    simulate_sop_pas,
    sop_chebyshev,
)
from pinchsec import distributions as dist
from pinchsec.montecarlo import _uniform_chunk

from conftest import make_config


class TestConfigValidation:
    def test_bad_values_rejected(self):
        with pytest.raises(ValueError):
            McConfig(trials=0, seed=1)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=-1)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=2**64)
        with pytest.raises(ValueError):
            McConfig(trials=10, seed=1, workers=0)


class TestSubstreams:
    def test_chunked_stream_is_bit_identical(self):
        full = _uniform_chunk(321, 0, 5000)
        parts = np.vstack(
            [_uniform_chunk(321, lo, hi) for lo, hi in ((0, 1), (1, 700), (700, 5000))]
        )
        assert np.array_equal(full, parts)

    def test_estimates_invariant_under_workers(self, cfg10):
        results = [
            simulate_sop_pas(cfg10, McConfig(trials=200_000, seed=9, workers=w))
            for w in (1, 2, 3, 8)
        ]
        assert len({r.estimate for r in results}) == 1

    def test_sample_streams_invariant_under_workers(self, cfg10):
        a = sample_snr_eve(cfg10, McConfig(trials=150_000, seed=10, workers=1))
        b = sample_snr_eve(cfg10, McConfig(trials=150_000, seed=10, workers=5))
        assert np.array_equal(a, b)

    def test_same_seed_same_estimate(self, cfg10):
        mc = McConfig(trials=50_000, seed=11)
        assert (
            simulate_sop_pas(cfg10, mc).estimate == simulate_sop_pas(cfg10, mc).estimate
        )

    def test_different_seeds_differ(self, cfg10):
        a = simulate_sop_pas(cfg10, McConfig(trials=50_000, seed=12))
        b = simulate_sop_pas(cfg10, McConfig(trials=50_000, seed=13))
        assert a.estimate != b.estimate


class TestResultContract:
    def test_stderr_formula(self, cfg10):
        res = simulate_sop_pas(cfg10, McConfig(trials=40_000, seed=14))
        assert 0.0 <= res.estimate <= 1.0
        assert res.stderr == math.sqrt(res.estimate * (1.0 - res.estimate) / res.trials)
        assert res.stderr <= 0.5 / math.sqrt(res.trials)
        assert res.trials == 40_000 and res.seed == 14

    def test_saturated_outage(self):
        cfg = make_config(power_dbm=-30.0, rate=12.0)
        res = simulate_sop_pas(cfg, McConfig(trials=10_000, seed=15))
        assert res.estimate == 1.0
        assert simulate_sop_fpa(cfg, McConfig(trials=10_000, seed=15)).estimate == 1.0


class TestAgainstAnalytics:
    def test_pas_matches_chebyshev_spot_grid(self):
        for power in (0.0, 20.0, 40.0):
            for rate in (0.1, 1.0):
                cfg = make_config(power_dbm=power, rate=rate)
                mc = simulate_sop_pas(cfg, McConfig(trials=100_000, seed=16))
                cheb = sop_chebyshev(cfg, 100).value
                assert abs(mc.estimate - cheb) <= max(3.0 * mc.stderr, 0.01), (
                    f"P={power} R={rate}: mc={mc.estimate} cheb={cheb}"
                )

    def test_fpa_respects_half_floor(self, cfg10, cfg30):
        for cfg in (cfg10, cfg30):
            res = simulate_sop_fpa(cfg, McConfig(trials=100_000, seed=17))
            assert res.estimate >= 0.5 - 3.0 * res.stderr

    def test_pas_beats_fpa_at_fig3_point(self, cfg30):
        pas = simulate_sop_pas(cfg30, McConfig(trials=100_000, seed=18))
        fpa = simulate_sop_fpa(cfg30, McConfig(trials=100_000, seed=19))
        assert fpa.estimate > pas.estimate


class TestLowerBoundEvent:
    def test_matches_constant(self, cfg10):
        res = simulate_lower_bound_event(cfg10, McConfig(trials=1_000_000, seed=20))
        assert abs(res.estimate - LOWER_BOUND_PAS) <= 3.0 * res.stderr

    def test_parameter_free(self):
        mc = McConfig(trials=200_000, seed=21)
        a = simulate_lower_bound_event(make_config(region_side=10.0), mc)
        b = simulate_lower_bound_event(make_config(region_side=30.0, height=7.0), mc)
        sigma = math.hypot(a.stderr, b.stderr)
        assert abs(a.estimate - b.estimate) <= 6.0 * sigma

    def test_tie_probability_is_null(self):
        # strict vs non-strict comparison flips nothing for continuous draws
        rng = np.random.default_rng(22)
        u = rng.uniform(-0.5, 0.5, size=(1_000_000, 4))
        lhs = (u[:, 0] - u[:, 2]) ** 2 + u[:, 3] ** 2
        rhs = u[:, 1] ** 2
        assert np.count_nonzero(lhs <= rhs) == np.count_nonzero(lhs < rhs)


class TestSampleStreams:
    def test_eve_snr_inside_support(self, cfg10):
        samples = sample_snr_eve(cfg10, McConfig(trials=1_000_000, seed=23))
        lo, hi = dist.snr_eve_support(cfg10)
        assert samples.min() >= lo and samples.max() <= hi

    def test_eve_snr_mean_matches_quadrature(self, cfg10):
        samples = sample_snr_eve(cfg10, McConfig(trials=200_000, seed=24))
        lo, hi = dist.snr_eve_support(cfg10)
        mean_expected, _ = integrate.quad(
            lambda z: z * dist.pdf_snr_eve(z, cfg10),
            lo,
            hi,
            points=list(dist.snr_eve_breakpoints(cfg10)),
            limit=200,
        )
        sem = samples.std(ddof=1) / math.sqrt(len(samples))
        assert abs(samples.mean() - mean_expected) <= 3.0 * sem

    def test_eve_snr_histogram_chi2(self, cfg10):
        n = 200_000
        samples = sample_snr_eve(cfg10, McConfig(trials=n, seed=25))
        lo, hi = dist.snr_eve_support(cfg10)
        edges = np.linspace(lo, hi, 201)
        observed, _ = np.histogram(samples, bins=edges)
        expected = np.array(
            [
                n
                * integrate.quad(
                    lambda z: dist.pdf_snr_eve(z, cfg10), a, b, limit=100
                )[0]
                for a, b in zip(edges[:-1], edges[1:])
            ]
        )
        # merge sparse tail bins so every cell expects >= 5 counts
        obs_m, exp_m = [], []
        acc_o = acc_e = 0.0
        for o, e in zip(observed, expected):
            acc_o += o
            acc_e += e
            if acc_e >= 5.0:
                obs_m.append(acc_o)
                exp_m.append(acc_e)
                acc_o = acc_e = 0.0
        obs_arr, exp_arr = np.asarray(obs_m), np.asarray(exp_m)
        exp_arr *= obs_arr.sum() / exp_arr.sum()
        chi2_stat = float(np.sum((obs_arr - exp_arr) ** 2 / exp_arr))
        critical = float(stats.chi2.ppf(0.99, len(obs_arr) - 1))
        assert chi2_stat < critical, f"chi2={chi2_stat:.1f} critical={critical:.1f}"

    def test_offset_samples_ks(self, cfg10):
        samples = sample_offset_sq(cfg10, McConfig(trials=100_000, seed=26))
        res = stats.kstest(samples, lambda t: dist.cdf_offset_sq(t, cfg10))
        assert res.pvalue > 0.01, f"KS D={res.statistic:.3e} p={res.pvalue:.4f}"

    def test_offset_and_snr_streams_consistent(self, cfg10):
        mc = McConfig(trials=10_000, seed=27)
        offs = sample_offset_sq(cfg10, mc)
        snrs = sample_snr_eve(cfg10, mc)
        back = cfg10.effective_snr / (offs + cfg10.height**2)
        assert np.allclose(back, snrs, rtol=1e-12)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pairfdr.groups import (
    DegenerateGroupError,
    DegenerateVarianceError,
    GroupSummary,
    PairStatistic,
    pairwise_statistics,
    pairwise_t_arrays,
    summarize_group,
    welch_t,
)


def two_pass_variance(samples):
    # independent textbook oracle: exact mean via fsum, then squared deviations
    n = len(samples)
    mean = math.fsum(samples) / n
    return math.fsum((x - mean) ** 2 for x in samples) / (n - 1)


class TestSummarizeGroup:
    def test_small_example(self):
        s = summarize_group([1, 2, 3])
        assert s.mean == pytest.approx(2.0, rel=1e-15)
        assert s.variance == pytest.approx(1.0, rel=1e-15)
        assert s.size == 3

    def test_constant_sample_has_zero_variance(self):
        s = summarize_group([5, 5, 5, 5])
        assert s == GroupSummary(mean=5.0, variance=0.0, size=4)

    def test_even_spacing(self):
        s = summarize_group([2, 4, 6, 8])
        assert s.mean == pytest.approx(5.0, rel=1e-15)
        assert s.variance == pytest.approx(20.0 / 3.0, rel=1e-14)
        assert s.size == 4

    def test_too_short(self):
        with pytest.raises(DegenerateGroupError):
            summarize_group([1.0])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            summarize_group([1.0, float("nan"), 2.0])

    @pytest.mark.parametrize("seed,length", [(0, 10), (1, 257), (2, 4096), (3, 10_000)])
    def test_matches_two_pass_oracle(self, seed, length):
        rng = np.random.default_rng(seed)
        samples = rng.normal(3.0, 2.5, length) + rng.standard_t(5, length)
        s = summarize_group(samples)
        assert s.variance == pytest.approx(two_pass_variance(samples.tolist()), rel=1e-12)
        assert s.mean == pytest.approx(math.fsum(samples.tolist()) / length, rel=1e-12)


class TestGroupSummaryValidation:
    def test_size_below_two(self):
        with pytest.raises(DegenerateGroupError):
            GroupSummary(mean=0.0, variance=1.0, size=1)

    def test_negative_variance(self):
        with pytest.raises(ValueError):
            GroupSummary(mean=0.0, variance=-1e-9, size=3)

    def test_non_finite_mean(self):
        with pytest.raises(ValueError):
            GroupSummary(mean=float("inf"), variance=1.0, size=3)


class TestWelchT:
    def test_equal_summaries_give_zero(self):
        g = GroupSummary(mean=1.5, variance=2.0, size=7)
        assert welch_t(g, g) == 0.0

    def test_hand_example(self):
        t = welch_t(GroupSummary(2, 1, 3), GroupSummary(5, 2, 2))
        assert t == pytest.approx(-3.0 / math.sqrt(1.0 / 3.0 + 1.0), rel=1e-15)
        assert t == pytest.approx(-2.598076211353316, rel=1e-12)

    def test_shift_of_both_means(self):
        t1 = welch_t(GroupSummary(2, 1, 3), GroupSummary(5, 2, 2))
        t2 = welch_t(GroupSummary(12, 1, 3), GroupSummary(15, 2, 2))
        assert t2 == pytest.approx(t1, rel=1e-12)

    def test_zero_denominator(self):
        with pytest.raises(DegenerateVarianceError):
            welch_t(GroupSummary(0, 0, 5), GroupSummary(1, 0, 5))

    @given(
        mean_a=st.floats(-1e6, 1e6),
        mean_b=st.floats(-1e6, 1e6),
        var_a=st.floats(1e-6, 1e6),
        var_b=st.floats(1e-6, 1e6),
        n_a=st.integers(2, 10_000),
        n_b=st.integers(2, 10_000),
    )
    def test_antisymmetry(self, mean_a, mean_b, var_a, var_b, n_a, n_b):
        a = GroupSummary(mean_a, var_a, n_a)
        b = GroupSummary(mean_b, var_b, n_b)
        assert welch_t(a, b) == -welch_t(b, a)

    @given(
        gap=st.floats(-100.0, 100.0),
        shift=st.floats(-1e3, 1e3),
        var_a=st.floats(1e-3, 1e3),
        var_b=st.floats(1e-3, 1e3),
    )
    def test_shift_invariance(self, gap, shift, var_a, var_b):
        a = GroupSummary(0.0, var_a, 10)
        b = GroupSummary(gap, var_b, 20)
        a2 = GroupSummary(shift, var_a, 10)
        b2 = GroupSummary(gap + shift, var_b, 20)
        assert welch_t(a2, b2) == pytest.approx(welch_t(a, b), rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("scale", [0.001, 0.5, 3.0, 1e4])
    def test_scale_equivariance_on_raw_data(self, scale):
        rng = np.random.default_rng(11)
        x = rng.normal(0.0, 1.0, 30)
        y = rng.normal(1.0, 2.0, 40)
        t = welch_t(summarize_group(x), summarize_group(y))
        t_scaled = welch_t(summarize_group(scale * x), summarize_group(scale * y))
        assert t_scaled == pytest.approx(t, rel=1e-12)


class TestPairwise:
    def test_pair_counts(self):
        groups3 = [GroupSummary(float(i), 1.0, 10) for i in range(3)]
        groups5 = [GroupSummary(float(i), 1.0, 10) for i in range(5)]
        assert [s.pair for s in pairwise_statistics(groups3)] == [(0, 1), (0, 2), (1, 2)]
        assert len(pairwise_statistics(groups5)) == 10

    def test_hand_values(self):
        groups = [GroupSummary(0, 1, 10), GroupSummary(1, 1, 10), GroupSummary(2, 1, 10)]
        stats = pairwise_statistics(groups)
        assert stats[0].t == pytest.approx(-1.0 / math.sqrt(0.2), rel=1e-12)
        assert stats[1].t == pytest.approx(-2.0 / math.sqrt(0.2), rel=1e-12)
        assert stats[2].t == pytest.approx(-1.0 / math.sqrt(0.2), rel=1e-12)

    def test_degenerate_pair_identified(self):
        groups = [GroupSummary(0, 1, 5), GroupSummary(0, 0, 5), GroupSummary(1, 0, 5)]
        with pytest.raises(DegenerateVarianceError) as err:
            pairwise_statistics(groups)
        assert err.value.pair == (1, 2)

    def test_needs_two_groups(self):
        with pytest.raises(ValueError):
            pairwise_statistics([GroupSummary(0, 1, 5)])

    def test_array_path_matches_scalar_loop_bitwise(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            m = int(rng.integers(2, 12))
            means = rng.normal(0, 3, m)
            variances = rng.uniform(0.1, 4.0, m)
            sizes = rng.integers(2, 200, m)
            groups = [
                GroupSummary(float(mu), float(v), int(n))
                for mu, v, n in zip(means, variances, sizes)
            ]
            stats = pairwise_statistics(groups)
            ii, jj, t = pairwise_t_arrays(means, variances, sizes)
            assert [(int(a), int(b)) for a, b in zip(ii, jj)] == [s.pair for s in stats]
            assert all(tv == s.t for tv, s in zip(t, stats))


class TestPairStatistic:
    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            PairStatistic(i=2, j=1, t=0.5)

    def test_rejects_non_finite_t(self):
        with pytest.raises(ValueError):
            PairStatistic(i=0, j=1, t=float("nan"))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_seq, random_simplex_rows
from epdyn import dmd
from epdyn.ep import EpKind, Representation
from epdyn.errors import PairingError, ValidationError
from epdyn.summarizers import average, concat, dct_summary, functionals, p_means


def dct2_matrix(n):
    """Orthonormal type-II DCT matrix, written out from the definition."""
    k = np.arange(n)[:, None]
    i = np.arange(n)[None, :]
    m = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * i + 1) * k / (2 * n))
    m[0] = np.sqrt(1.0 / n)
    return m


class TestAverage:
    def test_symmetry(self):
        assert np.allclose(average(make_seq([[0.0, 1.0], [1.0, 0.0]])).values, [0.5, 0.5])

    def test_single_frame_identity(self):
        assert np.allclose(average(make_seq([[2.0, -3.0, 4.0]])).values, [2.0, -3.0, 4.0])

    def test_matches_direct_summation(self):
        rng = np.random.default_rng(0)
        frames = rng.standard_normal((100, 5))
        oracle = np.array([sum(frames[:, j]) / 100.0 for j in range(5)])
        assert np.allclose(average(make_seq(frames)).values, oracle, atol=1e-12)


class TestPMeans:
    def test_power_one_is_plain_mean(self):
        got = p_means(make_seq([[1.0], [4.0]]), [1])
        assert np.allclose(got.values, [2.5])

    def test_power_two(self):
        got = p_means(make_seq([[1.0], [4.0]]), [2])
        assert np.allclose(got.values, [math.sqrt(8.5)])
        assert abs(got.values[0] - 2.91548) < 5e-6

    def test_constant_sequence_fixed_point(self):
        seq = make_seq(np.full((7, 3), -2.5))
        got = p_means(seq, [1, 3, 5])
        assert np.allclose(got.values, np.tile([-2.5, -2.5, -2.5], 3))

    def test_equals_average_exactly_for_power_one(self):
        rng = np.random.default_rng(1)
        seq = make_seq(rng.standard_normal((30, 4)))
        assert np.array_equal(p_means(seq, [1]).values, average(seq).values)

    def test_layout_is_power_major(self):
        seq = make_seq([[1.0, 2.0], [1.0, 2.0]])
        got = p_means(seq, [1, 2])
        assert got.method == "pmeans:p=1,2"
        assert np.allclose(got.values, [1.0, 2.0, 1.0, 2.0])
        assert got.values.size == 2 * 2

    def test_signed_root_on_negative_data(self):
        got = p_means(make_seq([[-2.0], [-2.0]]), [3])
        assert np.allclose(got.values, [-2.0])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_monotone_in_power_on_nonnegative_data(self, seed):
        rng = np.random.default_rng(seed)
        seq = make_seq(random_simplex_rows(rng, int(rng.integers(1, 12)), 4), kind=EpKind.EEP)
        values = [p_means(seq, [p]).values for p in (1, 2, 3, 6)]
        for lower, higher in zip(values, values[1:]):
            assert (higher - lower >= -1e-12).all()

    def test_power_validation(self):
        seq = make_seq([[1.0]])
        for bad in ([], [0], [2, 1], [1, 1]):
            with pytest.raises(ValidationError):
                p_means(seq, bad)


class TestFunctionals:
    def test_exact_ranks(self):
        got = functionals(make_seq([[v] for v in [1.0, 2.0, 3.0, 4.0, 5.0]]))
        mean, p1, q1, q2, q3, p99 = got.values
        assert (q1, q2, q3) == (2.0, 3.0, 4.0)
        assert mean == 3.0
        assert abs(p1 - 1.04) < 1e-12  # rank 0.01*(5-1) = 0.04
        assert abs(p99 - 4.96) < 1e-12

    def test_constant_sequence(self):
        got = functionals(make_seq(np.full((9, 2), 1.5)))
        assert np.allclose(got.values, 1.5)
        assert got.values.size == 12

    def test_single_frame_collapses(self):
        got = functionals(make_seq([[3.0, -1.0]]))
        assert np.allclose(got.values, [3.0] * 6 + [-1.0] * 6)

    def test_ordering_property(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            frames = rng.standard_normal((int(rng.integers(1, 40)), 3))
            stats = functionals(make_seq(frames)).values.reshape(3, 6)
            mean, p1, q1, q2, q3, p99 = stats.T
            assert (p1 <= q1 + 1e-12).all() and (q1 <= q2).all()
            assert (q2 <= q3).all() and (q3 <= p99 + 1e-12).all()
            assert (frames.min(axis=0) <= mean).all() and (mean <= frames.max(axis=0)).all()


class TestDct:
    def test_constant_sequence_is_dc_only(self):
        n, c = 6, 0.75
        got = dct_summary(make_seq(np.full((n, 2), c), kind=EpKind.BEP), 4)
        coefs = got.values.reshape(2, 4)
        assert np.allclose(coefs[:, 0], c * np.sqrt(n))
        assert np.allclose(coefs[:, 1:], 0.0, atol=1e-12)

    def test_k_one_is_scaled_mean(self):
        rng = np.random.default_rng(3)
        frames = rng.standard_normal((10, 3))
        got = dct_summary(make_seq(frames), 1)
        assert np.allclose(got.values, np.sqrt(10.0) * frames.mean(axis=0), atol=1e-12)

    def test_padding_matches_matrix_oracle(self):
        got = dct_summary(make_seq([[1.0], [-1.0]]), 4)
        padded = np.array([1.0, -1.0, 0.0, 0.0])
        oracle = dct2_matrix(4) @ padded
        assert np.allclose(got.values, oracle, atol=1e-12)
        assert got.method == "dct:k=4"

    def test_energy_preserved_when_keeping_all(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(1, 30))
            frames = rng.standard_normal((n, 2))
            coefs = dct_summary(make_seq(frames), n).values.reshape(2, n)
            assert np.allclose(
                np.linalg.norm(coefs, axis=1), np.linalg.norm(frames, axis=0), atol=1e-10
            )

    def test_layout_dimension_major(self):
        frames = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])
        got = dct_summary(make_seq(frames), 2)
        oracle = dct2_matrix(3)[:2]
        assert np.allclose(got.values[:2], oracle @ frames[:, 0], atol=1e-12)
        assert np.allclose(got.values[2:], oracle @ frames[:, 1], atol=1e-12)

    def test_k_validation(self):
        with pytest.raises(ValidationError):
            dct_summary(make_seq([[1.0]]), 0)


class TestConcat:
    def test_length_additivity(self):
        a = Representation(id="u", label="c", method="m1", values=np.arange(4.0))
        b = Representation(id="u", label="c", method="m2", values=np.arange(6.0))
        got = concat([a, b])
        assert got.values.size == 10
        assert got.method == "m1⊕m2"
        assert np.array_equal(got.values, np.concatenate([a.values, b.values]))

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            concat([])

    def test_mismatched_utterances_rejected(self):
        a = Representation(id="u", label="c", method="m", values=[1.0])
        b = Representation(id="v", label="c", method="m", values=[1.0])
        with pytest.raises(PairingError):
            concat([a, b])

    def test_mode_plus_average_layout(self):
        rng = np.random.default_rng(5)
        seq = make_seq(rng.standard_normal((12, 3)), id="u", label="c")
        rep = concat([dmd.representation(seq, [1, 2]), average(seq)])
        assert rep.values.size == 2 * 3 * (1 + 2) + 3
        assert rep.method == "dmd:d=1,2⊕avg"
        assert np.allclose(rep.values[-3:], seq.frames.mean(axis=0))


class TestPermutationSensitivity:
    def setup_method(self):
        rng = np.random.default_rng(6)
        self.frames = rng.standard_normal((9, 2))
        permutation = rng.permutation(9)
        assert not np.array_equal(permutation, np.arange(9))
        self.permuted = self.frames[permutation]

    def test_order_free_summaries_are_invariant(self):
        a, b = make_seq(self.frames), make_seq(self.permuted)
        assert np.allclose(average(a).values, average(b).values, atol=1e-12)
        assert np.allclose(p_means(a, [1, 2, 3]).values, p_means(b, [1, 2, 3]).values, atol=1e-12)
        assert np.allclose(functionals(a).values, functionals(b).values, atol=1e-12)

    def test_order_aware_summaries_are_not(self):
        a, b = make_seq(self.frames), make_seq(self.permuted)
        assert not np.allclose(dct_summary(a, 3).values, dct_summary(b, 3).values)
        assert not np.allclose(
            dmd.representation(a, [1]).values, dmd.representation(b, [1]).values
        )

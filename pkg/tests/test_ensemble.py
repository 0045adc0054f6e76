import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from conjmeas.ensemble import (
    ensemble_average,
    sample_haar,
    save_states,
    spin_moments_closed_form,
    spin_z,
    variance_vf,
    variance_vi,
)
from conjmeas.errors import NotHermitianError


def test_states_are_normalized(ens2_big):
    norms = np.linalg.norm(ens2_big.states, axis=1)
    np.testing.assert_allclose(norms, 1.0, atol=1e-12)


def test_deterministic_for_seed():
    a = sample_haar(3, 500, 7)
    b = sample_haar(3, 500, 7)
    np.testing.assert_array_equal(a.states, b.states)


def test_chunked_sampling_matches_sequential():
    # contiguous blocks of the Philox stream reproduce the one-shot sample
    full = sample_haar(2, 1000, 12345)
    rng = np.random.Generator(np.random.Philox(key=12345))
    parts = [rng.standard_normal((400, 4)), rng.standard_normal((600, 4))]
    z = np.vstack(parts) * np.sqrt(0.5)
    states = z[:, :2] + 1j * z[:, 2:]
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    np.testing.assert_array_equal(full.states, states)


def test_mean_sz_vanishes(ens2_big):
    sz = spin_z(0.5)
    ev = np.real(np.einsum("ad,dc,ac->a", ens2_big.states.conj(), sz, ens2_big.states))
    se = ev.std(ddof=1) / math.sqrt(ens2_big.n)
    assert abs(ev.mean()) < 4 * se


def test_variance_of_sz_expectation(ens2_big):
    assert variance_vi(ens2_big, spin_z(0.5)) == pytest.approx(1 / 12, abs=0.002)


class TestEnsembleAverage:
    def test_constant(self, ens2_small):
        assert ensemble_average(ens2_small, lambda psi: 1.0) == pytest.approx(1.0)

    def test_identity_expectation(self, ens2_small):
        f = lambda psi: float(np.real(psi.conj() @ psi))
        assert ensemble_average(ens2_small, f) == pytest.approx(1.0, abs=1e-12)

    def test_sz_squared_is_constant_for_spin_half(self, ens2_small):
        sz2 = spin_z(0.5) @ spin_z(0.5)
        f = lambda psi: float(np.real(psi.conj() @ sz2 @ psi))
        assert ensemble_average(ens2_small, f) == pytest.approx(0.25, abs=1e-12)

    def test_vectorized_path_matches_loop(self, ens2_small):
        sz = spin_z(0.5)
        loop = ensemble_average(
            ens2_small, lambda psi: float(np.real(psi.conj() @ sz @ psi))
        )
        vec = ensemble_average(
            ens2_small,
            lambda S: np.real(np.einsum("ad,dc,ac->a", S.conj(), sz, S)),
        )
        assert vec == pytest.approx(loop, abs=1e-12)


class TestVariances:
    def test_identity_has_no_variance(self, ens2_big):
        assert variance_vi(ens2_big, np.eye(2)) == pytest.approx(0.0, abs=1e-12)
        assert variance_vf(ens2_big, np.eye(2)) == pytest.approx(0.0, abs=1e-12)

    def test_vi_spin_one(self):
        ens = sample_haar(3, 100_000, 5)
        assert variance_vi(ens, spin_z(1.0)) == pytest.approx(1 / 6, abs=0.004)

    def test_vf_spin_half(self, ens2_big):
        assert variance_vf(ens2_big, spin_z(0.5)) == pytest.approx(1 / 6, abs=0.003)

    def test_vf_spin_three_halves(self):
        ens = sample_haar(4, 100_000, 6)
        assert variance_vf(ens, spin_z(1.5)) == pytest.approx(1.0, abs=0.02)

    def test_law_of_total_variance(self, ens2_small):
        rng = np.random.default_rng(44)
        A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        A = 0.5 * (A + A.conj().T)
        ev = np.real(
            np.einsum("ad,dc,ac->a", ens2_small.states.conj(), A, ens2_small.states)
        )
        ev2 = np.real(
            np.einsum(
                "ad,dc,ac->a", ens2_small.states.conj(), A @ A, ens2_small.states
            )
        )
        total = ev2.mean() - ev.mean() ** 2
        assert variance_vi(ens2_small, A) + variance_vf(ens2_small, A) == pytest.approx(
            total, abs=1e-12
        )

    def test_requires_hermitian(self, ens2_small):
        with pytest.raises(NotHermitianError):
            variance_vi(ens2_small, np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestClosedFormMoments:
    def test_spin_half_constants(self):
        m = spin_moments_closed_form(0.5)
        assert (m.C, m.D, m.E) == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
        assert m.v_i == Fraction(1, 12)
        assert m.v_f == Fraction(1, 6)

    def test_spin_one_constants(self):
        m = spin_moments_closed_form(1)
        assert (m.C, m.D, m.E) == (Fraction(1, 3), Fraction(1, 6), Fraction(1, 12))

    def test_moment_identity(self):
        # normalization forces D + 2s*E = C
        for s in (0.5, 1, 1.5, 2, 3.5):
            m = spin_moments_closed_form(s)
            assert m.D + 2 * m.s * m.E == m.C

    def test_sampled_constants_match(self):
        for s, seed in ((0.5, 1), (1.0, 2), (1.5, 3)):
            dim = int(2 * s) + 1
            ens = sample_haar(dim, 100_000, seed)
            m = spin_moments_closed_form(s)
            p = np.abs(ens.states) ** 2
            for sample, target in (
                (p[:, 0], float(m.C)),
                (p[:, 0] ** 2, float(m.D)),
                (p[:, 0] * p[:, 1], float(m.E)),
            ):
                se = sample.std(ddof=1) / math.sqrt(sample.size)
                assert abs(sample.mean() - target) < 4 * se


def test_haar_invariance_ks(ens2_small):
    # overlaps with a fixed reference state are distribution-invariant
    # under any fixed unitary rotation of the sample
    rng = np.random.default_rng(55)
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    Q, _ = np.linalg.qr(A)
    ens = sample_haar(2, 10_000, 77)
    phi = np.array([1.0, 0.0], dtype=complex)
    base = np.abs(ens.states @ phi.conj()) ** 2
    rotated = np.abs((ens.states @ Q.T) @ phi.conj()) ** 2
    d = stats.ks_2samp(base, rotated).statistic
    critical = 1.628 * math.sqrt(2 / 10_000)  # 1% level, equal sizes
    assert d < critical


def test_save_states_roundtrip(tmp_path, ens2_small):
    path = tmp_path / "states.txt"
    save_states(ens2_small, path)
    data = np.loadtxt(path)
    assert data.shape == (ens2_small.n, 4)
    rebuilt = data[:, 0::2] + 1j * data[:, 1::2]
    np.testing.assert_allclose(rebuilt, ens2_small.states, atol=1e-15)

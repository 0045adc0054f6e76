"""End-to-end acceptance checks at the reference configuration.

Each test pins one externally stated guarantee at its stated tolerance.
The reference configuration throughout is s=1/2, j=7, g=1/4, theta=pi/6
with 10^5 Haar-uniform sample states.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conjmeas import linalg
from conjmeas.ensemble import sample_haar
from conjmeas.measurement import completeness_residual
from conjmeas.metrics import (
    branch_weights_and_amplitudes,
    likelihood_info_gain,
    stage_statistics,
    two_stage_statistics,
)
from conjmeas.reversal import build_conjugate_minimal
from conjmeas.runner import ExperimentConfig, compute_spin_run, run_variances
from conjmeas.spin_probe import (
    SpinProbeConfig,
    build_forward,
    build_reversing_probe,
    conjugate_probe_set,
    regime_diagnostics,
)

LN2 = math.log(2.0)


class TestCriterion1HeadlineScalars:
    def test_values_and_runtime(self, paper_cfg):
        start = time.perf_counter()
        ens = sample_haar(paper_cfg.dim, 100_000, 202408)
        res = compute_spin_run(paper_cfg, ens)
        elapsed = time.perf_counter() - start
        assert 0.525 <= res.mean_fidelity <= 0.545
        assert 0.040 <= res.mean_info <= 0.050
        assert elapsed < 60.0


class TestCriterion2PostConjugateScalars:
    def test_values(self, paper_run):
        assert 0.956 <= paper_run.mean_fidelity_prime <= 0.976
        assert 0.073 <= paper_run.mean_info_prime <= 0.089

    def test_strict_improvement(self, paper_run):
        assert paper_run.mean_fidelity_prime > paper_run.mean_fidelity
        assert paper_run.mean_info_prime > paper_run.mean_info


class TestCriterion3PerfectReversal:
    def test_preferred_branch(self, paper_cfg, ens2_small):
        kraus = build_forward(paper_cfg)
        family = build_reversing_probe(paper_cfg)
        for m in kraus.labels:
            spec = family[m]
            ts = two_stage_statistics(kraus, m, spec.kraus, ens2_small)
            _, info, fid = ts.get(spec.preferred_label)
            assert fid == pytest.approx(1.0, abs=1e-8)
            assert info == pytest.approx(0.0, abs=1e-8)

    def test_constant_weights(self, paper_cfg, ens2_small):
        kraus = build_forward(paper_cfg)
        family = build_reversing_probe(paper_cfg)
        for m in kraus.labels:
            composed = family[m].preferred_operator @ kraus.operator(m)
            w, _ = branch_weights_and_amplitudes(ens2_small.states, composed)
            assert np.max(np.abs(w / w[0] - 1.0)) < 1e-10


class TestCriterion4FactorOfFour:
    def test_ratio_at_weak_coupling(self, weak_run):
        labels = list(weak_run.labels)
        for m in (1.0, 2.0, 3.0, -1.0, -2.0, -3.0):
            i = labels.index(m)
            ratio = weak_run.info_grid[i, i] / weak_run.info_m[i]
            assert 3.8 <= ratio <= 4.2

    def test_degenerate_center_outcome(self, weak_run):
        # at m = 0 the first stage is proportional to a unitary, so both
        # informations vanish identically and the ratio is vacuous (0/0)
        i = list(weak_run.labels).index(0.0)
        assert weak_run.info_m[i] < 1e-12
        assert weak_run.info_grid[i, i] < 1e-12


class TestCriterion5Moments:
    def test_within_four_standard_errors(self):
        table = run_variances([0.5, 1.0, 1.5], samples=100_000, seed=202408)
        for row in table.rows:
            _, name, est, target, se, z = row
            assert abs(z) < 4.0, f"{name}: z={z:.2f}"


class TestCriterion6StructuralIdentities:
    CONFIGS = (
        SpinProbeConfig(0.5, 7, 0.25, math.pi / 6),
        SpinProbeConfig(1.0, 3, 0.4, 1.1),
        SpinProbeConfig(1.5, 2, 0.1, 2.5),
    )

    def test_completeness(self):
        for cfg in self.CONFIGS:
            assert completeness_residual(build_forward(cfg)) < 1e-9
            assert completeness_residual(conjugate_probe_set(cfg)) < 1e-9

    def test_adjoint_identity(self):
        for cfg in self.CONFIGS:
            forward = build_forward(cfg)
            flipped = conjugate_probe_set(cfg)
            for m in cfg.outcome_labels:
                sign = (-1.0) ** int(round(cfg.j + m))
                np.testing.assert_allclose(
                    flipped.operator(m),
                    sign * forward.operator(m).conj().T,
                    atol=1e-10,
                )

    def test_conjugate_composition(self):
        for cfg in self.CONFIGS:
            kraus = build_forward(cfg)
            for m in cfg.outcome_labels:
                spec = build_conjugate_minimal(kraus, m)
                M = kraus.operator(m)
                _, N = linalg.polar_decompose(M)
                np.testing.assert_allclose(
                    spec.preferred_operator @ M, spec.scale * N @ N, atol=1e-10
                )

    def test_polar_reconstruction_bulk(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            d = int(rng.integers(2, 7))
            M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            U, N = linalg.polar_decompose(M)
            assert linalg.max_abs(U @ N - M) < 1e-9


class TestCriterion7RegimeCondition:
    def test_window(self, paper_cfg, ens2_big):
        report = regime_diagnostics(paper_cfg, ens2_big)
        assert report.disturbance_outcomes == tuple(float(m) for m in range(-5, 6))


class TestCriterion8OracleEquivalence:
    def test_info_kernel_vs_entropy(self):
        ens = sample_haar(2, 8, 5150)
        cfg = SpinProbeConfig(0.5, 2, 0.3, 0.9)
        kraus = build_forward(cfg)
        stats = stage_statistics(kraus, ens)
        for i, m in enumerate(kraus.labels):
            M = kraus.operator(m)
            w = np.array(
                [
                    float(np.real(psi.conj() @ M.conj().T @ M @ psi))
                    for psi in ens.states
                ]
            )
            post = w / w.sum()
            h = -sum(p * math.log2(p) for p in post if p > 0)
            assert abs(stats.info_gain[i] - (math.log2(len(w)) - h)) < 1e-10
            assert abs(likelihood_info_gain(w) - (math.log2(len(w)) - h)) < 1e-10

    def test_two_stage_vs_direct_enumeration(self):
        ens = sample_haar(2, 6, 6010)
        cfg = SpinProbeConfig(0.5, 2, 0.3, 0.9)
        kraus = build_forward(cfg)
        second = conjugate_probe_set(cfg)
        for m in kraus.labels:
            ts = two_stage_statistics(kraus, m, second, ens)
            M = kraus.operator(m)
            for k, mu in enumerate(second.labels):
                A = second.operator(mu) @ M
                w = np.empty(ens.n)
                f_each = np.empty(ens.n)
                for a, psi in enumerate(ens.states):
                    phi = A @ psi
                    w[a] = float(np.real(phi.conj() @ phi))
                    # overlap-amplitude fidelity between |psi> and A|psi>
                    f_each[a] = abs(psi.conj() @ phi) / math.sqrt(w[a])
                post = w / w.sum()
                h = -sum(p * math.log2(p) for p in post if p > 0)
                assert abs(ts.probability[k] - w.mean()) < 1e-10
                assert abs(ts.info_gain[k] - (math.log2(len(w)) - h)) < 1e-10
                assert abs(ts.fidelity[k] - float(post @ f_each)) < 1e-10


def _perturbative_deviations(run, cfg, km_max):
    """Worst relative deviation of exact grid values from the O(g²) forms."""
    s, g, theta = float(cfg.s), cfg.g, cfg.theta
    labels = list(run.labels)
    worst_i = worst_f = 0.0
    for i, m in enumerate(labels):
        for k, mu in enumerate(labels):
            km = mu + m
            if abs(km) > km_max:
                continue
            if km == 0:
                # formulas predict exactly zero effect; check absolutely
                assert run.info_grid[i, k] < 1e-12
                assert 1.0 - run.fidelity_grid[i, k] < 1e-12
                continue
            base = g * g * s * km * km * math.sin(theta) ** 2
            pred_info = (4.0 / 3.0) * base / LN2
            pred_deficit = (1.0 / 3.0) * (2.0 * s + 1.0) * base
            worst_i = max(worst_i, abs(run.info_grid[i, k] / pred_info - 1.0))
            worst_f = max(
                worst_f,
                abs((1.0 - run.fidelity_grid[i, k]) / pred_deficit - 1.0),
            )
    return worst_i, worst_f


class TestCriterion9PerturbativeAgreement:
    def test_weak_coupling_one_percent(self, weak_run, weak_cfg):
        worst_i, worst_f = _perturbative_deviations(weak_run, weak_cfg, km_max=4)
        assert worst_i < 0.01
        assert worst_f < 0.01

    def test_reference_coupling_fifteen_percent(self, paper_run, paper_cfg):
        # known shortfall: at g=1/4 the expansion parameter 2g(mu+m)sin(theta)
        # is order one for |mu+m| in {3, 4} and the O(g²) forms deviate by
        # ~25-40%, so this documented bound is not attainable there
        worst_i, worst_f = _perturbative_deviations(paper_run, paper_cfg, km_max=4)
        assert worst_i < 0.15
        assert worst_f < 0.15

    def test_reference_coupling_inner_band(self, paper_run, paper_cfg):
        # the same bound does hold on the |mu+m| <= 2 sub-band
        worst_i, worst_f = _perturbative_deviations(paper_run, paper_cfg, km_max=2)
        assert worst_i < 0.15
        assert worst_f < 0.15


class TestCriterion10Determinism:
    def test_byte_identical_across_thread_counts(self, tmp_path):
        outs = []
        for threads, name in (("1", "a"), ("4", "b")):
            out = tmp_path / name
            env = dict(os.environ)
            env["OMP_NUM_THREADS"] = threads
            env["OPENBLAS_NUM_THREADS"] = threads
            subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "conjmeas.cli",
                    "figures",
                    "--j",
                    "3",
                    "--samples",
                    "2000",
                    "--seed",
                    "77",
                    "--out",
                    str(out),
                ],
                check=True,
                env=env,
            )
            outs.append(out)
        for name in ("fig1", "fig2", "fig3", "fig4"):
            a = (outs[0] / f"{name}.csv").read_bytes()
            b = (outs[1] / f"{name}.csv").read_bytes()
            assert a == b

"""Experiment orchestration: figure tables, scalar summaries, sweeps.

Everything here is deterministic for a fixed (config, seed) pair, and the
serialized output is byte-identical across runs: numbers are formatted with
17 significant digits and every file embeds the config echo, the seed, the
sample count and the library version.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ensemble import (
    PureStateEnsemble,
    sample_haar,
    spin_moments_closed_form,
    spin_z,
)
from .metrics import optimal_fidelity, stage_statistics, two_stage_statistics
from .spin_probe import (
    SpinProbeConfig,
    build_forward,
    conjugate_probe_set,
    regime_diagnostics,
)

MIN_FIGURE_SAMPLES = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    spin: SpinProbeConfig
    samples: int = 100_000
    seed: int = 20_2408

    def __post_init__(self):
        if self.samples < MIN_FIGURE_SAMPLES:
            raise ValueError(f"need at least {MIN_FIGURE_SAMPLES} samples")

    def metadata(self) -> dict:
        return {
            "s": float(self.spin.s),
            "j": float(self.spin.j),
            "g": self.spin.g,
            "theta": self.spin.theta,
            "samples": self.samples,
            "seed": self.seed,
            "version": __version__,
        }


@dataclass
class Table:
    name: str
    columns: tuple
    rows: list = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(table: Table, path, meta: dict) -> None:
    lines = [f"# {k}={_fmt(v)}" for k, v in sorted(meta.items())]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(tables: dict, path, meta: dict) -> None:
    doc = {
        "meta": meta,
        "tables": {
            name: {"columns": list(t.columns), "rows": [list(r) for r in t.rows]}
            for name, t in tables.items()
        },
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class SpinRunResult:
    """Everything the figure and summary jobs need from one configuration."""

    labels: tuple
    p_m: np.ndarray
    fidelity_m: np.ndarray
    info_m: np.ndarray
    fidelity_opt_m: np.ndarray
    p_preferred_m: np.ndarray        # p(mu0 = m | m)
    fidelity_prime_m: np.ndarray
    info_prime_m: np.ndarray
    fidelity_grid: np.ndarray        # (m, mu) exact fidelities
    info_grid: np.ndarray
    joint_grid: np.ndarray           # p(m, mu)

    @property
    def mean_fidelity(self) -> float:
        return float(np.sum(self.p_m * self.fidelity_m))

    @property
    def mean_info(self) -> float:
        return float(np.sum(self.p_m * self.info_m))

    @property
    def mean_fidelity_prime(self) -> float:
        return float(np.sum(self.p_m * self.fidelity_prime_m))

    @property
    def mean_info_prime(self) -> float:
        return float(np.sum(self.p_m * self.info_prime_m))


def compute_spin_run(spin: SpinProbeConfig, ens: PureStateEnsemble) -> SpinRunResult:
    forward = build_forward(spin)
    second = conjugate_probe_set(spin)
    stats1 = stage_statistics(forward, ens)
    n = len(forward.labels)
    p_pref = np.zeros(n)
    f_prime = np.zeros(n)
    i_prime = np.zeros(n)
    f_opt = np.zeros(n)
    f_grid = np.full((n, n), np.nan)
    i_grid = np.full((n, n), np.nan)
    joint = np.zeros((n, n))
    for i, m in enumerate(forward.labels):
        ts = two_stage_statistics(forward, m, second, ens)
        p_pref[i] = ts.conditional[i]
        f_prime[i] = ts.mean_fidelity
        i_prime[i] = ts.mean_info
        f_opt[i] = optimal_fidelity(forward, ens, m)
        f_grid[i] = ts.fidelity
        i_grid[i] = ts.info_gain
        joint[i] = ts.probability
    return SpinRunResult(
        labels=forward.labels,
        p_m=stats1.probability,
        fidelity_m=stats1.fidelity,
        info_m=stats1.info_gain,
        fidelity_opt_m=f_opt,
        p_preferred_m=p_pref,
        fidelity_prime_m=f_prime,
        info_prime_m=i_prime,
        fidelity_grid=f_grid,
        info_grid=i_grid,
        joint_grid=joint,
    )


def run_figures(cfg: ExperimentConfig) -> dict:
    """Tables behind the four outcome plots of the spin example."""
    ens = sample_haar(cfg.spin.dim, cfg.samples, cfg.seed)
    res = compute_spin_run(cfg.spin, ens)
    fig1 = Table("fig1", ("m", "p_m", "p_preferred_given_m"))
    fig2 = Table("fig2", ("m", "fidelity_m", "fidelity_prime_m"))
    fig3 = Table("fig3", ("m", "info_m", "info_prime_m"))
    fig4 = Table(
        "fig4",
        (
            "m",
            "mu",
            "p_mu_given_m",
            "fidelity_m_mu",
            "info_m_mu",
            "fidelity_improves",
            "info_improves",
        ),
    )
    for i, m in enumerate(res.labels):
        fig1.rows.append((m, float(res.p_m[i]), float(res.p_preferred_m[i])))
        fig2.rows.append((m, float(res.fidelity_m[i]), float(res.fidelity_prime_m[i])))
        fig3.rows.append((m, float(res.info_m[i]), float(res.info_prime_m[i])))
        for k, mu in enumerate(res.labels):
            fig4.rows.append(
                (
                    m,
                    mu,
                    float(res.joint_grid[i, k] / res.p_m[i]),
                    float(res.fidelity_grid[i, k]),
                    float(res.info_grid[i, k]),
                    bool(res.fidelity_grid[i, k] > res.fidelity_m[i]),
                    bool(res.info_grid[i, k] > res.info_m[i]),
                )
            )
    return {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4}


def run_summary(cfg: ExperimentConfig) -> dict:
    """Headline scalars and regime diagnostics for one configuration."""
    ens = sample_haar(cfg.spin.dim, cfg.samples, cfg.seed)
    res = compute_spin_run(cfg.spin, ens)
    report = regime_diagnostics(cfg.spin)
    f, i = res.mean_fidelity, res.mean_info
    fp, ip = res.mean_fidelity_prime, res.mean_info_prime
    return {
        "mean_fidelity": f,
        "mean_info": i,
        "mean_fidelity_conj": fp,
        "mean_info_conj": ip,
        "fidelity_improves": fp > f,
        "info_improves": ip > i,
        "weakness": report.weakness,
        "phase": report.phase,
    }


def summary_table(summary: dict) -> Table:
    t = Table("summary", ("quantity", "value"))
    for k, v in summary.items():
        t.rows.append((k, float(v) if not isinstance(v, bool) else v))
    return t


def run_variances(s_list, samples: int, seed: int) -> Table:
    """Monte Carlo spin moments against their closed forms, with z-scores."""
    t = Table("variances", ("s", "quantity", "estimate", "target", "stderr", "z"))
    for k, s in enumerate(s_list):
        moments = spin_moments_closed_form(s)
        dim = int(2 * moments.s) + 1
        ens = sample_haar(dim, samples, seed + k)
        sz = spin_z(s)
        ev = np.real(
            np.einsum("ad,dc,ac->a", ens.states.conj(), sz, ens.states)
        )
        ev2 = np.real(
            np.einsum("ad,dc,ac->a", ens.states.conj(), sz @ sz, ens.states)
        )
        p0 = np.abs(ens.states[:, 0]) ** 2
        p1 = np.abs(ens.states[:, 1]) ** 2
        quantities = {
            "V_I": ((ev - ev.mean()) ** 2, float(moments.v_i)),
            "V_F": (ev2 - ev**2, float(moments.v_f)),
            "C": (p0, float(moments.C)),
            "D": (p0**2, float(moments.D)),
            "E": (p0 * p1, float(moments.E)),
        }
        for name, (samples_of, target) in quantities.items():
            est = float(samples_of.mean())
            se = float(samples_of.std(ddof=1) / math.sqrt(samples_of.size))
            z = (est - target) / se if se > 0 else 0.0
            t.rows.append((float(moments.s), name, est, target, se, float(z)))
    return t


SWEEP_AXES = ("g", "j", "theta")


def run_sweep(cfg: ExperimentConfig, axis: str, values) -> Table:
    """Long-format table of the summary metrics along one parameter axis."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}")
    t = Table("sweep", ("axis", "value", "metric", "metric_value"))
    for v in values:
        spin = SpinProbeConfig(
            s=cfg.spin.s,
            j=v if axis == "j" else cfg.spin.j,
            g=v if axis == "g" else cfg.spin.g,
            theta=v if axis == "theta" else cfg.spin.theta,
        )
        summary = run_summary(ExperimentConfig(spin, cfg.samples, cfg.seed))
        for metric in (
            "mean_fidelity",
            "mean_info",
            "mean_fidelity_conj",
            "mean_info_conj",
            "weakness",
            "phase",
        ):
            t.rows.append((axis, float(v), metric, float(summary[metric])))
    return t

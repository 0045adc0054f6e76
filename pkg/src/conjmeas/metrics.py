"""Information gain and fidelity statistics over a pure-state ensemble.

All information quantities are in bits (base-2 logarithms).  The single
likelihood kernel :func:`likelihood_info_gain` serves every stage: the
per-outcome weights are ``<A†A>_a`` for whichever operator A maps the
initial state to the (unnormalized) branch state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .ensemble import PureStateEnsemble
from .errors import (
    DimensionMismatchError,
    InvalidWeightsError,
    ZeroProbabilityOutcomeError,
)
from .measurement import KrausSet
from .tolerances import TOL


def likelihood_info_gain(weights) -> float:
    """Shannon information (bits) carried by one outcome about the ensemble index.

    For nonnegative likelihood weights w(a) under a uniform prior this equals
    H0 - H(outcome):

        [mean(w log2 w) - mean(w) log2 mean(w)] / mean(w)

    with 0 log 0 = 0.  The result is nonnegative up to roundoff and is
    clipped at zero.
    """
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(w < 0) or not np.any(w > 0):
        raise InvalidWeightsError("weights must be nonnegative with a positive sum")
    mw = w.mean()
    wlw = np.where(w > 0, w * np.log2(np.where(w > 0, w, 1.0)), 0.0).mean()
    gain = (wlw - mw * np.log2(mw)) / mw
    if gain < -1e-10:
        raise InvalidWeightsError(f"information kernel returned {gain:.3e}")
    return float(max(gain, 0.0))


def posterior(weights) -> np.ndarray:
    """Bayes posterior over the ensemble index: w(a) / Σ w."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(w < 0) or not np.any(w > 0):
        raise InvalidWeightsError("weights must be nonnegative with a positive sum")
    return w / w.sum()


@dataclass(frozen=True)
class StageStatistics:
    """Per-outcome probabilities, information gains, and fidelities.

    For a first-stage measurement ``probability`` is p(m); for a two-stage
    run it is the joint p(m, mu) and ``conditional`` holds p(mu | m).
    Outcomes with probability below the floor are flagged undefined and
    excluded (with zero weight) from the means.
    """

    labels: tuple
    probability: np.ndarray
    info_gain: np.ndarray
    fidelity: np.ndarray
    defined: np.ndarray
    conditional: np.ndarray | None = None

    def _mean(self, values: np.ndarray) -> float:
        w = np.where(self.defined, self.probability, 0.0)
        return float(np.sum(w * np.where(self.defined, values, 0.0)) / np.sum(w))

    @property
    def mean_info(self) -> float:
        return self._mean(self.info_gain)

    @property
    def mean_fidelity(self) -> float:
        return self._mean(self.fidelity)

    def get(self, label):
        idx = self.labels.index(float(label))
        return (
            self.probability[idx],
            self.info_gain[idx],
            self.fidelity[idx],
        )


def branch_weights_and_amplitudes(states: np.ndarray, op: np.ndarray):
    """Per-state branch weight <A†A> and transition amplitude <psi|A|psi>."""
    out = states @ op.T
    w = np.einsum("ad,ad->a", out.conj(), out).real
    amp = np.einsum("ad,ad->a", states.conj(), out)
    return w, amp


def _branch_statistics(labels, composed_ops, ens: PureStateEnsemble):
    n_out = len(composed_ops)
    prob = np.zeros(n_out)
    info = np.zeros(n_out)
    fid = np.zeros(n_out)
    defined = np.zeros(n_out, dtype=bool)
    for i, op in enumerate(composed_ops):
        w, amp = branch_weights_and_amplitudes(ens.states, op)
        p = w.mean()
        prob[i] = p
        if p <= TOL.prob_floor:
            info[i] = np.nan
            fid[i] = np.nan
            continue
        defined[i] = True
        info[i] = likelihood_info_gain(w)
        # F = Σ_a p(a|outcome) |<psi|A|psi>| / sqrt(w_a)  =  mean(|amp| sqrt(w)) / mean(w)
        fid[i] = float(np.mean(np.abs(amp) * np.sqrt(w)) / p)
    return labels, prob, info, fid, defined


def stage_statistics(kraus: KrausSet, ens: PureStateEnsemble) -> StageStatistics:
    """First-stage statistics: p(m), I(m), F(m) and their p(m)-weighted means."""
    if kraus.dim != ens.dim:
        raise DimensionMismatchError("measurement and ensemble dimensions differ")
    labels, prob, info, fid, defined = _branch_statistics(
        kraus.labels, kraus.operators, ens
    )
    return StageStatistics(labels, prob, info, fid, defined)


def two_stage_statistics(
    kraus: KrausSet, first_label, second: KrausSet, ens: PureStateEnsemble
) -> StageStatistics:
    """Statistics of a second measurement following outcome ``first_label``.

    ``probability`` holds the joint p(m, mu); ``conditional`` the
    distribution p(mu | m) of the second outcome.  Means are weighted by
    p(mu | m), i.e. they are the conditional means given the first outcome.
    """
    if kraus.dim != ens.dim or second.dim != ens.dim:
        raise DimensionMismatchError("measurement and ensemble dimensions differ")
    M = kraus.operator(first_label)
    composed = [C @ M for C in second.operators]
    labels, prob, info, fid, defined = _branch_statistics(
        second.labels, composed, ens
    )
    p_first = branch_weights_and_amplitudes(ens.states, M)[0].mean()
    if p_first <= TOL.prob_floor:
        raise ZeroProbabilityOutcomeError(
            f"first-stage outcome {first_label} has probability {p_first:.3e}"
        )
    return StageStatistics(
        labels, prob, info, fid, defined, conditional=prob / p_first
    )


def optimal_fidelity(kraus: KrausSet, ens: PureStateEnsemble, label) -> float:
    """Fidelity the outcome would have had under the positive-part measurement.

    mean_a[ sqrt(<N²>) <N> ] / mean_a <N²>  with N = sqrt(M†M).
    """
    M = kraus.operator(label)
    N = linalg.positive_sqrt(linalg.dagger(M) @ M)
    w, _ = branch_weights_and_amplitudes(ens.states, N)
    n_exp = np.real(np.einsum("ad,dc,ac->a", ens.states.conj(), N, ens.states))
    return float(np.mean(np.sqrt(w) * n_exp) / np.mean(w))

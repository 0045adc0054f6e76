"""Second-stage measurements that undo (or partially undo) a first outcome.

Two constructions are provided for a first-stage operator M = U N:

* reversing: preferred operator proportional to M^{-1}; perfect state
  recovery, zero net information.
* Hermitian conjugate: preferred operator proportional to M†; approximate
  recovery for weak measurements with enhanced information gain, since the
  composition applies the positive part twice (C M ∝ N²).

Both are completed to exact two-outcome Kraus sets with a positive
square-root complement.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg, metrics
from .ensemble import PureStateEnsemble
from .errors import KappaOutOfBoundError, NonInvertibleOperatorError
from .measurement import KrausSet
from .metrics import branch_weights_and_amplitudes
from .tolerances import TOL

AUTO = "auto"


class SecondStageKind(enum.Enum):
    REVERSING = "reversing"
    CONJUGATE = "conjugate"


@dataclass(frozen=True)
class SecondStageSpec:
    """A second-stage Kraus set with its preferred (recovery) outcome."""

    kind: SecondStageKind
    source_outcome: float
    scale: complex           # lambda (reversing) or kappa (conjugate)
    preferred_label: float
    kraus: KrausSet
    exact: bool = True       # False when the recovery relation is approximate

    @property
    def preferred_operator(self) -> np.ndarray:
        return self.kraus.operator(self.preferred_label)


def _complement_or_none(preferred: np.ndarray) -> np.ndarray | None:
    """Positive root of I - P†P, or None when the complement vanishes."""
    gap = np.eye(preferred.shape[0]) - linalg.dagger(preferred) @ preferred
    gap = 0.5 * (gap + linalg.dagger(gap))
    if float(np.linalg.eigvalsh(gap)[-1]) < TOL.prob_floor:
        return None
    return linalg.positive_sqrt(gap)


def build_reversing(kraus: KrausSet, label) -> SecondStageSpec:
    """Two-outcome reversing measurement for one first-stage outcome.

    The preferred operator is lam * M^{-1} with the largest admissible real
    scale, lam² = min eigenvalue of M†M.  The complement outcome carries
    sqrt(I - R†R); when M is unitary the complement vanishes and a
    single-outcome set is returned.
    """
    M = kraus.operator(label)
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] < TOL.invertible_ratio * s[0]:
        raise NonInvertibleOperatorError(
            f"operator for outcome {label} is numerically singular"
        )
    lam = float(s[-1])  # sqrt of min eigenvalue of M†M
    preferred = lam * np.linalg.inv(M)
    complement = _complement_or_none(preferred)
    labels = (0.0,) if complement is None else (0.0, 1.0)
    ops = (preferred,) if complement is None else (preferred, complement)
    return SecondStageSpec(
        kind=SecondStageKind.REVERSING,
        source_outcome=float(label),
        scale=lam,
        preferred_label=0.0,
        kraus=KrausSet(ops, labels),
    )


def build_conjugate_minimal(kraus: KrausSet, label, kappa=AUTO) -> SecondStageSpec:
    """Minimal two-outcome Hermitian conjugate measurement for one outcome.

    The preferred operator is kappa * M†.  With ``kappa="auto"`` the largest
    admissible real scale is used, kappa = 1/sqrt(max eigenvalue of M†M).
    The complement is sqrt(I - |kappa|² N²) U†, which satisfies completeness
    exactly and reduces to the small-disturbance series of the two-outcome
    model when the positive part is close to a multiple of the identity.
    """
    M = kraus.operator(label)
    U, N = linalg.polar_decompose(M)
    nmax2 = float(np.linalg.eigvalsh(N)[-1]) ** 2
    if kappa == AUTO:
        kappa = 1.0 / np.sqrt(nmax2)
    kappa = complex(kappa)
    if abs(kappa) ** 2 > (1.0 + 1e-12) / nmax2:
        raise KappaOutOfBoundError(
            f"|kappa|²={abs(kappa) ** 2:.6g} exceeds bound {1.0 / nmax2:.6g}"
        )
    preferred = kappa * linalg.dagger(M)
    gap = np.eye(M.shape[0]) - abs(kappa) ** 2 * (N @ N)
    gap = 0.5 * (gap + linalg.dagger(gap))
    if float(np.linalg.eigvalsh(gap)[-1]) < TOL.prob_floor:
        ops, labels = (preferred,), (0.0,)
    else:
        complement = linalg.positive_sqrt(gap) @ linalg.dagger(U)
        ops, labels = (preferred, complement), (0.0, 1.0)
    return SecondStageSpec(
        kind=SecondStageKind.CONJUGATE,
        source_outcome=float(label),
        scale=kappa,
        preferred_label=0.0,
        kraus=KrausSet(ops, labels),
    )


def conjugate_preferred_closed_form(
    kraus: KrausSet, label, ens: PureStateEnsemble
) -> tuple[float, float]:
    """Fidelity and information gain on the preferred conjugate branch.

    Computed from the moments of the positive part alone:

        F = mean[sqrt(<N⁴>) <N²>] / mean <N⁴>
        I = info kernel applied to the weights <N⁴>

    These agree with the full two-stage statistics on that branch because
    the composed operator is proportional to N².
    """
    M = kraus.operator(label)
    N2 = linalg.dagger(M) @ M
    w4, _ = branch_weights_and_amplitudes(ens.states, N2)  # <N^4>
    n2 = np.real(np.einsum("ad,dc,ac->a", ens.states.conj(), N2, ens.states))
    fid = float(np.mean(np.sqrt(w4) * n2) / np.mean(w4))
    info = metrics.likelihood_info_gain(w4)
    return fid, info


def conditional_success_probability(
    kraus: KrausSet, label, ens: PureStateEnsemble, spec: SecondStageSpec
) -> float:
    """Probability of the preferred second outcome given the first outcome."""
    M = kraus.operator(label)
    composed = spec.preferred_operator @ M
    w_joint, _ = branch_weights_and_amplitudes(ens.states, composed)
    w_first, _ = branch_weights_and_amplitudes(ens.states, M)
    return float(w_joint.mean() / w_first.mean())

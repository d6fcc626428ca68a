"""Generalized energy detection against a reference white sub-band.

The test statistic normalizes the target band's average energy by the
reference band's, so any common multiplicative noise-level error cancels:
that scale invariance is the whole robustness story. With bin counts
N_dk (target) and beta * N_dk (reference), the normalized statistic is
asymptotically standard normal on a white band, which gives closed-form
false-alarm and detection probabilities, a threshold rule for a target
detection probability, the infinite-reference (known noise variance)
limit, and the detection loss relative to that limit.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import mathkit
from .edgedet import SubBandLayout
from .refdet import ReferenceSelection
from .spectral import BandEnergy, band_average_energy

__all__ = [
    "GedStat",
    "SensingDecision",
    "ged_statistic",
    "ged_pf",
    "ged_pd",
    "threshold_for_target_pd",
    "ced_statistic",
    "detection_loss",
    "classify_subbands",
]


@dataclass(frozen=True)
class GedStat:
    statistic: float
    beta: float
    n_dk: int
    threshold: float = float("nan")


@dataclass(frozen=True)
class SensingDecision:
    subband_index: int
    is_white: bool
    statistic: float
    threshold: float


def ged_statistic(target: BandEnergy, reference: BandEnergy) -> GedStat:
    """Normalized energy-ratio statistic of a target band against the
    reference band; beta is computed from bin counts so flooring effects
    stay consistent with the theory."""
    if reference.bin_count < 1 or target.bin_count < 1:
        raise ValueError("bands must contain at least one bin")
    if reference.average_energy <= 0:
        raise ValueError("reference band has no energy: synthesis or selection is broken")
    beta = reference.bin_count / target.bin_count
    n_dk = target.bin_count
    r = math.sqrt(n_dk * beta / (beta + 1)) * (target.average_energy / reference.average_energy - 1.0)
    return GedStat(statistic=r, beta=beta, n_dk=n_dk)


def ged_pf(lam: float) -> float:
    """False-alarm probability at threshold lam; independent of beta."""
    return 0.5 * mathkit.erfc(lam / math.sqrt(2))


def ged_pd(lam: float, snr: float, n_dk: int, beta: float) -> float:
    """Detection probability at threshold lam for an occupied band."""
    if snr < 0:
        raise ValueError("snr must be >= 0")
    mu = math.sqrt(n_dk * beta / (beta + 1)) * snr
    return 0.5 * mathkit.erfc((lam - mu) / (math.sqrt(2) * (1 + snr)))


def threshold_for_target_pd(target_pd: float, snr: float, sense_time_s: float,
                            band_hz: float, beta: float) -> float:
    """Threshold pinning the detection probability to its target, as a
    function of the sensing time: a_k * sqrt(T) + b_k."""
    if not 0 < target_pd < 1:
        raise ValueError("target_pd must lie in (0, 1)")
    if snr <= 0:
        raise ValueError("snr must be positive")
    a = math.sqrt(beta * band_hz / (beta + 1)) * snr
    b = math.sqrt(2) * (1 + snr) * mathkit.erfc_inv(2 * target_pd)
    return a * math.sqrt(sense_time_s) + b


def ced_statistic(target: BandEnergy, true_noise_variance: float) -> float:
    """Known-noise-variance limit of the ratio statistic (infinite
    reference band)."""
    if true_noise_variance <= 0:
        raise ValueError("true_noise_variance must be positive")
    return math.sqrt(target.bin_count) * (target.average_energy / true_noise_variance - 1.0)


def detection_loss(snr: float, n_dk: int, beta: float, target_pf: float) -> float:
    """Fractional detection-probability loss of the finite-reference
    detector relative to its known-noise-variance limit, both operated at
    the threshold meeting target_pf."""
    if not 0 < target_pf < 1:
        raise ValueError("target_pf must lie in (0, 1)")
    lam = math.sqrt(2) * mathkit.erfc_inv(2 * target_pf)
    pd = ged_pd(lam, snr, n_dk, beta)
    mu_lim = math.sqrt(n_dk) * snr
    pd_lim = 0.5 * mathkit.erfc((lam - mu_lim) / (math.sqrt(2) * (1 + snr)))
    return 1.0 - pd / pd_lim


def classify_subbands(psd: np.ndarray, layout: SubBandLayout,
                      reference: ReferenceSelection, thresholds) -> list:
    """Label every non-reference sub-band white or non-white.

    Band energies are recomputed from the supplied periodogram (whose
    resolution reflects the full sensing time); thresholds align with
    sub-band indices, the reference entry being ignored.
    """
    n = psd.shape[0]
    parts = layout.bin_partition(n)
    i = reference.reference_index
    if not 0 <= i < layout.count:
        raise ValueError(f"reference index {i} out of range for {layout.count} sub-bands")
    ref_energy = band_average_energy(psd, *parts[i])
    decisions = []
    for k, (lo, hi) in enumerate(parts):
        if k == i:
            continue
        stat = ged_statistic(band_average_energy(psd, lo, hi), ref_energy)
        lam = float(thresholds[k])
        decisions.append(SensingDecision(subband_index=k, is_white=stat.statistic < lam,
                                         statistic=stat.statistic, threshold=lam))
    return decisions

"""Reference white sub-band isolation.

The sub-band with the least average energy is taken as the noise
reference. The observation time needed to make that choice correct with a
prescribed probability follows from the asymptotic normality of the
pairwise energy-ratio statistic; it is driven by the two narrowest
sub-bands, the design SNR, and the target quality.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import mathkit
from .edgedet import SubBandLayout
from .spectral import band_average_energy

__all__ = ["RefDetConfig", "ReferenceSelection", "required_tw", "tw_min",
           "observation_samples", "select_reference"]


@dataclass(frozen=True)
class RefDetConfig:
    target_quality: float
    design_snr: float

    def __post_init__(self):
        if not 0.5 < self.target_quality < 1:
            raise ValueError("target_quality must lie in (0.5, 1)")
        if self.design_snr <= 0:
            raise ValueError("design_snr must be positive")


@dataclass(frozen=True)
class ReferenceSelection:
    reference_index: int
    band_energies: list
    observation_time_s: float


def _tau(config: RefDetConfig) -> float:
    r = mathkit.erfc_inv(2 * config.target_quality)
    return 2.0 * ((1.0 + 1.0 / config.design_snr) * r) ** 2


def required_tw(layout: SubBandLayout, config: RefDetConfig) -> float:
    """Observation time guaranteeing the minimum-energy pick meets the
    target quality for every occupied/white sub-band pair.

    Scales with the reciprocal widths of the two narrowest sub-bands (the
    hardest pair to order).
    """
    if layout.count < 2:
        raise ValueError("layout must have at least 2 sub-bands")
    w = sorted(layout.widths_hz)
    return _tau(config) * (1.0 / w[0] + 1.0 / w[1])


def tw_min(total_bandwidth_hz: float, config: RefDetConfig) -> float:
    """Smallest possible observation time over all admissible layouts: the
    two-band equal-halves split."""
    if total_bandwidth_hz <= 0:
        raise ValueError("total_bandwidth_hz must be positive")
    return 4.0 * _tau(config) / total_bandwidth_hz


def observation_samples(t_w: float, bandwidth_hz: float) -> int:
    """Samples to collect for an observation time: rounded up so the
    quality target is never undershot."""
    return int(math.ceil(t_w * bandwidth_hz - 1e-9))


def select_reference(psd: np.ndarray, layout: SubBandLayout,
                     observation_time_s: float = float("nan")) -> ReferenceSelection:
    """Pick the minimum-average-energy sub-band (ties to the lowest index)."""
    n = psd.shape[0]
    energies = [band_average_energy(psd, lo, hi) for lo, hi in layout.bin_partition(n)]
    idx = int(np.argmin([e.average_energy for e in energies]))
    return ReferenceSelection(reference_index=idx, band_energies=energies,
                              observation_time_s=observation_time_s)

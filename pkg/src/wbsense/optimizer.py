"""Sensing-time selection by throughput maximization.

The per-frame throughput objective trades sensing time against
transmission time: longer sensing lowers the false-alarm rate on white
bands (more recovered airtime-rate) but shrinks the transmission window.
With detection pinned to its target via the time-dependent threshold, the
objective is concave wherever the implied false-alarm probability stays
below one half, so the optimum is the root of the first derivative,
found by bisection.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import mathkit
from .edgedet import SubBandLayout

__all__ = ["ThroughputParams", "build_params", "throughput",
           "throughput_derivatives", "optimal_sensing_time"]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ThroughputParams:
    """Coefficients of the throughput objective, one entry per target band."""

    frame_duration_s: float
    a: np.ndarray           # threshold growth rate, 1/sqrt(s)
    b: np.ndarray           # threshold offset
    psi: np.ndarray         # recoverable airtime-rate weight (idle band)
    psi_tilde: np.ndarray   # residual weight (idle baseline + missed-detection leakage)
    band_indices: tuple = ()

    def __post_init__(self):
        if self.frame_duration_s <= 0:
            raise ValueError("frame_duration_s must be positive")
        sizes = {len(self.a), len(self.b), len(self.psi), len(self.psi_tilde)}
        if len(sizes) != 1:
            raise ValueError("coefficient arrays must share a length")
        if np.any(self.psi < 0):
            raise ValueError("psi entries must be >= 0")


def build_params(layout: SubBandLayout, reference_index: int, *,
                 frame_duration_s: float, band_snr: float, cr_snr: float,
                 target_pd: float, occupancy_priors) -> ThroughputParams:
    """Throughput coefficients for every non-reference sub-band.

    ``occupancy_priors`` holds one (p_idle, p_occupied) pair per sub-band;
    the primary's SNR at the secondary receiver is taken equal to the
    design band SNR.
    """
    if not 0 <= reference_index < layout.count:
        raise ValueError("reference_index out of range")
    if len(occupancy_priors) != layout.count:
        raise ValueError("need one prior pair per sub-band")
    widths = layout.widths_hz
    b_ref = widths[reference_index]
    rate_idle = math.log2(1 + cr_snr)
    rate_busy = math.log2(1 + cr_snr / (1 + band_snr))
    a, b, psi, psit, idx = [], [], [], [], []
    for k in range(layout.count):
        if k == reference_index:
            continue
        p0, p1 = occupancy_priors[k]
        if not (0 <= p0 <= 1 and abs(p0 + p1 - 1) < 1e-9):
            raise ValueError(f"priors for band {k} must be probabilities summing to 1")
        beta = b_ref / widths[k]
        a.append(math.sqrt(beta * widths[k] / (beta + 1)) * band_snr)
        b.append(_SQRT2 * (1 + band_snr) * mathkit.erfc_inv(2 * target_pd))
        p = 0.5 * p0 * rate_idle
        psi.append(p)
        psit.append(p + p1 * rate_busy * (1 - target_pd))
        idx.append(k)
    return ThroughputParams(frame_duration_s=frame_duration_s,
                            a=np.array(a), b=np.array(b),
                            psi=np.array(psi), psi_tilde=np.array(psit),
                            band_indices=tuple(idx))


def throughput(t_o: float, params: ThroughputParams) -> float:
    """Objective value at sensing time t_o (bits/s/Hz summed over bands)."""
    tf = params.frame_duration_s
    if not 0 <= t_o <= tf:
        raise ValueError(f"t_o must lie in [0, {tf}]")
    u = (params.a * math.sqrt(t_o) + params.b) / _SQRT2
    erf_u = np.array([mathkit.erf(float(x)) for x in u])
    return (tf - t_o) / tf * float(np.sum(params.psi * erf_u + params.psi_tilde))


def throughput_derivatives(t_o: float, params: ThroughputParams):
    """Analytic first and second derivatives of the objective.

    The second derivative is nonpositive wherever a*sqrt(t)+b >= 0, i.e.
    while the implied false-alarm probability stays below one half.
    """
    tf = params.frame_duration_s
    if not 0 < t_o < tf:
        raise ValueError("derivatives defined on the open interval (0, frame duration)")
    rt = math.sqrt(t_o)
    u = params.a * rt + params.b
    gauss = np.exp(-0.5 * u * u)
    erf_u = np.array([mathkit.erf(float(x)) for x in u / _SQRT2])
    shrink = 1.0 - t_o / tf
    first = float(np.sum(
        params.psi * (params.a / math.sqrt(2 * math.pi * t_o) * gauss * shrink
                      - erf_u / tf)
        - params.psi_tilde / tf
    ))
    second = float(np.sum(
        -params.psi * params.a / math.sqrt(2 * math.pi * t_o) * gauss
        * (2.0 / tf + (params.a / (2 * rt) * u + 1.0 / (2 * t_o)) * shrink)
    ))
    return first, second


def optimal_sensing_time(params: ThroughputParams, floor_s: float,
                         tol_s: float = 1e-6) -> float:
    """Sensing time maximizing the objective, never below ``floor_s``.

    Bisection on the first derivative over the open frame interval; the
    floor is the reference-isolation minimum, which also keeps the search
    away from the 1/sqrt(t) singularity at zero.
    """
    tf = params.frame_duration_s
    if not 0 < floor_s < tf:
        raise ValueError("floor_s must lie inside the frame")
    lo = floor_s
    hi = tf * (1 - 1e-6)
    dlo, _ = throughput_derivatives(lo, params)
    dhi, _ = throughput_derivatives(hi, params)
    if dlo <= 0:
        # objective already decreasing at the floor: the constrained
        # optimum is the floor itself
        return floor_s
    if dhi >= 0:
        warnings.warn("throughput objective is nondecreasing across the whole frame; "
                      "returning the frame boundary", RuntimeWarning, stacklevel=2)
        return hi
    while hi - lo > tol_s:
        mid = 0.5 * (lo + hi)
        d, _ = throughput_derivatives(mid, params)
        if d > 0:
            lo = mid
        else:
            hi = mid
    return max(0.5 * (lo + hi), floor_s)

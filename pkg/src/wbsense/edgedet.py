"""Ratio-based sub-band edge detection.

Each frame contributes, at every candidate center bin, the squared
normalized ratio of the average energies in the two half-windows around
that bin. Accumulated over L-1 frames, a no-edge position is a central
chi-square with L-1 degrees of freedom and an edge position is a scaled
noncentral chi-square, which yields closed-form false-alarm and detection
probabilities and a frame-count design rule. Edges are then extracted
greedily with a minimum-spacing exclusion rule.

Mean conventions: the asymptotic distribution of the normalized ratio
statistic has mean sqrt(n_eh/2) * snr under an occupied left half
(validated by Monte Carlo; see tests). ``convention="legacy"`` keeps the
sqrt(n_eh) * snr mean from earlier derivations of this detector; the
60 MHz reference design's frame count L = 55 follows from that variant.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, mathkit
from .spectral import bin_to_freq

__all__ = [
    "EdgeScanConfig",
    "EdgeStatVector",
    "SubBandLayout",
    "frame_edge_stats",
    "accumulate_frames",
    "edge_pf",
    "edge_pd",
    "solve_frame_count",
    "detected_edge_bins",
    "extract_edges",
    "CONVENTIONS",
]

CONVENTIONS = ("asymptotic", "legacy")


@dataclass(frozen=True)
class EdgeScanConfig:
    """Design inputs for the edge scan."""

    b_min_hz: float
    s_max: int
    frames: int
    frame_sense_duration_s: float
    target_pf: float
    target_pd: float
    design_snr: float

    def __post_init__(self):
        if self.b_min_hz <= 0 or self.s_max < 2:
            raise ValueError("need b_min_hz > 0 and s_max >= 2")
        if self.frames < 2:
            raise ValueError("need at least 2 frames")
        if not (0 < self.target_pf < 1 and 0 < self.target_pd < 1):
            raise ValueError("targets must lie in (0, 1)")
        if self.design_snr <= 0:
            raise ValueError("design_snr must be positive")

    @property
    def half_window_bins(self) -> int:
        return int(math.floor(self.frame_sense_duration_s * self.b_min_hz / 2))


@dataclass(frozen=True)
class EdgeStatVector:
    """Accumulated squared edge statistics over the candidate bins."""

    q: np.ndarray
    valid_start: int
    valid_stop: int
    frames_accumulated: int


@dataclass(frozen=True)
class SubBandLayout:
    """Sub-band partition of the analyzed span, delimited by edges in Hz."""

    edges_hz: tuple

    def __post_init__(self):
        e = np.asarray(self.edges_hz, dtype=float)
        if e.size < 3:
            raise ValueError("layout needs the two span endpoints and >= 1 interior edge, or use the two-band fallback")
        if np.any(np.diff(e) <= 0):
            raise ValueError("edges must be strictly increasing")

    @property
    def count(self) -> int:
        return len(self.edges_hz) - 1

    @property
    def widths_hz(self) -> tuple:
        e = self.edges_hz
        return tuple(e[j + 1] - e[j] for j in range(len(e) - 1))

    @property
    def span_hz(self) -> float:
        return self.edges_hz[-1] - self.edges_hz[0]

    def bin_partition(self, n_bins: int) -> list:
        """Half-open bin intervals for each sub-band, partitioning [0, n_bins)."""
        from .spectral import freq_to_bin

        b = self.span_hz
        bounds = [freq_to_bin(e, n_bins, b) for e in self.edges_hz]
        bounds[0], bounds[-1] = 0, n_bins
        return [(bounds[j], bounds[j + 1]) for j in range(self.count)]


def frame_edge_stats(psd: np.ndarray, n_eh: int) -> np.ndarray:
    """Squared normalized energy-ratio statistic at every candidate center.

    Valid centers are [n_eh, len(psd) - n_eh); entries outside that range
    are zero.
    """
    if n_eh < 2:
        raise ValueError("n_eh must be >= 2")
    if psd.shape[0] < 2 * n_eh:
        raise ValueError("psd shorter than two half-windows")
    q = np.zeros(psd.shape[0])
    kernels.edge_accumulate(q, np.ascontiguousarray(psd, dtype=float), n_eh)
    return q


def accumulate_frames(per_frame_stats: list) -> EdgeStatVector:
    """Elementwise sum of per-frame squared statistics."""
    if not per_frame_stats:
        raise ValueError("no frames to accumulate")
    n = per_frame_stats[0].shape[0]
    if any(s.shape[0] != n for s in per_frame_stats):
        raise ValueError("per-frame statistic vectors must share a length")
    q = np.sum(per_frame_stats, axis=0)
    # valid range inferred from the shared zero padding
    nz = np.flatnonzero(q)
    if nz.size:
        start, stop = int(nz[0]), int(nz[-1]) + 1
    else:
        start, stop = 0, 0
    return EdgeStatVector(q=q, valid_start=start, valid_stop=stop,
                          frames_accumulated=len(per_frame_stats))


def edge_pf(lam: float, frames: int) -> float:
    """False-alarm probability of the accumulated statistic at threshold lam."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return mathkit.chi2_sf(lam, frames - 1)


def _mu_pair(snr: float, n_eh: int, convention: str):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    scale = math.sqrt(n_eh / 2) if convention == "asymptotic" else math.sqrt(n_eh)
    return scale * snr, -scale * snr / (1 + snr)


def edge_pd(lam: float, frames: int, snr: float, n_eh: int,
            convention: str = "asymptotic") -> float:
    """Detection probability: the worse of the rising- and falling-edge cases.

    Each case is a scaled noncentral chi-square survival value with L-1
    degrees of freedom; the scale is the squared asymptotic standard
    deviation of the per-frame statistic under that case.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if snr < 0:
        raise ValueError("snr must be >= 0")
    if lam == 0.0:
        return 1.0
    dof = frames - 1
    if snr == 0.0:
        return mathkit.chi2_sf(lam, dof)
    mu1, mu2 = _mu_pair(snr, n_eh, convention)
    s1, s2 = 1.0 + snr, 1.0 / (1.0 + snr)
    p1 = mathkit.marcum_q(dof / 2, abs(mu1) * math.sqrt(dof), math.sqrt(lam) / s1)
    p2 = mathkit.marcum_q(dof / 2, abs(mu2) * math.sqrt(dof), math.sqrt(lam) / s2)
    return min(p1, p2)


def solve_frame_count(config: EdgeScanConfig, convention: str = "asymptotic",
                      max_frames: int = 600):
    """Smallest frame count meeting both probability targets.

    Returns (frames, threshold) where the threshold pins the false-alarm
    target exactly and the detection target is met at the design SNR.
    """
    n_eh = config.half_window_bins
    if n_eh < 2:
        raise ValueError("frame_sense_duration_s too short: half window below 2 bins")
    for frames in range(2, max_frames + 1):
        lam = mathkit.chi2_quantile(config.target_pf, frames - 1)
        if edge_pd(lam, frames, config.design_snr, n_eh, convention) >= config.target_pd:
            return frames, lam
    raise RuntimeError(
        f"no frame count up to {max_frames} reaches Pd {config.target_pd} "
        f"at SNR {config.design_snr}: targets unreachable at this design SNR"
    )


def detected_edge_bins(stats: EdgeStatVector, lam: float, b_min_bins: int) -> list:
    """Greedy selection of edge bins from the accumulated statistic vector.

    Repeatedly takes the global argmax (ties to the lowest bin); a value
    below the threshold stops the loop. Each accepted edge excludes
    candidates strictly within b_min_bins of it, so two true edges exactly
    b_min_bins apart both survive. Candidates that close to either span
    endpoint are excluded up front (the endpoints are edges of the span and
    no sub-band may be narrower than the minimum width).
    """
    if b_min_bins < 1:
        raise ValueError("b_min_bins must be >= 1")
    q = stats.q
    n = q.shape[0]
    lo = max(stats.valid_start, b_min_bins)
    hi = min(stats.valid_stop, n - b_min_bins + 1)
    mask = np.full(n, -np.inf)
    if lo < hi:
        mask[lo:hi] = q[lo:hi]

    picked = []
    while True:
        j = int(np.argmax(mask))
        if not np.isfinite(mask[j]) or mask[j] < lam:
            break
        picked.append(j)
        mask[max(0, j - b_min_bins + 1):min(n, j + b_min_bins)] = -np.inf
    return sorted(picked)


def extract_edges(stats: EdgeStatVector, lam: float, b_min_bins: int,
                  bandwidth_hz: float) -> SubBandLayout:
    """Sub-band layout from the greedy edge selection; with no accepted
    edge the span is split into two equal halves."""
    picked = detected_edge_bins(stats, lam, b_min_bins)
    b = bandwidth_hz
    if not picked:
        return SubBandLayout(edges_hz=(-b / 2, 0.0, b / 2))
    n = stats.q.shape[0]
    freqs = [bin_to_freq(j, n, b) for j in picked]
    return SubBandLayout(edges_hz=(-b / 2, *freqs, b / 2))

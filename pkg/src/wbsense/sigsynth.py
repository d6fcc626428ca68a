"""Synthetic wideband frame generation.

Frames are built directly in the frequency domain: every bin carries
zero-mean circularly-symmetric complex Gaussian noise of variance sigma^2,
and bins inside an occupied sub-band additionally carry an independent
unit-modulus QPSK symbol scaled to the per-bin signal power snr * sigma^2
(signal power is anchored to the *nominal* noise variance; under noise
uncertainty only the noise level moves). Time samples are the inverse
unitary DFT of those bins, so the statistical model the detectors assume
holds exactly rather than asymptotically.

Sub-band edges are snapped to the nearest DFT bin; adjacent sub-bands
partition the bin axis with half-open intervals.
"""

from dataclasses import dataclass, field

import numpy as np

from .spectral import freq_to_bin

__all__ = [
    "ScenarioSpec",
    "SpectrumFrame",
    "draw_noise_variance",
    "synthesize_frame",
    "signal_power_bins",
    "sample_band_average_energy",
]

_QPSK = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2)


@dataclass(frozen=True)
class ScenarioSpec:
    """One spectrum occupancy scenario.

    occupancy[j] marks sub-band j (between subband_edges_hz[j] and [j+1])
    as signal-plus-noise; snr_linear[j] is its SNR when occupied.
    """

    total_bandwidth_hz: float
    subband_edges_hz: tuple
    occupancy: tuple
    snr_linear: tuple
    noise_variance: float = 1.0
    uncertainty_db: float = 0.0
    frame_duration_s: float = 1e-3

    def __post_init__(self):
        edges = np.asarray(self.subband_edges_hz, dtype=float)
        b = float(self.total_bandwidth_hz)
        if b <= 0:
            raise ValueError("total_bandwidth_hz must be positive")
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("need at least two sub-band edges")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("sub-band edges must be strictly increasing")
        if abs(edges[0] + b / 2) > 1e-9 * b or abs(edges[-1] - b / 2) > 1e-9 * b:
            raise ValueError("edges must span [-B/2, B/2]")
        nb = edges.size - 1
        if len(self.occupancy) != nb or len(self.snr_linear) != nb:
            raise ValueError("occupancy and snr_linear must have one entry per sub-band")
        if any(s < 0 for s in self.snr_linear):
            raise ValueError("snr_linear entries must be >= 0")
        if self.noise_variance <= 0:
            raise ValueError("noise_variance must be positive")
        if self.uncertainty_db < 0:
            raise ValueError("uncertainty_db must be >= 0")
        if self.frame_duration_s <= 0:
            raise ValueError("frame_duration_s must be positive")

    @property
    def subband_count(self) -> int:
        return len(self.subband_edges_hz) - 1


@dataclass(frozen=True)
class SpectrumFrame:
    """One frame of received samples plus its periodogram."""

    time_samples: np.ndarray = field(repr=False)
    psd_bins: np.ndarray = field(repr=False)
    sample_rate_hz: float
    realized_noise_variance: float

    @property
    def n_samples(self) -> int:
        return self.psd_bins.shape[0]


def draw_noise_variance(nominal: float, uncertainty_db: float, rng: np.random.Generator) -> float:
    """Noise variance for one frame: uniform on [nominal/eps, nominal*eps]
    with eps = 10**(uncertainty_db/10); constant within the frame."""
    if nominal <= 0:
        raise ValueError("nominal noise variance must be positive")
    if uncertainty_db < 0:
        raise ValueError("uncertainty_db must be >= 0")
    if uncertainty_db == 0.0:
        return nominal
    eps = 10.0 ** (uncertainty_db / 10.0)
    return float(rng.uniform(nominal / eps, nominal * eps))


def signal_power_bins(spec: ScenarioSpec, n_bins: int) -> np.ndarray:
    """Per-bin coherent signal power implied by the scenario occupancy.

    Zero in white sub-bands, snr * nominal noise variance in occupied ones;
    sub-band edges snapped to the nearest bin.
    """
    power = np.zeros(n_bins)
    b = spec.total_bandwidth_hz
    bounds = [freq_to_bin(e, n_bins, b) for e in spec.subband_edges_hz]
    bounds[0], bounds[-1] = 0, n_bins
    for j in range(spec.subband_count):
        lo, hi = bounds[j], bounds[j + 1]
        if hi - lo < 1:
            raise ValueError(f"sub-band {j} narrower than one DFT bin at n_bins={n_bins}")
        if spec.occupancy[j]:
            power[lo:hi] = spec.snr_linear[j] * spec.noise_variance
    return power


def synthesize_frame(spec: ScenarioSpec, rng: np.random.Generator,
                     time_domain: bool = True) -> SpectrumFrame:
    """Generate one frame of floor(duration * B) samples.

    The periodogram equals the magnitude-squared frequency-domain bins the
    frame was built from; the time record is their inverse unitary DFT.
    Detectors consume the periodogram only, so callers doing bulk Monte
    Carlo can skip the inverse transform with ``time_domain=False`` (the
    frame then carries an empty sample record).
    """
    n = int(np.floor(spec.frame_duration_s * spec.total_bandwidth_hz))
    if n < 2:
        raise ValueError("frame too short: less than two samples")
    power = signal_power_bins(spec, n)

    sigma2 = draw_noise_variance(spec.noise_variance, spec.uncertainty_db, rng)
    sd = np.sqrt(sigma2 / 2.0)
    bins = rng.normal(0.0, sd, n) + 1j * rng.normal(0.0, sd, n)
    occ = power > 0
    if np.any(occ):
        symbols = _QPSK[rng.integers(0, 4, int(occ.sum()))]
        bins[occ] += np.sqrt(power[occ]) * symbols

    psd_bins = bins.real**2 + bins.imag**2
    if time_domain:
        time_samples = np.fft.ifft(np.fft.ifftshift(bins)) * np.sqrt(n)
    else:
        time_samples = np.empty(0, dtype=complex)
    return SpectrumFrame(
        time_samples=time_samples,
        psd_bins=psd_bins,
        sample_rate_hz=spec.total_bandwidth_hz,
        realized_noise_variance=sigma2,
    )


def sample_band_average_energy(n_bins: int, total_signal_power: float, noise_var: float,
                               rng: np.random.Generator, size=None):
    """Draw the average periodogram level of a band without materializing bins.

    The sum of n white-bin energies is exactly Gamma(n, scale=noise_var);
    with a coherent component of total power P spread over the band the sum
    is exactly (noise_var/2) * noncentral-chi-square(2n, 2P/noise_var), since
    each bin is |c_j + CN(0, noise_var)|^2 with fixed |c_j|^2. Dividing by n
    gives the band average. These identities make the draw O(1) per band
    instead of O(n), with the same distribution as summing synthesized bins.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    if total_signal_power < 0:
        raise ValueError("total_signal_power must be >= 0")
    if total_signal_power == 0.0:
        return noise_var * rng.standard_gamma(n_bins, size=size) / n_bins
    nonc = 2.0 * total_signal_power / noise_var
    return (noise_var / 2.0) * rng.noncentral_chisquare(2 * n_bins, nonc, size=size) / n_bins

"""Periodogram computation and band-energy bookkeeping.

Axis convention: an n-bin spectrum spans [-B/2, B/2) with bin k centered at
(k - n//2) * B/n, i.e. the FFT-shifted view of a length-n DFT. The DFT is
unitary (1/sqrt(n) forward), so white-noise PSD bins have mean equal to the
noise variance regardless of n, and Parseval holds between time samples and
PSD bins without extra factors.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["BandEnergy", "psd", "band_average_energy", "freq_to_bin", "bin_to_freq"]


@dataclass(frozen=True)
class BandEnergy:
    """Average periodogram level over a half-open bin interval."""

    bin_start: int
    bin_stop: int
    average_energy: float

    @property
    def bin_count(self) -> int:
        return self.bin_stop - self.bin_start


def psd(time_samples: np.ndarray) -> np.ndarray:
    """Magnitude-squared unitary DFT of a complex sample record, shifted so
    bin 0 is the most negative frequency."""
    x = np.asarray(time_samples)
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples")
    spec = np.fft.fftshift(np.fft.fft(x))
    out = (spec.real**2 + spec.imag**2) / n
    return out


def band_average_energy(psd_bins: np.ndarray, bin_start: int, bin_stop: int) -> BandEnergy:
    """Arithmetic mean of the periodogram over [bin_start, bin_stop)."""
    n = psd_bins.shape[0]
    if not 0 <= bin_start < bin_stop <= n:
        raise ValueError(f"invalid bin range [{bin_start}, {bin_stop}) for {n} bins")
    avg = float(np.sum(psd_bins[bin_start:bin_stop])) / (bin_stop - bin_start)
    return BandEnergy(bin_start, bin_stop, avg)


def freq_to_bin(f_hz: float, n_bins: int, bandwidth_hz: float) -> int:
    """Nearest bin index for a frequency in [-B/2, B/2].

    The upper span edge maps to n_bins, the exclusive end of the last
    half-open bin interval.
    """
    half = bandwidth_hz / 2
    if not -half - 1e-9 * bandwidth_hz <= f_hz <= half + 1e-9 * bandwidth_hz:
        raise ValueError(f"{f_hz} Hz outside the analyzed span")
    df = bandwidth_hz / n_bins
    k = int(round(f_hz / df)) + n_bins // 2
    return min(max(k, 0), n_bins)


def bin_to_freq(k: int, n_bins: int, bandwidth_hz: float) -> float:
    """Center frequency of bin k under the shifted axis convention."""
    df = bandwidth_hz / n_bins
    return (k - n_bins // 2) * df

"""NumPy reference implementation of the hot-loop kernels."""

import numpy as np

NAME = "numpy"


def fill_psd(out: np.ndarray, signal_power: np.ndarray, noise_var: float,
             rng: np.random.Generator) -> None:
    """Draw one periodogram realization into ``out``.

    Bins with zero ``signal_power`` hold the squared magnitude of complex
    white noise, i.e. an exponential with mean ``noise_var``; occupied bins
    hold the squared magnitude of a fixed-power constellation point plus
    the same noise.
    """
    n = out.shape[0]
    if signal_power.shape[0] != n:
        raise ValueError("signal_power length must match out")
    if noise_var <= 0.0:
        raise ValueError("noise_var must be positive")
    rng.standard_exponential(n, out=out)
    out *= noise_var
    occ = np.flatnonzero(signal_power > 0.0)
    if occ.size:
        sd = np.sqrt(noise_var / 2.0)
        re = np.sqrt(signal_power[occ]) + rng.normal(0.0, sd, occ.size)
        im = rng.normal(0.0, sd, occ.size)
        out[occ] = re * re + im * im


def edge_accumulate(q: np.ndarray, psd: np.ndarray, half_window: int) -> None:
    """Add the squared normalized left/right energy-ratio statistic to ``q``.

    For every center bin j in [half_window, n - half_window) the statistic
    compares the mean energy of [j - half_window, j) against [j,
    j + half_window); ``q[j]`` accumulates its square, scaled so a pure-noise
    input contributes a unit-variance squared normal per call.
    """
    n = psd.shape[0]
    nh = int(half_window)
    if nh < 2:
        raise ValueError("half_window must be >= 2")
    if n < 2 * nh:
        raise ValueError("psd shorter than two half-windows")
    if q.shape[0] != n:
        raise ValueError("q length must match psd")
    cs = np.empty(n + 1)
    cs[0] = 0.0
    np.cumsum(psd, out=cs[1:])
    left = cs[nh:n - nh] - cs[:n - 2 * nh]
    right = cs[2 * nh:n] - cs[nh:n - nh]
    ratio = left / right
    ratio -= 1.0
    np.square(ratio, out=ratio)
    ratio *= 0.5 * nh
    q[nh:n - nh] += ratio

"""Welch power spectral density with a built-in radix-2 transform, log-log
slope fitting, and the |M| vs sqrt(n) envelope samples.

The transform is an iterative Cooley-Tukey FFT over power-of-two lengths:
bit-reversal permutation followed by log2(n) rounds of vectorized
butterflies. Exactness against a reference DFT is part of the test suite;
nothing here calls an external FFT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tables import MertensTable

DEFAULT_SEGMENT_LENGTH = 1 << 20
DEFAULT_OVERLAP = 0.5
DEFAULT_WINDOW = "hann"
DEFAULT_BAND = (1e-5, 1e-1)


@dataclass(frozen=True)
class Spectrum:
    """One-sided PSD estimate at unit sample rate; DC is excluded."""

    frequencies: np.ndarray
    power: np.ndarray
    segment_length: int
    overlap: float
    window_name: str
    segment_count: int
    parseval_max_rel_error: float


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r2: float
    band: tuple[float, float]


@dataclass(frozen=True)
class EnvelopeSeries:
    """Sampled (n, |M(n)|, sqrt(n)) triples plus the running max of |M|."""

    indices: np.ndarray
    abs_m: np.ndarray
    sqrt_n: np.ndarray
    running_max: np.ndarray


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_radix2(x: np.ndarray) -> np.ndarray:
    """Discrete Fourier transform of a power-of-two length sequence.

    Iterative decimation-in-time: permute into bit-reversed order, then
    combine blocks pairwise with precomputed twiddle factors. O(n log n).
    """
    x = np.asarray(x)
    n = x.shape[-1]
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    out = np.array(x[..., _bit_reverse_indices(n)], dtype=np.complex128)
    half = 1
    while half < n:
        tw = np.exp(-1j * np.pi * np.arange(half) / half)
        view = out.reshape(out.shape[:-1] + (n // (2 * half), 2, half))
        even = view[..., 0, :].copy()
        odd = view[..., 1, :] * tw
        view[..., 0, :] = even + odd
        view[..., 1, :] = even - odd
        half *= 2
    return out


_WINDOWS = {
    "hann": lambda n: 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n),
    "rectangular": lambda n: np.ones(n),
}


def periodogram_welch(
    seq,
    segment_length: int = DEFAULT_SEGMENT_LENGTH,
    overlap_fraction: float = DEFAULT_OVERLAP,
    window: str = DEFAULT_WINDOW,
) -> Spectrum:
    """Averaged one-sided PSD over overlapping mean-removed segments.

    Each segment has its mean removed, is windowed, transformed, and its
    squared magnitudes accumulated; the average is normalized by the window
    power so the result is a density per unit frequency (sample rate 1).
    Frequencies cover (0, 0.5]; the DC bin is dropped (mean removal leaves
    it at rounding level anyway). A Parseval identity is evaluated on every
    segment and the worst relative error is reported on the Spectrum.
    """
    x = np.asarray(seq, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("sequence must be one-dimensional")
    n = segment_length
    if n < 2 or n & (n - 1):
        raise ValueError(f"segment_length must be a power of two >= 2, got {n}")
    if n > len(x):
        raise ValueError(f"segment_length {n} exceeds sequence length {len(x)}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    if window not in _WINDOWS:
        raise ValueError(f"unknown window {window!r}; choose from {sorted(_WINDOWS)}")

    w = _WINDOWS[window](n)
    window_power = float(np.sum(w * w))
    step = max(1, int(round(n * (1.0 - overlap_fraction))))
    starts = range(0, len(x) - n + 1, step)

    accum = np.zeros(n // 2, dtype=np.float64)
    worst_rel = 0.0
    count = 0
    for s in starts:
        seg = x[s : s + n]
        seg = seg - seg.sum() / n
        seg = seg * w
        spec = fft_radix2(seg)
        mag2 = spec.real * spec.real + spec.imag * spec.imag
        # Parseval: time-domain energy equals mean of squared magnitudes
        time_energy = float(np.sum(seg * seg))
        freq_energy = float(mag2.sum()) / n
        denom = max(time_energy, 1e-300)
        worst_rel = max(worst_rel, abs(time_energy - freq_energy) / denom)
        # fold to one side: bins 1..n/2, doubling all but Nyquist
        half = mag2[1 : n // 2 + 1].copy()
        half[:-1] *= 2.0
        accum += half
        count += 1

    power = accum / (count * window_power)
    freqs = np.arange(1, n // 2 + 1, dtype=np.float64) / n
    return Spectrum(freqs, power, n, overlap_fraction, window, count, worst_rel)


def fit_loglog_slope(s: Spectrum, band: tuple[float, float] = DEFAULT_BAND) -> SlopeFit:
    """Least squares of log10(power) on log10(frequency) inside the band."""
    lo, hi = band
    if not 0.0 < lo < hi:
        raise ValueError(f"band must satisfy 0 < lo < hi, got {band}")
    mask = (s.frequencies >= lo) & (s.frequencies <= hi) & (s.power > 0.0)
    if int(mask.sum()) < 10:
        raise ValueError(f"band {band} keeps {int(mask.sum())} points, need at least 10")
    lx = np.log10(s.frequencies[mask])
    ly = np.log10(s.power[mask])
    n = len(lx)
    sx = lx.sum()
    sy = ly.sum()
    sxx = float(np.dot(lx, lx))
    sxy = float(np.dot(lx, ly))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    resid = ly - (slope * lx + intercept)
    ss_res = float(np.dot(resid, resid))
    centered = ly - sy / n
    ss_tot = float(np.dot(centered, centered))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return SlopeFit(float(slope), float(intercept), float(r2), (lo, hi))


def envelope_series(m: MertensTable, stride: int = 1000) -> EnvelopeSeries:
    """(n, |M(n)|, sqrt(n), running max |M|) at stride samples plus n = N."""
    if stride < 1:
        raise ValueError(f"stride must be positive, got {stride}")
    samples = np.arange(stride, m.limit + 1, stride, dtype=np.int64)
    if len(samples) == 0 or samples[-1] != m.limit:
        samples = np.append(samples, m.limit)
    abs_all = np.abs(m.values)
    running = np.maximum.accumulate(abs_all)
    return EnvelopeSeries(
        samples,
        abs_all[samples - 1].astype(np.float64),
        np.sqrt(samples.astype(np.float64)),
        running[samples - 1].astype(np.float64),
    )

"""Periodogram estimation and the spectral primitives used by the losses.

The periodogram standardizes the input, zero-pads it to ``pad_len``, takes
the squared DFT magnitude, restricts the bins to a half-open band [lo, hi),
and normalizes the restricted powers to sum to one.  Normalization makes the
spectral distance scale-invariant, so signal amplitude cannot game the
contrastive objective.  No window function is applied beyond the rectangular
window implied by zero-padding a detrended signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BandSpec,
    DegenerateSpectrumError,
    EmptyBandError,
    Signal,
    standardize,
)

# Covers 30-180 bpm; every loss-related spectrum uses this unless overridden.
DEFAULT_BAND = BandSpec(0.5, 3.0)


def default_pad_len(n: int) -> int:
    """Next power of two >= 4*n (150 samples -> 1024).

    Gives a bin width of about 0.0293 Hz at 30 Hz sampling, i.e. sub-2-bpm
    heart-rate resolution.
    """
    return 1 << int(np.ceil(np.log2(4 * n)))


@dataclass(frozen=True)
class PowerSpectrum:
    """Band-restricted, normalized periodogram.

    freqs: strictly increasing bin centers with uniform spacing `bin_width`.
    powers: nonnegative, sums to 1 over the restriction band.
    """

    freqs: np.ndarray
    powers: np.ndarray
    bin_width: float
    band: BandSpec

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.float64)
        powers = np.asarray(self.powers, dtype=np.float64)
        if freqs.shape != powers.shape or freqs.ndim != 1 or freqs.size == 0:
            raise ValueError("freqs and powers must be matching 1-D arrays")
        if np.any(powers < 0) or not np.all(np.isfinite(powers)):
            raise ValueError("powers must be finite and nonnegative")
        if freqs.size > 1 and np.any(np.diff(freqs) <= 0):
            raise ValueError("freqs must be strictly increasing")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "powers", powers)
        for a in (freqs, powers):
            a.setflags(write=False)


def raw_power_spectrum(samples: np.ndarray, fs: float, pad_len: int):
    """Squared DFT magnitudes of the zero-padded samples, no conditioning.

    Returns (freqs, powers) over the full [0, fs/2] rfft range.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if pad_len < samples.size:
        raise ValueError("pad_len must be >= signal length")
    spectrum = np.fft.rfft(samples, n=pad_len)
    powers = spectrum.real**2 + spectrum.imag**2
    freqs = np.arange(powers.size) * (fs / pad_len)
    return freqs, powers


def _band_mask(freqs: np.ndarray, band: BandSpec) -> np.ndarray:
    return (freqs >= band.lo) & (freqs < band.hi)


def periodogram(s: Signal, pad_len: int, band: BandSpec = DEFAULT_BAND) -> PowerSpectrum:
    """Normalized band-restricted periodogram of a signal.

    Raises DegenerateSpectrumError for a constant input (all-zero after
    standardization) and EmptyBandError when the band contains no bins.
    """
    if band.hi > s.fs / 2 + 1e-12:
        raise ValueError("band must lie within [0, fs/2]")
    u = standardize(s.samples)
    if not np.any(u):
        raise DegenerateSpectrumError("constant signal has no spectral content")
    freqs, powers = raw_power_spectrum(u, s.fs, pad_len)
    mask = _band_mask(freqs, band)
    if not np.any(mask):
        raise EmptyBandError(f"band [{band.lo}, {band.hi}) contains no bins")
    total = powers[mask].sum()
    if total <= 0.0:
        raise DegenerateSpectrumError("no power inside the analysis band")
    return PowerSpectrum(freqs[mask], powers[mask] / total, s.fs / pad_len, band)


def dominant_frequency(ps: PowerSpectrum) -> float:
    """Frequency of the maximum-power bin; ties break to the lower frequency."""
    return float(ps.freqs[int(np.argmax(ps.powers))])


def soft_dominant_frequency(ps: PowerSpectrum, sharpness: float) -> float:
    """Differentiable surrogate for the dominant frequency.

    Softmax-weighted mean of the bin frequencies: converges to the hard
    argmax as sharpness grows, and to the plain mean of the bin frequencies
    as sharpness approaches zero.
    """
    if not (sharpness > 0):
        raise ValueError("sharpness must be > 0")
    z = sharpness * ps.powers
    w = np.exp(z - z.max())
    w /= w.sum()
    return float(np.dot(ps.freqs, w))


def psd_distance(
    a: Signal, b: Signal, pad_len: int, band: BandSpec = DEFAULT_BAND
) -> float:
    """Mean squared error between the normalized power spectra of two signals.

    Symmetric, nonnegative, zero iff the restricted spectra coincide.  The
    triangle inequality is not claimed.
    """
    if a.fs != b.fs:
        raise ValueError("signals must share a sampling rate")
    pa = periodogram(a, pad_len, band)
    pb = periodogram(b, pad_len, band)
    diff = pa.powers - pb.powers
    return float(np.mean(diff * diff))


def band_power(ps: PowerSpectrum, band: BandSpec) -> float:
    """Sum of normalized powers over bins in [band.lo, band.hi).

    Raises EmptyBandError when no bins fall inside the band.
    """
    mask = _band_mask(ps.freqs, band)
    if not np.any(mask):
        raise EmptyBandError(f"band [{band.lo}, {band.hi}) contains no bins")
    return float(ps.powers[mask].sum())

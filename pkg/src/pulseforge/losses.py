"""Self-supervised frequency objectives over extracted signals.

Four components, summed with unit weights into the total:

* reconstruction (``l_vr``): mean RMS pixel difference between the input cube
  and each negative cube, keeping negatives visually close to the input.
* contrastive (``l_fc``): an InfoNCE-style ratio over spectral distances,
  pulling the two positive views together and pushing negatives away.
* ratio consistency (``l_fr``): dominant-frequency ratios between negatives
  and positives must match the ratios the negatives were built with.
* agreement (``l_fa``): spectra of the positives must stay close to those of
  temporally neighboring clips.

The spectral distance is the mean squared error between band-restricted,
normalized power spectra (see :mod:`pulseforge.spectral`), which makes every
frequency-domain component invariant to positive rescaling of any signal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import BandSpec, Signal, VideoCube
from .spectral import (
    DEFAULT_BAND,
    dominant_frequency,
    periodogram,
    psd_distance,
    soft_dominant_frequency,
)


@dataclass(frozen=True)
class LossConfig:
    """Knobs shared by the frequency losses.

    `sharpness` controls the softmax surrogate used when dominant
    frequencies must be differentiable; evaluation uses the hard argmax.
    """

    temperature: float = 0.08
    pad_len: int = 1024
    band: BandSpec = field(default_factory=lambda: DEFAULT_BAND)
    sharpness: float = 100.0
    num_negatives: int = 4
    num_neighbors: int = 3

    def __post_init__(self):
        if not (self.temperature > 0):
            raise ValueError("temperature must be > 0")
        if self.num_negatives < 1 or self.num_neighbors < 1:
            raise ValueError("need at least one negative and one neighbor")
        if not (self.sharpness > 0):
            raise ValueError("sharpness must be > 0")


@dataclass(frozen=True)
class LossBreakdown:
    """Per-component values; `total` is always their plain sum."""

    l_fc: float
    l_fr: float
    l_fa: float
    l_vr: float

    @property
    def total(self) -> float:
        return self.l_fc + self.l_fr + self.l_fa + self.l_vr

    def as_dict(self) -> dict:
        return {
            "l_fc": self.l_fc,
            "l_fr": self.l_fr,
            "l_fa": self.l_fa,
            "l_vr": self.l_vr,
            "total": self.total,
        }


def rms(x: np.ndarray) -> float:
    """Euclidean norm divided by sqrt(element count)."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sqrt(np.mean(x * x)))


def video_reconstruction_loss(
    anchor: VideoCube, negatives: Sequence[VideoCube]
) -> float:
    """Mean over negatives of the RMS pixel difference from the anchor.

    RMS (rather than a raw Frobenius norm) keeps the value independent of
    cube resolution.
    """
    if not negatives:
        raise ValueError("need at least one negative")
    for neg in negatives:
        if neg.data.shape != anchor.data.shape:
            raise ValueError("negative cube shape differs from anchor")
    return float(
        np.mean(
            [
                rms(neg.data.astype(np.float64) - anchor.data.astype(np.float64))
                for neg in negatives
            ]
        )
    )


def video_reconstruction_loss_grad(
    anchor: VideoCube, negatives: Sequence[VideoCube]
) -> list[np.ndarray]:
    """Gradient of the reconstruction loss w.r.t. each negative's pixels.

    For negative i: (neg_i - anchor) / (k * rms_i * numel).
    """
    if not negatives:
        raise ValueError("need at least one negative")
    k = len(negatives)
    numel = anchor.data.size
    grads = []
    for neg in negatives:
        diff = neg.data.astype(np.float64) - anchor.data.astype(np.float64)
        r = rms(diff)
        if r == 0.0:
            grads.append(np.zeros_like(diff))
        else:
            grads.append(diff / (k * r * numel))
    return grads


def contrastive_from_distances(
    d_positive: float,
    d_p1_negatives: Sequence[float],
    d_p2_negatives: Sequence[float],
    temperature: float,
) -> float:
    """InfoNCE-style ratio on precomputed spectral distances.

    log(1 + exp(d_pp/tau) / sum_i(exp(d_p1ni/tau) + exp(d_p2ni/tau))),
    evaluated with a max-shift so large exponents cannot overflow.  Strictly
    positive; increasing in the positive-pair distance and decreasing in
    every positive-negative distance.
    """
    d1 = np.asarray(d_p1_negatives, dtype=np.float64)
    d2 = np.asarray(d_p2_negatives, dtype=np.float64)
    if d1.size == 0 or d1.size != d2.size:
        raise ValueError("need matching, nonempty negative distance lists")
    a = d_positive / temperature
    b = np.concatenate([d1, d2]) / temperature
    shift = max(a, float(b.max()))
    ratio = np.exp(a - shift) / np.exp(b - shift).sum()
    return float(np.log1p(ratio))


def frequency_contrastive_loss(
    p1: Signal, p2: Signal, negatives: Sequence[Signal], cfg: LossConfig
) -> float:
    """Contrastive loss over spectra of two positives and k negatives."""
    if not negatives:
        raise ValueError("need at least one negative signal")
    d_pp = psd_distance(p1, p2, cfg.pad_len, cfg.band)
    d1 = [psd_distance(p1, n, cfg.pad_len, cfg.band) for n in negatives]
    d2 = [psd_distance(p2, n, cfg.pad_len, cfg.band) for n in negatives]
    return contrastive_from_distances(d_pp, d1, d2, cfg.temperature)


def ratio_consistency_from_frequencies(
    f_negatives: Sequence[float],
    f_p1: float,
    f_p2: float,
    ratios: Sequence[float],
) -> float:
    """Mean absolute deviation of observed frequency ratios from the targets.

    (1/2k) * sum_i |f_ni/f_p1 - r_i| + |f_ni/f_p2 - r_i|.
    """
    f_n = np.asarray(f_negatives, dtype=np.float64)
    r = np.asarray(ratios, dtype=np.float64)
    if f_n.size == 0 or f_n.size != r.size:
        raise ValueError("need one ratio per negative")
    if f_p1 <= 0 or f_p2 <= 0:
        raise ValueError("positive-signal dominant frequency must be > 0")
    terms = np.abs(f_n / f_p1 - r) + np.abs(f_n / f_p2 - r)
    return float(terms.sum() / (2 * f_n.size))


def frequency_ratio_loss(
    p1: Signal,
    p2: Signal,
    negatives: Sequence[Signal],
    ratios: Sequence[float],
    cfg: LossConfig,
    mode: str = "hard",
) -> float:
    """Ratio-consistency loss; `mode` picks the dominant-frequency estimator.

    "hard" uses the argmax bin (evaluation); "soft" uses the differentiable
    softmax surrogate that the gradient path trains through.
    """
    if len(negatives) != len(ratios):
        raise ValueError("need one ratio per negative")
    if mode == "hard":
        estimate = dominant_frequency
    elif mode == "soft":
        estimate = lambda ps: soft_dominant_frequency(ps, cfg.sharpness)
    else:
        raise ValueError("mode must be 'hard' or 'soft'")
    f_p1 = estimate(periodogram(p1, cfg.pad_len, cfg.band))
    f_p2 = estimate(periodogram(p2, cfg.pad_len, cfg.band))
    f_n = [estimate(periodogram(n, cfg.pad_len, cfg.band)) for n in negatives]
    return ratio_consistency_from_frequencies(f_n, f_p1, f_p2, ratios)


def frequency_agreement_loss(
    p1: Signal, p2: Signal, neighbors: Sequence[Signal], cfg: LossConfig
) -> float:
    """(1/2J) * sum_j d(p1, b_j) + d(p2, b_j) over neighbor signals."""
    if not neighbors:
        raise ValueError("need at least one neighbor signal")
    total = 0.0
    for b in neighbors:
        total += psd_distance(p1, b, cfg.pad_len, cfg.band)
        total += psd_distance(p2, b, cfg.pad_len, cfg.band)
    return total / (2 * len(neighbors))


def total_loss(
    anchor_cube: VideoCube,
    negative_cubes: Sequence[VideoCube],
    p1: Signal,
    p2: Signal,
    negative_signals: Sequence[Signal],
    ratios: Sequence[float],
    neighbor_signals: Sequence[Signal],
    cfg: LossConfig,
    mode: str = "hard",
) -> LossBreakdown:
    """All four components; the breakdown's total is their unweighted sum."""
    return LossBreakdown(
        l_fc=frequency_contrastive_loss(p1, p2, negative_signals, cfg),
        l_fr=frequency_ratio_loss(p1, p2, negative_signals, ratios, cfg, mode),
        l_fa=frequency_agreement_loss(p1, p2, neighbor_signals, cfg),
        l_vr=video_reconstruction_loss(anchor_cube, negative_cubes),
    )

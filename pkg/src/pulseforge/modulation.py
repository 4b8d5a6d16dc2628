"""Frequency modulation of pulse signals and cubes.

For a sinusoidal pulse, scaling the frequency by a ratio r is equivalent to
an element-wise product with the modulation vector

    m[n] = sin(2*pi*r*F*(t_n + phase)) / sin(2*pi*F*(t_n + phase)),

a non-linear function of the original signal (for r=2 it reduces to
2*cos(2*pi*F*(t + phase))).  The vector is exposed for inspection and tests;
:func:`modulate_parametric` synthesizes the scaled sinusoid directly and has
no singularities, so it is the ground-truth path.  For non-parametric signals
:func:`modulate_resample` falls back to time-axis resampling.

Negative cube samples keep the original base appearance and noise realization
and only swap the embedded pulse for its frequency-scaled version, so the one
controlled difference is pulse frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Signal, VideoCube
from .synth import CHANNEL_GAINS, PulseModel, SceneSpec, pulse_samples, sensitivity_map

# Ratio sampling range: slower-pulse and faster-pulse intervals.
RATIO_INTERVALS = ((0.3, 0.8), (1.2, 1.7))


def sample_ratios(k: int, seed) -> np.ndarray:
    """k frequency ratios, uniform over (0.3, 0.8) u (1.2, 1.7).

    Each interval is weighted by its length (here equal).  `seed` may be an
    int or a numpy Generator.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    (lo1, hi1), (lo2, hi2) = RATIO_INTERVALS
    len1, len2 = hi1 - lo1, hi2 - lo2
    u = rng.uniform(0.0, len1 + len2, size=k)
    return np.where(u < len1, lo1 + u, lo2 + (u - len1))


@dataclass(frozen=True)
class ModulationVector:
    """Per-sample multipliers realizing one frequency ratio.

    `clamped` flags the samples where the analytic quotient was capped near
    zero crossings of the carrier.
    """

    values: np.ndarray
    ratio: float
    clamped: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        clamped = np.asarray(self.clamped, dtype=bool)
        if values.shape != clamped.shape or values.ndim != 1:
            raise ValueError("values and clamped must be matching 1-D arrays")
        if not np.all(np.isfinite(values)):
            raise ValueError("modulation values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "clamped", clamped)
        values.setflags(write=False)
        clamped.setflags(write=False)


def analytic_modulation_vector(
    model: PulseModel,
    ratio: float,
    num_samples: int,
    fs: float,
    clamp: float = 10.0,
    eps: float = 1e-3,
) -> ModulationVector:
    """Closed-form modulation vector sin(2*pi*r*F*x) / sin(2*pi*F*x).

    Where the denominator magnitude falls below `eps` the quotient is capped
    at +/-`clamp`, keeping the modulation energy bounded near carrier zero
    crossings; the sign follows the quotient's limiting direction.  At
    unclamped samples the element-wise product with the zero-baseline carrier
    reproduces the frequency-scaled sinusoid exactly.
    """
    if not (ratio > 0):
        raise ValueError("ratio must be > 0")
    x = np.arange(num_samples) / fs + model.phase
    num = np.sin(2.0 * np.pi * ratio * model.frequency * x)
    den = np.sin(2.0 * np.pi * model.frequency * x)
    clamped = np.abs(den) <= eps
    values = np.empty(num_samples)
    ok = ~clamped
    values[ok] = num[ok] / den[ok]
    sign = np.sign(num) * np.sign(den)
    sign = np.where(sign == 0, np.where(np.sign(num) != 0, np.sign(num), 1.0), sign)
    values[clamped] = clamp * sign[clamped]
    return ModulationVector(values=values, ratio=float(ratio), clamped=clamped)


def modulate_parametric(
    model: PulseModel, ratio: float, num_samples: int, fs: float
) -> Signal:
    """Directly synthesize the pulse with its frequency scaled by `ratio`.

    Exact frequency scaling with no singularities; ratio=1 reproduces the
    original signal bit for bit.
    """
    if not (ratio > 0):
        raise ValueError("ratio must be > 0")
    return Signal(pulse_samples(model, np.arange(num_samples), fs, ratio=ratio), fs)


def modulate_resample(s: Signal, ratio: float, out_len: int | None = None) -> Signal:
    """Scale a signal's content frequency by resampling its time axis.

    output[n] = linear interpolation of the input at position n*ratio, with
    reflection padding once positions run past the source.  For band-limited
    periodic inputs the dominant frequency scales by `ratio`.
    """
    if not (ratio > 0):
        raise ValueError("ratio must be > 0")
    n_src = len(s)
    if ratio > n_src - 1:
        raise ValueError("ratio leaves fewer than 2 effective source samples")
    if out_len is None:
        out_len = n_src
    if out_len < 2:
        raise ValueError("output needs at least 2 samples")
    positions = np.arange(out_len) * ratio
    max_pos = positions[-1]
    source = s.samples
    if max_pos > n_src - 1:
        pad = int(np.ceil(max_pos)) - (n_src - 1)
        source = np.pad(source, (0, pad), mode="reflect")
    idx = np.arange(source.size)
    return Signal(np.interp(positions, idx, source), s.fs)


def make_negatives(
    cube: VideoCube,
    scene: SceneSpec,
    ratios: Sequence[float],
    start_frame: int = 0,
) -> list[VideoCube]:
    """Rebuild a cube once per ratio with only its embedded pulse rescaled.

    The scene describes how the pulse was embedded (sensitivities, channel
    gains); base appearance and the noise realization carry over unchanged
    because only the pulse difference is injected.  `start_frame` gives the
    cube's offset inside the original recording so the pulse phase lines up.
    """
    ratios = list(ratios)
    if not ratios:
        raise ValueError("need at least one ratio")
    frames = np.arange(start_frame, start_frame + cube.frames)
    original = pulse_samples(scene.pulse, frames, cube.fps)
    smap = sensitivity_map(scene, cube.height, cube.width)
    gains = np.asarray(CHANNEL_GAINS)
    embed = smap[None, :, :, None] * gains[None, None, None, :]
    base = cube.data.astype(np.float64)
    out = []
    for r in ratios:
        if not (r > 0):
            raise ValueError("ratio must be > 0")
        delta = pulse_samples(scene.pulse, frames, cube.fps, ratio=float(r)) - original
        data = base + embed * delta[:, None, None, None]
        np.clip(data, 0.0, 1.0, out=data)
        out.append(VideoCube(data.astype(np.float32), cube.fps))
    return out

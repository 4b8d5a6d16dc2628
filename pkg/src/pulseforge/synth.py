"""Deterministic simulator for pulse-bearing synthetic video cubes.

Each cube embeds a sinusoidal pulse into a static per-pixel base pattern:

    pixel(t, h, w, c) = clamp(base(h,w,c) + sens(region(h,w)) * gain(c) * pulse(t)
                              + noise(t,h,w,c), 0, 1)

Region sensitivities model pulsation-sensitive versus insensitive skin areas;
the fixed channel gains favor the green channel, whose pulsatile component
dominates in practice.  Noise combines white pixel noise, a global sinusoidal
illumination drift, and short additive motion ramps.  Generation is a pure
function of the scene description, including its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import Signal, VideoCube
from .experts import partition

# (R, G, B) pulse gains; any fixed positive triple works, green dominates.
CHANNEL_GAINS = (0.6, 1.0, 0.4)

# Cycled to fill grids of any size; mixes strong, weak, and dead regions.
_SENSITIVITY_CYCLE = (1.0, 0.7, 0.0, 0.5, 0.9, 0.2, 0.0, 0.4, 0.8)


@dataclass(frozen=True)
class PulseModel:
    """Sinusoidal pulse: baseline + amplitude * sin(2*pi*frequency*(t + phase)).

    frequency is constrained to [0.5, 3.0] Hz (30-180 bpm) for physiological
    plausibility; phase is in seconds.
    """

    amplitude: float
    frequency: float
    phase: float = 0.0
    baseline: float = 0.0

    def __post_init__(self):
        if not (self.amplitude > 0):
            raise ValueError("amplitude must be > 0")
        if not (0.5 <= self.frequency <= 3.0):
            raise ValueError("frequency must lie in [0.5, 3.0] Hz")
        if not (0.0 <= self.baseline <= 1.0):
            raise ValueError("baseline must lie in [0, 1]")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise: white pixel noise, illumination drift, motion ramps."""

    white_sigma: float = 0.0
    drift_amplitude: float = 0.0
    drift_frequency: float = 0.0
    motion_transients: int = 0

    def __post_init__(self):
        if self.white_sigma < 0 or self.drift_amplitude < 0:
            raise ValueError("noise magnitudes must be >= 0")
        if self.drift_frequency < 0 or self.motion_transients < 0:
            raise ValueError("drift frequency and transient count must be >= 0")


@dataclass(frozen=True)
class SceneSpec:
    """Complete description of one synthetic recording."""

    pulse: PulseModel
    sensitivities: tuple[float, ...]
    noise: NoiseSpec = NoiseSpec()
    rows: int = 3
    cols: int = 3
    seed: int = 0

    def __post_init__(self):
        sens = tuple(float(v) for v in self.sensitivities)
        if len(sens) != self.rows * self.cols:
            raise ValueError("need one sensitivity per region")
        if any(v < 0 or v > 1 for v in sens):
            raise ValueError("sensitivities must lie in [0, 1]")
        if not any(v > 0 for v in sens):
            raise ValueError("at least one region sensitivity must be > 0")
        object.__setattr__(self, "sensitivities", sens)


def default_scene_template(
    white_sigma: float = 0.02, rows: int = 3, cols: int = 3
) -> SceneSpec:
    """Mixed-sensitivity scene with white noise only; pulse is a placeholder."""
    count = rows * cols
    sens = tuple(_SENSITIVITY_CYCLE[i % len(_SENSITIVITY_CYCLE)] for i in range(count))
    return SceneSpec(
        pulse=PulseModel(amplitude=0.05, frequency=1.0),
        sensitivities=sens,
        noise=NoiseSpec(white_sigma=white_sigma),
        rows=rows,
        cols=cols,
    )


def pulse_samples(
    model: PulseModel, frames: np.ndarray, fs: float, ratio: float = 1.0
) -> np.ndarray:
    """Pulse values at the given absolute frame indices.

    `ratio` scales the frequency, so ratio=1 reproduces the model exactly.
    """
    t = np.asarray(frames, dtype=np.float64) / fs
    return model.baseline + model.amplitude * np.sin(
        2.0 * np.pi * ratio * model.frequency * (t + model.phase)
    )


def generate_signal(model: PulseModel, num_samples: int, fs: float) -> Signal:
    """Sample the pulse model at `fs` for `num_samples` samples."""
    if num_samples < 2:
        raise ValueError("need at least 2 samples")
    return Signal(pulse_samples(model, np.arange(num_samples), fs), fs)


def sensitivity_map(spec: SceneSpec, height: int, width: int) -> np.ndarray:
    """(H, W) per-pixel sensitivity from the scene's region grid."""
    grid = partition(height, width, spec.rows, spec.cols)
    sens = np.asarray(spec.sensitivities, dtype=np.float64)
    return sens[grid.labels()]


def _noise_tensor(
    noise: NoiseSpec, shape: tuple[int, int, int, int], fps: float, rng
) -> np.ndarray:
    """Deterministic noise for a (T, H, W, C) tensor.

    Draw order is fixed (drift phase, transients, white noise) so that the
    same seed always produces the same bytes.
    """
    frames = shape[0]
    per_frame = np.zeros(frames)
    if noise.drift_amplitude > 0:
        phase = rng.uniform(0.0, 2.0 * np.pi)
        t = np.arange(frames) / fps
        per_frame += noise.drift_amplitude * np.sin(
            2.0 * np.pi * noise.drift_frequency * t + phase
        )
    ramp_len = max(2, int(round(0.3 * fps)))
    for _ in range(noise.motion_transients):
        start = int(rng.integers(0, max(1, frames - ramp_len)))
        magnitude = rng.uniform(-0.05, 0.05)
        ramp = magnitude * np.arange(ramp_len) / (ramp_len - 1)
        per_frame[start : start + ramp_len] += ramp[: frames - start]
    out = np.broadcast_to(per_frame[:, None, None, None], shape).copy()
    if noise.white_sigma > 0:
        out += noise.white_sigma * rng.standard_normal(shape)
    return out


def generate_cube(
    spec: SceneSpec,
    num_frames: int,
    fps: float,
    height: int = 64,
    width: int = 64,
) -> tuple[VideoCube, Signal]:
    """Render a cube and return it with its ground-truth pulse signal."""
    if num_frames < 2:
        raise ValueError("need at least 2 frames")
    rng = np.random.default_rng(spec.seed)
    base = rng.uniform(0.35, 0.65, size=(height, width, 3))
    truth = generate_signal(spec.pulse, num_frames, fps)
    smap = sensitivity_map(spec, height, width)
    gains = np.asarray(CHANNEL_GAINS)
    shape = (num_frames, height, width, 3)
    data = (
        base[None, :, :, :]
        + smap[None, :, :, None]
        * gains[None, None, None, :]
        * truth.samples[:, None, None, None]
        + _noise_tensor(spec.noise, shape, fps, rng)
    )
    np.clip(data, 0.0, 1.0, out=data)
    return VideoCube(data.astype(np.float32), fps), truth


@dataclass(frozen=True)
class CorpusItem:
    """One simulated recording with its ground truth and full scene."""

    cube: VideoCube
    truth: Signal
    scene: SceneSpec


def build_corpus(
    n: int,
    hr_range_bpm: tuple[float, float],
    template: SceneSpec,
    seed: int,
    num_frames: int = 600,
    fps: float = 30.0,
    height: int = 64,
    width: int = 64,
) -> list[CorpusItem]:
    """Simulate `n` recordings with pulse rates uniform over a bpm range.

    Reproducible per seed: item scenes get child seeds from a fixed
    splitting rule, so items may also be generated in parallel.
    """
    if n < 1:
        raise ValueError("need at least one corpus item")
    lo, hi = hr_range_bpm
    if not (0 < lo <= hi):
        raise ValueError("heart-rate range must satisfy 0 < lo <= hi")
    master, *children = np.random.SeedSequence(seed).spawn(n + 1)
    rng = np.random.default_rng(master)
    freqs_hz = rng.uniform(lo / 60.0, hi / 60.0, size=n)
    phases = rng.uniform(0.0, 1.0, size=n)
    items = []
    for i in range(n):
        pulse = PulseModel(
            amplitude=template.pulse.amplitude,
            frequency=float(freqs_hz[i]),
            phase=float(phases[i]),
            baseline=template.pulse.baseline,
        )
        scene = replace(
            template, pulse=pulse, seed=int(children[i].generate_state(1)[0])
        )
        cube, truth = generate_cube(scene, num_frames, fps, height, width)
        items.append(CorpusItem(cube=cube, truth=truth, scene=scene))
    return items


# --- scene (de)serialization ------------------------------------------------


def scene_to_dict(spec: SceneSpec) -> dict:
    return {
        "pulse": {
            "amplitude": spec.pulse.amplitude,
            "frequency": spec.pulse.frequency,
            "phase": spec.pulse.phase,
            "baseline": spec.pulse.baseline,
        },
        "sensitivities": list(spec.sensitivities),
        "noise": {
            "white_sigma": spec.noise.white_sigma,
            "drift_amplitude": spec.noise.drift_amplitude,
            "drift_frequency": spec.noise.drift_frequency,
            "motion_transients": spec.noise.motion_transients,
        },
        "rows": spec.rows,
        "cols": spec.cols,
        "seed": spec.seed,
    }


def scene_from_dict(payload: dict) -> SceneSpec:
    return SceneSpec(
        pulse=PulseModel(**payload["pulse"]),
        sensitivities=tuple(payload["sensitivities"]),
        noise=NoiseSpec(**payload["noise"]),
        rows=int(payload["rows"]),
        cols=int(payload["cols"]),
        seed=int(payload["seed"]),
    )

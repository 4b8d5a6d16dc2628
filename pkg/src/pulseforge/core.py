"""Shared domain types, signal conditioning, and on-disk interchange formats.

A :class:`Signal` is a uniformly sampled 1-D time series; a :class:`VideoCube`
is a T x H x W x C pixel tensor in [0, 1].  Both are immutable after
construction (the backing numpy arrays are marked read-only) and therefore
safe to share across threads.

Cubes are stored on disk as ``<name>.f32`` (little-endian float32, T-major)
with a ``<name>.json`` sidecar carrying ``{t, h, w, c, fps}``.  Signals are
stored either as CSV with a ``t_seconds,value`` header or as JSON
``{"fs": ..., "samples": [...]}``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PulseforgeError(Exception):
    """Base class for domain errors raised by this package."""


class CubeFormatError(PulseforgeError):
    """Malformed cube file: bad header, size mismatch, or out-of-range values."""


class DegenerateSpectrumError(PulseforgeError):
    """Spectrum has no usable power (e.g. constant input signal)."""


class EmptyBandError(PulseforgeError):
    """A frequency band query matched no spectrum bins."""


class PeakDetectionError(PulseforgeError):
    """Too few peaks found to derive interbeat intervals."""


class TrainingDivergedError(PulseforgeError):
    """Optimization produced a non-finite loss."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real-valued time series.

    samples: 1-D float array (arbitrary units), length >= 2, all finite.
    fs: sampling rate in Hz, > 0.
    """

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("signal needs at least 2 samples in a 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal samples must be finite")
        if not (self.fs > 0):
            raise ValueError("sampling rate must be > 0")
        object.__setattr__(self, "samples", _readonly(samples))
        object.__setattr__(self, "fs", float(self.fs))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.fs

    def time_axis(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.fs


@dataclass(frozen=True)
class VideoCube:
    """Pixel tensor of shape (T, H, W, C) with values in [0, 1].

    Stored as float32 so that disk round-trips are bit-exact.
    """

    data: np.ndarray
    fps: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float32)
        if data.ndim != 4:
            raise ValueError("cube data must have shape (T, H, W, C)")
        if data.shape[0] < 2:
            raise ValueError("cube needs at least 2 frames")
        if not (self.fps > 0):
            raise ValueError("fps must be > 0")
        if not np.all(np.isfinite(data)):
            raise ValueError("cube values must be finite")
        lo, hi = float(data.min()), float(data.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"cube values must lie in [0, 1], got [{lo}, {hi}]")
        object.__setattr__(self, "data", _readonly(data))
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def channels(self) -> int:
        return self.data.shape[3]

    def clip(self, start: int, length: int) -> "VideoCube":
        """Temporal slice of `length` frames starting at `start`."""
        if start < 0 or start + length > self.frames:
            raise ValueError("clip window exceeds cube extent")
        return VideoCube(self.data[start : start + length], self.fps)


@dataclass(frozen=True)
class BandSpec:
    """Half-open frequency band [lo, hi) in Hz, 0 <= lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError("band requires 0 <= lo < hi")


def standardize(x: np.ndarray) -> np.ndarray:
    """Remove the mean and scale to unit standard deviation.

    Constant input maps to all-zeros instead of raising, so downstream
    spectra degrade gracefully.  Uses the population (1/N) deviation; the
    operation is idempotent.
    """
    x = np.asarray(x, dtype=np.float64)
    centered = x - x.mean()
    sd = np.sqrt(np.mean(centered * centered))
    if sd == 0.0:
        return np.zeros_like(centered)
    return centered / sd


def detrend_and_standardize(s: Signal) -> Signal:
    """Signal-level wrapper around :func:`standardize`."""
    return Signal(standardize(s.samples), s.fs)


# --- cube files -----------------------------------------------------------


def _cube_paths(path) -> tuple[Path, Path]:
    base = Path(path)
    if base.suffix == ".f32":
        base = base.with_suffix("")
    return base.with_suffix(".f32"), base.with_suffix(".json")


def write_cube(cube: VideoCube, path) -> Path:
    """Write `<name>.f32` plus its `<name>.json` sidecar; returns the .f32 path."""
    payload_path, header_path = _cube_paths(path)
    header = {
        "t": cube.frames,
        "h": cube.height,
        "w": cube.width,
        "c": cube.channels,
        "fps": cube.fps,
    }
    header_path.write_text(json.dumps(header, sort_keys=True))
    cube.data.astype("<f4").tofile(payload_path)
    return payload_path


def read_cube(path) -> VideoCube:
    """Read a cube written by :func:`write_cube`; payload round-trips bit-exactly."""
    payload_path, header_path = _cube_paths(path)
    try:
        header = json.loads(header_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CubeFormatError(f"unreadable cube header {header_path}: {exc}") from exc
    try:
        t, h, w, c = (int(header[k]) for k in ("t", "h", "w", "c"))
        fps = float(header["fps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CubeFormatError(f"malformed cube header {header_path}: {exc}") from exc
    if min(t, h, w, c) <= 0 or fps <= 0:
        raise CubeFormatError(f"non-positive dimensions in header {header_path}")
    raw = np.fromfile(payload_path, dtype="<f4")
    if raw.size != t * h * w * c:
        raise CubeFormatError(
            f"payload holds {raw.size} values, header promises {t * h * w * c}"
        )
    if raw.size and (raw.min() < 0.0 or raw.max() > 1.0):
        raise CubeFormatError("payload values outside [0, 1]")
    try:
        return VideoCube(raw.reshape(t, h, w, c), fps)
    except ValueError as exc:
        raise CubeFormatError(str(exc)) from exc


# --- signal files ---------------------------------------------------------


def write_signal(signal: Signal, path) -> Path:
    """Write a signal as `t_seconds,value` CSV or as JSON, chosen by suffix."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(
            json.dumps({"fs": signal.fs, "samples": signal.samples.tolist()})
        )
        return path
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_seconds", "value"])
        for t, v in zip(signal.time_axis(), signal.samples):
            writer.writerow([repr(float(t)), repr(float(v))])
    return path


def read_signal(path) -> Signal:
    """Read a signal from CSV (`t_seconds,value`) or JSON (`{fs, samples}`)."""
    path = Path(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text())
        return Signal(np.asarray(payload["samples"], dtype=np.float64), float(payload["fs"]))
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if rows and rows[0] and rows[0][0].strip().lower() in ("t_seconds", "t", "time"):
        rows = rows[1:]
    if len(rows) < 2:
        raise ValueError(f"signal file {path} holds fewer than 2 samples")
    t = np.array([float(r[0]) for r in rows])
    values = np.array([float(r[1]) for r in rows])
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise ValueError(f"time column in {path} must be strictly increasing")
    fs = 1.0 / float(np.median(steps))
    return Signal(values, fs)

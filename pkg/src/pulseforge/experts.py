"""Region partitioning, per-region signal extraction, and gated aggregation.

A frame is split into near-equal rectangular tiles; each tile yields one
"expert" signal (by default the standardized spatial mean of its pixels).
Experts are combined per time step by a softmax gate across experts, so the
output is always a convex combination of the expert values at every sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Signal, VideoCube, standardize


def _tile_edges(extent: int, tiles: int) -> np.ndarray:
    """Cumulative tile boundaries; remainder pixels go to the last tiles."""
    base, rem = divmod(extent, tiles)
    sizes = [base] * (tiles - rem) + [base + 1] * rem
    return np.concatenate([[0], np.cumsum(sizes)])


@dataclass(frozen=True)
class RegionGrid:
    """rows x cols partition of an H x W frame into L = rows*cols regions."""

    rows: int
    cols: int
    height: int
    width: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.rows > self.height or self.cols > self.width:
            raise ValueError("more tiles than pixels along an axis")

    @property
    def num_regions(self) -> int:
        return self.rows * self.cols

    @property
    def row_edges(self) -> np.ndarray:
        return _tile_edges(self.height, self.rows)

    @property
    def col_edges(self) -> np.ndarray:
        return _tile_edges(self.width, self.cols)

    def region_slices(self, index: int) -> tuple[slice, slice]:
        """(row_slice, col_slice) of region `index`, row-major order."""
        if not (0 <= index < self.num_regions):
            raise ValueError(f"region index {index} out of range")
        r, c = divmod(index, self.cols)
        re, ce = self.row_edges, self.col_edges
        return slice(int(re[r]), int(re[r + 1])), slice(int(ce[c]), int(ce[c + 1]))

    def labels(self) -> np.ndarray:
        """(H, W) map of region indices; every pixel belongs to exactly one."""
        out = np.empty((self.height, self.width), dtype=np.int64)
        for l in range(self.num_regions):
            rs, cs = self.region_slices(l)
            out[rs, cs] = l
        return out


def partition(height: int, width: int, rows: int, cols: int) -> RegionGrid:
    return RegionGrid(rows=rows, cols=cols, height=height, width=width)


# An extractor maps (cube, grid, region index) to one expert signal whose
# length equals the cube's frame count.
RegionExtractor = Callable[[VideoCube, RegionGrid, int], Signal]


def spatial_mean_signal(cube: VideoCube) -> Signal:
    """Standardized mean over all pixels and channels, per frame.

    Reductions run in float64 so pixel permutations (rotations, flips)
    leave the result unchanged to well below 1e-9.
    """
    raw = cube.data.mean(axis=(1, 2, 3), dtype=np.float64)
    return Signal(standardize(raw), cube.fps)


def extract_region_signal(cube: VideoCube, grid: RegionGrid, index: int) -> Signal:
    """Default extractor: standardized per-frame mean over one region."""
    if grid.height != cube.height or grid.width != cube.width:
        raise ValueError("grid does not match cube dimensions")
    rs, cs = grid.region_slices(index)
    raw = cube.data[:, rs, cs, :].mean(axis=(1, 2, 3), dtype=np.float64)
    return Signal(standardize(raw), cube.fps)


@dataclass(frozen=True)
class ExpertBundle:
    """L expert signals of equal length plus an (L, T) gating-logit matrix."""

    experts: tuple[Signal, ...]
    gating_logits: np.ndarray

    def __post_init__(self):
        if not self.experts:
            raise ValueError("need at least one expert")
        n = len(self.experts[0])
        fs = self.experts[0].fs
        for e in self.experts:
            if len(e) != n or e.fs != fs:
                raise ValueError("experts must share length and sampling rate")
        logits = np.asarray(self.gating_logits, dtype=np.float64)
        if logits.shape != (len(self.experts), n):
            raise ValueError(
                f"gating logits must have shape (L, T) = ({len(self.experts)}, {n})"
            )
        if not np.all(np.isfinite(logits)):
            raise ValueError("gating logits must be finite")
        object.__setattr__(self, "experts", tuple(self.experts))
        object.__setattr__(self, "gating_logits", logits)
        logits.setflags(write=False)


def gate_weights(logits: np.ndarray) -> np.ndarray:
    """Column-wise softmax across experts: each column sums to 1, all > 0."""
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim != 2:
        raise ValueError("logits must be an (L, T) matrix")
    if not np.all(np.isfinite(logits)):
        raise ValueError("logits must be finite")
    shifted = logits - logits.max(axis=0, keepdims=True)
    w = np.exp(shifted)
    return w / w.sum(axis=0, keepdims=True)


def aggregate(bundle: ExpertBundle) -> Signal:
    """Gated sum of expert signals: y[t] = sum_l E_l[t] * G_l[t]."""
    weights = gate_weights(bundle.gating_logits)
    stacked = np.stack([e.samples for e in bundle.experts])
    return Signal((weights * stacked).sum(axis=0), bundle.experts[0].fs)


def run_rea(
    cube: VideoCube,
    grid: RegionGrid,
    extractor: RegionExtractor,
    logits: np.ndarray,
) -> Signal:
    """Extract all region experts from a cube and aggregate them."""
    experts = tuple(extractor(cube, grid, l) for l in range(grid.num_regions))
    return aggregate(ExpertBundle(experts=experts, gating_logits=logits))

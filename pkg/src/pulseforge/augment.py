"""Weakly spatial augmentations that provably preserve signal frequency.

All six operations (rotations by 0/90/180/270 degrees, horizontal and
vertical flips) permute pixels within each frame, so any spatial-mean signal
and hence its spectrum are unchanged.  Color jittering and edge filtering are
deliberately excluded: they alter the color change across frames and destroy
the embedded signal.
"""

from __future__ import annotations

import numpy as np

from .core import VideoCube


def rotate(cube: VideoCube, quarter_turns: int) -> VideoCube:
    """Rotate every frame by `quarter_turns` * 90 degrees.

    Odd quarter turns require square frames.
    """
    k = quarter_turns % 4
    if k == 0:
        return cube
    if k in (1, 3) and cube.height != cube.width:
        raise ValueError("90/270 degree rotation requires square frames")
    return VideoCube(np.rot90(cube.data, k=k, axes=(1, 2)), cube.fps)


def flip(cube: VideoCube, axis: str) -> VideoCube:
    """Mirror every frame horizontally (left-right) or vertically (up-down)."""
    if axis == "horizontal":
        return VideoCube(cube.data[:, :, ::-1, :], cube.fps)
    if axis == "vertical":
        return VideoCube(cube.data[:, ::-1, :, :], cube.fps)
    raise ValueError("axis must be 'horizontal' or 'vertical'")


AUGMENTATIONS = (
    "rot0",
    "rot90",
    "rot180",
    "rot270",
    "hflip",
    "vflip",
)


def apply_augmentation(cube: VideoCube, name: str) -> VideoCube:
    if name.startswith("rot"):
        return rotate(cube, int(name[3:]) // 90)
    if name == "hflip":
        return flip(cube, "horizontal")
    if name == "vflip":
        return flip(cube, "vertical")
    raise ValueError(f"unknown augmentation {name!r}")


def sample_positive_pair(cube: VideoCube, seed) -> tuple[VideoCube, VideoCube]:
    """Apply two distinct randomly chosen operations to the same cube."""
    rng = np.random.default_rng(seed)
    first, second = rng.choice(len(AUGMENTATIONS), size=2, replace=False)
    return (
        apply_augmentation(cube, AUGMENTATIONS[first]),
        apply_augmentation(cube, AUGMENTATIONS[second]),
    )

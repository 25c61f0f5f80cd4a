"""Dominant-color annotation against a fixed named palette.

Point colors are quantized to the nearest palette entry in RGB space and the
most frequent names win.  Ties break toward the earlier palette entry so the
output is fully deterministic.
"""

from __future__ import annotations

import numpy as np

# (name, anchor RGB).  Order matters: it is the tie-break order.
PALETTE: tuple[tuple[str, tuple[int, int, int]], ...] = (
    ("red", (255, 0, 0)),
    ("orange", (255, 165, 0)),
    ("yellow", (255, 255, 0)),
    ("green", (0, 160, 0)),
    ("cyan", (0, 255, 255)),
    ("blue", (0, 0, 255)),
    ("purple", (128, 0, 128)),
    ("pink", (255, 105, 180)),
    ("brown", (139, 69, 19)),
    ("black", (0, 0, 0)),
    ("gray", (128, 128, 128)),
    ("white", (255, 255, 255)),
)

PALETTE_NAMES: tuple[str, ...] = tuple(name for name, _ in PALETTE)
_PALETTE_RGB = np.array([rgb for _, rgb in PALETTE], dtype=float)


def quantize_colors(rgb: np.ndarray) -> np.ndarray:
    """Map (N, 3) RGB values in [0, 255] to palette indices."""
    rgb = np.asarray(rgb, dtype=float)
    if rgb.ndim != 2 or rgb.shape[1] != 3:
        raise ValueError(f"expected (N, 3) RGB array, got shape {rgb.shape}")
    d2 = ((rgb[:, None, :] - _PALETTE_RGB[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def dominant_colors(points, max_colors: int = 3) -> tuple[str, ...]:
    """Up to ``max_colors`` palette names, by descending frequency.

    ``points`` is either a sequence of (position, rgb) pairs as produced by
    :func:`refground.pointcloud.parse_points`, or an (N, 3) RGB array.
    """
    if isinstance(points, np.ndarray) and points.ndim == 2 and points.shape[1] == 3:
        rgb = points.astype(float)
    else:
        pairs = list(points)
        if not pairs:
            raise ValueError("cannot extract dominant colors from an empty point list")
        rgb = np.array([p[1] for p in pairs], dtype=float)
    if len(rgb) == 0:
        raise ValueError("cannot extract dominant colors from an empty point list")
    idx = quantize_colors(rgb)
    counts = np.bincount(idx, minlength=len(PALETTE))
    order = sorted(range(len(PALETTE)), key=lambda i: (-counts[i], i))
    return tuple(PALETTE_NAMES[i] for i in order if counts[i] > 0)[:max_colors]

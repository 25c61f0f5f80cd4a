"""Traversable free-space extraction on a 2D occupancy grid.

A region is rasterized at a fixed cell size; a cell is occupied when its
center falls inside the footprint of any object whose vertical extent
intersects the agent slab (region floor up to agent height).  Connected
groups of free cells large enough to stand in become FreeSpace entries,
each fitted with an oriented box so downstream relation code can treat
them like objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .geometry import OrientedBox, points_in_footprint
from .scene import FreeSpace, Region, SceneObject

# Classes that cover the walkable plane itself; counting them as obstacles
# would mark every cell occupied.
DEFAULT_EXEMPT_CLASSES = frozenset({"floor", "ceiling", "floor mat"})


@dataclass(frozen=True)
class FreeSpaceConfig:
    cell_size: float = 0.1  # meters
    agent_height: float = 1.5  # obstacle slab above the region floor
    min_area: float = 0.5  # square meters per component
    exempt_classes: frozenset[str] = field(default=DEFAULT_EXEMPT_CLASSES)

    def __post_init__(self) -> None:
        if self.cell_size <= 0 or self.agent_height <= 0 or self.min_area < 0:
            raise ValueError("free-space parameters must be positive")


def _grid_shape(region: Region, cell: float) -> tuple[int, int]:
    width = region.bounds.max[0] - region.bounds.min[0]
    depth = region.bounds.max[1] - region.bounds.min[1]
    # Tiny epsilon keeps exact multiples (4.0 / 0.1) from rounding down.
    nx = int(math.floor(width / cell + 1e-9))
    ny = int(math.floor(depth / cell + 1e-9))
    return nx, ny


def occupancy_grid(region: Region, objects: list[SceneObject], config: FreeSpaceConfig) -> np.ndarray:
    """Boolean (ny, nx) grid, True where a cell center is blocked."""
    nx, ny = _grid_shape(region, config.cell_size)
    grid = np.zeros((ny, nx), dtype=bool)
    if nx == 0 or ny == 0:
        return grid
    ox, oy = region.bounds.min[0], region.bounds.min[1]
    xs = ox + (np.arange(nx) + 0.5) * config.cell_size
    ys = oy + (np.arange(ny) + 0.5) * config.cell_size
    cx, cy = np.meshgrid(xs, ys)
    centers = np.column_stack([cx.ravel(), cy.ravel()])
    slab_lo = region.bounds.min[2]
    slab_hi = slab_lo + config.agent_height
    for obj in objects:
        if obj.class_nyu40 in config.exempt_classes:
            continue
        if obj.box.z_max <= slab_lo or obj.box.z_min >= slab_hi:
            continue
        inside = points_in_footprint(obj.box.footprint(), centers)
        grid |= inside.reshape(ny, nx)
    return grid


def _fit_box(cells: np.ndarray, origin: tuple[float, float], config: FreeSpaceConfig,
             floor_z: float) -> OrientedBox:
    """Oriented box over a cell set via principal axes of the cell centers."""
    cell = config.cell_size
    xs = origin[0] + (cells[:, 1] + 0.5) * cell
    ys = origin[1] + (cells[:, 0] + 0.5) * cell
    pts = np.column_stack([xs, ys])
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered / max(len(pts), 1)
    _, vecs = np.linalg.eigh(cov)
    ux, uy = vecs[:, -1]  # largest-variance direction
    if ux < 0 or (ux == 0 and uy < 0):
        ux, uy = -ux, -uy
    yaw = math.atan2(uy, ux)
    axis_u = np.array([ux, uy])
    axis_v = np.array([-uy, ux])
    proj_u = pts @ axis_u
    proj_v = pts @ axis_v
    # A square cell projects with half-width (cell/2)(|ax| + |ay|) on any
    # axis; u and v have the same component magnitudes.
    pad = 0.5 * cell * (abs(ux) + abs(uy))
    lo_u, hi_u = proj_u.min() - pad, proj_u.max() + pad
    lo_v, hi_v = proj_v.min() - pad, proj_v.max() + pad
    mid = 0.5 * (lo_u + hi_u) * axis_u + 0.5 * (lo_v + hi_v) * axis_v
    return OrientedBox(
        center=(float(mid[0]), float(mid[1]), floor_z + 0.5 * config.agent_height),
        size=(float(hi_u - lo_u), float(hi_v - lo_v), config.agent_height),
        yaw=yaw,
    )


def extract_free_space(region: Region, objects: list[SceneObject],
                       config: FreeSpaceConfig | None = None) -> list[FreeSpace]:
    """Connected free components of the region's occupancy grid.

    Components are ordered (and numbered) by their top-left-most cell, so
    extraction is deterministic for a given scene.
    """
    config = config or FreeSpaceConfig()
    nx, ny = _grid_shape(region, config.cell_size)
    if nx == 0 or ny == 0:
        return []
    grid = occupancy_grid(region, objects, config)
    free = ~grid
    # 4-connectivity: cells sharing an edge belong to one component.
    labels, count = ndimage.label(free, structure=np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]]))
    min_cells = config.min_area / (config.cell_size ** 2)
    components: list[np.ndarray] = []
    for lab in range(1, count + 1):
        cells = np.argwhere(labels == lab)
        if len(cells) + 1e-9 < min_cells:
            continue
        components.append(cells)
    components.sort(key=lambda c: (int(c[:, 0].min()), int(c[c[:, 0] == c[:, 0].min(), 1].min())))
    origin = (region.bounds.min[0], region.bounds.min[1])
    floor_z = region.bounds.min[2]
    spaces: list[FreeSpace] = []
    for n, cells in enumerate(components):
        ordered = sorted((int(r), int(c)) for r, c in cells)
        spaces.append(FreeSpace(
            id=f"{region.id}_fs{n}",
            region_id=region.id,
            cells=tuple(ordered),
            cell_size=config.cell_size,
            origin=origin,
            box=_fit_box(cells, origin, config, floor_z),
            area=len(cells) * config.cell_size ** 2,
        ))
    return spaces


def annotate_free_spaces(scene, config: FreeSpaceConfig | None = None):
    """New scene with free spaces extracted for every region."""
    from dataclasses import replace

    freespaces = {}
    regions = []
    for region in scene.regions:
        objs = [scene.objects[oid] for oid in region.object_ids]
        spaces = extract_free_space(region, objs, config)
        for fs in spaces:
            freespaces[fs.id] = fs
        regions.append(replace(region, freespace_ids=tuple(fs.id for fs in spaces)))
    return replace(scene, regions=tuple(regions), freespaces=freespaces)

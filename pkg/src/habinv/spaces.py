"""Finite spaces of piecewise-constant habitat configurations.

A configuration space partitions the habitat box into a regular lattice of
cells and assigns each cell one value from a finite ladder between the low
and high growth bounds. A configuration is the per-cell vector of ladder
indices; outside the habitat box the growth rate always equals the low
(baseline) bound.

Two configurations are neighbours when they differ in exactly one cell, and,
for ladders with more than two rungs, when that difference is a single rung.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpaceError
from .geometry import Grid


@dataclass(frozen=True)
class GrowthBounds:
    """Growth-rate bounds: `low` is the known baseline outside the habitat
    box and the bottom of the value ladder; `high` caps the magnitude.

    Invariants: high > 0 and -high <= low <= high.
    """

    low: float
    high: float

    def __post_init__(self):
        if not self.high > 0:
            raise SpaceError(f"high bound must be positive, got {self.high}")
        if not (-self.high <= self.low <= self.high):
            raise SpaceError(
                f"low bound must lie in [-{self.high}, {self.high}], got {self.low}"
            )


def value_ladder(bounds: GrowthBounds, n_levels: int) -> tuple[float, ...]:
    """Evenly spaced values from low to high, endpoints exact."""
    if n_levels < 1:
        raise SpaceError("need at least one level")
    if n_levels == 1:
        return (bounds.low,)
    m, M = bounds.low, bounds.high
    k = n_levels - 1
    return tuple(((k - j) * m + j * M) / k for j in range(n_levels))


class ConfigurationSpace:
    """Regular cell lattice over the habitat box with a finite value ladder.

    Args:
        habitat_box: per-axis (lo, hi) bounds of the habitat box.
        cells_per_axis: lattice resolution, one entry per axis.
        bounds: growth bounds defining the value ladder endpoints.
        n_levels: ladder size (2 = binary).
    """

    def __init__(
        self,
        habitat_box,
        cells_per_axis,
        bounds: GrowthBounds,
        n_levels: int,
    ):
        self.habitat_box = tuple((float(lo), float(hi)) for lo, hi in habitat_box)
        self.cells_per_axis = tuple(int(c) for c in cells_per_axis)
        if len(self.cells_per_axis) != len(self.habitat_box):
            raise SpaceError("cells_per_axis length does not match habitat box")
        if any(c < 1 for c in self.cells_per_axis):
            raise SpaceError("need at least one cell per axis")
        self.bounds = bounds
        self.values = value_ladder(bounds, n_levels)
        self.n_levels = n_levels
        self.n_cells = int(np.prod(self.cells_per_axis))
        self.cell_size = tuple(
            (hi - lo) / c for (lo, hi), c in zip(self.habitat_box, self.cells_per_axis)
        )
        self.dimension = len(self.cells_per_axis)
        self._node_maps: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}

    @property
    def size(self) -> int:
        """Exact number of configurations (may be astronomically large)."""
        return self.n_levels**self.n_cells

    def __repr__(self) -> str:
        return (
            f"ConfigurationSpace(cells={self.cells_per_axis}, "
            f"levels={self.n_levels}, box={self.habitat_box})"
        )

    # -- cell geometry -----------------------------------------------------

    def cell_centers(self) -> np.ndarray:
        """(n_cells, dimension) array of cell centers, C order."""
        axes = [
            lo + (np.arange(c) + 0.5) * s
            for (lo, _), c, s in zip(self.habitat_box, self.cells_per_axis, self.cell_size)
        ]
        if self.dimension == 1:
            return axes[0][:, None]
        gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    def cell_index_of(self, point) -> int:
        """Flat cell index containing a point of the habitat box.

        Cells are half-open [edge, next_edge) except the last cell per axis,
        which is closed so the box's far edge belongs to it.
        """
        idx = 0
        for x, (lo, hi), c, s in zip(
            np.atleast_1d(point), self.habitat_box, self.cells_per_axis, self.cell_size
        ):
            if x < lo or x > hi:
                raise SpaceError(f"point {point} outside habitat box {self.habitat_box}")
            k = min(int((x - lo) / s), c - 1)
            idx = idx * c + k
        return idx

    def node_cell_map(self, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
        """Map grid nodes to containing cells.

        Returns (in_box, cell_idx): a boolean mask over flat grid nodes and,
        for nodes in the habitat box, the flat index of their cell. Asserts
        that every cell contains at least one node, which makes the
        configuration-to-field embedding injective.
        """
        cached = self._node_maps.get(grid.key)
        if cached is not None:
            return cached
        pts = grid.points()
        tol = 1e-9 * min(grid.spacing)
        in_box = np.ones(grid.n_nodes, dtype=bool)
        per_axis_idx = []
        for axis, ((lo, hi), c, s) in enumerate(
            zip(self.habitat_box, self.cells_per_axis, self.cell_size)
        ):
            x = pts[:, axis]
            in_box &= (x >= lo - tol) & (x <= hi + tol)
            k = np.floor((x - lo) / s).astype(np.int64)
            per_axis_idx.append(np.clip(k, 0, c - 1))
        if self.dimension == 1:
            cell_idx = per_axis_idx[0]
        else:
            cell_idx = per_axis_idx[0] * self.cells_per_axis[1] + per_axis_idx[1]
        cell_idx = np.where(in_box, cell_idx, -1)
        covered = np.zeros(self.n_cells, dtype=bool)
        covered[cell_idx[in_box]] = True
        if not covered.all():
            missing = int(np.flatnonzero(~covered)[0])
            raise SpaceError(
                f"cell {missing} contains no grid node; refine the grid so every "
                "cell is represented (required for distinct configurations to "
                "produce distinct fields)"
            )
        self._node_maps[grid.key] = (in_box, cell_idx)
        return in_box, cell_idx

    def field_values(self, levels: np.ndarray, grid: Grid) -> np.ndarray:
        """Flat per-node growth values for a level vector on this grid."""
        in_box, cell_idx = self.node_cell_map(grid)
        values = np.asarray(self.values)
        out = np.full(grid.n_nodes, self.bounds.low)
        out[in_box] = values[levels[cell_idx[in_box]]]
        return out

    # -- membership --------------------------------------------------------

    def validate_levels(self, levels: np.ndarray) -> np.ndarray:
        levels = np.asarray(levels, dtype=np.int64)
        if levels.shape != (self.n_cells,):
            raise SpaceError(
                f"expected {self.n_cells} cell levels, got shape {levels.shape}"
            )
        if levels.min(initial=0) < 0 or levels.max(initial=0) >= self.n_levels:
            raise SpaceError("cell level outside the value ladder")
        return levels

    def configuration(self, levels) -> "HabitatConfiguration":
        return HabitatConfiguration(self, self.validate_levels(np.asarray(levels)))

    def uniform_configuration(self, level: int) -> "HabitatConfiguration":
        return self.configuration(np.full(self.n_cells, level, dtype=np.int64))


class HabitatConfiguration:
    """One element of a configuration space: a per-cell vector of ladder
    indices. Equality is cell-wise exact."""

    __slots__ = ("space", "levels")

    def __init__(self, space: ConfigurationSpace, levels: np.ndarray):
        self.space = space
        levels = np.asarray(levels, dtype=np.int64)
        levels.flags.writeable = False
        self.levels = levels

    @property
    def cell_values(self) -> np.ndarray:
        """Per-cell growth values (floats from the ladder)."""
        return np.asarray(self.space.values)[self.levels]

    def with_level(self, cell: int, level: int) -> "HabitatConfiguration":
        levels = self.levels.copy()
        levels[cell] = level
        return HabitatConfiguration(self.space, levels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HabitatConfiguration)
            and self.space is other.space
            and np.array_equal(self.levels, other.levels)
        )

    def __hash__(self) -> int:
        return hash((id(self.space), self.levels.tobytes()))

    def __repr__(self) -> str:
        return f"HabitatConfiguration(levels={self.levels.tolist()})"


def neighbor_count(config: HabitatConfiguration) -> int:
    """Number of neighbours: one per admissible single-cell move."""
    space = config.space
    if space.n_levels < 2:
        return 0
    if space.n_levels == 2:
        return space.n_cells
    up = int(np.count_nonzero(config.levels < space.n_levels - 1))
    down = int(np.count_nonzero(config.levels > 0))
    return up + down


def is_neighbor(a: HabitatConfiguration, b: HabitatConfiguration) -> bool:
    """Whether two configurations differ in exactly one cell by one rung
    (binary ladders: by the full gap)."""
    if a.space is not b.space:
        return False
    diff = np.flatnonzero(a.levels != b.levels)
    if diff.size != 1:
        return False
    step = abs(int(a.levels[diff[0]]) - int(b.levels[diff[0]]))
    return step == 1 if a.space.n_levels > 2 else True

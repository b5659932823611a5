"""Domain geometry and uniform tensor-product grids.

The computational domain is an open interval (1D) or axis-aligned rectangle
(2D) with an absorbing boundary. Strictly inside it sits a closed *habitat
box* on which the growth rate is unknown and piecewise constant; the growth
rate takes a known baseline value outside the box. A small *observation
region* inside the habitat box supports the space-time density record, and an
optional *seed ball* marks where the initial density is required to be
bounded away from zero.

Everything is discretized on one uniform grid per experiment. Grids are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EmptyMaskError, GeometryError, GridMismatchError

# Nodes exactly on a closed region's boundary must be classified
# deterministically: membership tests use <= with this tolerance, scaled by
# the grid spacing.
MEMBERSHIP_RTOL = 1e-9


def _as_bounds(bounds: Iterable[Iterable[float]]) -> tuple[tuple[float, float], ...]:
    out = tuple((float(lo), float(hi)) for lo, hi in bounds)
    for lo, hi in out:
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise GeometryError(f"non-finite bounds ({lo}, {hi})")
        if hi <= lo:
            raise GeometryError(f"empty or negative extent ({lo}, {hi})")
    return out


@dataclass(frozen=True)
class RegionSpec:
    """A closed axis-aligned interval/box or a closed ball, in domain units.

    Args:
        kind: "interval" (1D box), "box", or "ball".
        bounds: per-axis (lo, hi) pairs for interval/box regions.
        center: ball center coordinates.
        radius: ball radius (>= 0).
    """

    kind: str
    bounds: tuple[tuple[float, float], ...] | None = None
    center: tuple[float, ...] | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.kind in ("interval", "box"):
            if self.bounds is None:
                raise GeometryError(f"{self.kind} region needs bounds")
            object.__setattr__(self, "bounds", _as_bounds(self.bounds))
            if self.kind == "interval" and len(self.bounds) != 1:
                raise GeometryError("interval region must be one-dimensional")
        elif self.kind == "ball":
            if self.center is None or self.radius is None:
                raise GeometryError("ball region needs center and radius")
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))
            object.__setattr__(self, "radius", float(self.radius))
            if self.radius < 0:
                raise GeometryError("ball radius must be >= 0")
        else:
            raise GeometryError(f"unknown region kind {self.kind!r}")

    @property
    def dimension(self) -> int:
        if self.kind == "ball":
            return len(self.center)
        return len(self.bounds)

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        if self.kind == "ball":
            return tuple((c - self.radius, c + self.radius) for c in self.center)
        return self.bounds

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Closed-region membership for an (N, d) array of points."""
        points = np.atleast_2d(points)
        if points.shape[1] != self.dimension:
            raise GeometryError("point dimension does not match region")
        if self.kind == "ball":
            d2 = np.sum((points - np.asarray(self.center)) ** 2, axis=1)
            return d2 <= (self.radius + tol) ** 2
        inside = np.ones(points.shape[0], dtype=bool)
        for axis, (lo, hi) in enumerate(self.bounds):
            inside &= (points[:, axis] >= lo - tol) & (points[:, axis] <= hi + tol)
        return inside


def _box_inside(
    inner: tuple[tuple[float, float], ...],
    outer: tuple[tuple[float, float], ...],
    strict: bool,
) -> bool:
    for (ilo, ihi), (olo, ohi) in zip(inner, outer):
        if strict:
            if not (ilo > olo and ihi < ohi):
                return False
        else:
            if not (ilo >= olo and ihi <= ohi):
                return False
    return True


@dataclass(frozen=True)
class DomainSpec:
    """The domain, its habitat box, observation region, and optional seed ball.

    Invariants enforced at construction:
      * the habitat box lies strictly inside the domain (positive margin on
        every side);
      * the observation region is nonempty and contained in the habitat box;
      * the seed ball, when given, is contained in the habitat box.

    Args:
        extent: per-axis (lo, hi) bounds of the domain.
        habitat_box: per-axis bounds of the closed box with unknown growth.
        obs_region: where the space-time density record is taken.
        seed_ball: optional ball on which the initial density must be
            positive; used only for validation warnings.
    """

    extent: tuple[tuple[float, float], ...]
    habitat_box: tuple[tuple[float, float], ...]
    obs_region: RegionSpec
    seed_ball: RegionSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "extent", _as_bounds(self.extent))
        object.__setattr__(self, "habitat_box", _as_bounds(self.habitat_box))
        if len(self.extent) not in (1, 2):
            raise GeometryError("only 1D and 2D domains are supported")
        if len(self.habitat_box) != self.dimension:
            raise GeometryError("habitat box dimension does not match domain")
        if not _box_inside(self.habitat_box, self.extent, strict=True):
            raise GeometryError(
                "habitat box must lie strictly inside the domain "
                f"(got {self.habitat_box} in {self.extent})"
            )
        if self.obs_region.dimension != self.dimension:
            raise GeometryError("observation region dimension does not match domain")
        if not _box_inside(self.obs_region.bounding_box(), self.habitat_box, strict=False):
            raise GeometryError("observation region must lie inside the habitat box")
        if self.seed_ball is not None:
            if self.seed_ball.kind != "ball":
                raise GeometryError("seed_ball must be a ball region")
            if not _box_inside(self.seed_ball.bounding_box(), self.habitat_box, strict=False):
                raise GeometryError("seed ball must lie inside the habitat box")

    @property
    def dimension(self) -> int:
        return len(self.extent)

    @property
    def habitat_margin(self) -> float:
        """Smallest gap between the habitat box and the domain boundary."""
        gaps = []
        for (ilo, ihi), (olo, ohi) in zip(self.habitat_box, self.extent):
            gaps.append(ilo - olo)
            gaps.append(ohi - ihi)
        return min(gaps)


class Grid:
    """Uniform tensor-product grid over a rectangular domain.

    Node coordinates along axis d are ``lo + i * spacing[d]`` for
    ``i = 0 .. nodes[d]-1``; classification into boundary/interior is by
    index, so nodes on the domain boundary are exactly the boundary nodes.
    Flattened node order is C order (last axis fastest).

    Quadrature weights implement the tensor-product trapezoid rule: full cell
    measure per node, halved per axis on domain-boundary nodes, so that
    integrating the constant 1 over the full grid gives the domain measure
    exactly.
    """

    def __init__(
        self,
        extent: Iterable[Iterable[float]],
        nodes_per_axis: Iterable[int],
        domain: DomainSpec | None = None,
    ):
        extent = _as_bounds(extent)
        nodes = tuple(int(n) for n in nodes_per_axis)
        if len(nodes) != len(extent):
            raise GeometryError("nodes_per_axis length does not match extent")
        if any(n < 3 for n in nodes):
            raise GeometryError(f"need at least 3 nodes per axis, got {nodes}")
        self.extent = extent
        self.shape = nodes
        self.domain = domain
        self.dimension = len(nodes)
        self.spacing = tuple(
            (hi - lo) / (n - 1) for (lo, hi), n in zip(extent, nodes)
        )
        self.axes = tuple(
            lo + np.arange(n) * h for (lo, _), n, h in zip(extent, nodes, self.spacing)
        )
        self.n_nodes = int(np.prod(nodes))
        self.cell_measure = float(np.prod(self.spacing))

        axis_weights = []
        for n, h in zip(nodes, self.spacing):
            w = np.full(n, h)
            w[0] = w[-1] = h / 2
            axis_weights.append(w)
        if self.dimension == 1:
            self.quad_weights = axis_weights[0].copy()
            boundary = np.zeros(nodes[0], dtype=bool)
            boundary[0] = boundary[-1] = True
        else:
            self.quad_weights = np.multiply.outer(axis_weights[0], axis_weights[1]).ravel()
            boundary2d = np.zeros(nodes, dtype=bool)
            boundary2d[0, :] = boundary2d[-1, :] = True
            boundary2d[:, 0] = boundary2d[:, -1] = True
            boundary = boundary2d.ravel()
        self.boundary_mask = boundary
        self.interior_mask = ~boundary
        self.n_interior = int(self.interior_mask.sum())

    @property
    def key(self) -> tuple:
        """Hashable identity used for factorization caches and file checks."""
        return (self.shape, self.extent)

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def points(self) -> np.ndarray:
        """All node coordinates as an (n_nodes, dimension) array."""
        if self.dimension == 1:
            return self.axes[0][:, None]
        gx, gy = np.meshgrid(self.axes[0], self.axes[1], indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    def interior_shape(self) -> tuple[int, ...]:
        return tuple(n - 2 for n in self.shape)

    def embed_interior(self, interior_values: np.ndarray) -> np.ndarray:
        """Scatter interior-node values into a full array with zero boundary."""
        full = np.zeros(self.n_nodes)
        full[self.interior_mask] = interior_values
        return full

    def descriptor(self) -> dict:
        """Plain-data grid identity for serialization."""
        return {
            "dimension": self.dimension,
            "nodes": list(self.shape),
            "extent": [list(b) for b in self.extent],
        }

    def check_same(self, other: "Grid", what: str = "object") -> None:
        if self.key != other.key:
            raise GridMismatchError(
                f"{what} was built on a different grid: "
                f"{other.shape} over {other.extent} vs {self.shape} over {self.extent}"
            )


def build_grid(domain: DomainSpec, nodes_per_axis: Iterable[int]) -> Grid:
    """Discretize a domain with a uniform grid.

    Args:
        domain: validated domain description.
        nodes_per_axis: node counts (>= 3 per axis), boundary nodes included.

    Returns:
        An immutable Grid whose boundary nodes are exactly those on the
        domain boundary.
    """
    return Grid(domain.extent, nodes_per_axis, domain=domain)


def region_mask(grid: Grid, region: RegionSpec) -> np.ndarray:
    """Boolean mask of grid nodes lying in a closed region.

    Membership uses closed comparisons with absolute tolerance
    ``MEMBERSHIP_RTOL * min(spacing)`` so nodes exactly on the region
    boundary are included deterministically.

    Raises:
        GeometryError: if the region sticks out of the domain.
        EmptyMaskError: if no node falls inside the region.
    """
    if region.dimension != grid.dimension:
        raise GeometryError("region dimension does not match grid")
    tol = MEMBERSHIP_RTOL * min(grid.spacing)
    if not _box_inside(
        region.bounding_box(),
        tuple((lo - tol, hi + tol) for lo, hi in grid.extent),
        strict=False,
    ):
        raise GeometryError(f"region {region} does not lie inside the domain")

    if region.kind in ("interval", "box"):
        axis_masks = [
            (ax >= lo - tol) & (ax <= hi + tol)
            for ax, (lo, hi) in zip(grid.axes, region.bounds)
        ]
        if grid.dimension == 1:
            mask = axis_masks[0].copy()
        else:
            mask = np.logical_and.outer(axis_masks[0], axis_masks[1]).ravel()
    else:
        mask = region.contains(grid.points(), tol=tol)

    if not mask.any():
        raise EmptyMaskError(
            f"region {region} contains no grid node; refine the grid "
            f"(current spacing {grid.spacing})"
        )
    return mask

"""Coherent-state wavefront estimation for quasimode families.

The probe at a phase-space point (x0, xi0) is the torus periodization of a
Gaussian wave packet of width sqrt(h).  Its Fourier coefficients are known
in closed form,

    c_alpha = exp(-2 pi i alpha . x0) (2 pi h)^(n/2)
              exp(-|xi0 - 2 pi h alpha|^2 / (2 h)),

so masses |<u, probe>|^2 are computed entirely in coefficient space; the
probe's norm is a separable theta sum.  Frequency-lattice images whose
Gaussian weight falls below 1e-18 of the peak are dropped.

A raw mass at a point carried by the symbol scales like (4 pi h)^(n/2), so
decay fits divide that factor out; a node whose normalized mass neither
grows nor decays is where the family lives, and superpolynomial decay is
the numerical stand-in for negligibility.  The verdict thresholds leave an
inconclusive band between the two regimes on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .quasimode import DecayFit, QuasimodeFamily, default_h_ladder, fit_decay_exponent
from .trigpoly import TrigPolynomial

__all__ = [
    "PhaseSpaceGrid",
    "MassMap",
    "VerdictThresholds",
    "WavefrontReport",
    "coherent_mass",
    "coherent_state",
    "wavefront_mass_map",
    "nonconcentration_report",
    "symbol_scale",
    "IMAGE_DROP",
]

#: Relative Gaussian weight below which frequency-lattice images are dropped.
IMAGE_DROP = 1e-18

_IN_EXPONENT = 0.5
_OUT_EXPONENT = 2.0
_FILL_FRACTION = 0.95
_MASS_BUDGET_SLACK = 1e-6


def symbol_scale(dim: int, h: float) -> float:
    """(4 pi h)^(dim/2), the mass carried by a unit symbol at one point."""
    return float((4.0 * math.pi * h) ** (dim / 2.0))


def _axis_image_range(xi_component: float, h: float) -> np.ndarray:
    """Integer frequencies along one axis whose Gaussian weight survives."""
    halfwidth = math.sqrt(-h * math.log(IMAGE_DROP))
    lo = math.ceil((xi_component - halfwidth) / (2.0 * math.pi * h))
    hi = math.floor((xi_component + halfwidth) / (2.0 * math.pi * h))
    if hi < lo:
        center = round(xi_component / (2.0 * math.pi * h))
        return np.array([center], dtype=float)
    return np.arange(lo, hi + 1, dtype=float)


def _weights(alphas: np.ndarray, xi0: Sequence[float], h: float) -> np.ndarray:
    """Gaussian coefficient weights (2 pi h)^(n/2) exp(-|xi0-2 pi h a|^2/2h)."""
    dim = alphas.shape[1]
    xi = np.asarray(xi0, dtype=float)
    gap = xi[None, :] - 2.0 * math.pi * h * alphas
    exponent = -np.sum(gap * gap, axis=1) / (2.0 * h)
    return (2.0 * math.pi * h) ** (dim / 2.0) * np.exp(exponent)


def _probe_norm_squared(xi0: Sequence[float], h: float, dim: int) -> float:
    """Squared norm of the periodized probe via separable theta sums."""
    total = (2.0 * math.pi * h) ** dim
    for component in (np.asarray(xi0, dtype=float) if dim else ()):
        images = _axis_image_range(float(component), h)
        gaps = float(component) - 2.0 * math.pi * h * images
        total *= float(np.sum(np.exp(-gaps * gaps / h)))
    return total


def coherent_state(
    dim: int, x0: Sequence[float], xi0: Sequence[float], h: float
) -> TrigPolynomial:
    """The normalized periodized Gaussian probe as a trig polynomial."""
    if h <= 0:
        raise ValueError("h must be positive")
    if dim == 0:
        return TrigPolynomial.constant(0, 1.0)
    axes = [_axis_image_range(float(c), h) for c in np.asarray(xi0, dtype=float)]
    mesh = np.meshgrid(*axes, indexing="ij")
    alphas = np.stack([m.reshape(-1) for m in mesh], axis=1)
    weights = _weights(alphas, xi0, h)
    phases = np.exp(-2j * np.pi * (alphas @ np.asarray(x0, dtype=float)))
    coeffs = weights * phases
    norm = math.sqrt(float(np.sum(weights * weights)))
    coeffs = coeffs / norm
    keep = np.abs(coeffs) > 0
    return TrigPolynomial(
        dim,
        {
            tuple(int(a) for a in alphas[i]): complex(coeffs[i])
            for i in np.nonzero(keep)[0]
        },
    )


def _mass_on_nodes(
    u: TrigPolynomial, nodes: np.ndarray, xi0: Sequence[float], h: float
) -> np.ndarray:
    """|<u, probe at each node>|^2, vectorized over the x grid."""
    if not u:
        return np.zeros(nodes.shape[0])
    if u.dim == 0:
        value = abs(u.coefficient(())) ** 2
        return np.full(nodes.shape[0], value)
    support = u.support()
    alphas = np.array(support, dtype=float)
    weights = _weights(alphas, xi0, h)
    coeffs = np.array([u.coefficient(a) for a in support])
    weighted = coeffs * weights
    # <u, probe> = sum_a u(a) w_a exp(+2 pi i a . x0), a trig polynomial in x0
    phase = np.exp(2j * np.pi * (nodes @ alphas.T))
    amplitude = np.sum(phase * weighted[None, :], axis=1)
    norm_sq = _probe_norm_squared(xi0, h, u.dim)
    return np.abs(amplitude) ** 2 / norm_sq


def coherent_mass(u: TrigPolynomial, x0, xi0, h: float) -> float:
    """Squared overlap of u with the normalized probe at (x0, xi0)."""
    if h <= 0:
        raise ValueError("h must be positive")
    if u.dim == 0:
        return float(abs(u.coefficient(())) ** 2)
    node = np.asarray(x0, dtype=float).reshape(1, -1)
    if node.shape[1] != u.dim:
        raise ValueError("base point has wrong dimension")
    return float(_mass_on_nodes(u, node, xi0, h)[0])


# ---------------------------------------------------------------------------
# Grids and mass maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Sampling layout: a uniform x grid, a finite covector set that must
    contain zero, and the h ladder the masses are fitted over."""

    dimension: int
    points_per_axis: int
    xi_points: tuple[tuple[float, ...], ...]
    h_ladder: tuple[float, ...]

    def __post_init__(self):
        dim = int(self.dimension)
        pts = int(self.points_per_axis)
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        if pts < 0:
            raise ValueError("points per axis must be nonnegative")
        xi = tuple(tuple(float(c) for c in covector) for covector in self.xi_points)
        if any(len(covector) != dim for covector in xi):
            raise ValueError("covector dimension mismatch")
        if (0.0,) * dim not in xi:
            raise ValueError("the zero covector must be sampled")
        ladder = tuple(float(h) for h in self.h_ladder)
        if len(ladder) < 4 or any(h <= 0 for h in ladder):
            raise ValueError("need a positive ladder with at least four points")
        object.__setattr__(self, "dimension", dim)
        object.__setattr__(self, "points_per_axis", pts)
        object.__setattr__(self, "xi_points", xi)
        object.__setattr__(self, "h_ladder", ladder)

    @staticmethod
    def standard(
        dimension: int,
        points_per_axis: int = 32,
        h_ladder: Optional[Sequence[float]] = None,
    ) -> "PhaseSpaceGrid":
        """Zero covector plus the signed unit covectors."""
        xi = [(0.0,) * dimension]
        for axis in range(dimension):
            for sign in (1.0, -1.0):
                covector = [0.0] * dimension
                covector[axis] = sign
                xi.append(tuple(covector))
        return PhaseSpaceGrid(
            dimension=dimension,
            points_per_axis=points_per_axis,
            xi_points=tuple(xi),
            h_ladder=tuple(h_ladder) if h_ladder is not None else default_h_ladder(),
        )

    @property
    def node_count(self) -> int:
        return self.points_per_axis**self.dimension

    @cached_property
    def x_nodes(self) -> np.ndarray:
        """All grid nodes, shape (node_count, dimension), C order."""
        if self.points_per_axis == 0:
            return np.zeros((0, self.dimension))
        axis = np.arange(self.points_per_axis, dtype=float) / self.points_per_axis
        mesh = np.meshgrid(*([axis] * self.dimension), indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    @property
    def zero_xi_index(self) -> int:
        return self.xi_points.index((0.0,) * self.dimension)


@dataclass(frozen=True)
class MassMap:
    """Raw coherent masses on the grid and per-node decay fits.

    ``masses[i, j, l]`` is the mass at covector i, node j, ladder point l.
    Fits are of the symbol-normalized mass (raw divided by the symbol
    scale), so a node where the family keeps order-one symbol mass fits an
    exponent near zero.
    """

    grid: PhaseSpaceGrid
    masses: np.ndarray
    exponents: np.ndarray
    residuals: np.ndarray

    def fit(self, xi_index: int, node_index: int) -> DecayFit:
        return DecayFit(
            float(self.exponents[xi_index, node_index]),
            float(self.residuals[xi_index, node_index]),
            tuple(float(x) for x in self.masses[xi_index, node_index, :]),
        )

    def csv_rows(self):
        """Deterministic row stream: x coords, xi coords, h, mass."""
        nodes = self.grid.x_nodes
        for xi_index, xi in enumerate(self.grid.xi_points):
            for node_index in range(nodes.shape[0]):
                for h_index, h in enumerate(self.grid.h_ladder):
                    yield (
                        *(float(c) for c in nodes[node_index]),
                        *(float(c) for c in xi),
                        float(h),
                        float(self.masses[xi_index, node_index, h_index]),
                    )


def wavefront_mass_map(family: QuasimodeFamily, grid: PhaseSpaceGrid) -> MassMap:
    """Evaluate coherent masses on the whole grid and fit per-node decay.

    Output is keyed by node and covector, never by evaluation order, and
    the per-covector mass budget is checked: the exact x-average of the
    mass (a Parseval sum over the family's coefficients) must not exceed
    the squared family norm times the symbol scale, and the grid average
    is held to the same budget whenever the grid resolves the support.
    """
    if family.dimension != grid.dimension:
        raise ValueError("family and grid dimensions differ")
    nodes = grid.x_nodes
    n_xi = len(grid.xi_points)
    n_h = len(grid.h_ladder)
    masses = np.zeros((n_xi, nodes.shape[0], n_h))
    for xi_index, xi in enumerate(grid.xi_points):
        for h_index, h in enumerate(grid.h_ladder):
            u = family.member(h)
            row = _mass_on_nodes(u, nodes, xi, h)
            masses[xi_index, :, h_index] = row
            budget = symbol_scale(grid.dimension, h) * (1.0 + _MASS_BUDGET_SLACK)
            support = u.support()
            if support:
                alphas = np.array(support, dtype=float)
                weights = _weights(alphas, xi, h)
                coeffs = np.array([abs(u.coefficient(a)) for a in support])
                exact_average = float(
                    np.sum((coeffs * weights) ** 2) / _probe_norm_squared(xi, h, u.dim)
                )
                if exact_average > budget:
                    raise ArithmeticError("mass budget exceeded; probe normalization is off")
            resolved = 2 * u.support_radius() < grid.points_per_axis
            if resolved and nodes.shape[0]:
                if float(np.mean(row)) > budget:
                    raise ArithmeticError("grid mass average exceeded the budget")
    exponents = np.zeros((n_xi, nodes.shape[0]))
    residuals = np.zeros((n_xi, nodes.shape[0]))
    scales = np.array([symbol_scale(grid.dimension, h) for h in grid.h_ladder])
    for xi_index in range(n_xi):
        for node_index in range(nodes.shape[0]):
            fit = fit_decay_exponent(
                grid.h_ladder, masses[xi_index, node_index, :] / scales
            )
            exponents[xi_index, node_index] = fit.exponent
            residuals[xi_index, node_index] = fit.residual
    for arr in (masses, exponents, residuals):
        arr.setflags(write=False)
    return MassMap(grid=grid, masses=masses, exponents=exponents, residuals=residuals)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

IN = 1
OUT = -1
INCONCLUSIVE = 0


@dataclass(frozen=True)
class VerdictThresholds:
    in_exponent: float = _IN_EXPONENT
    out_exponent: float = _OUT_EXPONENT
    fill_fraction: float = _FILL_FRACTION


@dataclass(frozen=True)
class WavefrontReport:
    """Node classifications and the three nonconcentration verdicts."""

    classifications: np.ndarray
    thresholds: VerdictThresholds
    fills_torus: bool
    fill_fraction_measured: float
    lagrangian_supported: bool
    nonempty_interior: bool
    subsequence_min_fill: float

    def to_json_obj(self) -> dict:
        return {
            "fills_torus": self.fills_torus,
            "fill_fraction_measured": self.fill_fraction_measured,
            "lagrangian_supported": self.lagrangian_supported,
            "nonempty_interior": self.nonempty_interior,
            "subsequence_min_fill": self.subsequence_min_fill,
            "thresholds": {
                "in_exponent": self.thresholds.in_exponent,
                "out_exponent": self.thresholds.out_exponent,
                "fill_fraction": self.thresholds.fill_fraction,
            },
        }


def _classify(exponents: np.ndarray, thresholds: VerdictThresholds) -> np.ndarray:
    out = np.full(exponents.shape, INCONCLUSIVE, dtype=np.int8)
    out[exponents < thresholds.in_exponent] = IN
    out[exponents > thresholds.out_exponent] = OUT
    return out


def _has_full_block(mask: np.ndarray) -> bool:
    """Whether a 2-per-axis contiguous block of True exists, wrapping
    around the torus."""
    if mask.size == 0:
        return False
    acc = mask.copy()
    for axis in range(mask.ndim):
        acc = acc & np.roll(acc, -1, axis=axis)
    return bool(acc.any())


def nonconcentration_report(
    mass_map: MassMap, thresholds: Optional[VerdictThresholds] = None
) -> WavefrontReport:
    """Classify every node and render the three verdicts.

    fills-torus: the IN fraction on the zero covector reaches the fill
    threshold.  lagrangian-supported: every node at every nonzero covector
    is OUT.  nonempty-interior: the IN set at the zero covector contains a
    full 2-per-axis block of grid nodes.
    """
    thresholds = thresholds or VerdictThresholds()
    grid = mass_map.grid
    classes = _classify(mass_map.exponents, thresholds)
    zero_index = grid.zero_xi_index
    zero_classes = classes[zero_index]
    node_count = zero_classes.shape[0]
    fill = float(np.mean(zero_classes == IN)) if node_count else 0.0
    fills_torus = node_count > 0 and fill >= thresholds.fill_fraction
    off_rows = [i for i in range(len(grid.xi_points)) if i != zero_index]
    lagrangian_supported = all(
        bool(np.all(classes[i] == OUT)) for i in off_rows
    ) and bool(off_rows)
    shape = (grid.points_per_axis,) * grid.dimension
    interior = (
        _has_full_block((zero_classes == IN).reshape(shape)) if node_count else False
    )

    # diagnostic: worst IN fraction over long contiguous ladder windows,
    # a proxy for stability along subsequences of h
    ladder = grid.h_ladder
    window = max(4, len(ladder) // 2)
    min_fill = fill
    scales = np.array([symbol_scale(grid.dimension, h) for h in ladder])
    if node_count:
        for start in range(0, len(ladder) - window + 1):
            stop = start + window
            sub_in = 0
            for node_index in range(node_count):
                fit = fit_decay_exponent(
                    ladder[start:stop],
                    mass_map.masses[zero_index, node_index, start:stop]
                    / scales[start:stop],
                )
                if fit.exponent < thresholds.in_exponent:
                    sub_in += 1
            min_fill = min(min_fill, sub_in / node_count)

    return WavefrontReport(
        classifications=classes,
        thresholds=thresholds,
        fills_torus=fills_torus,
        fill_fraction_measured=fill,
        lagrangian_supported=lagrangian_supported,
        nonempty_interior=interior,
        subsequence_min_fill=float(min_fill),
    )

"""Construction and verification of quasimode families.

The direction of the factory construction is inverse to the usual
analysis: instead of proving that a quasimode's transverse profile cannot
vanish on an open set, it picks a nonvanishing profile v on the transverse
torus, derives the zero-mode multiplier -(Q v)/v by grid division, and
returns an operator instance together with a family that solves the
eigenvalue problem through second order by construction.  Everything
downstream (mode decomposition, decay fits, Galerkin nullspaces, the
unique-continuation constant, the Maslov congruence) measures properties
that certified families must exhibit.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .exact import (
    ExactNumber,
    FrequencyVector,
    IrrationalBasis,
    UnimodularSplitting,
    parse_rational,
)
from .nondegeneracy import HessianForm
from .operator import (
    ModelOperatorSpec,
    OperatorOnTPrime,
    RemainderTerm,
    apply_model_operator,
    assemble_Q_alpha,
    transform_quadratic_form,
)
from .trigpoly import TrigPolynomial

__all__ = [
    "DecayFit",
    "fit_decay_exponent",
    "QuasimodeFamily",
    "default_h_ladder",
    "ModeDecomposition",
    "decompose_along_T",
    "build_factory_quasimode",
    "GalerkinNullspace",
    "galerkin_nullspace",
    "solve_on_range",
    "UniqueContinuation",
    "unique_continuation_constant",
    "OrderReport",
    "verify_quasimode_order",
    "ConcentrationReport",
    "check_mode_concentration",
    "maslov_admissible",
    "NULL_TOL",
    "FIT_TOL",
]

#: Retention threshold for near-zero Galerkin eigenvalues, applied after
#: scaling the matrix by an operator-norm estimate.
NULL_TOL = 1e-8
#: Slack allowed between a fitted decay exponent and its target order.
FIT_TOL = 0.1
#: Residual level below which a family counts as an exact kernel element.
EXACT_KERNEL_TOL = 1e-13
#: Coefficients below this magnitude are dropped when re-expanding the
#: factory multiplier.
REEXPANSION_TRUNC = 1e-14
#: The transverse profile must satisfy min |v| >= margin * max |v| on the
#: division grid.
NONVANISH_MARGIN = 1e-3

_NORMALIZATION_TOL = 1e-8


# ---------------------------------------------------------------------------
# Decay fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayFit:
    """Fitted slope of log(value) against log(h), with the worst absolute
    deviation of the fit; fits with residual above 0.5 are unreliable."""

    exponent: float
    residual: float
    values: tuple[float, ...]

    @property
    def reliable(self) -> bool:
        return self.residual <= 0.5


def fit_decay_exponent(h_ladder: Sequence[float], values: Sequence[float]) -> DecayFit:
    """Least-squares decay order of positive values over an h ladder.

    A ladder needs at least four points for a meaningful fit.  Exact zeros
    short-circuit to an infinite exponent, the faster-than-any-power flag.
    """
    hs = [float(h) for h in h_ladder]
    vals = [float(v) for v in values]
    if len(hs) != len(vals):
        raise ValueError("ladder and values have different lengths")
    if len(hs) < 4:
        raise ValueError("need at least four ladder points to fit")
    if any(h <= 0 for h in hs):
        raise ValueError("ladder values must be positive")
    if any(v < 0 for v in vals):
        raise ValueError("values must be nonnegative")
    if any(v == 0.0 for v in vals):
        return DecayFit(float("inf"), 0.0, tuple(vals))
    xs = [math.log(h) for h in hs]
    ys = [math.log(v) for v in vals]
    xbar = math.fsum(xs) / len(xs)
    ybar = math.fsum(ys) / len(ys)
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residual = max(abs(y - (intercept + slope * x)) for x, y in zip(xs, ys))
    return DecayFit(slope, residual, tuple(vals))


def default_h_ladder(start: int = 4, stop: int = 12) -> tuple[float, ...]:
    """h = 2^-j for j = start..stop, decreasing."""
    if stop < start:
        raise ValueError("ladder exponents must be increasing")
    return tuple(2.0**-j for j in range(start, stop + 1))


# ---------------------------------------------------------------------------
# Families and decomposition along the orbit closure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasimodeFamily:
    """An h-indexed family of unit-norm trig polynomials.

    ``normalization`` records the norms the members had before they were
    scaled to one; the members themselves are stored normalized and the
    constructor enforces this.
    """

    h_ladder: tuple[float, ...]
    members: tuple[TrigPolynomial, ...]
    normalization: tuple[float, ...]

    def __post_init__(self):
        ladder = tuple(float(h) for h in self.h_ladder)
        if not ladder or any(h <= 0 for h in ladder):
            raise ValueError("ladder must be positive")
        if any(nxt >= prev for prev, nxt in zip(ladder, ladder[1:])):
            raise ValueError("ladder must be strictly decreasing")
        if len(self.members) != len(ladder) or len(self.normalization) != len(ladder):
            raise ValueError("members and normalization must align with the ladder")
        for u in self.members:
            if abs(u.norm() - 1.0) > _NORMALIZATION_TOL:
                raise ValueError("family members must be normalized to unit norm")
        object.__setattr__(self, "h_ladder", ladder)
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "normalization", tuple(float(x) for x in self.normalization))

    @staticmethod
    def from_members(h_ladder, members) -> "QuasimodeFamily":
        """Normalize raw members and keep their original norms."""
        raw = list(members)
        norms = [u.norm() for u in raw]
        if any(n == 0 for n in norms):
            raise ValueError("cannot normalize a vanishing member")
        scaled = [u.scaled(1.0 / n) for u, n in zip(raw, norms)]
        return QuasimodeFamily(tuple(h_ladder), tuple(scaled), tuple(norms))

    @property
    def dimension(self) -> int:
        return self.members[0].dim

    def member(self, h: float) -> TrigPolynomial:
        for hh, u in zip(self.h_ladder, self.members):
            if hh == h:
                return u
        raise KeyError(f"h={h} is not on the ladder")

    def items(self):
        return zip(self.h_ladder, self.members)

    def save(self, directory, provenance: Optional[dict] = None):
        """Write one coefficient file per ladder point plus a manifest."""
        root = Path(directory)
        root.mkdir(parents=True, exist_ok=True)
        names = []
        for idx, u in enumerate(self.members):
            name = f"member_{idx:03d}.json"
            (root / name).write_text(
                json.dumps({"dim": u.dim, "coeffs": u.to_json_obj()}, sort_keys=True)
            )
            names.append(name)
        manifest = {
            "h_ladder": list(self.h_ladder),
            "normalization": list(self.normalization),
            "members": names,
            "provenance": provenance or {},
        }
        (root / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=1))

    @staticmethod
    def load(directory) -> "QuasimodeFamily":
        root = Path(directory)
        manifest = json.loads((root / "manifest.json").read_text())
        members = []
        for name in manifest["members"]:
            payload = json.loads((root / name).read_text())
            members.append(TrigPolynomial.from_json_obj(payload["coeffs"], dim=payload["dim"]))
        return QuasimodeFamily(
            tuple(manifest["h_ladder"]),
            tuple(members),
            tuple(manifest["normalization"]),
        )


@dataclass(frozen=True)
class ModeDecomposition:
    """Coefficients of a torus function regrouped by mode along the orbit
    closure; reassembly is an exact integer relabeling."""

    modes: Mapping[tuple[int, ...], TrigPolynomial]
    split: UnimodularSplitting

    def reassemble(self) -> TrigPolynomial:
        n = self.split.dimension
        out: dict[tuple[int, ...], complex] = {}
        for along, profile in self.modes.items():
            for across, value in profile.items():
                out[self.split.to_torus_frequency(along, across)] = value
        return TrigPolynomial(n, out)

    def norms(self) -> dict[tuple[int, ...], float]:
        return {alpha: profile.norm() for alpha, profile in self.modes.items()}


def decompose_along_T(u: TrigPolynomial, split: UnimodularSplitting) -> ModeDecomposition:
    """Regroup coefficients by their mode along the orbit closure.

    Each torus frequency xi is relabeled to (along, across) = M^T xi; the
    relabeling is a bijection on the integer lattice, so no coefficient
    arithmetic happens and the l2 mass is preserved exactly.
    """
    if u.dim != split.dimension:
        raise ValueError("function lives on the wrong torus")
    q = split.dimension - split.orbit_dimension
    grouped: dict[tuple[int, ...], dict[tuple[int, ...], complex]] = {}
    for xi, value in u.items():
        along, across = split.to_split_frequency(xi)
        grouped.setdefault(along, {})[across] = value
    modes = {alpha: TrigPolynomial(q, coeffs) for alpha, coeffs in sorted(grouped.items())}
    return ModeDecomposition(modes=modes, split=split)


# ---------------------------------------------------------------------------
# Factory construction
# ---------------------------------------------------------------------------


def _real_grid_values(poly: TrigPolynomial, grid_points: int, what: str) -> np.ndarray:
    values = poly.to_grid(grid_points) if poly.dim else np.array(poly.coefficient(()))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0:
        raise ValueError(f"{what} vanishes identically")
    if float(np.max(np.abs(values.imag))) > 1e-12 * scale:
        raise ValueError(f"{what} must be real-valued")
    return values.real


def build_factory_quasimode(
    omega: FrequencyVector,
    hessian: HessianForm,
    basis: IrrationalBasis,
    split: UnimodularSplitting,
    alpha0: Sequence[int],
    v: TrigPolynomial,
    h_ladder: Sequence[float],
    remainder: Optional[RemainderTerm] = None,
) -> tuple[ModelOperatorSpec, QuasimodeFamily]:
    """Build an operator instance whose transverse kernel contains v, and
    the single-mode family it certifies.

    The subprincipal constant is back-solved so the chosen mode is the
    resonant one, and the multiplier is -(Q v)/v re-expanded from grid
    values with coefficients below 1e-14 dropped; the family is then an
    eigenfamily through second order, up to exactly that truncation.  The
    profile must be real and bounded away from zero (min at least 1e-3 of
    max on the division grid); profiles that would force a non-real
    multiplier are rejected.
    """
    n = omega.dimension
    k = split.orbit_dimension
    q = n - k
    alpha0 = tuple(int(a) for a in alpha0)
    if len(alpha0) != k:
        raise ValueError("resonant mode has wrong length")
    if v.dim != q:
        raise ValueError("transverse profile lives on the wrong torus")
    if not v:
        raise ValueError("transverse profile vanishes identically")

    form = transform_quadratic_form(hessian, split)
    bare = assemble_Q_alpha(form, alpha0, TrigPolynomial.zero(q))
    numerator = bare.apply(v)

    # subprincipal constant: exactly minus the reduced frequency pairing
    c = ExactNumber.rational(0, basis.dim)
    for a, w in zip(alpha0, split.omega_tilde):
        if a:
            c = c + w.scaled(a)
    c = -c

    if q == 0:
        value = v.coefficient(())
        if value == 0:
            raise ValueError("transverse profile vanishes identically")
        r0 = TrigPolynomial(0, {(): -bare.rho})
        residual_norm = 0.0
    else:
        grid_points = max(64, 4 * (numerator.support_radius() + v.support_radius() + 1))
        grid_points = 1 << (grid_points - 1).bit_length()
        cap = 4096 if q == 1 else 512
        while True:
            v_vals = _real_grid_values(v, grid_points, "transverse profile")
            vmax = float(np.max(np.abs(v_vals)))
            vmin = float(np.min(np.abs(v_vals)))
            if vmin < NONVANISH_MARGIN * vmax:
                raise ValueError(
                    "transverse profile is vanishing or nearly vanishing on the grid"
                )
            num_vals = (
                numerator.to_grid(grid_points)
                if numerator
                else np.zeros((grid_points,) * q, dtype=complex)
            )
            ratio = -num_vals / v_vals
            ratio_scale = float(np.max(np.abs(ratio))) if ratio.size else 0.0
            if ratio_scale > 0 and float(np.max(np.abs(ratio.imag))) > 1e-10 * ratio_scale:
                raise ValueError(
                    "derived multiplier is not real-valued; pick a mode without "
                    "transverse drift or a profile constant along it"
                )
            r0 = TrigPolynomial.from_grid(ratio.real, tol=REEXPANSION_TRUNC)
            residual_norm = (numerator + r0.convolve(v)).norm()
            if residual_norm <= 1e-11 * max(1.0, numerator.norm()) or grid_points >= cap:
                break
            grid_points *= 2
        if residual_norm > 1e-9 * max(1.0, numerator.norm()):
            raise ArithmeticError(
                "re-expansion of the derived multiplier did not converge; "
                "the profile is too close to a zero"
            )

    # lift the transverse multiplier to the torus, constant along the orbit
    lift_rows = [
        [split.inverse[j][i] for j in range(k, n)] for i in range(n)
    ]
    r_x = r0.map_frequencies(lift_rows) if q else TrigPolynomial.constant(n, r0.coefficient(()))

    spec = ModelOperatorSpec(
        omega=omega, hessian=hessian, c=c, r=r_x, basis=basis, remainder=remainder
    )

    coeffs = {
        split.to_torus_frequency(alpha0, beta): value for beta, value in v.items()
    }
    member = TrigPolynomial(n, coeffs)
    ladder = tuple(float(h) for h in h_ladder)
    family = QuasimodeFamily.from_members(ladder, [member] * len(ladder))
    return spec, family


# ---------------------------------------------------------------------------
# Galerkin nullspace of the resonant transverse operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalerkinNullspace:
    """Near-kernel of the transverse operator on a truncated character
    basis, with the data needed to invert on the complement."""

    truncation: int
    basis: tuple[TrigPolynomial, ...]
    eigenvalues: tuple[float, ...]
    spectrum: tuple[float, ...]
    scale: float
    null_tol: float
    frequencies: tuple[tuple[int, ...], ...] = field(repr=False)
    _eigvals: np.ndarray = field(repr=False)
    _eigvecs: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def apply_truncated(self, w: TrigPolynomial) -> TrigPolynomial:
        """Action of the truncated operator (project, apply, project)."""
        index = {beta: i for i, beta in enumerate(self.frequencies)}
        vec = np.zeros(len(self.frequencies), dtype=complex)
        for beta, value in w.items():
            i = index.get(beta)
            if i is not None:
                vec[i] = value
        out = self._eigvecs @ (self._eigvals * (self._eigvecs.conj().T @ vec))
        q = w.dim
        return TrigPolynomial(q, {beta: out[i] for i, beta in enumerate(self.frequencies)})


def _enumerate_betas(q: int, N: int) -> list[tuple[int, ...]]:
    if q == 0:
        return [()]
    rng = range(-N, N + 1)
    out = [()]
    for _ in range(q):
        out = [prefix + (b,) for prefix in out for b in rng]
    return sorted(out)


def galerkin_nullspace(
    op: OperatorOnTPrime, N: int, null_tol: float = NULL_TOL
) -> GalerkinNullspace:
    """Diagonalize the truncated transverse operator and keep the
    near-zero part of the spectrum.

    The matrix on characters with frequencies of max-norm at most N is
    Hermitian because the multiplier is real-valued; eigenvalues are
    compared to null_tol after scaling by a Gershgorin estimate of the
    operator norm.  The truncation must leave two rows of headroom around
    the essential support of the multiplier (coefficients above 1e-3 of
    its peak), and the quadratic block must be positive definite.
    """
    q = op.dimension
    N = int(N)
    if q > 0 and N < 4:
        raise ValueError("truncation must be at least 4")
    if q > 0:
        smallest = float(np.linalg.eigvalsh(op.Omega_block)[0])
        if smallest <= 0:
            raise ValueError("quadratic block is not positive definite")
    r0 = op.zero_mode_multiplier
    if not r0.is_real_valued(1e-12):
        raise ValueError("multiplier must be real-valued for a Hermitian problem")
    if q > 0 and r0:
        peak = max(abs(value) for _, value in r0.items())
        essential = r0.prune(1e-3 * peak).support_radius()
        if N < essential + 2:
            raise ValueError(
                f"truncation {N} too small for multiplier support {essential}"
            )
    betas = _enumerate_betas(q, N)
    size = len(betas)
    matrix = np.zeros((size, size), dtype=complex)
    for i, beta in enumerate(betas):
        matrix[i, i] = op.symbol(beta)
    if r0:
        index = {beta: i for i, beta in enumerate(betas)}
        for i, beta_i in enumerate(betas):
            for delta, value in r0.items():
                target = tuple(b + d for b, d in zip(beta_i, delta))
                j = index.get(target)
                if j is not None:
                    matrix[j, i] += value
    matrix = 0.5 * (matrix + matrix.conj().T)
    eigvals, eigvecs = np.linalg.eigh(matrix)
    diag_peak = float(np.max(np.abs(np.real(np.diagonal(matrix))))) if size else 0.0
    multiplier_mass = math.fsum(abs(value) for _, value in r0.items())
    scale = max(1.0, diag_peak + multiplier_mass)
    # eigh noise on tiny eigenvalues grows with the matrix norm; a Rayleigh
    # quotient with the computed eigenvector is quadratically more accurate
    for i in range(size):
        if abs(eigvals[i]) < 1e3 * null_tol * scale:
            column = eigvecs[:, i]
            eigvals[i] = float(np.real(np.vdot(column, matrix @ column)))
    retained = [i for i in range(size) if abs(eigvals[i]) < null_tol * scale]
    basis = []
    for i in retained:
        column = eigvecs[:, i].copy()
        anchor = int(np.argmax(np.abs(column)))
        phase = column[anchor]
        if abs(phase) > 0:
            column = column * (abs(phase) / phase)
        basis.append(
            TrigPolynomial(q, {beta: column[j] for j, beta in enumerate(betas)})
        )
    return GalerkinNullspace(
        truncation=N,
        basis=tuple(basis),
        eigenvalues=tuple(float(eigvals[i]) for i in retained),
        spectrum=tuple(float(x) for x in eigvals),
        scale=scale,
        null_tol=float(null_tol),
        frequencies=tuple(betas),
        _eigvals=eigvals,
        _eigvecs=eigvecs,
    )


def solve_on_range(
    op: OperatorOnTPrime, null: GalerkinNullspace, g: TrigPolynomial
) -> TrigPolynomial:
    """Minimal-norm solution of L w = (projection of g onto the range).

    The pseudoinverse acts on the part of the spectrum not retained as
    nullspace; a warning is emitted when the smallest inverted eigenvalue
    sits within three orders of magnitude of the nullspace threshold.
    """
    q = op.dimension
    if g.dim != q:
        raise ValueError("right-hand side lives on the wrong torus")
    index = {beta: i for i, beta in enumerate(null.frequencies)}
    rhs = np.zeros(len(null.frequencies), dtype=complex)
    for beta, value in g.items():
        i = index.get(beta)
        if i is None:
            raise ValueError("right-hand side is not supported within the truncation")
        rhs[i] = value
    eigvals = null._eigvals
    eigvecs = null._eigvecs
    keep = np.abs(eigvals) >= null.null_tol * null.scale
    if np.any(keep):
        smallest_kept = float(np.min(np.abs(eigvals[keep])))
        if smallest_kept < 1e3 * null.null_tol * null.scale:
            warnings.warn(
                "pseudoinverse is ill-conditioned near the nullspace threshold",
                RuntimeWarning,
                stacklevel=2,
            )
    components = eigvecs.conj().T @ rhs
    inverted = np.where(keep, components / np.where(keep, eigvals, 1.0), 0.0)
    w = eigvecs @ inverted
    return TrigPolynomial(
        q, {beta: w[i] for i, beta in enumerate(null.frequencies)}
    )


# ---------------------------------------------------------------------------
# Unique continuation constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniqueContinuation:
    """Mass lower bound over a subdomain for unit nullspace elements, with
    the combination achieving it."""

    constant: float
    minimizer: TrigPolynomial
    gram: np.ndarray


def _interval_integral(delta: int, lo: float, hi: float) -> complex:
    if delta == 0:
        return complex(hi - lo)
    factor = 2j * math.pi * delta
    return (np.exp(factor * hi) - np.exp(factor * lo)) / factor


def unique_continuation_constant(
    null: GalerkinNullspace, subdomain: Sequence[tuple[float, float]]
) -> UniqueContinuation:
    """Smallest subdomain mass among unit-norm combinations of the
    nullspace basis.

    The Gram matrix of the basis over an axis-aligned box is integrated
    in closed form per frequency, which is exact for trig polynomials of
    any degree; the constant is its smallest eigenvalue.
    """
    if not null.basis:
        raise ValueError("nullspace is empty")
    q = null.basis[0].dim
    box = [(float(lo), float(hi)) for lo, hi in subdomain]
    if len(box) != q:
        raise ValueError("subdomain dimension does not match the torus")
    for lo, hi in box:
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError("subdomain must be an axis-aligned box inside [0,1]^q")
    if q and math.prod(hi - lo for lo, hi in box) <= 0.0:
        raise ValueError("subdomain must have positive volume")
    dim = len(null.basis)
    gram = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            product = null.basis[i].convolve(null.basis[j].conjugate())
            total = 0j
            for delta, value in product.items():
                weight = 1.0 + 0j
                for d, (lo, hi) in zip(delta, box):
                    weight *= _interval_integral(d, lo, hi)
                total += value * weight
            gram[i, j] = total
    gram = 0.5 * (gram + gram.conj().T)
    eigvals, eigvecs = np.linalg.eigh(gram)
    constant = float(eigvals[0])
    combo = eigvecs[:, 0]
    minimizer = TrigPolynomial.zero(q)
    for coefficient, basis_fn in zip(combo, null.basis):
        minimizer = minimizer + basis_fn.scaled(coefficient)
    gram.setflags(write=False)
    return UniqueContinuation(constant=constant, minimizer=minimizer, gram=gram)


# ---------------------------------------------------------------------------
# Order and concentration verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderReport:
    """Residual norms of P u over the ladder and the verdict."""

    residual_norms: tuple[float, ...]
    fit: DecayFit
    delta: float
    threshold: float
    exact_kernel: bool
    passed: bool


def verify_quasimode_order(
    family: QuasimodeFamily, spec: ModelOperatorSpec, delta: float
) -> OrderReport:
    """Check that residuals decay at order at least 2 + delta.

    Families whose residuals are below the exact-kernel level at every
    ladder point pass outright; otherwise the fitted exponent must reach
    the target within the standard fit slack.
    """
    norms = tuple(
        apply_model_operator(spec, u, h).norm() for h, u in family.items()
    )
    fit = fit_decay_exponent(family.h_ladder, norms)
    exact = all(x < EXACT_KERNEL_TOL for x in norms)
    threshold = 2.0 + float(delta) - FIT_TOL
    passed = exact or fit.exponent >= threshold
    return OrderReport(
        residual_norms=norms,
        fit=fit,
        delta=float(delta),
        threshold=threshold,
        exact_kernel=exact,
        passed=passed,
    )


@dataclass(frozen=True)
class ConcentrationReport:
    """Per-mode decay of off-resonant mass and the resonant-mode floor."""

    mode_fits: Mapping[tuple[int, ...], DecayFit]
    alpha0: tuple[int, ...]
    alpha0_norms: tuple[float, ...]
    alpha0_floor_ok: bool
    epsilon: float
    threshold: float
    passed: bool


def check_mode_concentration(
    family: QuasimodeFamily,
    split: UnimodularSplitting,
    alpha0: Sequence[int],
    epsilon: float,
) -> ConcentrationReport:
    """Verify that every mode other than the resonant one decays at order
    at least 1 - epsilon, and that the resonant mode keeps at least half
    of the mass for small h."""
    alpha0 = tuple(int(a) for a in alpha0)
    per_h = [decompose_along_T(u, split) for u in family.members]
    seen: set[tuple[int, ...]] = set()
    for decomposition in per_h:
        seen.update(decomposition.modes.keys())
    fits: dict[tuple[int, ...], DecayFit] = {}
    for alpha in sorted(seen - {alpha0}):
        norms = [
            dec.modes[alpha].norm() if alpha in dec.modes else 0.0 for dec in per_h
        ]
        fits[alpha] = fit_decay_exponent(family.h_ladder, norms)
    alpha0_norms = tuple(
        dec.modes[alpha0].norm() if alpha0 in dec.modes else 0.0 for dec in per_h
    )
    threshold = 1.0 - float(epsilon) - FIT_TOL
    passed = all(f.exponent >= threshold for f in fits.values())
    floor_ok = alpha0_norms[-1] >= 0.5
    return ConcentrationReport(
        mode_fits=fits,
        alpha0=alpha0,
        alpha0_norms=alpha0_norms,
        alpha0_floor_ok=floor_ok,
        epsilon=float(epsilon),
        threshold=threshold,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# Maslov congruence
# ---------------------------------------------------------------------------


def maslov_admissible(liouville, maslov: Sequence[int], h) -> bool:
    """Exact congruence test for a global single-mode profile.

    ``liouville`` holds the action class per cycle as an exact rational
    multiple of 2 pi, ``maslov`` the integer index class, and ``h`` an
    exact rational.  Admissible means that for every cycle the action
    divided by 2 pi h, minus a quarter of the index, is an integer.
    """
    h = parse_rational(h)
    if h <= 0:
        raise ValueError("h must be positive")
    classes = [parse_rational(x) for x in liouville]
    indices = [int(a) for a in maslov]
    if len(classes) != len(indices):
        raise ValueError("class vectors have different lengths")
    return all(
        (l / h - Fraction(a, 4)).denominator == 1 for l, a in zip(classes, indices)
    )

"""Config-driven pipeline from frequency data to verdict reports.

Reads a strict JSON config, runs the requested stages (hypothesis checks,
torus splitting, factory construction, quasimode verification, wavefront
verdicts), and writes report.json, decay.csv, massmap.csv and an echo of
the materialized config.  All artifacts are byte-deterministic for a fixed
config and seed: keys are sorted, floats are printed at 17 significant
digits, and BLAS threading is pinned before numpy loads so reduction
orders cannot drift with the ambient thread count.

Exit codes: 0 when all requested checks pass, 2 when a check fails, 1 on
usage errors.
"""

from __future__ import annotations

import os

for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
    os.environ[_var] = "1"

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .exact import (
    ExactNumber,
    FrequencyVector,
    IrrationalBasis,
    InvariantViolation,
    find_resonant_mode,
    relation_lattice,
    split_frequencies,
)
from .nondegeneracy import HessianForm, bordered_determinant, is_quasiconvex
from .operator import ModelOperatorSpec, RemainderTerm, assemble_Q_alpha, transform_quadratic_form
from .quasimode import (
    NULL_TOL,
    build_factory_quasimode,
    check_mode_concentration,
    decompose_along_T,
    default_h_ladder,
    galerkin_nullspace,
    unique_continuation_constant,
    verify_quasimode_order,
)
from .trigpoly import TrigPolynomial
from .wavefront import (
    PhaseSpaceGrid,
    VerdictThresholds,
    nonconcentration_report,
    wavefront_mass_map,
)

__all__ = ["ConfigError", "LabConfig", "parse_config", "run_pipeline", "write_report", "main"]

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2

_STAGES = ("hypotheses", "split", "build", "verify", "wavefront")
_COMMAND_STAGES = {
    "check-hypotheses": ("hypotheses",),
    "split": ("split",),
    "build-quasimode": ("split", "build"),
    "verify": ("split", "build", "verify"),
    "wavefront": ("split", "build", "wavefront"),
    "all": _STAGES,
}


class ConfigError(ValueError):
    """Config rejection carrying precise (path, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{path}: {message}" for path, message in self.errors))


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def canonical_json(obj, indent: int = 0) -> str:
    """JSON text with sorted keys and floats at 17 significant digits."""
    pad = " " * indent
    inner = " " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(inner + canonical_json(x, indent + 1) for x in obj)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError("report keys must be strings")
            parts.append(inner + json.dumps(key) + ": " + canonical_json(obj[key], indent + 1))
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_report(results: dict, path: Path) -> None:
    """Serialize a results mapping deterministically; same input, same
    bytes."""
    path.write_text(canonical_json(results) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            cells.append(_format_float(float(cell)) if isinstance(cell, float) else str(cell))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Config schema
# ---------------------------------------------------------------------------

_DEFAULTS = {
    "basis": {"names": ["1"], "values": [1.0]},
    "c": "resonant",
    "factory": None,
    "r": None,
    "remainder": False,
    "h_ladder": "4..12",
    "truncation": 16,
    "delta": 1.0,
    "epsilon": 0.05,
    "subdomain": [0.0, 0.25],
    "grid": {"points_per_axis": 32, "xi": "units"},
    "thresholds": {
        "in_exponent": 0.5,
        "out_exponent": 2.0,
        "fill_fraction": 0.95,
        "null_tol": NULL_TOL,
    },
    "seed": 0,
    "out": "results",
}

_TOP_KEYS = {"dimension", "omega", "hessian"} | set(_DEFAULTS)


@dataclass(frozen=True)
class LabConfig:
    """Validated pipeline inputs plus the materialized raw config."""

    dimension: int
    basis: IrrationalBasis
    omega: FrequencyVector
    hessian: HessianForm
    c_spec: object  # "resonant" or ExactNumber
    factory_alpha0: Optional[tuple[int, ...]]
    factory_v: Optional[TrigPolynomial]
    r: Optional[TrigPolynomial]
    remainder: bool
    h_ladder: tuple[float, ...]
    truncation: int
    delta: float
    epsilon: float
    subdomain: tuple[float, float]
    grid_points: int
    grid_xi: object  # "units" or tuple of covectors
    thresholds: VerdictThresholds
    null_tol: float
    seed: int
    out: str
    echo: dict


def parse_ladder(value) -> tuple[float, ...]:
    if isinstance(value, str):
        match = re.fullmatch(r"\s*(\d+)\.\.(\d+)\s*", value)
        if not match:
            raise ValueError("ladder must look like '4..12' or be a list of floats")
        return default_h_ladder(int(match.group(1)), int(match.group(2)))
    ladder = tuple(float(x) for x in value)
    if len(ladder) < 4:
        raise ValueError("ladder needs at least four points")
    if any(h <= 0 for h in ladder) or any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be positive and strictly decreasing")
    return ladder


def parse_config(text: str) -> LabConfig:
    """Validate a JSON config; unknown keys are rejected, defaults are
    materialized into the echoed copy."""
    errors: list[tuple[str, str]] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("<document>", f"not valid JSON: {exc}")])
    if not isinstance(raw, dict):
        raise ConfigError([("<document>", "top level must be an object")])

    for key in sorted(set(raw) - _TOP_KEYS):
        errors.append((key, "unknown key"))

    merged = dict(_DEFAULTS)
    merged.update({k: v for k, v in raw.items() if k in _TOP_KEYS})

    dimension = merged.get("dimension")
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
        errors.append(("dimension", "must be a positive integer"))
        raise ConfigError(errors)

    # basis
    basis = None
    basis_raw = merged["basis"]
    if not isinstance(basis_raw, dict) or set(basis_raw) != {"names", "values"}:
        errors.append(("basis", "must be an object with keys 'names' and 'values'"))
    else:
        try:
            basis = IrrationalBasis(tuple(basis_raw["names"]), tuple(basis_raw["values"]))
        except (TypeError, ValueError) as exc:
            errors.append(("basis", str(exc)))
    if basis is None:
        raise ConfigError(errors)

    # omega
    omega = None
    omega_raw = merged.get("omega")
    if not isinstance(omega_raw, list) or len(omega_raw) != dimension:
        errors.append(("omega", f"must be a list of {dimension} coordinate rows"))
    else:
        try:
            rows = []
            for row in omega_raw:
                row = row if isinstance(row, list) else [row]
                if len(row) > basis.dim:
                    raise ValueError("more coordinates than basis elements")
                rows.append(row)
            omega = FrequencyVector.from_rows(rows, basis_dim=basis.dim)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            errors.append(("omega", str(exc)))

    # hessian
    hessian = None
    hessian_raw = merged.get("hessian")
    try:
        matrix = np.array(hessian_raw, dtype=float)
        if matrix.shape != (dimension, dimension):
            raise ValueError(f"must be a {dimension}x{dimension} matrix")
        hessian = HessianForm(matrix)
    except (TypeError, ValueError) as exc:
        errors.append(("hessian", str(exc)))

    # c
    c_spec = merged["c"]
    if c_spec != "resonant":
        try:
            row = c_spec if isinstance(c_spec, list) else [c_spec]
            coeffs = [x for x in row] + [0] * (basis.dim - len(row))
            c_spec = basis.number([_to_fraction(x) for x in coeffs])
        except (TypeError, ValueError) as exc:
            errors.append(("c", str(exc)))

    # factory / r
    factory_alpha0 = None
    factory_v = None
    factory_raw = merged["factory"]
    if factory_raw is not None:
        if not isinstance(factory_raw, dict) or set(factory_raw) - {"alpha0", "v"}:
            errors.append(("factory", "must be an object with keys 'alpha0' and 'v'"))
        else:
            try:
                factory_alpha0 = tuple(int(a) for a in factory_raw["alpha0"])
                factory_v = TrigPolynomial.from_json_obj(
                    factory_raw["v"], dim=len(factory_raw["v"][0]["alpha"]) if factory_raw["v"] else 0
                )
            except (KeyError, TypeError, ValueError, IndexError) as exc:
                errors.append(("factory", str(exc)))
    r_poly = None
    r_raw = merged["r"]
    if r_raw is not None:
        try:
            r_poly = TrigPolynomial.from_json_obj(r_raw, dim=dimension)
            if not r_poly.is_real_valued(1e-12):
                errors.append(("r", "multiplier must be real-valued"))
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(("r", str(exc)))
    if factory_raw is not None and r_raw is not None:
        errors.append(("factory", "factory block and explicit r are mutually exclusive"))

    if not isinstance(merged["remainder"], bool):
        errors.append(("remainder", "must be a boolean"))

    try:
        ladder = parse_ladder(merged["h_ladder"])
    except (TypeError, ValueError) as exc:
        errors.append(("h_ladder", str(exc)))
        ladder = default_h_ladder()

    truncation = merged["truncation"]
    if not isinstance(truncation, int) or isinstance(truncation, bool) or truncation < 4:
        errors.append(("truncation", "must be an integer of at least 4"))
        truncation = 16

    delta = merged["delta"]
    epsilon = merged["epsilon"]
    for name, value in (("delta", delta), ("epsilon", epsilon)):
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            errors.append((name, "must be a positive number"))
    subdomain_raw = merged["subdomain"]
    subdomain = (0.0, 0.25)
    if (
        not isinstance(subdomain_raw, list)
        or len(subdomain_raw) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in subdomain_raw)
        or not (0.0 <= float(subdomain_raw[0]) < float(subdomain_raw[1]) <= 1.0)
    ):
        errors.append(("subdomain", "must be [lo, hi] with 0 <= lo < hi <= 1"))
    else:
        subdomain = (float(subdomain_raw[0]), float(subdomain_raw[1]))

    grid_raw = merged["grid"]
    grid_points = 32
    grid_xi = "units"
    if not isinstance(grid_raw, dict) or set(grid_raw) - {"points_per_axis", "xi"}:
        errors.append(("grid", "must be an object with keys 'points_per_axis' and 'xi'"))
    else:
        grid_points = grid_raw.get("points_per_axis", 32)
        if not isinstance(grid_points, int) or isinstance(grid_points, bool) or grid_points < 0:
            errors.append(("grid.points_per_axis", "must be a nonnegative integer"))
            grid_points = 32
        grid_xi = grid_raw.get("xi", "units")
        if grid_xi != "units":
            try:
                grid_xi = tuple(tuple(float(c) for c in covector) for covector in grid_xi)
                if any(len(covector) != dimension for covector in grid_xi):
                    raise ValueError("covector dimension mismatch")
                if (0.0,) * dimension not in grid_xi:
                    raise ValueError("the zero covector must be included")
            except (TypeError, ValueError) as exc:
                errors.append(("grid.xi", str(exc)))
                grid_xi = "units"

    thresholds_raw = merged["thresholds"]
    thresholds = VerdictThresholds()
    null_tol = NULL_TOL
    allowed = {"in_exponent", "out_exponent", "fill_fraction", "null_tol"}
    if not isinstance(thresholds_raw, dict) or set(thresholds_raw) - allowed:
        errors.append(("thresholds", f"must be an object with keys among {sorted(allowed)}"))
    else:
        filled = dict(_DEFAULTS["thresholds"])
        filled.update(thresholds_raw)
        merged["thresholds"] = filled
        try:
            thresholds = VerdictThresholds(
                in_exponent=float(filled["in_exponent"]),
                out_exponent=float(filled["out_exponent"]),
                fill_fraction=float(filled["fill_fraction"]),
            )
            null_tol = float(filled["null_tol"])
        except (TypeError, ValueError) as exc:
            errors.append(("thresholds", str(exc)))

    seed = merged["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        errors.append(("seed", "must be an integer"))
        seed = 0
    out = merged["out"]
    if not isinstance(out, str) or not out:
        errors.append(("out", "must be a nonempty string"))
        out = "results"

    if errors:
        raise ConfigError(errors)

    grid_block = {"points_per_axis": grid_points, "xi": "units" if grid_xi == "units" else [list(c) for c in grid_xi]}
    echo = {
        "dimension": dimension,
        "basis": {"names": list(basis.names), "values": list(basis.values)},
        "omega": [[str(c) for c in entry.coeffs] for entry in omega.entries],
        "hessian": [[float(x) for x in row] for row in hessian.entries],
        "c": "resonant" if c_spec == "resonant" else [str(c) for c in c_spec.coeffs],
        "factory": None
        if factory_v is None
        else {"alpha0": list(factory_alpha0), "v": factory_v.to_json_obj()},
        "r": None if r_poly is None else r_poly.to_json_obj(),
        "remainder": merged["remainder"],
        "h_ladder": list(ladder),
        "truncation": truncation,
        "delta": float(delta),
        "epsilon": float(epsilon),
        "subdomain": [subdomain[0], subdomain[1]],
        "grid": grid_block,
        "thresholds": dict(merged["thresholds"]),
        "seed": seed,
        "out": out,
    }
    return LabConfig(
        dimension=dimension,
        basis=basis,
        omega=omega,
        hessian=hessian,
        c_spec=c_spec,
        factory_alpha0=factory_alpha0,
        factory_v=factory_v,
        r=r_poly,
        remainder=bool(merged["remainder"]),
        h_ladder=ladder,
        truncation=truncation,
        delta=float(delta),
        epsilon=float(epsilon),
        subdomain=subdomain,
        grid_points=grid_points,
        grid_xi=grid_xi,
        thresholds=thresholds,
        null_tol=null_tol,
        seed=seed,
        out=out,
        echo=echo,
    )


def _to_fraction(value):
    from .exact import parse_rational

    return parse_rational(value)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def _exact_as_json(x: ExactNumber, basis: IrrationalBasis) -> dict:
    return {"coords": [str(c) for c in x.coeffs], "value": basis.to_float(x)}


def run_pipeline(config: LabConfig, stages: Sequence[str], out_dir: Path) -> tuple[int, dict]:
    """Run the requested stages, write all artifacts, return (exit, report)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    requested = [s for s in _STAGES if s in set(stages)]
    report: dict = {"stages": requested, "notes": []}
    checks: dict[str, bool] = {}
    artifacts = {
        "config.echo": "written",
        "report.json": "written",
        "decay.csv": "skipped",
        "massmap.csv": "skipped",
        "family": "skipped",
    }
    (out_dir / "config.echo").write_text(canonical_json(config.echo) + "\n", encoding="utf-8")

    omega_floats = config.omega.to_floats(config.basis)
    split = None
    spec = None
    family = None
    alpha0 = None

    if "hypotheses" in requested:
        det, nondegenerate = bordered_determinant(config.hessian, omega_floats)
        quasiconvex = is_quasiconvex(config.hessian, omega_floats)
        report["hypotheses"] = {
            "A_real_principal_symbol": {
                "pass": True,
                "detail": "symbol is a real polynomial in the momenta by construction",
            },
            "B_real_constant_subprincipal": {
                "pass": True,
                "detail": "subprincipal term is an exact real constant",
            },
            "C_completely_integrable": {
                "pass": True,
                "detail": "model torus carries global action-angle coordinates",
            },
            "D_isoenergetically_nondegenerate": {
                "pass": nondegenerate,
                "bordered_determinant": det,
            },
            "E_quasimode_order": {"pass": None, "detail": "filled by the verify stage"},
            "F_quasiconvex": {"pass": quasiconvex},
        }
        checks["hypothesis (D)"] = nondegenerate
        checks["hypothesis (F)"] = quasiconvex

    needs_split = {"split", "build", "verify", "wavefront"} & set(requested)
    if needs_split:
        relations = relation_lattice(config.omega)
        split = split_frequencies(config.omega)
        if config.c_spec == "resonant":
            if config.factory_alpha0 is None:
                report["notes"].append(
                    "c declared resonant but no factory block supplies the mode"
                )
                resonant = None
            else:
                resonant = tuple(config.factory_alpha0)
        else:
            try:
                resonant = find_resonant_mode(split.omega_tilde, config.c_spec)
            except InvariantViolation as exc:
                report["notes"].append(str(exc))
                resonant = None
        alpha0 = resonant
        report["splitting"] = {
            "relation_lattice": {
                "rank": relations.rank,
                "rows": relations.to_json_obj(),
            },
            "matrix": [list(row) for row in split.matrix],
            "orbit_dimension": split.orbit_dimension,
            "omega_tilde": [
                _exact_as_json(w, config.basis) for w in split.omega_tilde
            ],
            "resonant_mode": list(resonant) if resonant is not None else None,
        }

    if "build" in requested:
        if config.factory_v is None or config.factory_alpha0 is None:
            report["quasimode_build"] = {
                "status": "skipped",
                "detail": "no factory block in the config",
            }
            report["notes"].append("quasimode stages skipped: no factory block")
        else:
            if len(config.factory_alpha0) != split.orbit_dimension:
                raise ConfigError(
                    [("factory.alpha0", f"length must equal the orbit dimension {split.orbit_dimension}")]
                )
            if config.factory_v.dim != config.dimension - split.orbit_dimension:
                raise ConfigError(
                    [("factory.v", "profile dimension must equal dimension - orbit dimension")]
                )
            if config.c_spec != "resonant":
                residual = config.c_spec
                for a, w in zip(config.factory_alpha0, split.omega_tilde):
                    residual = residual + w.scaled(a)
                if not residual.is_zero:
                    raise ConfigError(
                        [("c", "explicit c is not resonant with factory.alpha0")]
                    )
            remainder = RemainderTerm() if config.remainder else None
            try:
                spec, family = build_factory_quasimode(
                    config.omega,
                    config.hessian,
                    config.basis,
                    split,
                    config.factory_alpha0,
                    config.factory_v,
                    config.h_ladder,
                    remainder=remainder,
                )
            except (ValueError, ArithmeticError, InvariantViolation) as exc:
                report["quasimode_build"] = {"status": "error", "detail": str(exc)}
                checks["factory construction"] = False
            else:
                family.save(out_dir / "family", provenance=_spec_provenance(spec))
                artifacts["family"] = "written"
                report["quasimode_build"] = {
                    "status": "built",
                    "c": _exact_as_json(spec.c, config.basis),
                    "multiplier_support": len(spec.r),
                    "remainder_enabled": config.remainder,
                }
                if config.remainder:
                    report["notes"].append(
                        "third-order remainder uses a fixed bounded model realization; "
                        "only its order is canonical"
                    )

    if "verify" in requested and family is not None:
        try:
            _run_verify_stage(config, split, spec, family, alpha0, report, checks, out_dir)
            artifacts["decay.csv"] = "written"
        except (ValueError, ArithmeticError, InvariantViolation) as exc:
            report["quasimode_verify"] = {"status": "error", "detail": str(exc)}
            checks["quasimode verification"] = False
        else:
            if "hypotheses" in requested:
                report["hypotheses"]["E_quasimode_order"] = {
                    "pass": checks["quasimode order (E)"],
                    "exponent": report["quasimode_verify"]["order"]["exponent"],
                    "exact_kernel": report["quasimode_verify"]["order"]["exact_kernel"],
                }
    elif "verify" in requested:
        report["quasimode_verify"] = {"status": "skipped", "detail": "no family built"}

    if "wavefront" in requested and family is not None:
        try:
            grid = (
                PhaseSpaceGrid.standard(config.dimension, config.grid_points, config.h_ladder)
                if config.grid_xi == "units"
                else PhaseSpaceGrid(
                    config.dimension, config.grid_points, config.grid_xi, config.h_ladder
                )
            )
            mass_map = wavefront_mass_map(family, grid)
            verdicts = nonconcentration_report(mass_map, config.thresholds)
        except (ValueError, ArithmeticError, InvariantViolation) as exc:
            report["wavefront"] = {"status": "error", "detail": str(exc)}
            checks["wavefront map"] = False
        else:
            report["wavefront"] = verdicts.to_json_obj()
            checks["fills torus"] = verdicts.fills_torus
            checks["lagrangian supported"] = verdicts.lagrangian_supported
            checks["nonempty interior"] = verdicts.nonempty_interior
            header = (
                tuple(f"x{i}" for i in range(config.dimension))
                + tuple(f"xi{i}" for i in range(config.dimension))
                + ("h", "mass")
            )
            _write_csv(out_dir / "massmap.csv", header, mass_map.csv_rows())
            artifacts["massmap.csv"] = "written"
    elif "wavefront" in requested:
        report["wavefront"] = {"status": "skipped", "detail": "no family built"}

    failures = sorted(name for name, ok in checks.items() if not ok)
    report["checks"] = checks
    report["failures"] = failures
    report["status"] = (
        "no checks requested" if not checks else ("pass" if not failures else "fail")
    )
    report["artifacts"] = artifacts
    write_report(report, out_dir / "report.json")
    return (EXIT_PASS if not failures else EXIT_CHECK_FAILED), report


def _run_verify_stage(config, split, spec, family, alpha0, report, checks, out_dir):
    decay_rows: list[tuple] = []
    order = verify_quasimode_order(family, spec, config.delta)
    for h, value in zip(family.h_ladder, order.residual_norms):
        decay_rows.append(("residual", h, value))
    concentration = check_mode_concentration(family, split, alpha0, config.epsilon)
    for mode in sorted(concentration.mode_fits):
        fit = concentration.mode_fits[mode]
        label = "mode[" + ",".join(str(a) for a in mode) + "]"
        for h, value in zip(family.h_ladder, fit.values):
            decay_rows.append((label, h, value))
    form = transform_quadratic_form(config.hessian, split)
    r0 = _transverse_multiplier(spec, split)
    op = assemble_Q_alpha(form, alpha0, r0)
    null = galerkin_nullspace(op, config.truncation, null_tol=config.null_tol)
    box = [(config.subdomain[0], config.subdomain[1])] * (
        config.dimension - split.orbit_dimension
    )
    if null.basis:
        continuation = unique_continuation_constant(null, box)
        uc_value = continuation.constant
        uc_positive = uc_value > 0
    else:
        uc_value = None
        uc_positive = False
    report["quasimode_verify"] = {
        "order": {
            "residual_norms": list(order.residual_norms),
            "exponent": order.fit.exponent,
            "fit_residual": order.fit.residual,
            "exact_kernel": order.exact_kernel,
            "threshold": order.threshold,
            "pass": order.passed,
        },
        "concentration": {
            "modes": {
                "[" + ",".join(str(a) for a in mode) + "]": {
                    "exponent": fit.exponent,
                    "fit_residual": fit.residual,
                }
                for mode, fit in concentration.mode_fits.items()
            },
            "alpha0_norms": list(concentration.alpha0_norms),
            "alpha0_floor_ok": concentration.alpha0_floor_ok,
            "threshold": concentration.threshold,
            "pass": concentration.passed,
        },
        "galerkin": {
            "truncation": null.truncation,
            "nullspace_dimension": len(null.basis),
            "near_zero_eigenvalues": list(null.eigenvalues),
            "scale": null.scale,
        },
        "unique_continuation": {
            "subdomain": [list(b) for b in box],
            "constant": uc_value,
            "pass": uc_positive,
        },
    }
    checks["quasimode order (E)"] = order.passed
    checks["mode concentration"] = concentration.passed and concentration.alpha0_floor_ok
    checks["galerkin nullspace"] = len(null.basis) >= 1
    checks["unique continuation"] = uc_positive
    _write_csv(out_dir / "decay.csv", ("series", "h", "value"), decay_rows)


def _spec_provenance(spec: ModelOperatorSpec) -> dict:
    return {
        "omega": [[str(c) for c in entry.coeffs] for entry in spec.omega.entries],
        "hessian": [[float(x) for x in row] for row in spec.hessian.entries],
        "c": [str(c) for c in spec.c.coeffs],
        "r": spec.r.to_json_obj(),
        "basis": {"names": list(spec.basis.names), "values": list(spec.basis.values)},
        "remainder": spec.remainder is not None,
    }


def _transverse_multiplier(spec: ModelOperatorSpec, split) -> TrigPolynomial:
    """Zero-mode part of the multiplier, expressed on the transverse torus."""
    decomposition = decompose_along_T(spec.r, split)
    zero = (0,) * split.orbit_dimension
    q = split.dimension - split.orbit_dimension
    return decomposition.modes.get(zero, TrigPolynomial.zero(q))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruslab",
        description="Integrable-torus quasimode laboratory: hypothesis checks, "
        "orbit-closure splitting, factory quasimodes, wavefront verdicts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMAND_STAGES:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to the JSON config")
        cmd.add_argument("--out", default=None, help="output directory override")
        cmd.add_argument("--ladder", default=None, help="h ladder override, e.g. '4..12'")
        cmd.add_argument("--seed", type=int, default=None, help="seed override")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        raw = json.loads(text)
        if isinstance(raw, dict):
            if args.ladder is not None:
                raw["h_ladder"] = args.ladder
            if args.seed is not None:
                raw["seed"] = args.seed
            if args.out is not None:
                raw["out"] = args.out
        config = parse_config(json.dumps(raw))
    except (ConfigError, json.JSONDecodeError) as exc:
        if isinstance(exc, ConfigError):
            for path, message in exc.errors:
                print(f"config error at {path}: {message}", file=sys.stderr)
        else:
            print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(config.out)
    try:
        code, report = run_pipeline(config, _COMMAND_STAGES[args.command], out_dir)
    except ConfigError as exc:
        for path, message in exc.errors:
            print(f"config error at {path}: {message}", file=sys.stderr)
        return EXIT_USAGE
    for name, ok in sorted(report.get("checks", {}).items()):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"report: {out_dir / 'report.json'}")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Factory families, decomposition, Galerkin nullspaces, unique continuation."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from toruslab import (
    ExactNumber,
    FrequencyVector,
    HessianForm,
    ModelOperatorSpec,
    QuasimodeFamily,
    RemainderTerm,
    TrigPolynomial,
    apply_model_operator,
    assemble_Q_alpha,
    build_factory_quasimode,
    check_mode_concentration,
    decompose_along_T,
    default_h_ladder,
    fit_decay_exponent,
    galerkin_nullspace,
    maslov_admissible,
    solve_on_range,
    split_frequencies,
    transform_quadratic_form,
    unique_continuation_constant,
    verify_quasimode_order,
)


def _transverse_multiplier(spec, split):
    modes = decompose_along_T(spec.r, split).modes
    zero = (0,) * split.orbit_dimension
    q = split.dimension - split.orbit_dimension
    return modes.get(zero, TrigPolynomial.zero(q))


def _golden_operator(golden):
    form = transform_quadratic_form(golden.hessian, golden.split)
    r0 = _transverse_multiplier(golden.spec, golden.split)
    return assemble_Q_alpha(form, golden.alpha0, r0)


# ---------------------------------------------------------------------------
# Decay fits
# ---------------------------------------------------------------------------


def test_fit_exact_power_law():
    ladder = default_h_ladder()
    fit = fit_decay_exponent(ladder, [h * h for h in ladder])
    assert fit.exponent == pytest.approx(2.0, abs=1e-12)
    assert fit.residual == pytest.approx(0.0, abs=1e-12)
    assert fit.reliable


def test_fit_prefactor_invariance():
    ladder = default_h_ladder()
    fit = fit_decay_exponent(ladder, [3.0 * h**2.5 for h in ladder])
    assert fit.exponent == pytest.approx(2.5, abs=1e-9)


def test_fit_perturbed_power_law_stays_in_band():
    ladder = default_h_ladder()
    fit = fit_decay_exponent(ladder, [h * h * (1.0 + h) for h in ladder])
    assert 2.0 <= fit.exponent <= 2.1


def test_fit_zero_values_short_circuit():
    ladder = default_h_ladder()
    fit = fit_decay_exponent(ladder, [0.0] * len(ladder))
    assert math.isinf(fit.exponent)


def test_fit_requires_four_points():
    with pytest.raises(ValueError):
        fit_decay_exponent([0.5, 0.25, 0.125], [1.0, 1.0, 1.0])


def test_fit_flags_non_power_law_as_unreliable():
    ladder = default_h_ladder()
    values = [1.0 if i % 2 == 0 else 1e-4 for i in range(len(ladder))]
    fit = fit_decay_exponent(ladder, values)
    assert fit.residual > 0.5
    assert not fit.reliable


# ---------------------------------------------------------------------------
# Factory construction
# ---------------------------------------------------------------------------


def test_factory_pure_character_whole_torus(sqrt2_basis):
    omega = FrequencyVector(
        (sqrt2_basis.number([1, 0]), sqrt2_basis.number([0, 1]))
    )
    hessian = HessianForm(np.zeros((2, 2)))
    split = split_frequencies(omega)
    assert split.orbit_dimension == 2
    ladder = default_h_ladder()
    spec, family = build_factory_quasimode(
        omega, hessian, sqrt2_basis, split, (3, 2), TrigPolynomial.constant(0, 1.0), ladder
    )
    assert spec.r == TrigPolynomial.zero(2)
    assert spec.c.coeffs == (Fraction(-3), Fraction(-2))
    u = family.members[0]
    assert u.support() == [(3, 2)]
    for h in ladder:
        assert apply_model_operator(spec, u, h) == TrigPolynomial.zero(2)


def test_factory_golden_residual_bound(golden):
    for h, u in golden.family.items():
        residual = apply_model_operator(golden.spec, u, h).norm()
        assert residual <= 1e-10 * h * h


def test_factory_derived_multiplier_matches_closed_form(golden):
    # r0 = -Omega_zz cos(2 pi z) / (2 + cos(2 pi z)) on the transverse torus
    form = transform_quadratic_form(golden.hessian, golden.split)
    omega_zz = form.Omega_block[0, 0]
    r0 = _transverse_multiplier(golden.spec, golden.split)
    grid = np.arange(128) / 128.0
    values = r0.evaluate(grid[:, None]).real
    expected = -omega_zz * np.cos(2 * np.pi * grid) / (2.0 + np.cos(2 * np.pi * grid))
    assert np.max(np.abs(values - expected)) <= 1e-9 * omega_zz


def test_factory_rejects_vanishing_profile(golden):
    vanishing = TrigPolynomial.cosine(1, (1,))
    with pytest.raises(ValueError, match="vanishing"):
        build_factory_quasimode(
            golden.omega,
            golden.hessian,
            golden.basis,
            golden.split,
            (0,),
            vanishing,
            golden.ladder,
        )


def test_factory_rejects_nonreal_profile(golden):
    crooked = TrigPolynomial(1, {(0,): 2.0, (1,): 1.0})
    with pytest.raises(ValueError, match="real"):
        build_factory_quasimode(
            golden.omega,
            golden.hessian,
            golden.basis,
            golden.split,
            (0,),
            crooked,
            golden.ladder,
        )


def test_factory_rejects_mode_with_transverse_drift(golden):
    # a nonzero mode couples D_z through the cross term, so -(Q v)/v is not
    # real for a nonconstant profile
    with pytest.raises(ValueError, match="not real"):
        build_factory_quasimode(
            golden.omega,
            golden.hessian,
            golden.basis,
            golden.split,
            (1,),
            golden.v,
            golden.ladder,
        )


def test_family_normalization_enforced():
    ladder = default_h_ladder()
    off = TrigPolynomial(1, {(0,): 2.0})
    with pytest.raises(ValueError):
        QuasimodeFamily(ladder, tuple([off] * len(ladder)), tuple([2.0] * len(ladder)))
    family = QuasimodeFamily.from_members(ladder, [off] * len(ladder))
    assert family.normalization[0] == pytest.approx(2.0)
    assert family.members[0].norm() == pytest.approx(1.0)


def test_family_save_load_round_trip(tmp_path, golden):
    golden.family.save(tmp_path / "fam", provenance={"kind": "golden"})
    loaded = QuasimodeFamily.load(tmp_path / "fam")
    assert loaded.h_ladder == golden.family.h_ladder
    assert loaded.members == golden.family.members
    assert loaded.normalization == golden.family.normalization


# ---------------------------------------------------------------------------
# Decomposition along the orbit closure
# ---------------------------------------------------------------------------


def test_decompose_identity_split_slices(sqrt2_basis):
    omega = FrequencyVector(
        (sqrt2_basis.number([1, 0]), sqrt2_basis.number([0, 1]))
    )
    split = split_frequencies(omega)
    u = TrigPolynomial(2, {(1, 2): 1.0, (0, -1): 2.0})
    modes = decompose_along_T(u, split).modes
    assert set(modes) == {(1, 2), (0, -1)}
    for profile in modes.values():
        assert profile.support() == [()]


def test_decompose_single_character(golden):
    u = TrigPolynomial.character(2, (7, -3))
    decomposition = decompose_along_T(u, golden.split)
    assert len(decomposition.modes) == 1
    ((alpha, profile),) = decomposition.modes.items()
    assert len(profile) == 1
    assert decomposition.reassemble() == u


def test_decompose_round_trip_preserves_mass():
    rng = np.random.default_rng(42)
    omega = FrequencyVector.from_rows([[1], [2], [3]])
    split = split_frequencies(omega)
    assert split.orbit_dimension == 1
    coeffs = {
        tuple(int(x) for x in rng.integers(-6, 7, size=3)): complex(
            rng.standard_normal(), rng.standard_normal()
        )
        for _ in range(50)
    }
    u = TrigPolynomial(3, coeffs)
    decomposition = decompose_along_T(u, split)
    assert decomposition.reassemble() == u
    total = math.fsum(p.norm() ** 2 for p in decomposition.modes.values())
    assert total == pytest.approx(u.norm() ** 2, rel=1e-15)


# ---------------------------------------------------------------------------
# Galerkin nullspace
# ---------------------------------------------------------------------------


def test_galerkin_zero_operator_nullspace_is_constants(golden):
    form = transform_quadratic_form(golden.hessian, golden.split)
    op = assemble_Q_alpha(form, (0,), TrigPolynomial.zero(1))
    null = galerkin_nullspace(op, 8)
    assert len(null.basis) == 1
    assert null.eigenvalues[0] == 0.0
    assert null.basis[0].support() == [(0,)]


def test_galerkin_factory_nullspace_contains_profile(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    assert len(null.basis) == 1
    assert abs(null.eigenvalues[0]) < 1e-8
    assert null.basis[0].norm() == pytest.approx(1.0, abs=1e-10)
    vn = golden.v.scaled(1.0 / golden.v.norm())
    overlap = null.basis[0].inner(vn)
    aligned = null.basis[0].scaled(abs(overlap) / overlap)
    assert (aligned - vn).norm() <= 1e-6


def test_galerkin_generic_multiplier_has_empty_nullspace(golden):
    rng = np.random.default_rng(99)
    form = transform_quadratic_form(golden.hessian, golden.split)
    for _ in range(5):
        raw = {(0,): float(rng.standard_normal())}
        for k in (1, 2, 3):
            z = complex(rng.standard_normal(), rng.standard_normal())
            raw[(k,)] = z
            raw[(-k,)] = z.conjugate()
        r0 = TrigPolynomial(1, raw)
        r0 = r0.scaled(1.0 / r0.norm())
        op = assemble_Q_alpha(form, (0,), r0)
        null = galerkin_nullspace(op, 16)
        assert len(null.basis) == 0


def test_galerkin_near_zero_eigenvalue_monotone_in_truncation(golden):
    op = _golden_operator(golden)
    smallest = [
        min(abs(x) for x in galerkin_nullspace(op, N).spectrum) for N in (8, 16, 32)
    ]
    for previous, doubled in zip(smallest, smallest[1:]):
        assert doubled <= previous + 1e-12


def test_galerkin_guards(golden):
    coerced = TrigPolynomial.zero(1)
    bad_block = assemble_Q_alpha(
        transform_quadratic_form(HessianForm(np.zeros((2, 2))), golden.split),
        (0,),
        coerced,
    )
    with pytest.raises(ValueError, match="positive definite"):
        galerkin_nullspace(bad_block, 8)
    op = _golden_operator(golden)
    with pytest.raises(ValueError, match="truncation"):
        galerkin_nullspace(op, 4)
    with pytest.raises(ValueError, match="at least 4"):
        galerkin_nullspace(op, 3)


def test_factory_mode_galerkin_residual(golden):
    # the resonant-mode profile solves the truncated problem once the
    # truncation clears the profile support by a margin
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, golden.v.support_radius() + 8)
    vhat = decompose_along_T(golden.family.members[0], golden.split).modes[golden.alpha0]
    assert null.apply_truncated(vhat).norm() < 1e-8


# ---------------------------------------------------------------------------
# Partial inverse
# ---------------------------------------------------------------------------


def test_solve_on_range_kills_nullspace_input(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    w = solve_on_range(op, null, null.basis[0])
    assert w.norm() <= 1e-10


def test_solve_on_range_inverts_on_complement(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    rng = np.random.default_rng(17)
    w0 = TrigPolynomial(
        1,
        {(b,): complex(rng.standard_normal(), rng.standard_normal()) for b in range(-6, 7)},
    )
    e = null.basis[0]
    w0 = w0 - e.scaled(w0.inner(e))
    g = null.apply_truncated(w0)
    recovered = solve_on_range(op, null, g)
    assert (recovered - w0).norm() <= 1e-8 * max(1.0, w0.norm())


def test_solve_on_range_empty_nullspace_solves_exactly(golden):
    form = transform_quadratic_form(golden.hessian, golden.split)
    r0 = TrigPolynomial(1, {(0,): 0.31, (1,): 0.2, (-1,): 0.2})
    op = assemble_Q_alpha(form, (0,), r0.scaled(1.0 / r0.norm()))
    null = galerkin_nullspace(op, 16)
    assert not null.basis
    g = TrigPolynomial(1, {(0,): 1.0, (3,): 0.5})
    w = solve_on_range(op, null, g)
    assert (null.apply_truncated(w) - g).norm() <= 1e-8


def test_solve_on_range_rejects_unsupported_rhs(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    with pytest.raises(ValueError, match="truncation"):
        solve_on_range(op, null, TrigPolynomial.character(1, (40,)))


# ---------------------------------------------------------------------------
# Unique continuation constant
# ---------------------------------------------------------------------------


def test_unique_continuation_constants_nullspace(golden):
    form = transform_quadratic_form(golden.hessian, golden.split)
    op = assemble_Q_alpha(form, (0,), TrigPolynomial.zero(1))
    null = galerkin_nullspace(op, 8)
    result = unique_continuation_constant(null, [(0.4, 0.5)])
    assert result.constant == pytest.approx(0.1, abs=1e-12)


def test_unique_continuation_full_domain_is_one(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    result = unique_continuation_constant(null, [(0.0, 1.0)])
    assert result.constant == pytest.approx(1.0, abs=1e-10)


def test_unique_continuation_factory_matches_riemann(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    result = unique_continuation_constant(null, [(0.0, 0.25)])
    assert result.constant > 0
    f = null.basis[0]
    points = (np.arange(10_000) + 0.5) / 10_000 * 0.25
    riemann = float(np.mean(np.abs(f.evaluate(points[:, None])) ** 2) * 0.25)
    assert abs(result.constant - riemann) <= 1e-6
    assert abs(result.minimizer.norm() - 1.0) <= 1e-10


def test_unique_continuation_monotone_in_subdomain(golden):
    op = _golden_operator(golden)
    null = galerkin_nullspace(op, 16)
    values = []
    for k in range(1, 21):
        width = 0.02 + 0.04 * k
        values.append(unique_continuation_constant(null, [(0.1, 0.1 + width)]).constant)
    for smaller, larger in zip(values, values[1:]):
        assert smaller <= larger + 1e-12


def test_unique_continuation_requires_nullspace(golden):
    form = transform_quadratic_form(golden.hessian, golden.split)
    r0 = TrigPolynomial(1, {(0,): 0.5, (2,): 0.25, (-2,): 0.25})
    op = assemble_Q_alpha(form, (0,), r0)
    null = galerkin_nullspace(op, 16)
    assert not null.basis
    with pytest.raises(ValueError, match="empty"):
        unique_continuation_constant(null, [(0.0, 0.25)])


# ---------------------------------------------------------------------------
# Order and concentration reports
# ---------------------------------------------------------------------------


def test_order_factory_passes_any_delta_up_to_one(golden):
    report = verify_quasimode_order(golden.family, golden.spec, delta=1.0)
    assert report.exact_kernel
    assert report.passed
    assert all(x < 1e-13 for x in report.residual_norms)


def test_order_off_resonant_character_fails(golden):
    u = TrigPolynomial.character(2, (1, 0))
    family = QuasimodeFamily.from_members(golden.ladder, [u] * len(golden.ladder))
    spec = ModelOperatorSpec(
        omega=golden.omega,
        hessian=golden.hessian,
        c=ExactNumber.rational(0),
        r=TrigPolynomial.zero(2),
        basis=golden.basis,
    )
    report = verify_quasimode_order(family, spec, delta=0.5)
    assert report.fit.exponent == pytest.approx(1.0, abs=0.05)
    assert not report.passed


def test_order_with_remainder_fits_third_order(golden):
    spec, family = build_factory_quasimode(
        golden.omega,
        golden.hessian,
        golden.basis,
        golden.split,
        golden.alpha0,
        golden.v,
        golden.ladder,
        remainder=RemainderTerm(),
    )
    report = verify_quasimode_order(family, spec, delta=0.8)
    assert report.fit.exponent >= 2.9
    assert report.passed


def _two_mode_family(golden, decay: bool):
    w = TrigPolynomial(1, {(0,): 1.0, (2,): 0.3, (-2,): 0.3})
    members = []
    for h in golden.ladder:
        coeffs = {}
        for beta, value in golden.v.items():
            coeffs[golden.split.to_torus_frequency((0,), beta)] = value
        scale = h if decay else 1.0
        for beta, value in w.items():
            coeffs[golden.split.to_torus_frequency((1,), beta)] = scale * value
        members.append(TrigPolynomial(2, coeffs))
    return QuasimodeFamily.from_members(golden.ladder, members)


def test_concentration_factory_family_vacuous_pass(golden):
    report = check_mode_concentration(golden.family, golden.split, golden.alpha0, 0.05)
    assert report.passed
    assert not report.mode_fits
    assert report.alpha0_norms[-1] == pytest.approx(1.0)
    assert report.alpha0_floor_ok


def test_concentration_decaying_second_mode_passes(golden):
    report = check_mode_concentration(_two_mode_family(golden, True), golden.split, golden.alpha0, 0.05)
    ((mode, fit),) = report.mode_fits.items()
    assert mode == (1,)
    assert 0.9 <= fit.exponent <= 1.1
    assert report.passed
    assert report.alpha0_floor_ok


def test_concentration_order_one_leakage_fails(golden):
    report = check_mode_concentration(_two_mode_family(golden, False), golden.split, golden.alpha0, 0.05)
    assert not report.passed


# ---------------------------------------------------------------------------
# Maslov congruence
# ---------------------------------------------------------------------------


def test_maslov_zero_classes_always_admissible():
    for h in (1, Fraction(1, 7), Fraction(3, 5)):
        assert maslov_admissible([0, 0], [0, 0], h)


def test_maslov_direct_rational_cases():
    assert maslov_admissible([1], [0], Fraction(1, 5))
    assert not maslov_admissible([1], [1], Fraction(1, 5))


def test_maslov_no_false_monotonicity_in_h():
    # admissible at h but not at h/2
    assert maslov_admissible([Fraction(1, 4)], [1], 1)
    assert not maslov_admissible([Fraction(1, 4)], [1], Fraction(1, 2))


def test_maslov_rejects_bad_input():
    with pytest.raises(ValueError):
        maslov_admissible([1], [0], 0)
    with pytest.raises(ValueError):
        maslov_admissible([1, 2], [0], Fraction(1, 2))


def test_maslov_against_divisibility_oracle():
    import random

    rng = random.Random(404)
    for _ in range(300):
        length = rng.randint(1, 4)
        liouville = [Fraction(rng.randint(-12, 12), rng.randint(1, 9)) for _ in range(length)]
        maslov = [rng.randint(-6, 6) for _ in range(length)]
        h = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        expected = True
        for l, a in zip(liouville, maslov):
            numerator = 4 * l.numerator * h.denominator - a * l.denominator * h.numerator
            expected = expected and numerator % (4 * l.denominator * h.numerator) == 0
        assert maslov_admissible(liouville, maslov, h) == expected

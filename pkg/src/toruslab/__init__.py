"""Laboratory for quasimode nonconcentration on completely integrable tori.

Exact rational-relation arithmetic decides the resonance structure of a
frequency vector, numerical linear algebra decides the nondegeneracy
hypotheses, a factory builds certified quasimode families for the model
operator, and coherent-state mass maps render the nonconcentration
verdicts.
"""

from .exact import (
    ExactNumber,
    FrequencyVector,
    IntegerLattice,
    InvariantViolation,
    IrrationalBasis,
    UnimodularSplitting,
    find_resonant_mode,
    hermite_normal_form,
    integer_kernel,
    relation_lattice,
    smith_normal_form,
    split_frequencies,
    unimodular_inverse,
)
from .nondegeneracy import HessianForm, bordered_determinant, is_quasiconvex
from .operator import (
    ModelOperatorSpec,
    OperatorOnTPrime,
    RemainderTerm,
    TransformedQuadraticForm,
    apply_model_operator,
    assemble_Q_alpha,
    transform_quadratic_form,
)
from .quasimode import (
    ConcentrationReport,
    DecayFit,
    GalerkinNullspace,
    ModeDecomposition,
    OrderReport,
    QuasimodeFamily,
    UniqueContinuation,
    build_factory_quasimode,
    check_mode_concentration,
    decompose_along_T,
    default_h_ladder,
    fit_decay_exponent,
    galerkin_nullspace,
    maslov_admissible,
    solve_on_range,
    unique_continuation_constant,
    verify_quasimode_order,
)
from .trigpoly import TrigPolynomial
from .wavefront import (
    MassMap,
    PhaseSpaceGrid,
    VerdictThresholds,
    WavefrontReport,
    coherent_mass,
    coherent_state,
    nonconcentration_report,
    wavefront_mass_map,
)

__version__ = "0.1.0"

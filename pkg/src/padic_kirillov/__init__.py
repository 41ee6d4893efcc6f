"""Finite-precision p-adic tools for q-expansions, ordinary projectors and
Kirillov models."""

from .cyclo import CycloElem, cyclo_average, cyclotomic_ring
from .errors import (
    DivisibilityError,
    NonOrdinaryError,
    PadicError,
    PrecisionError,
    RankError,
    SchemaError,
    StabilityError,
    TailError,
)
from .linalg import HowellForm, PkMatrix, howell_form
from .ordinary import (
    HeckeLattice,
    OrdinaryProjector,
    coinvariant_tails,
    kernel_check,
    ordinary_projector,
    stabilize,
    up_matrix,
)
from .padic import PadicApprox, UnitDecomp, hensel_unit_root, plog, teichmuller, valuation
from .profinite import (
    CharTail,
    KirillovFn,
    LocConstFn,
    SmoothChar,
    char_eval,
    chi_ab_eval,
    fiber_at_zero,
    fn_mul_action,
    indicator,
    kir_scale,
    kir_up,
    mahler_coeffs,
    mahler_eval,
)
from .qexp import (
    NewformData,
    QExpansion,
    circle_act,
    eta_delta,
    hecke_S,
    hecke_T,
    hecke_U,
    kir_total,
    tau,
    theta,
    twist,
    verify_double_coset,
)
from .smoothrep import (
    LocalParams,
    central_char,
    classify,
    completion_basis,
    jacquet,
    kirillov_lines,
    predict_W,
)

__version__ = "0.1.0"

"""Harmonic functions on the Sierpinski gasket: exact boundary evaluation,
tangent directions, and Holder exponent analysis."""

from .exact import (
    DIFFERENCE_CONE,
    OUTER_CONE,
    ConeSpec,
    DegenerateEigenvalueError,
    Expansion,
    ExpansionVariant,
    PlaneBasis,
    QuadraticValue,
    ScaledIntMat2,
    ScaledIntMat3,
    Vec3Q,
    dominant_eigen,
    edge_word_matrix,
    expand,
    expand_auto,
    expansion_value,
    generator_matrix,
    in_value_triangle,
    lyndon_words,
    max_cyclic_run,
    necklace_classes,
    plane_trace,
    restrict_to_plane,
    transition_density,
    word_product,
)
from .harmonic import (
    ApproxPoint,
    BoundaryTriple,
    FORM_PRESETS,
    GridCapExceeded,
    HarmonicGrid,
    LinearForm,
    VECTOR_BOUNDARY,
    check_harmonic,
    curve_point,
    curve_point_dyadic,
    form_value,
    harmonic_grid,
    mirror,
    subdivide,
    truncated_curve_value,
    vertex_value,
)
from .tangent import (
    ConeError,
    KernelVerdict,
    ProjDir,
    QuadDir,
    Side,
    SideError,
    apply_projective,
    chart_of,
    direction_at,
    direction_at_rational,
    direction_vector,
    kernel_test,
)
from .holder import (
    DerivativeClass,
    EstimateTrace,
    HolderReport,
    MIN_EXPONENT,
    TableCapExceeded,
    classify_curve,
    classify_form,
    estimate_at_bits,
    exponent_bound,
    exponent_estimate,
    exponent_excludes_one,
    generate_table,
    holder_exponent,
    infinite_derivative_guaranteed,
    lyapunov_sample,
    maxrun_experiment,
)

__version__ = "0.1.0"

"""Grey-scale image morphology through threshold decomposition.

A grey image is the sum of its binary cross-sections. Any Boolean window
operator extends to grey images by applying it to every cross-section and
adding the results; this package provides that extension, its kernel and
interval-basis representations, lattice-property detection on both the
binary and grey sides, and a small image toolkit around them.
"""

from .errors import (
    CapacityError,
    CompositionError,
    DataError,
    DimensionError,
    DomainError,
    KindError,
    ParseError,
    StackingViolationError,
    StackmorphError,
)
from .lattice import (
    BinaryPattern,
    GreyPattern,
    PatternInterval,
    Window,
    enumerate_binary_patterns,
    enumerate_grey_patterns,
    interval_contains,
    leq,
    maximal_elements,
)
from .threshold import (
    BinaryImage,
    GreyImage,
    binary_from_grey,
    cross_section,
    cross_sections,
    is_stacked,
    reconstruct,
    scale_binary,
)
from .operators import (
    BorderPolicy,
    DEFAULT_BORDER,
    SetOperator,
    StackOperator,
    apply_set,
    apply_stack,
    compose,
    dual_operator,
    eval_set,
    eval_stack,
    lipschitz_gap,
    threshold_hit_sum,
)
from ._backend import BACKEND_NAME
from .representations import (
    IntervalBasis,
    SetKernel,
    StackKernelView,
    basis_of,
    h_inverse,
    kernel_of,
    operator_from_basis,
    operator_from_kernel,
    stack_basis_level,
    stack_basis_member,
    stack_kernel_member,
)
from .properties import (
    PROPERTY_NAMES,
    CommutationWitness,
    PropertyReport,
    StackInheritanceReport,
    check_algebraic,
    check_increasing,
    check_stack_filter,
    check_structural,
    verify_stack_inheritance,
)
from .builtins import BUILTIN_NAMES, builtin, window_from_spec
from .pgm import read_pgm, write_pgm
from .noise import salt_pepper
from .train import train_majority
from .serialization import (
    format_basis,
    format_operator,
    format_stack_basis,
    parse_basis,
    parse_operator,
)
from .pipeline import (
    FigureResult,
    PipelineConfig,
    demo_scene,
    load_pipeline,
    run_figure,
    run_pipeline,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "BUILTIN_NAMES",
    "BinaryImage",
    "BinaryPattern",
    "BorderPolicy",
    "CapacityError",
    "CommutationWitness",
    "CompositionError",
    "DEFAULT_BORDER",
    "DataError",
    "DimensionError",
    "DomainError",
    "FigureResult",
    "GreyImage",
    "GreyPattern",
    "IntervalBasis",
    "KindError",
    "PROPERTY_NAMES",
    "ParseError",
    "PatternInterval",
    "PipelineConfig",
    "PropertyReport",
    "SetKernel",
    "SetOperator",
    "StackInheritanceReport",
    "StackKernelView",
    "StackOperator",
    "StackingViolationError",
    "StackmorphError",
    "Window",
    "apply_set",
    "apply_stack",
    "basis_of",
    "binary_from_grey",
    "builtin",
    "check_algebraic",
    "check_increasing",
    "check_stack_filter",
    "check_structural",
    "compose",
    "cross_section",
    "cross_sections",
    "demo_scene",
    "dual_operator",
    "enumerate_binary_patterns",
    "enumerate_grey_patterns",
    "eval_set",
    "eval_stack",
    "format_basis",
    "format_operator",
    "format_stack_basis",
    "h_inverse",
    "interval_contains",
    "is_stacked",
    "kernel_of",
    "leq",
    "lipschitz_gap",
    "load_pipeline",
    "maximal_elements",
    "operator_from_basis",
    "operator_from_kernel",
    "parse_basis",
    "parse_operator",
    "read_pgm",
    "reconstruct",
    "run_figure",
    "run_pipeline",
    "salt_pepper",
    "scale_binary",
    "stack_basis_level",
    "stack_basis_member",
    "stack_kernel_member",
    "threshold_hit_sum",
    "train_majority",
    "verify_stack_inheritance",
    "window_from_spec",
    "write_pgm",
]

"""Line-bundle complexes on P^m: construction, hypercohomology, Ext and
zero-object / equivalence tests."""

from .cech import (
    DEFAULT_E_CAP,
    RGammaDiagnostic,
    RGammaResult,
    current_e_cap,
    dense_cech_complex,
    e_cap_context,
    expected_euler,
    rgamma,
    rgamma_at_floor,
    sufficient_floor,
    transfer_map,
)
from .complexes import (
    LBComplex,
    LBMap,
    ValidationReport,
    compose,
    cone_inclusion,
    cone_lb,
    cone_projection_shifted,
    direct_sum_lb,
    dual_map,
    ensure_valid,
    ensure_valid_map,
    identity_map,
    is_zero_map,
    map_add,
    map_scale,
    shift_lb,
    shift_map_lb,
    sheaf_dual,
    tensor,
    tensor_maps,
    twist,
    twist_map,
    validate,
    validate_map,
    zero_map,
)
from .derived import find_homotopy, is_equivalence, is_zero_object, koszul_complex, rhom_complex, rhom_dims
from .poly import HomogPoly, PolyMatrix

__all__ = [
    "DEFAULT_E_CAP", "HomogPoly", "LBComplex", "LBMap", "PolyMatrix", "RGammaDiagnostic", "RGammaResult",
    "ValidationReport", "compose", "cone_inclusion", "cone_lb", "cone_projection_shifted", "current_e_cap",
    "dense_cech_complex", "direct_sum_lb", "dual_map", "e_cap_context", "ensure_valid", "ensure_valid_map",
    "expected_euler", "find_homotopy", "identity_map", "is_equivalence", "is_zero_map", "is_zero_object",
    "koszul_complex", "map_add", "map_scale", "rgamma", "rgamma_at_floor", "rhom_complex", "rhom_dims",
    "shift_lb", "shift_map_lb", "sheaf_dual", "sufficient_floor", "tensor", "tensor_maps", "transfer_map",
    "twist", "twist_map", "validate", "validate_map", "zero_map",
]

"""Exact rational linear algebra and bounded cochain complexes."""

from .backend import BACKEND
from .complexes import (
    Cohomology,
    block_map,
    ComplexMap,
    RationalChainComplex,
    cohomology,
    cohomology_coordinates,
    cohomology_dims,
    cohomology_map,
    cone,
    direct_sum,
    euler_characteristic,
    hom_complex,
    hom_post,
    hom_pre,
    is_acyclic,
    is_quasi_iso,
    shift,
    shift_map,
    tensor_complex_maps,
    tensor_complexes,
)
from .matrix import (
    KernelImage,
    RatMatrix,
    det,
    frac_str,
    inverse,
    kernel_basis,
    rank,
    rank_kernel_image,
    solve,
    solve_matrix,
    to_fraction,
)

__all__ = [
    "BACKEND", "block_map", "Cohomology", "ComplexMap", "KernelImage", "RatMatrix", "RationalChainComplex",
    "cohomology", "cohomology_coordinates", "cohomology_dims", "cohomology_map", "cone", "det",
    "direct_sum", "euler_characteristic", "frac_str", "hom_complex", "hom_post", "hom_pre", "inverse", "is_acyclic",
    "is_quasi_iso", "kernel_basis", "rank", "rank_kernel_image", "shift", "shift_map", "solve",
    "solve_matrix", "tensor_complex_maps", "tensor_complexes", "to_fraction",
]

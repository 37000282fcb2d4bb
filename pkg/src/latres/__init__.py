"""Equivariant minimal free resolutions of lattice ideals and monomial modules."""
from .descent import DescendedResolution, descend, minimal_generators, verify, verify_exact_up_to
from .koszul import GeneratedModule, LatticeModule, betti, betti_support, koszul_complex
from .lattice import Lattice, certify_lattice, coset_normal_form, quotient
from .linalg import GF, QQ, kernel_basis, smith_normal_form
from .resolution import EquivariantResolution, ResolveConfig, check_equivariance, resolve_equivariant
from .simplicial import SimplicialComplex, reduced_homology

__all__ = [
    "GF", "QQ", "DescendedResolution", "EquivariantResolution", "GeneratedModule", "Lattice",
    "LatticeModule", "ResolveConfig", "SimplicialComplex", "betti", "betti_support",
    "certify_lattice", "check_equivariance", "coset_normal_form", "descend", "kernel_basis",
    "koszul_complex", "minimal_generators", "quotient", "reduced_homology", "resolve_equivariant",
    "smith_normal_form", "verify", "verify_exact_up_to",
]
__version__ = "0.1.0"

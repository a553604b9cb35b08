"""Exact-arithmetic affine and elliptic root systems.

Construction and verification of extended affine root systems, the
non-topological base construction for affine systems, and isotropic root
multiplicities of elliptic Lie algebras computed per marking line.
"""

from .core import (AmbientSpace, AxiomReport, Projection, RootVector,
                   cartan_integer, coroot, is_connected, pairing, reflect,
                   verify_axioms)
from .finite import (FiniteRootSystem, big_theta, build_finite,
                     cartan_matrix_of, find_base, orbit_max, partition_shlgex,
                     recognize_type, weyl_orbit)
from .affine import (AffineDatum, MarkedAffineBase, affine_alpha0,
                     affine_label, apply_word, build_affine_model, build_f,
                     build_rprime, cartan_and_delta, classify_affine,
                     compute_pif, conjugate_bases)
from .elliptic import (CosetSet, EllipticDatum, affine_quotient, compute_kg,
                       preset_datum, validate_datum, PRESET_NAMES)
from .marking import (MarkingLine, MultiplicityTable, check_iso_transport,
                      content, fundamental_set_for, marking_lines, mult_along,
                      mult_at, mult_table)
from .lie import (FreeWord, SerreRelation, WordAlgebra, encode_serre,
                  homogeneity_check, straighten, verify_adfone, verify_adftwo)

__version__ = "0.1.0"

__all__ = [
    "AmbientSpace", "AxiomReport", "Projection", "RootVector",
    "cartan_integer", "coroot", "is_connected", "pairing", "reflect",
    "verify_axioms",
    "FiniteRootSystem", "big_theta", "build_finite", "cartan_matrix_of",
    "find_base", "orbit_max", "partition_shlgex", "recognize_type",
    "weyl_orbit",
    "AffineDatum", "MarkedAffineBase", "affine_alpha0", "affine_label",
    "apply_word", "build_affine_model", "build_f", "build_rprime",
    "cartan_and_delta", "classify_affine", "compute_pif", "conjugate_bases",
    "CosetSet", "EllipticDatum", "affine_quotient", "compute_kg",
    "preset_datum", "validate_datum", "PRESET_NAMES",
    "MarkingLine", "MultiplicityTable", "check_iso_transport", "content",
    "fundamental_set_for", "marking_lines", "mult_along", "mult_at",
    "mult_table",
    "FreeWord", "SerreRelation", "WordAlgebra", "encode_serre",
    "homogeneity_check", "straighten", "verify_adfone", "verify_adftwo",
]

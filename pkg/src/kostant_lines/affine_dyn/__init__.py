"""Affine geometry of G x V: Margulis invariants, affine ratios and the
additivity defect."""
from .spectral import (NotLoxodromicError, SpectralData, jordan_projection, jordan_variation_fd,
                       random_split_loxodromic,
                       margulis_a_part, spectral_data)
from .affine import (AffineMap, AmbiguousClusterError, cross_ratio_B1, fixed_point_offset,
                     load_affine_maps, projection, unipotent_splitting, unnormalized_margulis)
from .ratio import (AffineFlagPair, AffineRatio, DefectResult, additivity_defect, affine_ratio,
                    circuit, intersect, random_flag_pairs, random_transverse_pair,
                    transversality_margin, ratio_translation_closed, sl_basis)
from .cone import (VariationSample, random_generators, random_traceless, sample_variation_cone,
                   word_label)

__all__ = [
    "NotLoxodromicError", "SpectralData", "jordan_projection", "jordan_variation_fd",
    "margulis_a_part", "spectral_data", "random_split_loxodromic", "AffineMap", "AmbiguousClusterError", "cross_ratio_B1",
    "fixed_point_offset", "load_affine_maps", "projection", "unipotent_splitting",
    "unnormalized_margulis", "AffineFlagPair", "AffineRatio", "DefectResult", "additivity_defect",
    "affine_ratio", "circuit", "intersect", "random_flag_pairs", "random_transverse_pair", "transversality_margin", "ratio_translation_closed", "sl_basis",
    "VariationSample", "random_generators", "random_traceless", "sample_variation_cone",
    "word_label",
]

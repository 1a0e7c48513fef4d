"""Ekedahl-Oort type strata of GL_n zip data: parametrisation, canonical parabolics, canonical flags."""

from .weyl import Permutation
from .rootzip import ParabolicDescriptor, Root, ZipDatum, gl_zip_datum, stratum_parameters
from .canonical import canonical_data, canonical_parabolic_certified, canonical_parabolic_scan
from .dieudonne import canonical_flag, flag_stabilizer

__all__ = [
    "Permutation", "ParabolicDescriptor", "Root", "ZipDatum", "gl_zip_datum",
    "stratum_parameters", "canonical_data", "canonical_parabolic_certified",
    "canonical_parabolic_scan", "canonical_flag", "flag_stabilizer",
]

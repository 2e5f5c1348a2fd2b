"""Three-weight linear codes from quadratic forms over finite fields of odd characteristic.

Modules: gf (fields), quadform (forms), cyclo (exact character sums),
code (defining-set codes and weights), ghw (generalized Hamming weights),
cli (command line).
"""

from .code import (
    CodeParams,
    DefiningSet,
    WeightEnumerator,
    build_defining_set,
    code_summary,
    make_params,
    weight_distribution,
)
from .gf import ExtensionField, FieldElement, make_field
from .ghw import WeightHierarchy, d_r_bruteforce, hierarchy_bruteforce, hierarchy_formula, witness_subspace
from .quadform import QuadraticForm, builtin_form, make_form

__all__ = [
    "CodeParams",
    "DefiningSet",
    "ExtensionField",
    "FieldElement",
    "QuadraticForm",
    "WeightEnumerator",
    "WeightHierarchy",
    "build_defining_set",
    "builtin_form",
    "code_summary",
    "d_r_bruteforce",
    "hierarchy_bruteforce",
    "hierarchy_formula",
    "make_field",
    "make_form",
    "make_params",
    "weight_distribution",
    "witness_subspace",
]

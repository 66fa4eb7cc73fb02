"""Tor over small categories, crossed categories, pseudo-free modules and
Hochschild / cyclic homology as functor homology, computed exactly."""

from .crossed import (
    CrossedCategory,
    NotCrossed,
    build_crossed,
    build_delta_c,
    build_delta_s,
    build_f_as,
    build_gamma_as,
    build_group_crossed,
    build_symmetric_crossed,
    check_crossed_laws,
)
from .fincat import FinCategory, Morph, NotAGroup, build_delta_truncated, build_group_category, opposite
from .hochschild import (
    compare_homology_routes,
    cyclic_oracle,
    dual_numbers,
    ground_field,
    hochschild_oracle,
)
from .linalg import GF, QQ, Field, Mat
from .modules import CO, CONTRA, CatModule, make_representable, make_trivial
from .pseudoadj import (
    base_change_check,
    build_b_module,
    pseudo_adjunction_iso,
    pseudo_free,
)
from .tor import MarginViolation, hom_over_category, tensor_over_category, tor

__version__ = "0.1.0"

__all__ = [
    "CO",
    "CONTRA",
    "GF",
    "QQ",
    "CatModule",
    "CrossedCategory",
    "Field",
    "FinCategory",
    "MarginViolation",
    "Mat",
    "Morph",
    "NotAGroup",
    "NotCrossed",
    "base_change_check",
    "build_b_module",
    "build_crossed",
    "build_delta_c",
    "build_delta_s",
    "build_delta_truncated",
    "build_f_as",
    "build_gamma_as",
    "build_group_category",
    "build_group_crossed",
    "build_symmetric_crossed",
    "check_crossed_laws",
    "compare_homology_routes",
    "cyclic_oracle",
    "dual_numbers",
    "ground_field",
    "hochschild_oracle",
    "hom_over_category",
    "make_representable",
    "make_trivial",
    "opposite",
    "pseudo_adjunction_iso",
    "pseudo_free",
    "tensor_over_category",
    "tor",
]

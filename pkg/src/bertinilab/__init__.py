"""Desk-scale verification of density theorems for sections with regular
divisor: exact finite-field and Galois-ring arithmetic, truncated zeta
values with explicit error bounds, mod-p^2 point classification, and
seeded density experiments over coefficient boxes."""

__version__ = "0.1.0"

from .ffield import GF, GaloisRing, find_irreducible, is_prime        # noqa: F401
from .projgeom import (HomogeneousForm, ProjectiveScheme, ClosedPoint,  # noqa: F401
                       monomial_basis, parse_form, load_scheme)
from .zetas import (PointCountTable, closed_point_counts, c0_estimate,  # noqa: F401
                    local_zeta_inverse, global_zeta_inverse,
                    verify_section_bounds, projective_counts)
from .fiberlab import (SectionModP2, classify_point, classify_point_detail,  # noqa: F401
                       small_degree_product, restriction_surjectivity,
                       fiber_density_exhaustive, fiber_density_mc,
                       singular_at_point_proportion, medium_degree_tail_bound,
                       DensityEstimate)
from .arithlab import (MonicPoly, IntegerSection, discriminant,   # noqa: F401
                       dedekind_p_maximal, maximality_scan, height_le,
                       homogenize_monic, equidistribution_audit,
                       multi_fiber_experiment, bsw_experiment, restrict_mod)

"""gpdkit: finite discrete groupoids, bundles of groups, Neumann's
2-generated groups on finite prefixes, and re-checkable certificates."""

from .certificates import Certificate
from .constructions import (BundleAction, FiniteAction, atomic_transformation_model,
                            canonical_shift_action, neumann_pipeline, orbit_indexed_bundle,
                            relation_groupoid, semidirect, theta_from_basis,
                            transformation_groupoid, validate_action, verify_isomorphism)
from .errors import GpdkitError
from .groupoid import (EquivRelation, FiniteGroupoid, components, global_bisection_basis,
                       icc_check, isotropy, orbit_relation, validate)
from .groups import (FinPermGroup, GroupBundle, GroupHom, conjugacy_growth_probe,
                     direct_sum_bundle, group_isomorphic, wreath_product)
from .isocheck import (fiber_distinctness_certificate, genuineness_ingredients,
                       groupoid_isomorphic, is_transformation_groupoid, recheck)
from .neumann import (NeumannFiber, OddSeqPrefix, alternating_invariant, distinguish,
                      word_apply)

__version__ = "0.1.0"

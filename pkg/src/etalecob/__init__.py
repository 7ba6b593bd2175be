"""Exact computations behind étale cobordism: finite simplicial sets, their
cochain cohomology, Eilenberg-MacLane objects, profinite group cohomology and
an Atiyah-Hirzebruch spectral sequence engine over a catalog of étale types."""

from .ahss import AbutmentReport, CollapseCertificate, SSPage, analyze_differentials, assemble_abutment, build_e2, run_ahss
from .catalog import (CatalogEntry, FreeModulePresentation, catalog, chern_classes, etale_theory,
                      projective_bundle_module, thom_class)
from .cochains import (CohomologyTable, GroupHom, cohomology, induced_map, les_check, no_ell_torsion,
                       relative_cohomology, tower_cohomology)
from .coefficients import GradedCoefficients, mu_rank, partition_count
from .em import build_K, build_L, differential_map, representability_check
from .errors import BudgetExceeded, CertificateError, ComplexError, EtalecobError, ParameterError, StructuralError
from .finab import FinAb
from .groups import FiniteGroup, MetacyclicGroup, bar_cohomology, local_field_cohomology, profinite_cohomology
from .simplicial import FinSimpSet, SimplicialMap, Tower, moore_space, point, product, smash, sphere, standard_simplex
from .snf import integer_snf, local_snf, smith_normal_form

__version__ = "0.1.0"

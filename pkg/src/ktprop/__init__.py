"""Exact Khovanskii-Teissier inequalities and the proportionality criterion.

Models of nef classes: products of projective spaces and intersection
tables (:mod:`ktprop.intersection`), rational polytopes with mixed volumes
(:mod:`ktprop.polytope`).  :mod:`ktprop.analysis` decides the equality
cases, :mod:`ktprop.hodge` holds the pointwise matrix calculus and exact
Hodge-Riemann signatures.
"""

__version__ = "0.1.0"

from .analysis import (
    EquivalenceReport,
    InequalityReport,
    PolytopeModel,
    check_bm_superadditivity,
    check_inequalities,
    equivalence_report,
    power_functional,
    power_map_injectivity_scan,
    proportionality_check,
)
from .errors import ContractError, DegenerateError, InequalityViolation, KTError, PreconditionError
from .hodge import (
    HermitianForm,
    adjugate,
    amgm_bound,
    check_power_det_identity,
    discriminant_inequality,
    gram_signature,
    recover_from_adjugate,
)
from .intersection import (
    ClassVector,
    IntersectionOracle,
    KTSequence,
    MultiProjModel,
    TableModel,
    TableOracle,
    cone_membership,
    eval_product,
    kt_sequence,
    make_multiproj_oracle,
)
from .polytope import (
    HomothetyWitness,
    Polytope,
    SurfaceMeasure,
    homothety_detect,
    minkowski_sum,
    mixed_volume_polarization,
    mixed_volume_sequence,
    surface_area_measure,
    volume,
)

"""Two-database symmetric private information retrieval via CDS/CDMS.

Build SPIR schemes from colored bipartite graphs and modular condition
tables, and verify reliability, user privacy and database privacy exactly
by exhaustive enumeration.
"""
from .cdms import (
    CdmsInstance,
    ConditionTable,
    check_security,
    check_validity,
    conditions_from_scheme,
    modular_conditions,
    spir_from_cdms,
)
from .constructions import (
    CANONICAL_NAMES,
    canonical_conditions,
    canonical_scheme,
    double_scheme,
    region_points,
    repeat_scheme,
)
from .ensemble import (
    JointDistribution,
    distributions_equal,
    entropy_bits,
    is_deterministic_given,
    is_independent,
    marginal,
)
from .field import FieldElement, PrimeModulus, eval_affine, ff_add, ff_mul
from .graph import (
    ColoredBipartiteGraph,
    color_isomorphic,
    export_dot,
    graph_from_scheme,
    validate_regularity,
)
from .scheme import (
    AffineAnswerSpec,
    MessageSpec,
    QueryStrategy,
    Scheme,
    download_cost,
    emit_scheme,
    evaluate_answers,
    parse_affine,
    parse_scheme,
    upload_cost,
)
from .verifier import (
    VerificationReport,
    build_experiment,
    check_database_privacy,
    check_reliability,
    check_user_privacy,
    emit_report,
    format_report,
    full_report,
)

__version__ = "0.1.0"

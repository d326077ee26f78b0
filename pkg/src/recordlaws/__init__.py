"""Upper record values of iid sequences: sampling, exact laws, limit transforms
and goodness-of-fit checks."""
from .catalog import (
    CATALOG_IDS,
    CatalogError,
    DistributionSpec,
    aux_s,
    aux_s_exponent,
    cdf,
    check_regular_variation,
    cumulative_hazard,
    default_catalog,
    estimate_s_pi_variation,
    exponent_quantile,
    make_dist,
    parse_dist,
    quantile,
)
from .diagnostics import HypothesisReport, check_gb_paths, check_ha_mc, check_hb, full_report
from .gof import GofReport, exact_vs_limit_ks, ks_one_sample, ks_two_sample, run_cell, run_experiment
from .kernels import BACKEND
from .limits import LimitLaw, limit_cdf, lognormal, normal, normal_tail_quantile_expansion, sample_limit
from .records import (
    RecordStreamResult,
    SampleBatch,
    exact_record_cdf,
    exact_record_sf,
    extract_records_naive,
    naive_batch,
    sample_gamma_sum,
    sample_records_representation,
)
from .transforms import (
    TransformPlan,
    TransformStrategy,
    apply_transform,
    limit_law_of,
    make_plan,
    plan_for,
    transform_exponents,
)

__version__ = "0.1.0"

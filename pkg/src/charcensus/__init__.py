"""Quadratic character sums S(F) = sum_x chi(F(x)) over square-free monic
polynomial families: exact censuses, reproducible Monte Carlo runs, and
exact-rational model comparisons."""

__version__ = "0.1.0"

from .errors import (
    CensusBudgetExceeded,
    CharCensusError,
    DivisionByZero,
    EvenCharacteristic,
    FieldTooLarge,
    HistogramOverflow,
    InvalidMode,
    ModelMismatch,
    NotPrime,
    SamplingStalled,
)
from .fields import FieldSpec, build_field
from .polyring import (
    MonicPoly,
    ValueConstraint,
    count_squarefree,
    count_with_values,
    derivative,
    enumerate_monic,
    evaluate,
    is_squarefree,
    sample_squarefree,
)
from .charsum import (
    census_char_sums,
    census_point_values,
    census_value_patterns,
    char_sum,
    make_shards,
    merge_histograms,
    point_count,
)
from .models import (
    TrinomialModel,
    build_trinomial,
    error_bound_moment,
    error_bound_theorem1,
    error_bound_values,
    gaussian_moment,
    lemma_nonzero_main_term,
    model_moment,
    pattern_probability,
    prop_main_term,
    zeta_series_check,
)
from .experiments import (
    ComparisonReport,
    EmpiricalDistribution,
    MomentReport,
    check_lemma_surjectivity,
    check_sign_patterns,
    check_value_probabilities,
    compare_to_trinomial,
    run_distribution,
    run_moments,
)

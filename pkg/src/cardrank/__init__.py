"""Expected-perceived-utility ranking and simulation for heterogeneous
search result pages."""

from .calibration import (
    CalibrationModel,
    RelevanceCalibrator,
    fit_relevance_model,
    logistic_map,
    predict_p_rel,
    z_normalize,
)
from .cards import (
    Action,
    AnnotationRecord,
    CardProfile,
    CardType,
    DEFAULT_CARD_HEIGHTS,
    RankedCard,
    RankedList,
    ResultItem,
    SerpLayout,
    ValidationError,
    card_height,
    validate_profile,
)
from .epu import (
    ActionOutcome,
    card_outcomes,
    discounted_utility,
    epu_card,
    epu_list,
    expected_benefit,
    expected_cost,
)
from .estimation import (
    CardProfileEstimator,
    EstimationError,
    build_profiles,
    estimate_action_probabilities,
    estimate_action_times,
    estimate_reading_time,
)
from .formats import (
    ParseError,
    QrelEntry,
    RunEntry,
    default_profiles,
    parse_annotation_log,
    parse_profiles,
    parse_qrels,
    parse_run_file,
)
from .metrics import (
    MetricConfig,
    decay,
    dcg_of_page,
    expected_card_time,
    one_way_anova,
    rbo,
    summarize,
    tbg_of_page,
)
from .retrieval import Index, bm25_rank, build_index, tokenize
from .simulation import (
    COMBOS,
    Combo,
    ComboSummary,
    ExperimentReport,
    TrialResult,
    assign_cards,
    baseline_ranking,
    layout_page,
    rerank_by_epu,
    run_experiment,
    run_trial,
)

__version__ = "0.1.0"

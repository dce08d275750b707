"""mcqgeval: assessment toolkit for multiple-choice question generation.

Computes grammar, answerability, diversity and complexity scores for
generated question sets, validates and filters them against ensemble
predictions from external models, reproduces the classification baselines,
and simulates how best-of-J reference scoring scales with J.
"""

from .corpus import (
    Difficulty,
    GeneratedOutput,
    MCQExample,
    ParseStatus,
    Split,
    SplitStats,
    join_generated,
    load_dataset,
    load_generated,
    parse_generated,
    split_stats,
    unique_option_count,
)
from .errors import ToolkitError
from .filtering import (
    AgreementMode,
    FilterOutcome,
    FilterResult,
    check_four_options,
    ensemble_first_agreement,
    export_augmentation,
    filter_set,
    to_examples,
)
from .metrics import (
    BITS,
    NATS,
    DiversityScheme,
    MetricScores,
    QuestionType,
    StandaloneClass,
    accuracy,
    classify_question_type,
    classify_standalone,
    complexity_score,
    diversity,
    entropy,
    expected_entropy,
    grammar_rate,
    macro_f1,
    mean_complexity,
    naive_grammar_errors,
    unanswerability,
)
from .predictions import (
    EnsemblePrediction,
    PredictionSet,
    Purpose,
    load_predictions,
    mean_distribution,
    write_predictions,
)
from .refsim import (
    LinearityReport,
    SimPosterior,
    SimResult,
    conditional_entropy,
    exact_match_closed_form,
    exact_overlap_expectation,
    linearity_check,
    overlap_score,
    simulate_exact_match,
    simulate_overlap,
)
from .vocab import (
    ComplexityThresholds,
    classify_by_threshold,
    load_lexicon,
    tune_thresholds,
    vocab_score,
)

__version__ = "0.1.0"

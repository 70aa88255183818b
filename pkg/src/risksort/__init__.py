"""Outranking-based sorting of alternatives into ordered risk categories,
with Monte Carlo acceptability analysis, card-based weight elicitation and
business-plan preprocessing."""

from .model import (
    GAIN,
    COST,
    Alternative,
    ConfigurationError,
    CriterionSpec,
    Evaluation,
    InsufficientDataError,
    LambdaSpec,
    ProfileScheme,
    Project,
    UnsupportedInputError,
    ValidationReport,
    Violation,
    flip_criterion_direction,
    validate,
    validate_project,
)
from .outranking import (
    DEFAULT_RULE,
    RULE_OPTIMISTIC,
    RULE_PESSIMISTIC,
    RULE_PESSIMISTIC_STRICT,
    RULES,
    BreakpointTable,
    LambdaInterval,
    OutrankingScores,
    assign,
    breakpoint_diagnostics,
    concordance,
    credibility,
    lambda_breakpoints,
    partial_concordance,
    partial_discordance,
    score_alternative,
)
from .simos import CardDeck, Preorder, SimosResult, display_value, preorder_check, simos_resolve
from .smaa import (
    AcceptabilityReport,
    AcceptabilityRow,
    RunConfig,
    WeightSampler,
    error_rates,
    exact_acceptability,
    interval_weights_from_dms,
    run_smaa,
    sample_evaluation,
    sample_weights,
)
from .finance import (
    CashFlowSeries,
    ScenarioSpec,
    SectorRatioSample,
    apply_scenario,
    npv,
    profiles_from_quartiles,
    quartiles,
)
from .project_io import (
    DecisionMaker,
    ProjectFile,
    ProjectValidationError,
    SchemaError,
    load_project,
    read_report,
    save_project,
    write_report,
)

__version__ = "0.1.0"

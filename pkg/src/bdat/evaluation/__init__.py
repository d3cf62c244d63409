from bdat.evaluation.benchmark import (
    TABLE_HEADER,
    Benchmark,
    Histograms,
    Rates,
    ScoreRow,
    ScoreTable,
    decision_rates,
    desk_spec,
    enroll_dataset,
    format_table,
    genuine_imposter_histograms,
    stage_score_table,
)
from bdat.evaluation.security import (
    PRESETS,
    SecurityReport,
    StageSecurity,
    brute_force_bits,
    security_report,
)
from bdat.evaluation.timing import StageStats, TimingReport, timing_report

__all__ = [
    "PRESETS", "TABLE_HEADER", "Benchmark", "Histograms", "Rates", "ScoreRow", "ScoreTable",
    "SecurityReport", "StageSecurity", "StageStats", "TimingReport", "brute_force_bits",
    "decision_rates", "desk_spec", "enroll_dataset", "format_table", "genuine_imposter_histograms",
    "security_report", "stage_score_table", "timing_report",
]

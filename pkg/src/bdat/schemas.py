"""JSON Schemas (draft 2020-12) for every JSON document the package emits.

Each document carries a ``schema`` field naming its schema and version.
"""

_number_or_null = {"type": ["number", "null"]}

_stats = {
    "type": "object",
    "required": ["median", "spread", "samples"],
    "properties": {
        "median": {"type": "number", "minimum": 0},
        "spread": _number_or_null,
        "samples": {"type": "integer", "minimum": 1},
    },
}

_seeds = {
    "type": "object",
    "required": ["projection", "targets", "commitment"],
    "properties": {k: {"type": "integer", "minimum": 0} for k in ("projection", "targets", "commitment")},
}

ENROLL = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "user", "record_file", "n_total", "converged", "epochs_run",
                 "bit_errors", "seeds", "warnings"],
    "properties": {
        "schema": {"const": "bdat.enroll/1"},
        "user": {"type": "string"},
        "record_file": {"type": "string"},
        "n_total": {"type": "integer", "minimum": 1},
        "converged": {"type": "boolean"},
        "epochs_run": {"type": "integer", "minimum": 0},
        "bit_errors": {"type": "integer", "minimum": 0},
        "seeds": _seeds,
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}

VERIFY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "user", "decision", "errors_corrected", "timings"],
    "properties": {
        "schema": {"const": "bdat.verify/1"},
        "user": {"type": "string"},
        "decision": {"enum": ["ACCEPT", "REJECT"]},
        "errors_corrected": {"type": "array", "items": {"type": ["integer", "null"]}},
        "timings": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
    },
}

SECURITY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "source", "stages"],
    "properties": {
        "schema": {"const": "bdat.security/1"},
        "source": {"type": "string"},
        "stages": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stage", "kc", "brute_force_bits", "brute_force_rating",
                             "smart_attack_rating"],
                "properties": {
                    "stage": {"type": "string"},
                    "kc": {"type": ["integer", "null"], "minimum": 1},
                    "brute_force_bits": {"type": ["integer", "null"], "minimum": 0},
                    "brute_force_rating": {"enum": ["Low", "Medium", "High", None]},
                    "smart_attack_rating": {"enum": ["Low", "Medium", "High", None]},
                },
            },
        },
    },
}

SCORE_TABLE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "score_scale", "n_total", "rows", "summary"],
    "properties": {
        "schema": {"const": "bdat.score_table/1"},
        "score_scale": {"type": "integer", "minimum": 1},
        "n_total": {"type": "integer", "minimum": 1},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["probe_id", "feature_score", "cancelable_score", "binary_score",
                             "accepted", "errors_corrected"],
                "properties": {
                    "probe_id": {"type": "string"},
                    "feature_score": {"type": "integer", "minimum": 0},
                    "cancelable_score": {"type": "integer", "minimum": 0},
                    "binary_score": {"type": "integer", "minimum": 0},
                    "accepted": {"type": "boolean"},
                    "errors_corrected": {"type": "array", "items": {"type": ["integer", "null"]}},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["feature", "cancelable", "binary", "accept_rate", "binary_beats_cancelable"],
        },
    },
}

HISTOGRAMS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "n_total", "bin_width", "genuine", "imposter"],
    "properties": {
        "schema": {"const": "bdat.histograms/1"},
        "n_total": {"type": "integer", "minimum": 1},
        "bin_width": {"const": 1},
        "genuine": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "imposter": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

TIMING = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "repetitions", "enroll", "verify", "enroll_total", "verify_total",
                 "enroll_stage_sum", "verify_stage_sum"],
    "properties": {
        "schema": {"const": "bdat.timing/1"},
        "repetitions": {"type": "integer", "minimum": 1},
        "enroll": {"type": "object", "additionalProperties": _stats},
        "verify": {"type": "object", "additionalProperties": _stats},
        "enroll_total": _stats,
        "verify_total": _stats,
        "enroll_stage_sum": _stats,
        "verify_stage_sum": _stats,
    },
}

BENCH = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "spec", "config", "genuine_accept_rate", "imposter_accept_rate",
                 "files"],
    "properties": {
        "schema": {"const": "bdat.bench/1"},
        "spec": {"type": "object"},
        "config": {"type": "object"},
        "genuine_accept_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "imposter_accept_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "files": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

BY_NAME = {
    "bdat.enroll/1": ENROLL,
    "bdat.verify/1": VERIFY,
    "bdat.security/1": SECURITY,
    "bdat.score_table/1": SCORE_TABLE,
    "bdat.histograms/1": HISTOGRAMS,
    "bdat.timing/1": TIMING,
    "bdat.bench/1": BENCH,
}

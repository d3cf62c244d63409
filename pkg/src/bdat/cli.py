"""Command-line front end.

Exit codes: 0 success or ACCEPT, 1 REJECT, 2 domain error (duplicate or
unknown user, exhausted target registry), 3 input or configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import asdict
from pathlib import Path

from bdat.evaluation import (
    decision_rates,
    enroll_dataset,
    genuine_imposter_histograms,
    security_report,
    stage_score_table,
    timing_report,
)
from bdat.pipeline import (
    CapacityError,
    DuplicateUserError,
    Pipeline,
    RecordFormatError,
    Seeds,
    StageConfig,
    UnknownUserError,
)
from bdat.vectors import FeatureFormatError, SynthSpec, load_features, synth_classes

EXIT_OK, EXIT_REJECT, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2, 3
STORE_ENV = "BDAT_STORE"
DEFAULT_STORE = "bdat-store"


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _store_root(args) -> Path:
    return Path(args.store or os.environ.get(STORE_ENV) or DEFAULT_STORE)


def _config(args) -> StageConfig:
    if not args.config:
        return StageConfig()
    try:
        return StageConfig.from_file(args.config)
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"bad config file {args.config}: {exc}") from None


def _seeds(args) -> tuple[Seeds, bool]:
    if args.seed is not None:
        return Seeds.from_master(args.seed), False
    return Seeds.fresh(), True


def _created_at() -> int | None:
    value = os.environ.get("SOURCE_DATE_EPOCH")
    return int(value) if value else None


def _load(path, fmt):
    try:
        return load_features(path, fmt)
    except (OSError, FeatureFormatError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _training(args) -> list:
    vectors = _load(args.features, args.input_format)
    labels = {v.label for v in vectors}
    if len(labels) > 1:
        raise InputError(f"{args.features}: training vectors carry several labels {sorted(labels)}")
    return vectors


def _enrollment_summary(args, pipe: Pipeline, user: str, result, fresh: bool) -> int:
    model = result.record.model
    for note in result.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if fresh:
        print(f"seeds used: {asdict(result.seeds)}", file=sys.stderr)
    payload = {
        "schema": "bdat.enroll/1",
        "user": user,
        "record_file": str(pipe.store.record_path(user)),
        "n_total": pipe.config.n_total,
        "converged": model.converged,
        "epochs_run": model.epochs_run,
        "bit_errors": model.bit_errors,
        "seeds": asdict(result.seeds),
        "warnings": result.warnings,
    }
    state = "converged" if model.converged else f"NOT converged ({model.bit_errors} bit errors)"
    verb = {"enroll": "enrolled", "revoke": "revoked"}[args.command]
    _emit(args, payload, f"{verb} {user}: {pipe.config.n_total}-bit template, "
                         f"model {state} after {model.epochs_run} epochs")
    return EXIT_OK


def cmd_enroll(args) -> int:
    pipe = Pipeline(_store_root(args), _config(args))
    seeds, fresh = _seeds(args)
    result = pipe.enroll(args.user, _training(args), seeds, overwrite=args.overwrite,
                         created_at=_created_at())
    return _enrollment_summary(args, pipe, args.user, result, fresh)


def cmd_revoke(args) -> int:
    pipe = Pipeline(_store_root(args), _config(args))
    seeds, fresh = _seeds(args)
    result = pipe.revoke(args.user, _training(args), seeds, created_at=_created_at())
    return _enrollment_summary(args, pipe, args.user, result, fresh)


def cmd_verify(args) -> int:
    pipe = Pipeline(_store_root(args))
    queries = _load(args.query, args.input_format)
    if not 0 <= args.row < len(queries):
        raise InputError(f"{args.query} has {len(queries)} vectors, no row {args.row}")
    try:
        result = pipe.verify(args.user, queries[args.row].values)
    except ValueError as exc:
        if isinstance(exc, RecordFormatError):
            raise
        raise InputError(str(exc)) from None
    decision = "ACCEPT" if result.accepted else "REJECT"
    payload = {
        "schema": "bdat.verify/1",
        "user": args.user,
        "decision": decision,
        "errors_corrected": result.errors_corrected,
        "timings": result.timings,
    }
    _emit(args, payload, decision)
    return EXIT_OK if result.accepted else EXIT_REJECT


def cmd_bench(args) -> int:
    try:
        spec = SynthSpec(seed=args.seed, num_classes=args.classes,
                         samples_per_class=args.samples, dim=args.dim,
                         class_center_scale=args.center_scale, within_sigma=args.within_sigma)
        config = _config(args)
        if args.dim != config.d:
            config = StageConfig(**{**config.to_dict(), "d": args.dim})
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            dataset = synth_classes(spec)
    except ValueError as exc:
        raise InputError(f"invalid benchmark spec: {exc}") from None
    if args.samples < 2:
        raise InputError("invalid benchmark spec: need at least 2 samples per class")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bench = enroll_dataset(dataset, config, seed=args.seed)
    rates = decision_rates(bench)
    table = stage_score_table(bench)
    hist = genuine_imposter_histograms(dataset, config, seed=args.seed)
    files = {
        "score_table": out / "score_table.json",
        "score_table_text": out / "score_table.txt",
        "histograms": out / "histograms.json",
        "histograms_csv": out / "histograms.csv",
    }
    files["score_table"].write_text(table.to_json() + "\n", encoding="utf-8")
    files["score_table_text"].write_text(table.render(), encoding="utf-8")
    files["histograms"].write_text(hist.to_json() + "\n", encoding="utf-8")
    files["histograms_csv"].write_text(hist.to_csv(), encoding="utf-8")
    if args.repetitions > 0:
        timing = timing_report(dataset, config, args.repetitions, seed=args.seed)
        files["timing"] = out / "timing.json"
        files["timing"].write_text(timing.to_json() + "\n", encoding="utf-8")

    summary = {
        "schema": "bdat.bench/1",
        "spec": asdict(spec),
        "config": config.to_dict(),
        "genuine_accept_rate": rates.genuine_accept_rate,
        "imposter_accept_rate": rates.imposter_accept_rate,
        "files": {k: str(v) for k, v in files.items()},
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                      encoding="utf-8")
    _emit(args, summary, table.render()
          + f"genuine accept rate {rates.genuine_accept_rate:.4f}, "
          f"imposter accept rate {rates.imposter_accept_rate:.4f}\nreports in {out}\n")
    return EXIT_OK


def _parse_kc(items: list[str]) -> dict[str, int]:
    lengths = {}
    for i, item in enumerate(items):
        name, sep, value = item.rpartition("=")
        name = name if sep else ("custom" if len(items) == 1 else f"stage {i + 1}")
        try:
            lengths[name] = int(value)
        except ValueError:
            raise InputError(f"bad --kc value {item!r}") from None
    return lengths


def cmd_security(args) -> int:
    try:
        if args.kc:
            report = security_report(_parse_kc(args.kc))
        elif args.preset:
            report = security_report(args.preset)
        else:
            report = security_report(_config(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, report.to_dict(), report.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bdat", description=__doc__.splitlines()[0])
    p.add_argument("--store", help=f"template store directory (env {STORE_ENV}, default ./{DEFAULT_STORE})")
    p.add_argument("--config", help="JSON file with StageConfig fields")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def feature_args(sp, name):
        sp.add_argument("user")
        sp.add_argument(name)
        sp.add_argument("--input-format", choices=("csv", "packed"), default="csv")

    sp = sub.add_parser("enroll", help="enroll a user from a feature file")
    feature_args(sp, "features")
    sp.add_argument("--seed", type=int, help="derive all randomness from this seed (test mode)")
    sp.add_argument("--overwrite", action="store_true")
    sp.set_defaults(func=cmd_enroll)

    sp = sub.add_parser("verify", help="verify one query vector against a user")
    feature_args(sp, "query")
    sp.add_argument("--row", type=int, default=0, help="which vector of the query file (default 0)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("revoke", help="reissue a user's template under fresh randomness")
    feature_args(sp, "features")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_revoke)

    sp = sub.add_parser("bench", help="run the synthetic evaluation and write reports")
    sp.add_argument("--classes", type=int, default=10)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--dim", type=int, default=128)
    sp.add_argument("--center-scale", type=float, default=1.0)
    sp.add_argument("--within-sigma", type=float, default=0.25)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repetitions", type=int, default=3, help="timing repetitions; 0 skips timing")
    sp.add_argument("--out", default="bench-out")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("security", help="brute-force cost and attack ratings per stage")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--preset", help="named preset, e.g. paper-novel")
    g.add_argument("--kc", action="append", metavar="[STAGE=]KC",
                   help="template length of a stage; repeatable")
    sp.set_defaults(func=cmd_security)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (DuplicateUserError, UnknownUserError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, RecordFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end.

Subcommands: train, classify, suggest, evaluate, import-tree, export-tree,
report-keyvars. Defaults mirror the published parameterization (degree 3,
prevalence 0.70, homogeneity 1.0). A JSON file named by $LADRATING_CONFIG
can override the defaults; explicit flags win over both.

Exit codes: 0 ok, 2 usage, 3 parse/data error, 4 contradiction,
5 coverage failure, 6 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import cascade as cascade_mod
from .cascade import (
    CascadeModel,
    Provenance,
    export_decision_tree,
    import_decision_tree,
    key_variables,
    suggest_rating,
    train_cascade,
)
from .data import (
    DEFAULT_SCALE,
    FALLBACK_TO_LAST,
    UNCLASSIFIED_POLICY,
    CountryRecord,
    RatingScale,
    load_dataset,
    split_dataset,
)
from .errors import (
    ContradictionError,
    CoverageError,
    DataFormatError,
    DecisionTreeParseError,
    LadError,
)
from .evaluate import evaluate, render_report
from .patterns import MiningConfig

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_CONTRADICTION = 4
EXIT_COVERAGE = 5
EXIT_IO = 6

CONFIG_ENV = "LADRATING_CONFIG"


def _env_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _scale(fallback: str) -> RatingScale:
    return RatingScale(DEFAULT_SCALE.classes, fallback_policy=fallback)


def _mining_config(args) -> MiningConfig:
    schedule = tuple(
        float(x) for x in args.relaxation.split(",") if x.strip() != ""
    )
    return MiningConfig(
        max_degree=args.degree,
        min_prevalence=args.prevalence,
        min_homogeneity=args.homogeneity,
        dnf_coverage_target=args.coverage_target,
        relaxation_schedule=schedule,
    )


def _write(path: Path, content: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content)


def _write_bundle(out: Path, model: CascadeModel, fallback: str):
    _write(out.with_suffix(".tree.txt"), export_decision_tree(model))
    prov = {
        "tool_version": cascade_mod.TOOL_VERSION,
        "year": model.year,
        "fallback_policy": fallback,
    }
    if model.provenance is not None:
        prov["dataset_fingerprint"] = model.provenance.dataset_fingerprint
        prov["config"] = asdict(model.provenance.config)
    else:
        prov["external"] = True
    _write(out.with_suffix(".provenance.json"), json.dumps(prov, sort_keys=True, indent=2) + "\n")


def _load_model(args) -> CascadeModel:
    path = Path(args.model)
    text = path.read_text()
    year = getattr(args, "year", 0) or 0
    fallback = getattr(args, "fallback", FALLBACK_TO_LAST)
    sidecar = path.with_suffix("").with_suffix(".provenance.json")
    if path.name.endswith(".tree.txt") and sidecar.exists():
        prov = json.loads(sidecar.read_text())
        year = year or prov.get("year", 0)
        fallback = prov.get("fallback_policy", fallback)
    return import_decision_tree(
        text, _scale(fallback), year, strict=not getattr(args, "lenient", False)
    )


def _parse_country_values(spec: str) -> CountryRecord:
    values = {}
    for part in spec.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise DataFormatError(f"bad CODE=value pair {part!r}")
        code, raw = part.split("=", 1)
        values[code.strip()] = float(raw)
    return CountryRecord("cli", 0, values)


def _records_to_classify(args):
    if args.country_values:
        return [_parse_country_values(args.country_values)]
    dataset = load_dataset(Path(args.data).read_text(), _scale(args.fallback))
    return list(dataset.records)


def cmd_train(args) -> int:
    config = _mining_config(args)
    scale = _scale(args.fallback)
    dataset = load_dataset(Path(args.data).read_text(), scale)
    if args.split_fraction is not None:
        dataset = split_dataset(dataset, args.split_fraction, args.seed)
    model = train_cascade(dataset, config, year=args.year)
    if args.require_full_coverage and any(s.uncovered for s in model.stages):
        print("coverage failure: some stages ship partial", file=sys.stderr)
        for note in model.notes:
            print("  " + note, file=sys.stderr)
        return EXIT_COVERAGE
    out = Path(args.out)
    _write_bundle(out, model, args.fallback)
    _write(out.with_suffix(".train.log"), "".join(n + "\n" for n in model.notes))
    print(f"wrote {out.with_suffix('.tree.txt')}")
    return EXIT_OK


def _classify_like(args, suggest: bool) -> int:
    model = _load_model(args)
    lines = []
    for rec in _records_to_classify(args):
        if suggest:
            rating = suggest_rating(model, rec)
            kind = "suggested"
        else:
            rating = cascade_mod.classify(model, rec)
            kind = "classified"
        lines.append(f"{rec.country_id},{rec.year},{kind},{rating or 'UNCLASSIFIED'}")
    output = "\n".join(lines) + "\n"
    if args.out:
        _write(Path(args.out), output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def cmd_classify(args) -> int:
    return _classify_like(args, suggest=False)


def cmd_suggest(args) -> int:
    return _classify_like(args, suggest=True)


def cmd_evaluate(args) -> int:
    model = _load_model(args)
    dataset = load_dataset(Path(args.data).read_text(), model.scale)
    if args.split_fraction is not None:
        dataset = split_dataset(dataset, args.split_fraction, args.seed)
    if not dataset.labeled_records:
        print("error: no labeled records", file=sys.stderr)
        return EXIT_PARSE
    report = evaluate(model, dataset)
    text = render_report(report)
    machine = json.dumps(
        {
            "match_ratio_overall": report.match_ratio_overall,
            "match_ratio_train": report.match_ratio_train,
            "match_ratio_test": report.match_ratio_test,
            "model_better_share": report.model_better_share,
            "model_worse_share": report.model_worse_share,
            "unclassified_count": report.unclassified_count,
            "mismatches": [
                {
                    "country": m.country_id,
                    "model": m.model_rating,
                    "observed": m.observed_rating,
                    "signed_distance": m.signed_distance,
                    "direction": m.direction,
                }
                for m in report.mismatches
            ],
        },
        sort_keys=True,
        indent=2,
    )
    if args.out:
        out = Path(args.out)
        _write(out.with_suffix(".report.txt"), text)
        _write(out.with_suffix(".report.json"), machine + "\n")
        print(f"wrote {out.with_suffix('.report.txt')}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_import_tree(args) -> int:
    text = Path(args.file).read_text()
    model = import_decision_tree(
        text, _scale(args.fallback), args.year, strict=not args.lenient
    )
    for note in model.notes:
        print("repair: " + note, file=sys.stderr)
    _write_bundle(Path(args.out), model, args.fallback)
    print(f"wrote {Path(args.out).with_suffix('.tree.txt')}")
    return EXIT_OK


def cmd_export_tree(args) -> int:
    model = _load_model(args)
    output = export_decision_tree(model)
    if args.out:
        _write(Path(args.out), output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def cmd_report_keyvars(args) -> int:
    model = _load_model(args)
    report = key_variables(model)
    lines = ["group\tindicator\tcount\tshare"]
    for group, usage in report.groups.items():
        for code, (count, share) in usage.items():
            lines.append(f"{group}\t{code}\t{count}\t{share:.3f}")
    output = "\n".join(lines) + "\n"
    if args.out:
        _write(Path(args.out), output)
    else:
        sys.stdout.write(output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    env = _env_defaults()
    parser = argparse.ArgumentParser(
        prog="ladrating",
        description="Rule-based sovereign rating models: train, apply, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mining_flags(p):
        p.add_argument("--degree", type=int, default=env.get("degree", 3),
                       help="max literals per pattern (default 3)")
        p.add_argument("--prevalence", type=float, default=env.get("prevalence", 0.70),
                       help="per-pattern positive coverage floor (default 0.70)")
        p.add_argument("--homogeneity", type=float, default=env.get("homogeneity", 1.0),
                       help="purity floor for patterns (default 1.0)")
        p.add_argument("--coverage-target", type=float,
                       default=env.get("coverage_target", 1.0),
                       help="positive coverage a DNF must reach (default 1.0)")
        p.add_argument("--relaxation", default=env.get("relaxation", "0.40,0.20,0"),
                       help="prevalence fallbacks, comma separated (default 0.40,0.20,0)")

    def add_split_flags(p):
        p.add_argument("--split-fraction", type=float, default=None,
                       help="train fraction; omit to train on all labeled records")
        p.add_argument("--seed", type=int, default=0, help="split RNG seed (default 0)")

    def add_fallback_flag(p):
        p.add_argument("--fallback", choices=[FALLBACK_TO_LAST, UNCLASSIFIED_POLICY],
                       default=env.get("fallback", FALLBACK_TO_LAST),
                       help="what a record matching no stage becomes "
                            "(default fallback-to-last)")

    p = sub.add_parser("train", help="fit a cascade on labeled data")
    p.add_argument("--data", required=True, help="CSV of country-year rows")
    p.add_argument("--year", type=int, required=True, help="model vintage (metadata)")
    p.add_argument("--out", required=True, help="bundle path prefix")
    p.add_argument("--require-full-coverage", action="store_true",
                   help="fail instead of shipping partially covered stages")
    add_mining_flags(p)
    add_split_flags(p)
    add_fallback_flag(p)
    p.set_defaults(func=cmd_train)

    for name, func, helptext in (
        ("classify", cmd_classify, "rate records with a model"),
        ("suggest", cmd_suggest, "suggest ratings for unrated records"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--model", required=True, help="decision-tree text file")
        p.add_argument("--data", help="CSV of records to rate")
        p.add_argument("--country-values", help='inline record, e.g. "U=80,G=60000"')
        p.add_argument("--year", type=int, default=0)
        p.add_argument("--lenient", action="store_true",
                       help="repair known print artifacts while parsing the model")
        p.add_argument("--out", help="output path (default stdout)")
        add_fallback_flag(p)
        p.set_defaults(func=func)

    p = sub.add_parser("evaluate", help="score a model against labeled data")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--year", type=int, default=0)
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--out", help="report path prefix (default stdout)")
    add_split_flags(p)
    add_fallback_flag(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("import-tree", help="parse published tree text into a bundle")
    p.add_argument("--file", required=True)
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--out", required=True, help="bundle path prefix")
    p.add_argument("--lenient", action="store_true",
                   help="repair known print artifacts instead of rejecting them")
    add_fallback_flag(p)
    p.set_defaults(func=cmd_import_tree)

    p = sub.add_parser("export-tree", help="re-emit a model in canonical text form")
    p.add_argument("--model", required=True)
    p.add_argument("--year", type=int, default=0)
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--out", help="output path (default stdout)")
    add_fallback_flag(p)
    p.set_defaults(func=cmd_export_tree)

    p = sub.add_parser("report-keyvars", help="indicator frequency per stage group")
    p.add_argument("--model", required=True)
    p.add_argument("--year", type=int, default=0)
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--out", help="output path (default stdout)")
    add_fallback_flag(p)
    p.set_defaults(func=cmd_report_keyvars)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DecisionTreeParseError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ContradictionError as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except CoverageError as exc:
        print(f"coverage failure: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

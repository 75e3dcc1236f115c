#!/usr/bin/env python3
"""Load the four published decision trees, run a few demo classifications,
and summarize which indicators each rating group leans on."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ladrating import (  # noqa: E402
    CountryRecord,
    DEFAULT_SCALE,
    classify,
    import_decision_tree,
    key_variables,
)

TREE_DIR = Path(__file__).resolve().parents[1] / "data" / "trees"

DEMO_RECORDS = [
    CountryRecord("rich-urban", 0, {"U": 80.0, "G": 60000.0}),
    CountryRecord("mid-exporter", 0, {"G": 8000.0, "EX": 40.0, "PPP": 5.0}),
    CountryRecord("no-data", 0, {}),
]


def main() -> int:
    for year in (2012, 2013, 2014, 2015):
        text = (TREE_DIR / f"tree_{year}.txt").read_text()
        model = import_decision_tree(text, DEFAULT_SCALE, year, strict=False)
        print(f"=== {year} ===")
        for note in model.notes:
            print(f"  repair: {note}")
        for rec in DEMO_RECORDS:
            print(f"  {rec.country_id:14} -> {classify(model, rec)}")
        report = key_variables(model)
        for group, usage in report.groups.items():
            top = ", ".join(
                f"{code} {share:.0%}" for code, (_, share) in list(usage.items())[:4]
            )
            print(f"  {group:12} {top}")
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())

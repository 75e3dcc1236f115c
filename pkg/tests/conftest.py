import csv
from pathlib import Path

import pytest

from ladrating import CountryRecord, DEFAULT_SCALE, import_decision_tree

REPO_ROOT = Path(__file__).resolve().parents[1]
TREE_DIR = REPO_ROOT / "data" / "trees"
MISMATCH_CSV = REPO_ROOT / "data" / "mismatches_2012_2015.csv"

TREE_YEARS = (2012, 2013, 2014, 2015)


def tree_text(year: int) -> str:
    return (TREE_DIR / f"tree_{year}.txt").read_text()


def make_record(country: str, values: dict, rating=None, year: int = 2012) -> CountryRecord:
    return CountryRecord(country, year, values, rating)


@pytest.fixture(scope="session")
def tree_2012_model():
    return import_decision_tree(tree_text(2012), DEFAULT_SCALE, 2012, strict=False)


@pytest.fixture(scope="session")
def mismatch_rows():
    """(year, split, country, model, observed) rows of the published tables."""
    with MISMATCH_CSV.open() as fh:
        return [
            (int(r["year"]), r["split"], r["country"], r["model"], r["observed"])
            for r in csv.DictReader(fh)
        ]

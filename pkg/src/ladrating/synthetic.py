"""Synthetic rating datasets, separable at low degree by construction.

Two generators:

* `nested_dataset` — classes are bands of a single dominant indicator (G),
  so every cascade stage is expressible as one >=-literal. Extra indicators
  carry uninformative noise.
* `clustered_dataset` — each class is a union of two clusters, one keyed to
  X and one to Y, so no single conjunction with perfect homogeneity reaches
  all positives of a stage and the prevalence relaxation must kick in.

Both keep the informative indicator values inside disjoint per-class bands
with gaps, so midpoint cut-points learned on a train split generalize to a
test split from the same bands.
"""

from __future__ import annotations

import random

from .data import DEFAULT_SCALE, CountryRecord, Dataset, RatingScale

_BAND_WIDTH = 6.0
_BAND_GAP = 4.0


def _band(class_index: int, n_classes: int, rng: random.Random) -> float:
    """A value inside class `class_index`'s band; better classes sit higher."""
    base = (n_classes - class_index) * (_BAND_WIDTH + _BAND_GAP)
    return base + rng.uniform(0.0, _BAND_WIDTH)


def _class_counts(n_records: int, n_classes: int, rng: random.Random) -> list[int]:
    counts = [1] * n_classes
    for _ in range(n_records - n_classes):
        counts[rng.randrange(n_classes)] += 1
    return counts


def nested_dataset(
    seed: int,
    n_records: int = 96,
    scale: RatingScale = DEFAULT_SCALE,
) -> Dataset:
    rng = random.Random(seed)
    n_classes = len(scale)
    records = []
    i = 0
    for ci, count in enumerate(_class_counts(n_records, n_classes, rng), start=1):
        for _ in range(count):
            values = {
                "G": _band(ci, n_classes, rng) * 1000.0,
                "EX": rng.uniform(10.0, 90.0),
                "I": rng.uniform(-1.0, 12.0),
            }
            if rng.random() < 0.1:
                del values["I"]  # occasional hole in a noise indicator
            records.append(
                CountryRecord(f"country{i:03d}", 2012, values, scale.classes[ci - 1])
            )
            i += 1
    return Dataset(records=tuple(records), scale=scale)


def clustered_dataset(
    seed: int,
    n_records: int = 96,
    scale: RatingScale = DEFAULT_SCALE,
) -> Dataset:
    rng = random.Random(seed)
    n_classes = len(scale)
    records = []
    i = 0
    for ci, count in enumerate(_class_counts(n_records, n_classes, rng), start=1):
        for _ in range(count):
            band = _band(ci, n_classes, rng)
            low = rng.uniform(0.0, 1.0)
            if rng.random() < 0.5:
                values = {"G": band, "M": low}  # cluster keyed to G
            else:
                values = {"G": low, "M": band}  # cluster keyed to M
            records.append(
                CountryRecord(f"country{i:03d}", 2012, values, scale.classes[ci - 1])
            )
            i += 1
    return Dataset(records=tuple(records), scale=scale)

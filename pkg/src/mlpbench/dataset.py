"""Sampling, splitting, normalization and CSV interchange for datasets.

A dataset is 5000 points drawn uniformly over a target function's
domain, split 75/25 into train/test. Inputs are mapped affinely to
[-1, 1] per dimension using the domain bounds; targets are min-max
scaled so the training extremes land exactly on 0 and 1. Test targets
get the same affine map and may legitimately exit [0, 1].
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .functions import FunctionSpec, evaluate, get_function
from .seeds import STREAM_SAMPLE, STREAM_SPLIT, make_rng

DEFAULT_SAMPLE_COUNT = 5000
DEFAULT_TRAIN_FRACTION = 0.75

CSV_HEADER = "x1,x2,target,split"
_FILENAME_RE = re.compile(r"^f(\d+)_.*\.csv$")


class DegenerateScalingError(ValueError):
    """Training targets are constant; min-max output scaling is undefined."""


class CsvFormatError(ValueError):
    """A dataset CSV does not follow the declared schema."""


@dataclass(frozen=True)
class RawDataset:
    function_id: int
    points: np.ndarray        # (n, 2), native domain units
    targets: np.ndarray       # (n,)
    sample_seed: int


@dataclass(frozen=True)
class ScalingParams:
    input_domain: tuple[tuple[float, float], tuple[float, float]]
    out_min: float
    out_max: float

    def normalize_inputs(self, points: np.ndarray) -> np.ndarray:
        (lo1, hi1), (lo2, hi2) = self.input_domain
        lo = np.array([lo1, lo2])
        hi = np.array([hi1, hi2])
        return 2.0 * (points - lo) / (hi - lo) - 1.0

    def normalize_targets(self, y: np.ndarray) -> np.ndarray:
        return (y - self.out_min) / (self.out_max - self.out_min)

    def denormalize_targets(self, y: np.ndarray) -> np.ndarray:
        return y * (self.out_max - self.out_min) + self.out_min


@dataclass(frozen=True)
class RegressionDataset:
    function_id: int
    train_inputs: np.ndarray   # (n_train, 2) in [-1, 1]
    train_targets: np.ndarray  # (n_train,), min 0 / max 1 on the train split
    test_inputs: np.ndarray    # (n_test, 2) in [-1, 1]
    test_targets: np.ndarray   # (n_test,), same affine map as train
    scaling: ScalingParams
    sample_seed: int | None
    split_seed: int | None
    # Raw sample in original draw order plus the split index sets; kept so
    # CSV export round-trips bit-for-bit.
    raw_points: np.ndarray
    raw_targets: np.ndarray
    train_index: np.ndarray
    test_index: np.ndarray

    @property
    def n_train(self) -> int:
        return self.train_inputs.shape[0]

    @property
    def n_test(self) -> int:
        return self.test_inputs.shape[0]


def generate(spec: FunctionSpec, n: int = DEFAULT_SAMPLE_COUNT, seed: int = 0) -> RawDataset:
    """Draw ``n`` i.i.d. uniform points over the domain and label them."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    rng = make_rng(seed, STREAM_SAMPLE)
    (lo1, hi1), (lo2, hi2) = spec.domain
    points = rng.uniform([lo1, lo2], [hi1, hi2], size=(n, 2))
    targets = np.array([evaluate(spec, p) for p in points])
    return RawDataset(
        function_id=spec.id, points=points, targets=targets, sample_seed=seed
    )


def split_and_normalize(
    raw: RawDataset,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    split_seed: int = 0,
    domain: tuple[tuple[float, float], tuple[float, float]] | None = None,
) -> RegressionDataset:
    """Random 75/25 partition plus input/output normalization.

    The output map is anchored on the training targets only and then
    applied unchanged to the test targets.
    """
    if not (0.0 < train_fraction < 1.0):
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = raw.points.shape[0]
    n_train = math.ceil(train_fraction * n)
    if n_train >= n:
        raise ValueError("split leaves no test samples")
    if domain is None:
        domain = get_function(raw.function_id).domain

    rng = make_rng(split_seed, STREAM_SPLIT)
    perm = rng.permutation(n)
    train_index = np.sort(perm[:n_train])
    test_index = np.sort(perm[n_train:])

    train_raw_targets = raw.targets[train_index]
    out_min = float(train_raw_targets.min())
    out_max = float(train_raw_targets.max())
    if not (out_min < out_max):
        raise DegenerateScalingError(
            f"training targets are constant ({out_min}); cannot min-max scale"
        )

    scaling = ScalingParams(input_domain=domain, out_min=out_min, out_max=out_max)
    return RegressionDataset(
        function_id=raw.function_id,
        train_inputs=scaling.normalize_inputs(raw.points[train_index]),
        train_targets=scaling.normalize_targets(train_raw_targets),
        test_inputs=scaling.normalize_inputs(raw.points[test_index]),
        test_targets=scaling.normalize_targets(raw.targets[test_index]),
        scaling=scaling,
        sample_seed=raw.sample_seed,
        split_seed=split_seed,
        raw_points=raw.points,
        raw_targets=raw.targets,
        train_index=train_index,
        test_index=test_index,
    )


def dataset_filename(spec: FunctionSpec) -> str:
    return f"f{spec.id}_{spec.name.replace(' ', '_')}.csv"


def export_csv(ds: RegressionDataset, path: str | Path) -> Path:
    """Write the raw sample with split labels: ``x1,x2,target,split``.

    Values carry 17 significant digits so doubles round-trip exactly.
    """
    path = Path(path)
    split = np.full(ds.raw_points.shape[0], "test", dtype=object)
    split[ds.train_index] = "train"
    lines = [CSV_HEADER]
    for (x1, x2), t, s in zip(ds.raw_points, ds.raw_targets, split):
        lines.append(f"{x1:.17g},{x2:.17g},{t:.17g},{s}")
    path.write_text("\n".join(lines) + "\n")
    return path


def import_csv(path: str | Path, spec: FunctionSpec | None = None) -> RegressionDataset:
    """Rebuild a dataset from a CSV written by :func:`export_csv`.

    The function (and thus the input domain) is resolved from ``spec`` or,
    failing that, from the ``f<ID>_`` filename prefix. Normalized arrays
    are recomputed from the stored raw values, which reproduces them
    bit-for-bit; the original seeds are not stored and come back as None.
    """
    path = Path(path)
    if spec is None:
        m = _FILENAME_RE.match(path.name)
        if m is None:
            raise CsvFormatError(
                f"cannot infer function id from filename {path.name!r}; pass spec="
            )
        spec = get_function(int(m.group(1)))

    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        got = lines[0].strip() if lines else "<empty file>"
        raise CsvFormatError(f"bad header: expected {CSV_HEADER!r}, got {got!r}")

    points, targets, in_train = [], [], []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 4:
            raise CsvFormatError(f"row {row_no}: expected 4 columns, got {len(cells)}")
        row = []
        for col_no, cell in enumerate(cells[:3], start=1):
            try:
                row.append(float(cell))
            except ValueError:
                raise CsvFormatError(
                    f"row {row_no}, column {col_no}: non-numeric cell {cell!r}"
                ) from None
        flag = cells[3].strip()
        if flag not in ("train", "test"):
            raise CsvFormatError(
                f"row {row_no}, column 4: split must be train/test, got {flag!r}"
            )
        points.append(row[:2])
        targets.append(row[2])
        in_train.append(flag == "train")

    if len(points) < 2:
        raise CsvFormatError("dataset needs at least 2 rows")

    raw_points = np.array(points)
    raw_targets = np.array(targets)
    mask = np.array(in_train)
    train_index = np.flatnonzero(mask)
    test_index = np.flatnonzero(~mask)
    if train_index.size == 0 or test_index.size == 0:
        raise CsvFormatError("both train and test rows are required")

    train_raw_targets = raw_targets[train_index]
    out_min = float(train_raw_targets.min())
    out_max = float(train_raw_targets.max())
    if not (out_min < out_max):
        raise DegenerateScalingError("training targets in file are constant")

    scaling = ScalingParams(input_domain=spec.domain, out_min=out_min, out_max=out_max)
    return RegressionDataset(
        function_id=spec.id,
        train_inputs=scaling.normalize_inputs(raw_points[train_index]),
        train_targets=scaling.normalize_targets(train_raw_targets),
        test_inputs=scaling.normalize_inputs(raw_points[test_index]),
        test_targets=scaling.normalize_targets(raw_targets[test_index]),
        scaling=scaling,
        sample_seed=None,
        split_seed=None,
        raw_points=raw_points,
        raw_targets=raw_targets,
        train_index=train_index,
        test_index=test_index,
    )

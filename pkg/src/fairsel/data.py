"""Tabular ingestion, encoding, splitting, standardization, and
synthetic datasets with planted sensitive/proxy structure."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fairsel.errors import DataError

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"

# tokens treated as missing in addition to the empty string
_NA_TOKENS = {"na", "n/a", "nan", "null", "none"}


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with binary labels.

    Immutable after construction; arrays are marked read-only so a
    Dataset can be shared across threads.
    """

    features: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int32 in {0, 1}
    names: tuple
    kinds: tuple

    def __post_init__(self):
        feats = np.ascontiguousarray(self.features, dtype=np.float64)
        labs = np.asarray(self.labels, dtype=np.int32)
        if feats.ndim != 2:
            raise DataError("features must be a 2-D matrix")
        if feats.shape[0] != labs.shape[0]:
            raise DataError(
                f"row mismatch: {feats.shape[0]} feature rows vs "
                f"{labs.shape[0]} labels"
            )
        names = tuple(self.names)
        kinds = tuple(self.kinds)
        if len(names) != feats.shape[1] or len(kinds) != feats.shape[1]:
            raise DataError("names/kinds length must equal feature count")
        if len(set(names)) != len(names):
            raise DataError("feature names must be pairwise distinct")
        bad = set(np.unique(labs)) - {0, 1}
        if bad:
            raise DataError(f"labels must be 0/1, found {sorted(bad)}")
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "kinds", kinds)

    @property
    def n_rows(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    def index_of(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"unknown feature name: {name!r}") from None


@dataclass(frozen=True)
class SyntheticSpec:
    """Shape of a generated dataset with planted proxy structure."""

    n_rows: int = 4000
    n_sensitive: int = 2
    n_proxies_per_sensitive: int = 2
    proxy_correlation: float = 0.9
    n_informative: int = 5
    n_noise: int = 4
    label_signal_strength: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.proxy_correlation < 1.0:
            raise DataError("proxy_correlation must lie strictly in (0, 1)")
        counts = (self.n_sensitive, self.n_proxies_per_sensitive,
                  self.n_informative, self.n_noise)
        if any(c < 0 for c in counts):
            raise DataError("synthetic counts must be >= 0")
        if self.n_rows < 10:
            raise DataError("n_rows must be >= 10")
        if self.label_signal_strength <= 0:
            raise DataError("label_signal_strength must be > 0")
        if self.seed < 0:
            raise DataError("seed must be unsigned")


def _parse_float(cell):
    try:
        return float(cell)
    except ValueError:
        return None


def _is_missing(cell):
    return cell == "" or cell.strip().lower() in _NA_TOKENS


def load_csv(path, target, sentinel=-999.0):
    """Load a CSV into a Dataset.

    Missing numeric cells become the sentinel. Columns where every
    non-missing cell parses as a float are continuous; all others are
    ordinally encoded in first-appearance order with missing cells
    mapped to the sentinel. The target column is removed from the
    features and must contain only 0/1 values.
    """
    p = Path(path)
    if not p.exists():
        raise DataError(f"no such file: {path}")
    with p.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty CSV: {path}") from None
        rows = [row for row in reader if row]
    if target not in header:
        raise DataError(f"target column {target!r} not in header")
    if not rows:
        raise DataError(f"no data rows in {path}")
    t_col = header.index(target)

    labels = []
    for row in rows:
        val = _parse_float(row[t_col])
        if val not in (0.0, 1.0):
            raise DataError(
                f"target not binary: {row[t_col]!r} in column {target!r}"
            )
        labels.append(int(val))

    names = [h for i, h in enumerate(header) if i != t_col]
    cols = []
    kinds = []
    for i, name in enumerate(header):
        if i == t_col:
            continue
        raw = [row[i] if i < len(row) else "" for row in rows]
        parsed = [None if _is_missing(c) else _parse_float(c) for c in raw]
        numeric = all(
            v is not None for c, v in zip(raw, parsed) if not _is_missing(c)
        )
        if numeric:
            kinds.append(CONTINUOUS)
            cols.append(
                [sentinel if v is None else v for v in parsed]
            )
        else:
            kinds.append(CATEGORICAL)
            codes = {}
            col = []
            for c in raw:
                if _is_missing(c):
                    col.append(float(sentinel))
                    continue
                if c not in codes:
                    codes[c] = float(len(codes))
                col.append(codes[c])
            cols.append(col)

    features = np.array(cols, dtype=np.float64).T
    if features.size == 0:
        features = features.reshape(len(rows), 0)
    return Dataset(features, np.array(labels), tuple(names), tuple(kinds))


def write_csv(dataset, path, target="label"):
    """Write a Dataset back out as a header + rows CSV."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(dataset.names) + [target])
        for i in range(dataset.n_rows):
            row = [repr(float(v)) for v in dataset.features[i]]
            row.append(str(int(dataset.labels[i])))
            writer.writerow(row)


def split(dataset, valid_fraction, seed):
    """Stratified train/validation split, deterministic in seed.

    Validation gets floor(n * fraction) rows (at least 1, at most
    n - 1); rows of each class are shuffled and allocated
    proportionally, with at least one row of each class per side
    whenever the input has two of that class and the validation split
    can hold both.
    """
    if not 0.0 < valid_fraction < 1.0:
        raise DataError("valid_fraction must lie strictly in (0, 1)")
    n = dataset.n_rows
    if n < 2:
        raise DataError("need at least 2 rows to split")
    labels = dataset.labels
    idx0 = np.nonzero(labels == 0)[0]
    idx1 = np.nonzero(labels == 1)[0]
    if idx0.size == 0 or idx1.size == 0:
        raise DataError("class absent from input; cannot stratify")

    n_valid = min(max(int(math.floor(n * valid_fraction)), 1), n - 1)
    rng = np.random.default_rng(seed)
    idx0 = rng.permutation(idx0)
    idx1 = rng.permutation(idx1)

    n0_valid = int(math.floor(idx0.size * valid_fraction))
    n1_valid = n_valid - n0_valid
    # clamp so neither class side goes empty when avoidable
    n1_valid = min(max(n1_valid, 0), idx1.size)
    n0_valid = n_valid - n1_valid
    if n_valid >= 2:
        if n0_valid == 0 and idx0.size >= 2:
            n0_valid, n1_valid = 1, n_valid - 1
        if n1_valid == 0 and idx1.size >= 2:
            n1_valid, n0_valid = 1, n_valid - 1
    if n0_valid >= idx0.size:
        n0_valid = idx0.size - 1
        n1_valid = n_valid - n0_valid
    if n1_valid >= idx1.size:
        n1_valid = idx1.size - 1
        n0_valid = n_valid - n1_valid
    if not (0 <= n0_valid < idx0.size and 0 <= n1_valid < idx1.size):
        raise DataError("split would leave an empty class side")

    valid_idx = np.sort(np.concatenate((idx0[:n0_valid], idx1[:n1_valid])))
    train_idx = np.sort(np.concatenate((idx0[n0_valid:], idx1[n1_valid:])))

    def take(ix):
        return Dataset(dataset.features[ix], labels[ix], dataset.names,
                       dataset.kinds)

    return take(train_idx), take(valid_idx)


def standardize(dataset):
    """Center and scale every column to mean 0, population std 1.

    Zero-variance columns become all-zeros and their std is recorded
    as 1 so downstream division is safe.
    """
    feats = dataset.features
    means = feats.mean(axis=0) if feats.size else np.zeros(dataset.n_features)
    stds = feats.std(axis=0) if feats.size else np.zeros(dataset.n_features)
    stds = np.where(stds == 0.0, 1.0, stds)
    out = (feats - means) / stds
    return (
        Dataset(out, dataset.labels, dataset.names, dataset.kinds),
        means,
        stds,
    )


def standardize_with(dataset, means, stds):
    """Apply previously computed standardization statistics."""
    out = (dataset.features - means) / stds
    return Dataset(out, dataset.labels, dataset.names, dataset.kinds)


def generate_synthetic(spec):
    """Generate a dataset with planted sensitive/proxy structure.

    Sensitive columns are independent standard normals; each proxy is
    rho * sensitive + sqrt(1 - rho^2) * fresh noise. Labels are
    Bernoulli over a sigmoid of a weighted sum of the informative
    columns only, so sensitive columns carry no label signal.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_rows
    sens = rng.standard_normal((n, spec.n_sensitive))
    rho = spec.proxy_correlation
    mix = math.sqrt(1.0 - rho * rho)
    proxies = []
    for i in range(spec.n_sensitive):
        for _ in range(spec.n_proxies_per_sensitive):
            proxies.append(rho * sens[:, i] + mix * rng.standard_normal(n))
    info = rng.standard_normal((n, spec.n_informative))
    noise = rng.standard_normal((n, spec.n_noise))

    if spec.n_informative > 0:
        w = rng.standard_normal(spec.n_informative)
        w /= np.linalg.norm(w)
        logits = spec.label_signal_strength * (info @ w)
    else:
        logits = np.zeros(n)
    p = 1.0 / (1.0 + np.exp(-logits))
    labels = (rng.random(n) < p).astype(np.int32)

    blocks = [sens]
    names = [f"sens_{i}" for i in range(spec.n_sensitive)]
    if proxies:
        blocks.append(np.column_stack(proxies))
        names += [
            f"proxy_{i}_{j}"
            for i in range(spec.n_sensitive)
            for j in range(spec.n_proxies_per_sensitive)
        ]
    blocks.append(info)
    names += [f"info_{i}" for i in range(spec.n_informative)]
    blocks.append(noise)
    names += [f"noise_{i}" for i in range(spec.n_noise)]

    features = np.hstack(blocks)
    kinds = tuple(CONTINUOUS for _ in names)
    return Dataset(features, labels, tuple(names), kinds)

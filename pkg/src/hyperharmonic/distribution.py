"""Joint distributions over discrete variables and Gaussian-copula models.

Discrete distributions are stored sparsely: only outcomes with positive mass
appear, which also makes the 0*log(0) = 0 convention automatic. Continuous
data is handled through a Gaussian copula: each column is rank-transformed to
standard-normal scores and summarized by their correlation matrix, for which
joint entropies have a closed form.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import rankdata

from .errors import CapacityError, EstimationError, NumericalError, ValidationError
from .units import from_nats

Outcome = tuple[int, ...]

MASS_TOLERANCE = 1e-12

# Added to the diagonal of correlation submatrices before taking determinants,
# so rank-deficient models produce finite (if large, negative) entropies.
GAUSSIAN_DIAGONAL_REGULARIZATION = 1e-12

# Support-size guard for additive smoothing, which densifies the outcome space.
SMOOTHING_SUPPORT_CAP = 2_000_000

_LOG_TWO_PI_E = math.log(2.0 * math.pi * math.e)


def _check_subset(subset, num_variables: int) -> tuple[int, ...]:
    s = tuple(int(i) for i in subset)
    if not s:
        raise ValidationError("variable subset must be non-empty")
    if any(b <= a for a, b in zip(s, s[1:])):
        raise ValidationError(f"subset must be strictly increasing, got {s}")
    if s[0] < 0 or s[-1] >= num_variables:
        raise ValidationError(f"subset {s} out of range for {num_variables} variables")
    return s


@dataclass(frozen=True)
class DiscreteSeriesTable:
    """Aligned integer-valued samples: one column per variable."""

    variable_names: tuple[str, ...]
    columns: tuple[np.ndarray, ...]
    alphabet_sizes: tuple[int, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.variable_names)
        cols = tuple(np.asarray(c, dtype=np.int64) for c in self.columns)
        sizes = tuple(int(a) for a in self.alphabet_sizes)
        if not (len(names) == len(cols) == len(sizes)):
            raise ValidationError("names, columns and alphabet sizes must align")
        if not cols:
            raise ValidationError("table needs at least one variable")
        T = len(cols[0])
        if T < 1:
            raise ValidationError("table needs at least one sample")
        for name, col, size in zip(names, cols, sizes):
            if len(col) != T:
                raise ValidationError(f"column {name!r} has length {len(col)}, expected {T}")
            if size < 1:
                raise ValidationError(f"alphabet size for {name!r} must be >= 1")
            if col.min() < 0 or col.max() >= size:
                raise ValidationError(
                    f"column {name!r} has values outside [0, {size - 1}]"
                )
        object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "alphabet_sizes", sizes)

    @property
    def num_variables(self) -> int:
        return len(self.columns)

    @property
    def num_samples(self) -> int:
        return len(self.columns[0])


@dataclass(frozen=True)
class ContinuousSeriesTable:
    """Aligned real-valued samples: one column per variable."""

    variable_names: tuple[str, ...]
    columns: tuple[np.ndarray, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.variable_names)
        cols = tuple(np.asarray(c, dtype=float) for c in self.columns)
        if len(names) != len(cols):
            raise ValidationError("names and columns must align")
        if not cols:
            raise ValidationError("table needs at least one variable")
        T = len(cols[0])
        if T < 1:
            raise ValidationError("table needs at least one sample")
        for name, col in zip(names, cols):
            if len(col) != T:
                raise ValidationError(f"column {name!r} has length {len(col)}, expected {T}")
            if not np.all(np.isfinite(col)):
                raise ValidationError(f"column {name!r} contains non-finite values")
        object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "columns", cols)

    @property
    def num_variables(self) -> int:
        return len(self.columns)

    @property
    def num_samples(self) -> int:
        return len(self.columns[0])


@dataclass(frozen=True)
class JointDistribution:
    """Sparse probability mass function over tuples of finite-alphabet symbols.

    Every stored probability is strictly positive and the total mass is 1
    within ``MASS_TOLERANCE``. Instances are immutable once built.
    """

    num_variables: int
    alphabet_sizes: tuple[int, ...]
    mass: dict[Outcome, float]

    def __post_init__(self):
        sizes = tuple(int(a) for a in self.alphabet_sizes)
        if len(sizes) != self.num_variables or self.num_variables < 1:
            raise ValidationError("alphabet sizes must match the variable count")
        if any(a < 1 for a in sizes):
            raise ValidationError("alphabet sizes must be >= 1")
        if not self.mass:
            raise ValidationError("distribution has empty support")
        clean: dict[Outcome, float] = {}
        for outcome, p in self.mass.items():
            o = tuple(int(v) for v in outcome)
            if len(o) != self.num_variables:
                raise ValidationError(f"outcome {o} has wrong arity")
            if any(v < 0 or v >= s for v, s in zip(o, sizes)):
                raise ValidationError(f"outcome {o} outside the alphabets")
            p = float(p)
            if p <= 0:
                raise ValidationError(f"outcome {o} has non-positive mass {p}")
            clean[o] = p
        total = math.fsum(clean.values())
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"total mass {total} deviates from 1 beyond tolerance")
        object.__setattr__(self, "alphabet_sizes", sizes)
        object.__setattr__(self, "mass", clean)

    def support_size(self) -> int:
        return len(self.mass)


@dataclass(frozen=True)
class GaussianModel:
    """Gaussian-copula summary: a correlation matrix with unit diagonal."""

    correlation_matrix: np.ndarray
    regularization: float = GAUSSIAN_DIAGONAL_REGULARIZATION

    def __post_init__(self):
        R = np.asarray(self.correlation_matrix, dtype=float)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValidationError(f"correlation matrix must be square, got {R.shape}")
        if not np.all(np.isfinite(R)):
            raise ValidationError("correlation matrix contains non-finite values")
        if np.max(np.abs(R - R.T)) > 1e-12:
            raise ValidationError("correlation matrix must be symmetric within 1e-12")
        if np.max(np.abs(np.diag(R) - 1.0)) > 1e-12:
            raise ValidationError("correlation matrix must have unit diagonal")
        if np.linalg.eigvalsh(R).min() < -1e-10:
            raise ValidationError("correlation matrix is not positive semidefinite")
        object.__setattr__(self, "correlation_matrix", R)

    @property
    def num_variables(self) -> int:
        return self.correlation_matrix.shape[0]


def estimate_empirical(table: DiscreteSeriesTable, smoothing: float = 0.0) -> JointDistribution:
    """Empirical joint distribution: the relative frequency of each observed tuple.

    No smoothing is applied by default, so unobserved outcomes stay absent.
    With ``smoothing`` alpha > 0, every outcome in the full product alphabet
    gets mass (count + alpha) / (T + alpha * K); this densifies the support
    and is guarded by ``SMOOTHING_SUPPORT_CAP``.
    """
    T = table.num_samples
    counts: dict[Outcome, int] = {}
    for row in zip(*table.columns):
        outcome = tuple(int(v) for v in row)
        counts[outcome] = counts.get(outcome, 0) + 1
    if smoothing < 0:
        raise ValidationError(f"smoothing must be >= 0, got {smoothing}")
    if smoothing == 0.0:
        mass = {o: c / T for o, c in counts.items()}
    else:
        K = math.prod(table.alphabet_sizes)
        if K > SMOOTHING_SUPPORT_CAP:
            raise CapacityError(
                f"smoothing would materialize {K} outcomes (cap {SMOOTHING_SUPPORT_CAP})"
            )
        denom = T + smoothing * K
        mass = {
            o: (counts.get(o, 0) + smoothing) / denom
            for o in itertools.product(*(range(a) for a in table.alphabet_sizes))
        }
    return JointDistribution(
        num_variables=table.num_variables,
        alphabet_sizes=table.alphabet_sizes,
        mass=mass,
    )


def marginalize(dist: JointDistribution, subset) -> JointDistribution:
    """Marginal distribution of the variables in ``subset`` (sorted indices)."""
    s = _check_subset(subset, dist.num_variables)
    if len(s) == dist.num_variables:
        return dist
    mass: dict[Outcome, float] = {}
    for outcome, p in dist.mass.items():
        key = tuple(outcome[i] for i in s)
        mass[key] = mass.get(key, 0.0) + p
    return JointDistribution(
        num_variables=len(s),
        alphabet_sizes=tuple(dist.alphabet_sizes[i] for i in s),
        mass=mass,
    )


def entropy_nats(dist: JointDistribution) -> float:
    return -math.fsum(p * math.log(p) for p in dist.mass.values())


def entropy(dist: JointDistribution) -> float:
    """Shannon entropy of the stored outcomes, in the configured unit."""
    return from_nats(entropy_nats(dist))


def copula_gaussian_fit(table: ContinuousSeriesTable) -> GaussianModel:
    """Fit a Gaussian copula: rank-transform columns, correlate the scores.

    Each column is mapped through rank/(T+1) (average ranks on ties) and the
    standard-normal quantile function; the model is the sample correlation of
    the transformed columns. Depends on the data only through column orderings.
    """
    T = table.num_samples
    if T < 3:
        raise ValidationError(f"need at least 3 samples to fit a copula, got {T}")
    scores = []
    for name, col in zip(table.variable_names, table.columns):
        if np.ptp(col) == 0.0:
            raise EstimationError(f"column {name!r} is constant; rank transform undefined")
        scores.append(ndtri(rankdata(col, method="average") / (T + 1)))
    Z = np.column_stack(scores)
    R = np.corrcoef(Z, rowvar=False)
    R = np.atleast_2d(R)
    R = (R + R.T) / 2.0
    np.fill_diagonal(R, 1.0)
    return GaussianModel(correlation_matrix=R)


def gaussian_entropy_nats(model: GaussianModel, subset) -> tuple[float, bool]:
    """Closed-form entropy of a variable subset, plus a flag marking cases
    where the diagonal regularization changed the log-determinant materially."""
    s = _check_subset(subset, model.num_variables)
    k = len(s)
    sub = model.correlation_matrix[np.ix_(s, s)]
    reg = sub + model.regularization * np.eye(k)
    sign, logdet = np.linalg.slogdet(reg)
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericalError(
            f"regularized correlation submatrix for {s} is not positive definite"
        )
    raw_sign, raw_logdet = np.linalg.slogdet(sub)
    needed_regularization = bool(
        raw_sign <= 0 or not np.isfinite(raw_logdet) or abs(logdet - raw_logdet) > 1e-6
    )
    return 0.5 * (k * _LOG_TWO_PI_E + logdet), needed_regularization


def gaussian_subset_entropy(model: GaussianModel, subset) -> float:
    """Entropy of a Gaussian subset in the configured unit."""
    value, _ = gaussian_entropy_nats(model, subset)
    return from_nats(value)


# ---------------------------------------------------------------------------
# CSV ingestion and JSON persistence
# ---------------------------------------------------------------------------


def _read_csv_rows(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [name.strip() for name in rows[0]]
    if not header or any(not name for name in header):
        raise ValidationError(f"{path}: line 1: malformed header")
    return header, rows[1:]


def read_discrete_csv(path, alphabet_sizes=None) -> DiscreteSeriesTable:
    """Read a discrete table: header of names, one sample per row, int cells.

    Alphabet sizes default to one more than each column's maximum value.
    """
    header, body = _read_csv_rows(path)
    if not body:
        raise ValidationError(f"{path}: no data rows")
    columns: list[list[int]] = [[] for _ in header]
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValidationError(
                f"{path}: line {line_no}: expected {len(header)} cells, got {len(row)}"
            )
        for j, cell in enumerate(row):
            try:
                value = int(cell)
            except ValueError as exc:
                raise ValidationError(
                    f"{path}: line {line_no}: {cell!r} is not an integer"
                ) from exc
            if value < 0:
                raise ValidationError(f"{path}: line {line_no}: negative symbol {value}")
            columns[j].append(value)
    if alphabet_sizes is None:
        alphabet_sizes = tuple(max(col) + 1 for col in columns)
    return DiscreteSeriesTable(
        variable_names=tuple(header),
        columns=tuple(np.array(c) for c in columns),
        alphabet_sizes=tuple(alphabet_sizes),
    )


def read_continuous_csv(path) -> ContinuousSeriesTable:
    """Read a continuous table: header of names, one sample per row, float cells."""
    header, body = _read_csv_rows(path)
    if not body:
        raise ValidationError(f"{path}: no data rows")
    columns: list[list[float]] = [[] for _ in header]
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ValidationError(
                f"{path}: line {line_no}: expected {len(header)} cells, got {len(row)}"
            )
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError as exc:
                raise ValidationError(
                    f"{path}: line {line_no}: {cell!r} is not a number"
                ) from exc
            if not math.isfinite(value):
                raise ValidationError(f"{path}: line {line_no}: non-finite value {cell!r}")
            columns[j].append(value)
    return ContinuousSeriesTable(
        variable_names=tuple(header),
        columns=tuple(np.array(c) for c in columns),
    )


def model_to_jsonable(model) -> dict:
    """JSON-ready form of a JointDistribution or GaussianModel."""
    if isinstance(model, JointDistribution):
        return {
            "kind": "discrete",
            "num_variables": model.num_variables,
            "alphabet_sizes": list(model.alphabet_sizes),
            "mass": [[list(o), p] for o, p in sorted(model.mass.items())],
        }
    if isinstance(model, GaussianModel):
        return {
            "kind": "gaussian",
            "num_variables": model.num_variables,
            "correlation": model.correlation_matrix.tolist(),
        }
    raise ValidationError(f"cannot serialize {type(model).__name__}")


def model_from_jsonable(payload: dict):
    kind = payload.get("kind")
    if kind == "discrete":
        return JointDistribution(
            num_variables=int(payload["num_variables"]),
            alphabet_sizes=tuple(payload["alphabet_sizes"]),
            mass={tuple(o): float(p) for o, p in payload["mass"]},
        )
    if kind == "gaussian":
        return GaussianModel(correlation_matrix=np.array(payload["correlation"], dtype=float))
    raise ValidationError(f"unknown model kind {kind!r}")


def write_model(path, model) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(model_to_jsonable(model), fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_model(path):
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return model_from_jsonable(payload)

"""Scalar information measures over variable subsets.

All measures are built from joint entropies of subsets, served by an
``EntropyOracle`` that memoizes them (the sweeps over all subsets of a fixed
size share most of their marginals). Total correlation, dual total
correlation and mutual information are clamped to zero when they undershoot
by floating-point noise; the signed measures are never clamped.
"""

from __future__ import annotations

import csv
import itertools
import json
import threading
from enum import Enum

import numpy as np

from . import distribution as dist_mod
from .errors import ValidationError
from .simplices import enumerate_simplices, simplex_label
from .units import from_nats

NEGATIVE_NOISE_TOLERANCE = 1e-10


class MeasureKind(Enum):
    TC = "tc"
    DTC = "dtc"
    O_INFORMATION = "o_information"
    S_INFORMATION = "s_information"
    INTERACTION_INFORMATION = "interaction_information"


class EntropyOracle:
    """Maps sorted variable-index subsets to joint entropies.

    Backed either by marginalization of a sparse ``JointDistribution`` or by
    the closed Gaussian form of a ``GaussianModel``. Results are cached in
    nats under a lock, so concurrent subset queries are safe; the cache is
    bounded by the 2**(N+1) possible subsets. ``regularized_subsets`` records
    Gaussian subsets whose entropy needed the diagonal regularization.
    """

    def __init__(self, source):
        if isinstance(source, dist_mod.JointDistribution):
            self._entropy_nats = self._discrete_entropy
        elif isinstance(source, dist_mod.GaussianModel):
            self._entropy_nats = self._gaussian_entropy
        else:
            raise ValidationError(
                f"expected JointDistribution or GaussianModel, got {type(source).__name__}"
            )
        self.source = source
        self.regularized_subsets: set[tuple[int, ...]] = set()
        self._cache: dict[tuple[int, ...], float] = {}
        self._lock = threading.Lock()

    @property
    def num_variables(self) -> int:
        return self.source.num_variables

    def entropy(self, subset) -> float:
        """Joint entropy of the subset, in the configured unit; H(empty) = 0."""
        key = tuple(sorted(int(i) for i in subset))
        if not key:
            return 0.0
        if len(set(key)) != len(key):
            raise ValidationError(f"subset {key} contains duplicate indices")
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            cached = self._entropy_nats(key)
            with self._lock:
                self._cache[key] = cached
        return from_nats(cached)

    def _discrete_entropy(self, key: tuple[int, ...]) -> float:
        return dist_mod.entropy_nats(dist_mod.marginalize(self.source, key))

    def _gaussian_entropy(self, key: tuple[int, ...]) -> float:
        value, needed = dist_mod.gaussian_entropy_nats(self.source, key)
        if needed:
            with self._lock:
                self.regularized_subsets.add(key)
        return value


def _clamp(value: float) -> float:
    if -NEGATIVE_NOISE_TOLERANCE < value < 0.0:
        return 0.0
    return value


def _checked_subset(oracle: EntropyOracle, subset, minimum: int) -> tuple[int, ...]:
    s = tuple(sorted(int(i) for i in subset))
    if len(set(s)) != len(s):
        raise ValidationError(f"subset {s} contains duplicate indices")
    if len(s) < minimum:
        raise ValidationError(f"need at least {minimum} variables, got {len(s)}")
    if s and (s[0] < 0 or s[-1] >= oracle.num_variables):
        raise ValidationError(f"subset {s} out of range")
    return s


def mutual_information(oracle: EntropyOracle, i: int, j: int) -> float:
    """I(X_i; X_j) = H(i) + H(j) - H(i, j), clamped at zero."""
    if i == j:
        raise ValidationError("mutual information needs two distinct variables")
    s = _checked_subset(oracle, (i, j), 2)
    return _clamp(oracle.entropy(s[:1]) + oracle.entropy(s[1:]) - oracle.entropy(s))


def total_correlation(oracle: EntropyOracle, subset) -> float:
    """Sum of marginal entropies minus the joint entropy; zero iff independent."""
    s = _checked_subset(oracle, subset, 2)
    return _clamp(sum(oracle.entropy((i,)) for i in s) - oracle.entropy(s))


def dual_total_correlation(oracle: EntropyOracle, subset) -> float:
    """Joint entropy minus the sum of conditional entropies of each variable."""
    s = _checked_subset(oracle, subset, 2)
    joint = oracle.entropy(s)
    residual = sum(joint - oracle.entropy(tuple(x for x in s if x != i)) for i in s)
    return _clamp(joint - residual)


def o_information(oracle: EntropyOracle, subset) -> float:
    """TC minus DTC. Negative values mark synergy dominance, positive redundancy."""
    s = _checked_subset(oracle, subset, 3)
    return total_correlation(oracle, s) - dual_total_correlation(oracle, s)


def s_information(oracle: EntropyOracle, subset) -> float:
    """TC plus DTC: the overall interdependency strength of the subset."""
    s = _checked_subset(oracle, subset, 2)
    return total_correlation(oracle, s) + dual_total_correlation(oracle, s)


def interaction_information(oracle: EntropyOracle, subset) -> float:
    """Inclusion-exclusion over subset entropies: -sum (-1)^|g| H(g).

    Reduces to mutual information for two variables. The sign convention is
    kept exactly as implemented here; other texts differ and no reconciliation
    is attempted.
    """
    s = _checked_subset(oracle, subset, 2)
    total = 0.0
    for size in range(1, len(s) + 1):
        sign = -1.0 if size % 2 == 0 else 1.0
        for gamma in itertools.combinations(s, size):
            total += sign * oracle.entropy(gamma)
    return total


_MEASURES = {
    MeasureKind.TC: (total_correlation, 1),
    MeasureKind.DTC: (dual_total_correlation, 1),
    MeasureKind.O_INFORMATION: (o_information, 2),
    MeasureKind.S_INFORMATION: (s_information, 1),
    MeasureKind.INTERACTION_INFORMATION: (interaction_information, 1),
}


def evaluate_measure(oracle: EntropyOracle, subset, kind: MeasureKind) -> float:
    fn, _ = _MEASURES[MeasureKind(kind)]
    return fn(oracle, subset)


def signal_sweep(oracle: EntropyOracle, N: int, n: int, kind: MeasureKind) -> np.ndarray:
    """The measure evaluated on every (n+1)-subset, in canonical simplex order."""
    kind = MeasureKind(kind)
    if oracle.num_variables != N + 1:
        raise ValidationError(
            f"oracle covers {oracle.num_variables} variables, expected {N + 1}"
        )
    fn, min_dim = _MEASURES[kind]
    if not min_dim <= n <= N:
        raise ValidationError(f"dimension n={n} out of range [{min_dim}, {N}] for {kind.value}")
    return np.array([fn(oracle, s) for s in enumerate_simplices(N, n)])


def sweep_to_csv(path, N: int, n: int, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["simplex", "value"])
        for simplex, value in zip(enumerate_simplices(N, n), values):
            writer.writerow([simplex_label(simplex), repr(float(value))])


def sweep_to_json(path, N: int, n: int, kind: MeasureKind, values: np.ndarray) -> None:
    payload = {
        "dimension": n,
        "num_vertices": N + 1,
        "measure": MeasureKind(kind).value,
        "entries": [
            {"simplex": list(s), "value": float(v)}
            for s, v in zip(enumerate_simplices(N, n), values)
        ],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")

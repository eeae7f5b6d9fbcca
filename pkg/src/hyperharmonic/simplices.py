"""Combinatorics of the standard simplex on N+1 vertices.

Simplices are represented as strictly increasing tuples of vertex indices;
an n-simplex has n+1 vertices. All vector and matrix representations use the
lexicographic order of these tuples, so ``enumerate_simplices``,
``simplex_rank`` and ``simplex_unrank`` define the canonical basis shared by
every other module.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, EstimationError, ValidationError

Simplex = tuple[int, ...]

# Largest supported N; weight tables hold 2^(N+1) - 1 entries in total.
DEFAULT_MAX_N = 16

DEFAULT_WEIGHT_FLOOR = 1e-9


def simplex_count(num_vertices_minus_one: int, n: int) -> int:
    """Number of n-simplices of the standard simplex, C(N+1, n+1)."""
    return math.comb(num_vertices_minus_one + 1, n + 1)


def _check_dimensions(N: int, n: int) -> None:
    if N < 0:
        raise ValidationError(f"vertex count must be positive, got N={N}")
    if not 0 <= n <= N:
        raise ValidationError(f"simplex dimension n={n} out of range [0, {N}]")


def enumerate_simplices(N: int, n: int) -> list[Simplex]:
    """All sorted (n+1)-subsets of {0, ..., N} in lexicographic order."""
    _check_dimensions(N, n)
    return list(itertools.combinations(range(N + 1), n + 1))


def validate_simplex(simplex: Simplex, N: int) -> Simplex:
    s = tuple(int(v) for v in simplex)
    if not s:
        raise ValidationError("a simplex needs at least one vertex")
    if any(b <= a for a, b in zip(s, s[1:])):
        raise ValidationError(f"vertices must be strictly increasing, got {s}")
    if s[0] < 0 or s[-1] > N:
        raise ValidationError(f"vertex out of range [0, {N}] in {s}")
    return s


def simplex_rank(simplex: Simplex, N: int) -> int:
    """Position of a simplex in the lexicographic enumeration of its dimension."""
    s = validate_simplex(simplex, N)
    k = len(s)
    rank = 0
    prev = -1
    for i, v in enumerate(s):
        for skipped in range(prev + 1, v):
            rank += math.comb(N - skipped, k - 1 - i)
        prev = v
    return rank


def simplex_unrank(rank: int, N: int, n: int) -> Simplex:
    """Inverse of ``simplex_rank`` for dimension n."""
    _check_dimensions(N, n)
    k = n + 1
    total = simplex_count(N, n)
    if not 0 <= rank < total:
        raise ValidationError(f"rank {rank} out of range [0, {total})")
    out = []
    v = 0
    r = rank
    for i in range(k):
        while True:
            block = math.comb(N - v, k - 1 - i)
            if r < block:
                break
            r -= block
            v += 1
        out.append(v)
        v += 1
    return tuple(out)


def simplex_label(simplex: Simplex) -> str:
    """Stable text label, e.g. (0, 2, 11) -> '0-2-11'."""
    return "-".join(str(v) for v in simplex)


def parse_simplex_label(label: str) -> Simplex:
    try:
        return tuple(int(part) for part in label.split("-"))
    except ValueError as exc:
        raise ValidationError(f"malformed simplex label {label!r}") from exc


def boundary_matrix(N: int, n: int) -> sp.csr_matrix:
    """Signed incidence matrix of the n-boundary map in the canonical bases.

    Shape is C(N+1, n) x C(N+1, n+1): rows are (n-1)-simplices, columns are
    n-simplices, both in lexicographic order. The column of a simplex carries
    (-1)**i at the row of the face obtained by dropping its i-th vertex. For
    n = 0 the map is the 1 x (N+1) zero matrix.
    """
    _check_dimensions(N, n)
    cols = simplex_count(N, n)
    if n == 0:
        return sp.csr_matrix((1, cols))
    face_rank = {s: i for i, s in enumerate(enumerate_simplices(N, n - 1))}
    rows_idx: list[int] = []
    cols_idx: list[int] = []
    vals: list[float] = []
    for j, simplex in enumerate(enumerate_simplices(N, n)):
        for i in range(n + 1):
            face = simplex[:i] + simplex[i + 1 :]
            rows_idx.append(face_rank[face])
            cols_idx.append(j)
            vals.append(-1.0 if i % 2 else 1.0)
    shape = (len(face_rank), cols)
    return sp.coo_matrix((vals, (rows_idx, cols_idx)), shape=shape).tocsr()


def boundary_to_csv(path, matrix: sp.spmatrix) -> None:
    """Dump a boundary matrix as (row, col, value) triplets."""
    coo = matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", "col", "value"])
        for k in order:
            writer.writerow([int(coo.row[k]), int(coo.col[k]), int(coo.data[k])])


class WeightAggregator(Enum):
    """Rule that propagates pairwise edge values to higher simplices."""

    MEAN = "mean"
    MAX = "max"
    MIN = "min"


_AGGREGATE = {
    WeightAggregator.MEAN: lambda vals: sum(vals) / len(vals),
    WeightAggregator.MAX: max,
    WeightAggregator.MIN: min,
}


@dataclass(frozen=True)
class StructuralSimplex:
    """The standard simplex with one positive weight per simplex.

    ``weights[n]`` is the weight vector of the n-simplices in canonical
    order, length C(N+1, n+1).
    """

    N: int
    weights: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.weights) != self.N + 1:
            raise ValidationError(
                f"expected {self.N + 1} weight vectors, got {len(self.weights)}"
            )
        converted = []
        for n, w in enumerate(self.weights):
            w = np.asarray(w, dtype=float)
            expected = simplex_count(self.N, n)
            if w.shape != (expected,):
                raise ValidationError(
                    f"dimension {n}: expected {expected} weights, got shape {w.shape}"
                )
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValidationError(f"dimension {n}: weights must be finite and > 0")
            converted.append(w)
        object.__setattr__(self, "weights", tuple(converted))

    def weight_vector(self, n: int) -> np.ndarray:
        _check_dimensions(self.N, n)
        return self.weights[n]

    def dimension_size(self, n: int) -> int:
        return simplex_count(self.N, n)


def structural_weights(
    mi_matrix: np.ndarray,
    aggregator: WeightAggregator = WeightAggregator.MEAN,
    floor: float = DEFAULT_WEIGHT_FLOOR,
    max_n: int = DEFAULT_MAX_N,
) -> StructuralSimplex:
    """Build a structural simplex from a symmetric pairwise-similarity matrix.

    Vertices get weight 1. An edge [i, j] gets ``max(mi_matrix[i, j], floor)``.
    A higher simplex gets the aggregate (mean, max or min) of the raw pairwise
    values of all its vertex pairs, floored the same way. The floor keeps every
    weight strictly positive so the diagonal weight matrices stay invertible.
    """
    mi = np.asarray(mi_matrix, dtype=float)
    if mi.ndim != 2 or mi.shape[0] != mi.shape[1]:
        raise ValidationError(f"similarity matrix must be square, got shape {mi.shape}")
    if mi.shape[0] < 2:
        raise ValidationError("need at least two variables")
    if not np.allclose(mi, mi.T, atol=1e-10, rtol=0.0):
        raise ValidationError("similarity matrix must be symmetric")
    off_diag = mi[~np.eye(mi.shape[0], dtype=bool)]
    if np.any(off_diag < 0) or not np.all(np.isfinite(off_diag)):
        raise ValidationError("similarity matrix entries must be finite and >= 0")
    if floor <= 0:
        raise ValidationError(f"weight floor must be > 0, got {floor}")
    N = mi.shape[0] - 1
    if N > max_n:
        raise CapacityError(f"N={N} exceeds the configured cap of {max_n}")

    aggregate = _AGGREGATE[WeightAggregator(aggregator)]
    weights: list[np.ndarray] = [np.ones(N + 1)]
    for n in range(1, N + 1):
        vals = []
        for simplex in enumerate_simplices(N, n):
            pairs = [mi[a, b] for a, b in itertools.combinations(simplex, 2)]
            vals.append(max(aggregate(pairs), floor))
        weights.append(np.array(vals))
    return StructuralSimplex(N=N, weights=tuple(weights))


def weights_to_csv(path, simplex: StructuralSimplex) -> None:
    """Dump all weights as (dimension, simplex, weight) rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dimension", "simplex", "weight"])
        for n in range(simplex.N + 1):
            w = simplex.weight_vector(n)
            for s, value in zip(enumerate_simplices(simplex.N, n), w):
                writer.writerow([n, simplex_label(s), repr(float(value))])


class SimilarityMetric(Enum):
    """Pairwise dependence metric used to seed the structural weights."""

    MUTUAL_INFORMATION = "mutual_information"
    ABS_PEARSON = "abs_pearson"
    TOTAL_VARIATION = "total_variation"


def similarity_matrix(source, metric: SimilarityMetric) -> np.ndarray:
    """Symmetric matrix of a pairwise dependence metric, zero diagonal.

    ``source`` is a JointDistribution or a GaussianModel. Total variation is
    the distance between each pairwise joint and the product of its marginals,
    and is only defined for discrete distributions.
    """
    from . import distribution as dist_mod  # runtime import: avoids a module cycle
    from . import infotheory

    metric = SimilarityMetric(metric)
    k = source.num_variables
    out = np.zeros((k, k))
    if metric is SimilarityMetric.MUTUAL_INFORMATION:
        oracle = infotheory.EntropyOracle(source)
        for i, j in itertools.combinations(range(k), 2):
            out[i, j] = out[j, i] = infotheory.mutual_information(oracle, i, j)
        return out
    if metric is SimilarityMetric.ABS_PEARSON:
        if isinstance(source, dist_mod.GaussianModel):
            out = np.abs(source.correlation_matrix).astype(float)
            np.fill_diagonal(out, 0.0)
            return out
        return _abs_pearson_discrete(source)
    if isinstance(source, dist_mod.GaussianModel):
        raise EstimationError("total variation requires a discrete distribution")
    return _total_variation_discrete(source)


def _abs_pearson_discrete(dist) -> np.ndarray:
    k = dist.num_variables
    mean = np.zeros(k)
    second = np.zeros(k)
    cross = np.zeros((k, k))
    for outcome, p in dist.mass.items():
        x = np.asarray(outcome, dtype=float)
        mean += p * x
        second += p * x * x
        cross += p * np.outer(x, x)
    var = second - mean**2
    if np.any(var <= 0):
        bad = int(np.argmin(var))
        raise EstimationError(f"variable {bad} is constant; correlation undefined")
    cov = cross - np.outer(mean, mean)
    corr = np.abs(cov / np.sqrt(np.outer(var, var)))
    np.fill_diagonal(corr, 0.0)
    return corr


def _total_variation_discrete(dist) -> np.ndarray:
    from . import distribution as dist_mod

    k = dist.num_variables
    out = np.zeros((k, k))
    singles = [dist_mod.marginalize(dist, (i,)) for i in range(k)]
    for i, j in itertools.combinations(range(k), 2):
        joint = dist_mod.marginalize(dist, (i, j))
        tv = 0.0
        for (a,), pa in singles[i].mass.items():
            for (b,), pb in singles[j].mass.items():
                tv += abs(joint.mass.get((a, b), 0.0) - pa * pb)
        out[i, j] = out[j, i] = 0.5 * tv
    return out

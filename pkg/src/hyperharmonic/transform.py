"""High-order signals, the spectral change of basis, and compression reports.

A signal is a coefficient vector over the n-simplices in canonical order,
tagged with the basis it is expressed in. ``to_fourier`` multiplies by the
forward matrix of a ``FourierBasis``; because the basis is w-orthonormal, the
energy of the Fourier coefficients equals the weighted norm of the canonical
signal, which is what makes cumulative explained variance meaningful.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .infotheory import EntropyOracle, MeasureKind, signal_sweep
from .seeding import as_rng, derive_rng
from .simplices import StructuralSimplex
from .spectral import FourierBasis, WeightedInnerProduct

CANONICAL = "canonical"
FOURIER = "fourier"

CEV_THRESHOLDS = (0.60, 0.80, 0.90, 0.95, 0.99)

DEFAULT_RANDOM_BASES = 80

# Two-sided 95% normal quantile, for the confidence band over replicates.
_Z_95 = 1.959963984540054


def custom_basis_tag(identifier: str) -> str:
    return f"custom:{identifier}"


@dataclass(frozen=True)
class HighOrderSignal:
    """Coefficients of an n-signal over a tagged basis."""

    dimension: int
    coefficients: np.ndarray
    basis: str = CANONICAL
    measure: MeasureKind | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValidationError("signal coefficients must form a non-empty vector")
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError("signal coefficients must be finite")
        if not (self.basis in (CANONICAL, FOURIER) or self.basis.startswith("custom:")):
            raise ValidationError(f"unknown basis tag {self.basis!r}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def size(self) -> int:
        return self.coefficients.size


def build_signal(
    oracle: EntropyOracle, simplex: StructuralSimplex, n: int, kind: MeasureKind
) -> HighOrderSignal:
    """Sweep a measure over all (n+1)-subsets into a canonical-basis signal."""
    values = signal_sweep(oracle, simplex.N, n, kind)
    return HighOrderSignal(dimension=n, coefficients=values, measure=MeasureKind(kind))


def _check_basis_match(signal: HighOrderSignal, basis: FourierBasis) -> None:
    if signal.dimension != basis.dimension:
        raise ValidationError(
            f"signal dimension {signal.dimension} != basis dimension {basis.dimension}"
        )
    if signal.size != basis.forward.shape[1]:
        raise ValidationError(
            f"signal has {signal.size} coefficients, basis expects {basis.forward.shape[1]}"
        )


def to_fourier(signal: HighOrderSignal, basis: FourierBasis) -> HighOrderSignal:
    if signal.basis != CANONICAL:
        raise ValidationError(f"expected a canonical-basis signal, got {signal.basis!r}")
    _check_basis_match(signal, basis)
    return HighOrderSignal(
        dimension=signal.dimension,
        coefficients=basis.forward @ signal.coefficients,
        basis=FOURIER,
        measure=signal.measure,
    )


def from_fourier(signal: HighOrderSignal, basis: FourierBasis) -> HighOrderSignal:
    if signal.basis != FOURIER:
        raise ValidationError(f"expected a fourier-basis signal, got {signal.basis!r}")
    _check_basis_match(signal, basis)
    return HighOrderSignal(
        dimension=signal.dimension,
        coefficients=basis.inverse @ signal.coefficients,
        basis=CANONICAL,
        measure=signal.measure,
    )


@dataclass(frozen=True)
class CevReport:
    """Explained variance per component, strongest first, with threshold marks.

    ``components_at[t]`` is the smallest k whose cumulative explained variance
    reaches the fraction t.
    """

    sorted_ev: np.ndarray
    cev: np.ndarray
    components_at: dict[float, int]

    def to_jsonable(self) -> dict:
        return {
            "sorted_ev": self.sorted_ev.tolist(),
            "cev": self.cev.tolist(),
            "components_at": {f"{t:.2f}": k for t, k in sorted(self.components_at.items())},
        }


def _cev_curve(coefficients: np.ndarray) -> np.ndarray:
    sq = np.asarray(coefficients, dtype=float) ** 2
    total = sq.sum()
    if total <= 0.0:
        raise NumericalError("all-zero signal: explained variance undefined")
    order = np.argsort(-sq, kind="stable")
    return np.cumsum(sq[order] / total)


def cev_report(signal: HighOrderSignal) -> CevReport:
    """Sort squared coefficients descending (ties by canonical index) and
    accumulate their normalized explained variance."""
    sq = signal.coefficients**2
    total = sq.sum()
    if total <= 0.0:
        raise NumericalError("all-zero signal: explained variance undefined")
    order = np.argsort(-sq, kind="stable")
    sorted_ev = sq[order] / total
    cev = np.cumsum(sorted_ev)
    components_at = {
        t: int(np.searchsorted(cev, t - 1e-12) + 1) for t in CEV_THRESHOLDS
    }
    return CevReport(sorted_ev=sorted_ev, cev=cev, components_at=components_at)


def random_basis(
    d: int,
    inner: WeightedInnerProduct,
    seed,
    orthonormality: str = "w",
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded random basis pair (forward, inverse), w-orthonormal like a Fourier basis.

    A standard-normal matrix is drawn and QR-orthonormalized (signs fixed so
    the draw is deterministic), then scaled by W^(-1/2) so that
    inverse^T W inverse = I. With ``orthonormality='euclidean'`` the plain
    orthonormal pair is returned instead, for sensitivity analysis.
    """
    if d < 1:
        raise ValidationError(f"basis size must be >= 1, got {d}")
    if inner.weights.size != d:
        raise ValidationError(f"inner product has {inner.weights.size} weights, expected {d}")
    if orthonormality not in ("w", "euclidean"):
        raise ValidationError(f"unknown orthonormality mode {orthonormality!r}")
    rng = as_rng(seed)
    Q = None
    for _ in range(3):
        draw = rng.standard_normal((d, d))
        q, r = np.linalg.qr(draw)
        rdiag = np.diag(r)
        if np.min(np.abs(rdiag)) <= 1e-12 * max(np.max(np.abs(rdiag)), 1.0):
            continue
        Q = q * np.sign(rdiag)[None, :]
        break
    if Q is None:
        raise NumericalError("random basis draw was singular three times in a row")
    if orthonormality == "euclidean":
        return Q.T.copy(), Q
    root = np.sqrt(inner.weights)
    inverse = Q / root[:, None]
    forward = Q.T * root[None, :]
    return forward, inverse


@dataclass(frozen=True)
class ControlComparison:
    """Fourier-basis CEV next to the spread of randomly generated bases.

    ``random_cev`` holds one CEV curve per replicate basis; the mean and its
    95% confidence band use a normal approximation across replicates. The
    replicate axis is recorded explicitly so plots can label it.
    """

    fourier_cev: np.ndarray
    random_cev: np.ndarray
    random_mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    seed: int
    replicate_axis: str = "basis draws"


def control_comparison(
    signal: HighOrderSignal,
    basis: FourierBasis,
    num_random: int = DEFAULT_RANDOM_BASES,
    seed: int = 0,
    orthonormality: str = "w",
) -> ControlComparison:
    """Compare the Fourier CEV curve against ``num_random`` random bases."""
    if num_random < 1:
        raise ValidationError(f"need at least one random basis, got {num_random}")
    if signal.basis != CANONICAL:
        raise ValidationError("control comparison expects a canonical-basis signal")
    fourier_cev = _cev_curve(to_fourier(signal, basis).coefficients)
    inner = WeightedInnerProduct(dimension=basis.dimension, weights=basis.weights)
    d = signal.size
    curves = np.empty((num_random, d))
    for k in range(num_random):
        forward, _ = random_basis(d, inner, derive_rng(seed, k), orthonormality)
        curves[k] = _cev_curve(forward @ signal.coefficients)
    mean = curves.mean(axis=0)
    if num_random > 1:
        half = _Z_95 * curves.std(axis=0, ddof=1) / np.sqrt(num_random)
    else:
        half = np.zeros(d)
    return ControlComparison(
        fourier_cev=fourier_cev,
        random_cev=curves,
        random_mean=mean,
        ci_low=mean - half,
        ci_high=mean + half,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def cev_to_csv(path, report: CevReport) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "ev", "cev"])
        for k, (ev, cev) in enumerate(zip(report.sorted_ev, report.cev), start=1):
            writer.writerow([k, repr(float(ev)), repr(float(cev))])


def cev_to_json(path, report: CevReport) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(report.to_jsonable(), fh, sort_keys=True, indent=1)
        fh.write("\n")


def control_to_csv(path, comparison: ControlComparison) -> None:
    """Long-format CSV (basis_kind, replicate, k, cev), plot-ready."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["basis_kind", "replicate", "k", "cev"])
        for k, value in enumerate(comparison.fourier_cev, start=1):
            writer.writerow(["fourier", 0, k, repr(float(value))])
        for rep, curve in enumerate(comparison.random_cev, start=1):
            for k, value in enumerate(curve, start=1):
                writer.writerow(["random", rep, k, repr(float(value))])


def signal_to_jsonable(signal: HighOrderSignal, num_vertices: int | None = None) -> dict:
    payload = {
        "dimension": signal.dimension,
        "basis": signal.basis,
        "measure": signal.measure.value if signal.measure is not None else None,
        "coefficients": signal.coefficients.tolist(),
    }
    if num_vertices is not None:
        payload["num_vertices"] = num_vertices
    return payload


def signal_from_jsonable(payload: dict) -> HighOrderSignal:
    measure = payload.get("measure")
    return HighOrderSignal(
        dimension=int(payload["dimension"]),
        coefficients=np.array(payload["coefficients"], dtype=float),
        basis=payload.get("basis", CANONICAL),
        measure=MeasureKind(measure) if measure else None,
    )


def write_signal(path, signal: HighOrderSignal, num_vertices: int | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(signal_to_jsonable(signal, num_vertices), fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_signal(path) -> HighOrderSignal:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return signal_from_jsonable(payload)

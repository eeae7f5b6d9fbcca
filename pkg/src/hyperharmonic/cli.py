"""Batch command-line pipeline over CSV inputs.

Subcommands mirror the pipeline stages (estimate, complex, signals, spectrum,
transform, cev), the two control experiments (control-random, control-synth),
and ``run``, which executes everything end to end into an output directory.
Every stage's output is a valid input to the next, so intermediates can be
inspected or swapped.

Exit codes: 0 success, 2 validation, 3 I/O, 4 numerical, 5 capacity.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np
import scipy

from . import __version__
from . import distribution as dist_mod
from . import infotheory, simplices, spectral, synth, transform, units
from .errors import CapacityError, NumericalError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4
EXIT_CAPACITY = 5

OUTPUT_DIR_ENV = "HYPERHARMONIC_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "hyperharmonic_output"
INCOMPLETE_MARKER = "INCOMPLETE"


@dataclass
class PipelineConfig:
    """Everything that determines the bytes a ``run`` produces.

    The output directory and the job count are deliberately not part of the
    persisted manifest: they control where and how fast, never what.
    """

    input: str = ""
    kind: str = "discrete"
    dimensions: tuple[int, ...] = ()
    measures: tuple[str, ...] = ("o_information", "s_information")
    metric: str = "mutual_information"
    aggregator: str = "mean"
    floor: float = simplices.DEFAULT_WEIGHT_FLOOR
    kernel_tol: float = spectral.DEFAULT_KERNEL_TOLERANCE
    laplacian_formula: str = "adjoint"
    num_random: int = transform.DEFAULT_RANDOM_BASES
    seed: int = 0
    smoothing: float = 0.0
    units: str = "bits"

    def validate(self) -> None:
        if not self.input:
            raise ValidationError("an input file is required")
        if self.kind not in ("discrete", "continuous"):
            raise ValidationError(f"kind must be 'discrete' or 'continuous', got {self.kind!r}")
        _parse_measures(self.measures)
        _checked_enum(simplices.SimilarityMetric, self.metric, "metric")
        _checked_enum(simplices.WeightAggregator, self.aggregator, "aggregator")
        if self.floor <= 0 or self.kernel_tol <= 0:
            raise ValidationError("floor and kernel_tol must be positive")
        if self.laplacian_formula not in ("adjoint", "alternate"):
            raise ValidationError(f"unknown laplacian formula {self.laplacian_formula!r}")
        if self.num_random < 1:
            raise ValidationError("num_random must be >= 1")
        if self.smoothing < 0:
            raise ValidationError("smoothing must be >= 0")
        if self.units not in ("bits", "nats"):
            raise ValidationError("units must be 'bits' or 'nats'")
        if any(n < 2 for n in self.dimensions):
            raise ValidationError("analysis dimensions must be >= 2")


_CONFIG_PARSERS = {
    "input": str,
    "kind": str,
    "dimensions": lambda v: _parse_int_list(v),
    "measures": lambda v: tuple(part.strip() for part in v.split(",") if part.strip()),
    "metric": str,
    "aggregator": str,
    "floor": float,
    "kernel_tol": float,
    "laplacian_formula": str,
    "num_random": int,
    "seed": int,
    "smoothing": float,
    "units": str,
}


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _checked_enum(enum_cls, value, label: str):
    try:
        return enum_cls(value)
    except ValueError as exc:
        options = ", ".join(member.value for member in enum_cls)
        raise ValidationError(f"unknown {label} {value!r}; expected one of: {options}") from exc


def _parse_measures(names) -> tuple[infotheory.MeasureKind, ...]:
    return tuple(_checked_enum(infotheory.MeasureKind, m, "measure") for m in names)


def load_config_file(path) -> dict:
    """Parse a flat 'key = value' config file ('#' starts a comment)."""
    values: dict = {}
    with open(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}: line {line_no}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_PARSERS:
                raise ValidationError(f"{path}: line {line_no}: unknown key {key!r}")
            try:
                values[key] = _CONFIG_PARSERS[key](value)
            except ValidationError:
                raise
            except ValueError as exc:
                raise ValidationError(f"{path}: line {line_no}: bad value for {key}: {exc}") from exc
    return values


def write_json(path, payload) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc


def _versions() -> dict:
    return {
        "hyperharmonic": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": ".".join(map(str, sys.version_info[:3])),
    }


def _resolve_output_dir(flag_value) -> str:
    if flag_value:
        return flag_value
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


def _estimate_model(config: PipelineConfig):
    if config.kind == "discrete":
        table = dist_mod.read_discrete_csv(config.input)
        return dist_mod.estimate_empirical(table, smoothing=config.smoothing)
    table = dist_mod.read_continuous_csv(config.input)
    return dist_mod.copula_gaussian_fit(table)


# ---------------------------------------------------------------------------
# Basis persistence shared by spectrum / transform / control-random
# ---------------------------------------------------------------------------


def basis_to_jsonable(basis: spectral.FourierBasis) -> dict:
    return {
        "dimension": basis.dimension,
        "eigenvalues": basis.eigenvalues.tolist(),
        "forward": basis.forward.tolist(),
        "inverse": basis.inverse.tolist(),
        "weights": basis.weights.tolist(),
        "diagnostics": basis.diagnostics.to_jsonable(),
    }


def basis_from_jsonable(payload: dict) -> spectral.FourierBasis:
    diag = payload["diagnostics"]
    return spectral.FourierBasis(
        dimension=int(payload["dimension"]),
        eigenvalues=np.array(payload["eigenvalues"], dtype=float),
        forward=np.array(payload["forward"], dtype=float),
        inverse=np.array(payload["inverse"], dtype=float),
        weights=np.array(payload["weights"], dtype=float),
        diagnostics=spectral.SpectralDiagnostics(
            self_adjointness=float(diag["self_adjointness"]),
            diagonalization=float(diag["diagonalization"]),
            orthonormality=float(diag["orthonormality"]),
            inversion=float(diag["inversion"]),
        ),
    )


def read_basis(path) -> spectral.FourierBasis:
    return basis_from_jsonable(read_json(path))


def _weights_payload(simplex: simplices.StructuralSimplex, similarity, config) -> dict:
    return {
        "num_vertices": simplex.N + 1,
        "aggregator": config.aggregator,
        "floor": config.floor,
        "metric": config.metric,
        "similarity": np.asarray(similarity).tolist(),
        "weights": {str(n): simplex.weight_vector(n).tolist() for n in range(simplex.N + 1)},
    }


def structural_simplex_from_payload(payload: dict) -> simplices.StructuralSimplex:
    N = int(payload["num_vertices"]) - 1
    weights = tuple(
        np.array(payload["weights"][str(n)], dtype=float) for n in range(N + 1)
    )
    return simplices.StructuralSimplex(N=N, weights=weights)


def _write_similarity_csv(path, matrix) -> None:
    matrix = np.asarray(matrix)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "value"])
        for i in range(matrix.shape[0]):
            for j in range(i + 1, matrix.shape[1]):
                writer.writerow([i, j, repr(float(matrix[i, j]))])


def _write_eigenvalues_csv(path, eigenvalues) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "eigenvalue"])
        for k, lam in enumerate(eigenvalues):
            writer.writerow([k, repr(float(lam))])


def _write_component_csv(path, coefficients) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["component", "value"])
        for k, value in enumerate(coefficients):
            writer.writerow([k, repr(float(value))])


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def cmd_estimate(args) -> int:
    config = PipelineConfig(input=args.input, kind=args.kind, smoothing=args.smoothing)
    config.validate()
    model = _estimate_model(config)
    dist_mod.write_model(args.output, model)
    return EXIT_OK


def cmd_complex(args) -> int:
    model = dist_mod.read_model(args.distribution)
    config = PipelineConfig(
        input=args.distribution,
        metric=args.metric,
        aggregator=args.aggregator,
        floor=args.floor,
    )
    similarity = simplices.similarity_matrix(model, simplices.SimilarityMetric(args.metric))
    simplex = simplices.structural_weights(
        similarity,
        aggregator=simplices.WeightAggregator(args.aggregator),
        floor=args.floor,
    )
    write_json(args.output, _weights_payload(simplex, similarity, config))
    if args.weights_csv:
        simplices.weights_to_csv(args.weights_csv, simplex)
    if args.boundaries_dir:
        os.makedirs(args.boundaries_dir, exist_ok=True)
        for n in range(simplex.N + 1):
            simplices.boundary_to_csv(
                os.path.join(args.boundaries_dir, f"boundary_{n}.csv"),
                simplices.boundary_matrix(simplex.N, n),
            )
    return EXIT_OK


def _resolved_dimensions(dimensions, N: int) -> tuple[int, ...]:
    if dimensions:
        bad = [n for n in dimensions if not 2 <= n <= N]
        if bad:
            raise ValidationError(f"dimensions {bad} outside [2, {N}]")
        return tuple(dimensions)
    resolved = tuple(n for n in range(2, min(5, N) + 1))
    if not resolved:
        raise ValidationError(
            f"no analyzable dimensions: need at least 3 variables, got {N + 1}"
        )
    return resolved


def cmd_signals(args) -> int:
    model = dist_mod.read_model(args.distribution)
    oracle = infotheory.EntropyOracle(model)
    N = model.num_variables - 1
    dims = _resolved_dimensions(args.dimensions, N)
    measures = _parse_measures(args.measures)
    os.makedirs(args.output_dir, exist_ok=True)
    for n in dims:
        for measure in measures:
            values = infotheory.signal_sweep(oracle, N, n, measure)
            stem = os.path.join(args.output_dir, f"signal_{measure.value}_dim{n}")
            signal = transform.HighOrderSignal(dimension=n, coefficients=values, measure=measure)
            transform.write_signal(stem + ".json", signal, num_vertices=N + 1)
            infotheory.sweep_to_csv(stem + ".csv", N, n, values)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    simplex = structural_simplex_from_payload(read_json(args.weights))
    dims = _resolved_dimensions(args.dimensions, simplex.N)
    os.makedirs(args.output_dir, exist_ok=True)
    for n in dims:
        operator = spectral.laplacian(simplex, n, formula=args.laplacian_formula)
        basis = spectral.fourier_basis(operator, spectral.weighted_inner_product(simplex, n))
        write_json(os.path.join(args.output_dir, f"basis_dim{n}.json"), basis_to_jsonable(basis))
        _write_eigenvalues_csv(
            os.path.join(args.output_dir, f"eigenvalues_dim{n}.csv"), basis.eigenvalues
        )
        diagnostics = basis.diagnostics.to_jsonable()
        diagnostics["kernel_dimension"] = spectral.kernel_dimension(
            basis.eigenvalues, tol=args.kernel_tol
        )
        write_json(os.path.join(args.output_dir, f"diagnostics_dim{n}.json"), diagnostics)
    return EXIT_OK


def cmd_transform(args) -> int:
    signal = transform.read_signal(args.signal)
    basis = read_basis(args.basis)
    if args.inverse:
        result = transform.from_fourier(signal, basis)
    else:
        result = transform.to_fourier(signal, basis)
    transform.write_signal(args.output, result)
    return EXIT_OK


def cmd_cev(args) -> int:
    signal = transform.read_signal(args.signal)
    report = transform.cev_report(signal)
    transform.cev_to_csv(args.output_prefix + ".csv", report)
    transform.cev_to_json(args.output_prefix + ".json", report)
    return EXIT_OK


def cmd_control_random(args) -> int:
    signal = transform.read_signal(args.signal)
    basis = read_basis(args.basis)
    comparison = transform.control_comparison(
        signal,
        basis,
        num_random=args.num_random,
        seed=args.seed,
        orthonormality=args.orthonormality,
    )
    transform.control_to_csv(args.output, comparison)
    return EXIT_OK


def cmd_control_synth(args) -> int:
    outdir = _resolve_output_dir(args.output_dir)
    os.makedirs(outdir, exist_ok=True)
    marker = os.path.join(outdir, INCOMPLETE_MARKER)
    with open(marker, "w", newline="\n") as fh:
        fh.write("run in progress or failed; outputs may be partial\n")
    result = synth.rank_experiment(
        ranks=args.ranks,
        replicates=args.replicates,
        num_samples=args.samples,
        base_seed=args.seed,
        size=args.size,
        dimensions=args.dimensions or synth.DEFAULT_DIMENSIONS,
        measures=_parse_measures(args.measures),
    )
    result.to_csv(os.path.join(outdir, "rank_cev.csv"))
    manifest = dict(result.manifest)
    manifest["versions"] = _versions()
    write_json(os.path.join(outdir, "manifest.json"), manifest)
    os.remove(marker)
    return EXIT_OK


def _run_dimension(n, oracle, simplex, measures, config):
    """Per-dimension pipeline stage; safe to run concurrently across n."""
    operator = spectral.laplacian(simplex, n, formula=config.laplacian_formula)
    basis = spectral.fourier_basis(operator, spectral.weighted_inner_product(simplex, n))
    out = {"basis": basis, "signals": {}, "cev": {}, "cev_errors": {}}
    for name in measures:
        measure = infotheory.MeasureKind(name)
        canonical = transform.build_signal(oracle, simplex, n, measure)
        fourier = transform.to_fourier(canonical, basis)
        out["signals"][name] = (canonical, fourier)
        for tag, sig in (("canonical", canonical), ("fourier", fourier)):
            try:
                out["cev"][(name, tag)] = transform.cev_report(sig)
            except NumericalError as exc:
                out["cev_errors"][(name, tag)] = str(exc)
    return out


def cmd_run(args) -> int:
    if args.manifest:
        payload = read_json(args.manifest)
        stored = payload.get("config")
        if not isinstance(stored, dict):
            raise ValidationError(f"{args.manifest}: missing 'config' section")
        unknown = set(stored) - set(_CONFIG_PARSERS)
        if unknown:
            raise ValidationError(f"{args.manifest}: unknown config keys {sorted(unknown)}")
        config = PipelineConfig(**{
            key: tuple(value) if isinstance(value, list) else value
            for key, value in stored.items()
        })
    else:
        values: dict = {}
        if args.config:
            values.update(load_config_file(args.config))
        for key in _CONFIG_PARSERS:
            flag = getattr(args, key, None)
            if flag is not None:
                values[key] = flag
        config = PipelineConfig(**values)
    config.validate()
    units.set_entropy_units(config.units)

    outdir = _resolve_output_dir(args.output_dir)
    os.makedirs(outdir, exist_ok=True)
    marker = os.path.join(outdir, INCOMPLETE_MARKER)
    with open(marker, "w", newline="\n") as fh:
        fh.write("run in progress or failed; outputs may be partial\n")

    model = _estimate_model(config)
    dist_mod.write_model(os.path.join(outdir, "distribution.json"), model)
    oracle = infotheory.EntropyOracle(model)
    N = model.num_variables - 1

    similarity = simplices.similarity_matrix(model, simplices.SimilarityMetric(config.metric))
    simplex = simplices.structural_weights(
        similarity,
        aggregator=simplices.WeightAggregator(config.aggregator),
        floor=config.floor,
    )
    _write_similarity_csv(os.path.join(outdir, "similarity.csv"), similarity)
    simplices.weights_to_csv(os.path.join(outdir, "weights.csv"), simplex)
    write_json(os.path.join(outdir, "weights.json"), _weights_payload(simplex, similarity, config))

    dims = _resolved_dimensions(config.dimensions, N)
    config.dimensions = dims
    measures = tuple(config.measures)

    results: dict[int, dict] = {}
    if args.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = {
                n: pool.submit(_run_dimension, n, oracle, simplex, measures, config)
                for n in dims
            }
            results = {n: fut.result() for n, fut in futures.items()}
    else:
        results = {n: _run_dimension(n, oracle, simplex, measures, config) for n in dims}

    components_rows = []
    for n in sorted(results):
        res = results[n]
        dim_dir = os.path.join(outdir, f"dim_{n}")
        os.makedirs(dim_dir, exist_ok=True)
        basis = res["basis"]
        write_json(os.path.join(dim_dir, "basis.json"), basis_to_jsonable(basis))
        _write_eigenvalues_csv(os.path.join(dim_dir, "eigenvalues.csv"), basis.eigenvalues)

        diagnostics = basis.diagnostics.to_jsonable()
        diagnostics["kernel_dimension"] = spectral.kernel_dimension(
            basis.eigenvalues, tol=config.kernel_tol
        )
        diagnostics["cev_status"] = {}
        for name in measures:
            for tag in ("canonical", "fourier"):
                key = (name, tag)
                if key in res["cev_errors"]:
                    diagnostics["cev_status"][f"{name}_{tag}"] = res["cev_errors"][key]
                else:
                    diagnostics["cev_status"][f"{name}_{tag}"] = "ok"
        write_json(os.path.join(dim_dir, "diagnostics.json"), diagnostics)

        for name in measures:
            canonical, fourier = res["signals"][name]
            stem = os.path.join(dim_dir, f"signal_{name}")
            transform.write_signal(stem + "_canonical.json", canonical, num_vertices=N + 1)
            infotheory.sweep_to_csv(stem + "_canonical.csv", N, n, canonical.coefficients)
            transform.write_signal(stem + "_fourier.json", fourier, num_vertices=N + 1)
            _write_component_csv(stem + "_fourier.csv", fourier.coefficients)
            for tag in ("canonical", "fourier"):
                report = res["cev"].get((name, tag))
                if report is None:
                    continue
                prefix = os.path.join(dim_dir, f"cev_{name}_{tag}")
                transform.cev_to_csv(prefix + ".csv", report)
                transform.cev_to_json(prefix + ".json", report)
            fourier_report = res["cev"].get((name, "fourier"))
            canonical_report = res["cev"].get((name, "canonical"))
            if fourier_report and canonical_report:
                for threshold in transform.CEV_THRESHOLDS:
                    components_rows.append([
                        name,
                        n,
                        int(round(threshold * 100)),
                        fourier_report.components_at[threshold],
                        canonical_report.components_at[threshold],
                    ])

    with open(os.path.join(outdir, "components.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["measure", "dimension", "threshold_pct", "fourier_k", "canonical_k"])
        writer.writerows(components_rows)

    manifest = {"config": asdict(config), "versions": _versions()}
    manifest["config"]["dimensions"] = list(dims)
    manifest["config"]["measures"] = list(measures)
    write_json(os.path.join(outdir, "manifest.json"), manifest)
    os.remove(marker)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _int_list(text: str) -> tuple[int, ...]:
    return _parse_int_list(text)


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperharmonic",
        description="Spectral compression of high-order information signals.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate a distribution or copula model from CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("discrete", "continuous"), default="discrete")
    p.add_argument("--smoothing", type=float, default=0.0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("complex", help="build the structural simplex weights")
    p.add_argument("--distribution", required=True)
    p.add_argument("--metric", default="mutual_information",
                   choices=[m.value for m in simplices.SimilarityMetric])
    p.add_argument("--aggregator", default="mean",
                   choices=[a.value for a in simplices.WeightAggregator])
    p.add_argument("--floor", type=float, default=simplices.DEFAULT_WEIGHT_FLOOR)
    p.add_argument("--output", required=True)
    p.add_argument("--weights-csv", default=None)
    p.add_argument("--boundaries-dir", default=None)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("signals", help="sweep measures into canonical signals")
    p.add_argument("--distribution", required=True)
    p.add_argument("--dimensions", type=_int_list, default=())
    p.add_argument("--measures", type=_str_list,
                   default=("o_information", "s_information"))
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_signals)

    p = sub.add_parser("spectrum", help="diagonalize Laplacians into Fourier bases")
    p.add_argument("--weights", required=True)
    p.add_argument("--dimensions", type=_int_list, default=())
    p.add_argument("--kernel-tol", dest="kernel_tol", type=float,
                   default=spectral.DEFAULT_KERNEL_TOLERANCE)
    p.add_argument("--laplacian-formula", dest="laplacian_formula",
                   choices=("adjoint", "alternate"), default="adjoint")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("transform", help="change a signal between bases")
    p.add_argument("--signal", required=True)
    p.add_argument("--basis", required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("cev", help="cumulative explained variance of a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--output-prefix", required=True)
    p.set_defaults(func=cmd_cev)

    p = sub.add_parser("control-random", help="compare a Fourier basis to random bases")
    p.add_argument("--signal", required=True)
    p.add_argument("--basis", required=True)
    p.add_argument("--num-random", dest="num_random", type=int,
                   default=transform.DEFAULT_RANDOM_BASES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orthonormality", choices=("w", "euclidean"), default="w")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_control_random)

    p = sub.add_parser("control-synth", help="rank-controlled synthetic experiment")
    p.add_argument("--ranks", type=_int_list, default=(2, 9))
    p.add_argument("--replicates", type=int, default=synth.DEFAULT_REPLICATES)
    p.add_argument("--samples", type=int, default=synth.DEFAULT_SAMPLES)
    p.add_argument("--size", type=int, default=synth.DEFAULT_SIZE)
    p.add_argument("--dimensions", type=_int_list, default=())
    p.add_argument("--measures", type=_str_list,
                   default=("o_information", "s_information"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=cmd_control_synth)

    p = sub.add_parser("run", help="full pipeline into an output directory")
    p.add_argument("--input", default=None)
    p.add_argument("--kind", choices=("discrete", "continuous"), default=None)
    p.add_argument("--dimensions", type=_int_list, default=None)
    p.add_argument("--measures", type=_str_list, default=None)
    p.add_argument("--metric", default=None,
                   choices=[m.value for m in simplices.SimilarityMetric])
    p.add_argument("--aggregator", default=None,
                   choices=[a.value for a in simplices.WeightAggregator])
    p.add_argument("--floor", type=float, default=None)
    p.add_argument("--kernel-tol", dest="kernel_tol", type=float, default=None)
    p.add_argument("--laplacian-formula", dest="laplacian_formula",
                   choices=("adjoint", "alternate"), default=None)
    p.add_argument("--num-random", dest="num_random", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--smoothing", type=float, default=None)
    p.add_argument("--units", choices=("bits", "nats"), default=None)
    p.add_argument("--config", default=None, help="flat key=value config file")
    p.add_argument("--manifest", default=None, help="replay a previous run exactly")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

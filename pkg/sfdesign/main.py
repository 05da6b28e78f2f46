"""Batch command-line interface for building, evaluating and verifying designs."""

import argparse
import hashlib
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List

import numpy as np
from pydantic import BaseModel, Field

from sfdesign import __version__
from sfdesign.config import Settings, load_settings
from sfdesign.errors import CsvFormatError, DesignError, InvalidDimensionError, OAParseError
from sfdesign.modules.correlation import correlation_matrix, is_orthogonal, second_order_check
from sfdesign.modules.design import (
    DesignMatrix,
    JitterMode,
    LevelMatrix,
    gram_schmidt_design,
    infer_level_matrix,
    load_level_matrix,
    random_latin_hypercube,
    read_csv_matrix,
    to_unit_cube,
    validate_latin_hypercube,
    write_csv,
)
from sfdesign.modules.discrepancy import MEASURES, discrepancy, star_discrepancy_grid
from sfdesign.modules.distance import (
    DEFAULT_Q,
    DistanceOrder,
    audze_eglais,
    dmin2,
    min_interpoint_distance,
    minimax_cover_radius,
    phi_q,
)
from sfdesign.modules.galois import prime_power
from sfdesign.modules.nets import is_net, is_sequence_prefix
from sfdesign.modules.oa import galois_plane_oa, load_oa, oa_based_lh, parse_oa, verify_strength
from sfdesign.modules.olh import (
    CorrelationPrediction,
    KronResult,
    bingham_general,
    bingham_kronecker,
    doubling_pipeline,
    kron_augmented,
    kron_construct,
    oa_coupled_olh,
    oa_coupled_prediction,
    sun_olh_even,
    sun_olh_odd,
)
from sfdesign.modules.sampling import SamplingScheme, SchemeKind, test_function, variance_experiment
from sfdesign.modules.search import (
    Objective,
    anneal_lh,
    columnwise_pairwise,
    threshold_accepting_utype,
)
from sfdesign.modules.tables import TABLES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILED = 3
EXIT_IO = 4

DEFAULT_METRICS = ["phi_q", "rho_max", "rho_ave_sq", "cl2"]
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class VerificationFailed(Exception):
    """A verify command ran to completion and the input failed the check."""


class RunManifest(BaseModel):
    """Everything needed to replay a run and check its outputs.

    Attributes:
        command: Subcommand name
        argv: Arguments the run was invoked with
        parameters: Parsed arguments
        seed: Seed used, when the command is randomized
        version: Package version
        outputs: SHA-256 digest per written file
    """
    command: str
    argv: List[str]
    parameters: Dict[str, Any]
    seed: int | None = None
    version: str = __version__
    outputs: Dict[str, str] = Field(default_factory=dict)


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else (str(value) if math.isinf(value) else value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(data: dict, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
    return path


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _write_manifest(args, outputs: List[Path]) -> Path:
    parameters = {key: value for key, value in vars(args).items() if key not in ("func", "argv", "parser")}
    manifest = RunManifest(
        command=args.command,
        argv=list(args.argv),
        parameters=_jsonable(parameters),
        seed=getattr(args, "seed", None),
        outputs={str(p): file_digest(p) for p in outputs},
    )
    path = _sibling(outputs[0], ".manifest.json")
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.info("Wrote manifest %s", path)
    return path


def _load_design(path: str | Path):
    """A balanced level matrix when the CSV holds one, else unit-cube points or raw values."""
    values = read_csv_matrix(path)
    L = infer_level_matrix(values)
    if L is not None:
        return L
    if values.min() >= 0.0 and values.max() < 1.0:
        return DesignMatrix(values)
    return values


def _load_signs(path: str | Path) -> np.ndarray:
    values = read_csv_matrix(path)
    if not np.all(np.abs(values) == 1):
        raise CsvFormatError(f"{path}: expected a matrix of +-1 entries")
    return values.astype(np.int64)


def _design_report(L: LevelMatrix) -> Dict[str, Any]:
    summary = correlation_matrix(L)
    report = {
        "n": L.n,
        "k": L.k,
        "latin_hypercube": validate_latin_hypercube(L).passed,
        "orthogonal": is_orthogonal(L).orthogonal,
        "rho_max": summary.rho_max,
        "rho_ave_sq": summary.rho_ave_sq,
    }
    if summary.exact is not None:
        report["rho_max_exact"] = summary.rho_max_exact
        report["rho_ave_sq_exact"] = summary.rho_ave_sq_exact
    return report


def _prediction_report(prediction: CorrelationPrediction) -> Dict[str, Any]:
    return {
        "rho_max": prediction.rho_max,
        "rho_ave_sq": prediction.rho_ave_sq,
        "rho_max_exact": prediction.exact_rho_max,
        "rho_ave_sq_exact": prediction.exact_rho_ave_sq,
    }


def _emit_construction(args, L: LevelMatrix, out: Path, extra: Dict[str, Any] | None = None) -> List[Path]:
    write_csv(L, out)
    report = _design_report(L)
    report.update(extra or {})
    report_path = write_json(report, _sibling(out, ".report.json"))
    print(f"{out}: {L.n}x{L.k} orthogonal={report['orthogonal']} rho_max={report['rho_max']:.6g}")
    return [out, report_path]


# Commands

def cmd_gen(args, settings: Settings) -> List[Path]:
    """Generate a random LH, an OA-based LH or a Gram-Schmidt design."""
    out = Path(args.out)
    if args.kind == "oa-lh":
        if args.oa is None:
            raise InvalidDimensionError("oa-lh needs --oa")
        A = load_oa(args.oa)
        if args.k is not None:
            A = A.columns(range(args.k))
        L = oa_based_lh(A, args.seed)
    else:
        if args.n is None or args.k is None:
            args.parser.error(f"{args.kind} requires --n and --k")
        L = random_latin_hypercube(args.n, args.k, args.seed)
    if args.kind == "gram-schmidt":
        write_csv(gram_schmidt_design(L), out)
    elif args.jitter is None:
        write_csv(L, out)
    else:
        write_csv(to_unit_cube(L, JitterMode(args.jitter), np.random.SeedSequence(args.seed).spawn(1)[0]), out)
    print(f"Wrote {L.n}x{L.k} {args.kind} design to {out}")
    return [out]


def _oa_coupling(args) -> List[Path]:
    B = load_level_matrix(args.b)
    if args.oa is not None:
        A = load_oa(args.oa)
    else:
        A = galois_plane_oa(B.n)
    f = args.f if args.f is not None else A.k // 2
    A = A.columns(range(2 * f))
    L = oa_coupled_olh(B, A)
    prediction = oa_coupled_prediction(correlation_matrix(B), B.k, f)
    return _emit_construction(args, L, Path(args.out), {"prediction": _prediction_report(prediction)})


def _sun(args) -> List[Path]:
    L = sun_olh_odd(args.c) if args.parity == "odd" else sun_olh_even(args.c)
    check = second_order_check(L)
    extra = {"second_order": check.second_order, "second_order_max_abs_corr": check.max_abs_corr}
    return _emit_construction(args, L, Path(args.out), extra)


def _kron_extra(result: KronResult) -> Dict[str, Any]:
    return {"label": result.label, "conditions": result.conditions.as_dict()}


def _kron(args) -> List[Path]:
    A, F = _load_signs(args.a), _load_signs(args.f)
    B, E = load_level_matrix(args.b), load_level_matrix(args.e)
    result = kron_augmented(A, B, E, F) if args.augment else kron_construct(A, B, E, F)
    return _emit_construction(args, result.design, Path(args.out), _kron_extra(result))


def _double(args) -> List[Path]:
    B = load_level_matrix(args.b)
    out = Path(args.out)
    written = []
    for order, result in doubling_pipeline(B).items():
        L = result.design
        path = out.with_name(f"{out.stem}_{L.n}x{L.k}{out.suffix or '.csv'}")
        written.extend(_emit_construction(args, L, path, {**_kron_extra(result), "multiplier": order}))
    return written


def _bingham(args) -> List[Path]:
    A = _load_signs(args.a)
    designs = [load_level_matrix(path) for path in args.d]
    D = bingham_kronecker(A, designs[0]) if len(designs) == 1 else bingham_general(A, designs)
    return _emit_construction(args, D, Path(args.out))


CONSTRUCTIONS: Dict[str, Callable] = {
    "oa-coupling": _oa_coupling,
    "sun": _sun,
    "kron": _kron,
    "double": _double,
    "bingham": _bingham,
}


def cmd_construct(args, settings: Settings) -> List[Path]:
    """Run one of the orthogonal Latin hypercube constructions."""
    return CONSTRUCTIONS[args.construction](args)


def cmd_search(args, settings: Settings) -> List[Path]:
    """Optimize a design and write it with its objective trace."""
    objective = Objective.parse(args.objective, args.q, DistanceOrder.parse(args.t).t)
    params = settings.search_params(seed=args.seed, max_iterations=args.iterations,
                                    restarts=args.restarts, workers=args.workers)
    if args.algorithm == "anneal":
        result = anneal_lh(args.n, args.k, objective, params, levels=args.levels)
    elif args.algorithm == "cp":
        result = columnwise_pairwise(args.n, args.k, objective, params, levels=args.levels)
    else:
        levels = args.levels if args.levels is not None else args.n
        result = threshold_accepting_utype(args.n, levels, args.k, objective, params)
    out = Path(args.out)
    write_csv(result.design, out)
    trace_path = write_json({
        "objective": str(objective),
        "algorithm": args.algorithm,
        "value": result.value,
        "start_value": result.start_value,
        "restart": result.restart,
        "trace": list(result.trace),
    }, _sibling(out, ".trace.json"))
    print(f"{args.algorithm}: {objective} {result.start_value:.6g} -> {result.value:.6g}, wrote {out}")
    return [out, trace_path]


def _metric_functions(args, settings: Settings) -> Dict[str, Callable]:
    order = DistanceOrder.parse(args.t)
    cache = {}

    def summary(D):
        if "corr" not in cache:
            cache["corr"] = correlation_matrix(D)
        return cache["corr"]

    metrics = {
        "phi_q": lambda D: phi_q(D, args.q, order),
        "mindist": lambda D: min_interpoint_distance(D, order),
        "dmin2": lambda D: dmin2(D, order),
        "audze_eglais": lambda D: audze_eglais(D, order),
        "minimax": lambda D: minimax_cover_radius(D, order, args.resolution, settings.grid_budget),
        "rho_max": lambda D: summary(D).rho_max,
        "rho_ave_sq": lambda D: summary(D).rho_ave_sq,
        "rho_ave": lambda D: summary(D).rho_ave,
        "orthogonal": lambda D: is_orthogonal(D).orthogonal,
        "second_order": lambda D: second_order_check(D).second_order,
        "latin": lambda D: validate_latin_hypercube(D).passed if isinstance(D, LevelMatrix) else None,
        "star": lambda D: discrepancy(D, "star", budget=settings.exact_budget).value,
    }
    for name in ("l2", "cl2", "sl2", "ml2"):
        metrics[name] = lambda D, name=name: discrepancy(D, name).value
    return metrics


def cmd_eval(args, settings: Settings) -> List[Path]:
    """Evaluate a CSV design under the requested metrics and print a JSON report."""
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()] if args.metrics else DEFAULT_METRICS
    available = _metric_functions(args, settings)
    unknown = [m for m in metrics if m not in available]
    if unknown:
        raise DesignError(f"unknown metric {unknown[0]!r}; choose from {', '.join(sorted(available))}")
    D = _load_design(args.design)
    report = {
        "design": str(args.design),
        "n": int(D.shape[0]),
        "k": int(D.shape[1]),
        "parameters": {"q": args.q, "t": args.t, "resolution": args.resolution},
        "metrics": {name: available[name](D) for name in metrics},
    }
    print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    if args.out:
        return [write_json(report, args.out)]
    return []


def cmd_discrepancy(args, settings: Settings) -> List[Path]:
    """Print one discrepancy of a CSV design."""
    D = _load_design(args.design)
    if args.measure == "star" and args.grid is not None:
        result = star_discrepancy_grid(D, args.grid, settings.exact_budget)
    elif args.measure == "star":
        result = discrepancy(D, "star", budget=settings.exact_budget)
    else:
        result = discrepancy(D, args.measure)
    label = "squared " if result.squared else ""
    print(f"{result.method.value}: {label}discrepancy {result.value:.12g}")
    return []


def cmd_verify_oa(args, settings: Settings) -> List[Path]:
    """Check an orthogonal array file against its declared (or the given) strength."""
    path = Path(args.file)
    A = parse_oa(path.read_text(), str(path))
    strength = args.strength if args.strength is not None else A.strength
    report = verify_strength(A, min(strength, A.k))
    if not report.passed:
        raise VerificationFailed(f"{path}: not of strength {strength}: {report.witness}")
    print(f"{path}: {A!r} has strength {strength}")
    return []


def cmd_verify_net(args, settings: Settings) -> List[Path]:
    """Check a CSV point set for the net (or sequence-prefix) property."""
    X = read_csv_matrix(args.points)
    if args.sequence:
        report = is_sequence_prefix(X, args.base, args.t, args.m)
        if not report.passed:
            first = report.failures()[0]
            raise VerificationFailed(f"slice {first.k} at m={first.m} is not a net: "
                                     f"{first.report.witness} holds {first.report.count} points, "
                                     f"expected {first.report.expected}")
        print(f"{args.points}: ({args.t},{X.shape[1]})-sequence prefix in base {args.base} "
              f"({len(report.verdicts)} slices)")
        return []
    m = args.m if args.m is not None else round(math.log(X.shape[0], args.base))
    report = is_net(X, args.base, args.t, m)
    if not report.passed:
        raise VerificationFailed(f"not a ({args.t},{m},{X.shape[1]})-net: {report.witness} "
                                 f"holds {report.count} points, expected {report.expected}")
    print(f"{args.points}: ({args.t},{m},{X.shape[1]})-net in base {args.base}")
    return []


def cmd_plot(args, settings: Settings) -> List[Path]:
    """Render a scatter matrix of a CSV design."""
    from sfdesign.ui.plotting import scatter_matrix

    path = scatter_matrix(_load_design(args.design), args.out, args.grid, args.title)
    print(f"Wrote {path}")
    return [path]


def _sampling_scheme(args) -> SamplingScheme:
    kind = SchemeKind(args.scheme)
    if kind is not SchemeKind.OALHS:
        return SamplingScheme(kind)
    if args.oa is not None:
        return SamplingScheme(kind, load_oa(args.oa))
    q = math.isqrt(args.n)
    if q * q != args.n or prime_power(q) is None:
        raise InvalidDimensionError(f"OA-based sampling without --oa needs n = q^2 for a prime power q, got {args.n}")
    return SamplingScheme(kind, galois_plane_oa(q))


def cmd_variance_lab(args, settings: Settings) -> List[Path]:
    """Estimate the variance of the sample mean under a sampling scheme."""
    f = test_function(args.f, args.k)
    estimate = variance_experiment(f, args.n, args.k, _sampling_scheme(args), args.reps, args.seed,
                                   settings.workers)
    report = {
        "function": f.name,
        "scheme": args.scheme,
        "n": args.n,
        "k": args.k,
        "replications": estimate.replications,
        "seed": args.seed,
        "variance": estimate.variance,
        "stderr": estimate.stderr,
        "n_variance": args.n * estimate.variance,
    }
    print(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    if args.out:
        return [write_json(report, args.out)]
    return []


def cmd_dump_table(args, settings: Settings) -> List[Path]:
    """Print or write an embedded table."""
    if args.name is None:
        for name in sorted(TABLES):
            print(f"{name}: {TABLES[name].description}")
        return []
    if args.name not in TABLES:
        raise DesignError(f"unknown table {args.name!r}; known: {', '.join(sorted(TABLES))}")
    text = TABLES[args.name].to_text()
    if args.out:
        path = Path(args.out)
        path.write_text(text)
        return [path]
    sys.stdout.write(text)
    return []


def cmd_rerun(args, settings: Settings) -> List[Path]:
    """Replay a manifest and compare the regenerated outputs with its digests."""
    manifest = RunManifest.model_validate_json(Path(args.manifest).read_text())
    code = main(manifest.argv)
    if code != EXIT_OK:
        raise VerificationFailed(f"replayed run exited with {code}")
    mismatched = [p for p, digest in manifest.outputs.items() if file_digest(p) != digest]
    if mismatched:
        raise VerificationFailed(f"outputs differ from the manifest: {', '.join(mismatched)}")
    print(f"Reproduced {len(manifest.outputs)} files byte-for-byte")
    return []


# Parser

def _add_distance_options(parser):
    parser.add_argument("--q", type=float, default=DEFAULT_Q, help="phi_q exponent")
    parser.add_argument("--t", default="2", help="distance exponent (1, 2, inf, ...)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfdesign", description="Space-filling designs for computer experiments")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("-q", "--quiet", action="store_true", help="only log errors")
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a design")
    gen.add_argument("kind", choices=["random-lh", "oa-lh", "gram-schmidt"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--oa", help="orthogonal array file for oa-lh")
    gen.add_argument("--jitter", choices=[m.value for m in JitterMode],
                     help="write unit-cube points instead of levels")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="design.csv")
    gen.set_defaults(func=cmd_gen, parser=gen)

    construct = commands.add_parser("construct", help="orthogonal Latin hypercube constructions")
    kinds = construct.add_subparsers(dest="construction", required=True)
    coupling = kinds.add_parser("oa-coupling", help="couple a small LH with an OA of index unity")
    coupling.add_argument("--b", required=True, help="Latin hypercube CSV")
    coupling.add_argument("--oa", help="OA(n^2, n^2f, 2) file; a Galois-plane array when omitted")
    coupling.add_argument("--f", type=int, help="number of OA column pairs to use")
    sun = kinds.add_parser("sun", help="second-order orthogonal recursive foldover")
    sun.add_argument("--c", type=int, required=True)
    sun.add_argument("--parity", choices=["odd", "even"], default="odd")
    kron = kinds.add_parser("kron", help="A kron B + n2 E kron F")
    for name in ("a", "b", "e", "f"):
        kron.add_argument(f"--{name}", required=True, help=f"{name.upper()} matrix CSV")
    kron.add_argument("--augment", action="store_true", help="append U = -n1 A kron B + E kron F")
    double = kinds.add_parser("double", help="2n, 4n, 8n and 16n run designs from an OLH")
    double.add_argument("--b", required=True)
    bingham = kinds.add_parser("bingham", help="sign-matrix block designs")
    bingham.add_argument("--a", required=True)
    bingham.add_argument("--d", required=True, nargs="+", help="one design for A kron D, else one per column of A")
    for sub in (coupling, sun, kron, double, bingham):
        sub.add_argument("--out", default="construct.csv")
    construct.set_defaults(func=cmd_construct)

    search = commands.add_parser("search", help="optimize a Latin hypercube or U-type design")
    search.add_argument("--algorithm", choices=["anneal", "cp", "threshold"], default="anneal")
    search.add_argument("--objective", default="phi_q", help="phi_q, rho_ave_sq, cl2, ... ('phi_q:20' sets q)")
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--k", type=int, required=True)
    search.add_argument("--levels", type=int)
    _add_distance_options(search)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--iterations", type=int)
    search.add_argument("--restarts", type=int)
    search.add_argument("--workers", type=int)
    search.add_argument("--out", default="search.csv")
    search.set_defaults(func=cmd_search)

    evaluate = commands.add_parser("eval", help="evaluate a design")
    evaluate.add_argument("--design", required=True)
    evaluate.add_argument("--metrics", default="", help="comma separated; default " + ",".join(DEFAULT_METRICS))
    _add_distance_options(evaluate)
    evaluate.add_argument("--resolution", type=int, default=11, help="grid resolution for minimax")
    evaluate.add_argument("--out")
    evaluate.set_defaults(func=cmd_eval)

    disc = commands.add_parser("discrepancy", help="discrepancy of a design")
    disc.add_argument("--design", required=True)
    disc.add_argument("--measure", choices=sorted(MEASURES), default="cl2")
    disc.add_argument("--grid", type=int, help="grid resolution for a sampled star discrepancy")
    disc.set_defaults(func=cmd_discrepancy)

    verify_oa = commands.add_parser("verify-oa", help="check orthogonal array strength")
    verify_oa.add_argument("file")
    verify_oa.add_argument("--strength", type=int)
    verify_oa.set_defaults(func=cmd_verify_oa)

    verify_net = commands.add_parser("verify-net", help="check the (t,m,s)-net property")
    verify_net.add_argument("--points", required=True)
    verify_net.add_argument("--base", type=int, default=2)
    verify_net.add_argument("--t", type=int, default=0)
    verify_net.add_argument("--m", type=int)
    verify_net.add_argument("--sequence", action="store_true", help="check every aligned slice up to --m")
    verify_net.set_defaults(func=cmd_verify_net)

    plot = commands.add_parser("plot", help="scatter-matrix SVG of a design")
    plot.add_argument("--design", required=True)
    plot.add_argument("--grid", type=int, help="draw an s x s cell grid")
    plot.add_argument("--title")
    plot.add_argument("--out", default="design.svg")
    plot.set_defaults(func=cmd_plot)

    lab = commands.add_parser("variance-lab", help="variance of the mean under a sampling scheme")
    lab.add_argument("--f", required=True, help="test function name")
    lab.add_argument("--scheme", choices=[s.value for s in SchemeKind], default="lhs")
    lab.add_argument("--n", type=int, required=True)
    lab.add_argument("--k", type=int, default=2)
    lab.add_argument("--reps", type=int, default=100)
    lab.add_argument("--seed", type=int, default=0)
    lab.add_argument("--oa", help="orthogonal array file for oalhs")
    lab.add_argument("--out")
    lab.set_defaults(func=cmd_variance_lab)

    dump = commands.add_parser("dump-table", help="print an embedded table; lists them without a name")
    dump.add_argument("name", nargs="?")
    dump.add_argument("--out")
    dump.set_defaults(func=cmd_dump_table)

    rerun = commands.add_parser("rerun", help="replay a run manifest")
    rerun.add_argument("manifest")
    rerun.set_defaults(func=cmd_rerun)
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def main(argv: List[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    args.argv = argv
    _configure_logging(args)
    try:
        settings = load_settings(args.config)
        outputs = args.func(args, settings)
        if outputs:
            _write_manifest(args, outputs)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except VerificationFailed as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (CsvFormatError, OAParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except DesignError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Each command maps a ``RunConfig`` to a JSON-ready report. Polytope commands
accept a file or a directory; directories run every ``*.poly`` file in
sorted order across worker processes and report one entry per file.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .classify import (
    check_12,
    classify_polygons,
    enumerate_weight_systems,
    intermediate_lattices,
    simplex_from_weights,
    simplex_matrix_check,
    WeightSystem,
)
from .config import ARITH, CLASSIFY, CLI, PERIODS, ExitCode, RankMode
from .ehrhart import delta_vector, ehrhart
from .errors import ConsistencyError, PreconditionError
from .formats import list_inputs, load_laurent, load_polytope
from .jacobian import find_regular, jacobian_dims, jacobian_report
from .periods import extended_check, fit_recurrence, hasse_constant_term, pi0
from .polytope import LatticePolytope, count_points, degree, dual
from .reflexive import (
    check_24,
    euler_cy3,
    fundamental_group,
    GroupKind,
    hodge_report,
    is_fano_polyhedron,
    is_reflexive,
    k3_edge_rank,
)
from .reports import dump_lines, dumps, emit, polytope_summary, render_text

logger = logging.getLogger(__name__)


class OutputFormat:
    JSON = "json"
    TEXT = "text"
    LINES = "jsonl"


@dataclass
class RunConfig:
    """Everything one invocation needs; identical configs give identical reports."""
    command: str
    inputs: List[str] = field(default_factory=list)
    seed: int = ARITH.DEFAULT_SEED
    exact: bool = False
    kmax: int = 20
    max_order: int = PERIODS.MAX_ORDER
    max_degree: int = PERIODS.MAX_DEGREE
    extend: bool = False
    prime: Optional[int] = None
    n: int = 0
    weights: Tuple[int, ...] = ()
    lattices: bool = False
    box: int = CLASSIFY.SEARCH_BOX
    format: str = CLI.DEFAULT_FORMAT
    jobs: Optional[int] = None
    output: Optional[str] = None

    @property
    def mode(self) -> str:
        return RankMode.EXACT if self.exact else RankMode.MODULAR

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        valid = {f.name for f in fields(cls)}
        filtered = {k: v for k, v in data.items() if k in valid}
        if "weights" in filtered:
            filtered["weights"] = tuple(filtered["weights"] or ())
        return cls(**filtered)


# ============================================================================
# POLYTOPE COMMANDS
# ============================================================================

def _dual(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    return {"polytope": polytope_summary(p), "dual": polytope_summary(dual(p))}


def _reflexive(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    reflexive, info = is_reflexive(p)
    delta = delta_vector(p)
    return {
        "reflexive": reflexive,
        "info": info.to_dict(),
        "psi": list(delta.psi),
        "phi": list(delta.phi),
        "fano": reflexive and is_fano_polyhedron(p),
    }


def _ehrhart(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    delta = delta_vector(p)
    return {
        "ehrhart": ehrhart(p).as_strings(),
        "psi": list(delta.psi),
        "phi": list(delta.phi),
        "symmetric": delta.is_symmetric(),
        "degree": degree(p),
    }


def _faces(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    rows = []
    for d in range(p.dim):
        for face in p.faces(d):
            l, l_star = count_points(face)
            rows.append({
                "face": face.label,
                "dim": face.dim,
                "vertices": [list(v) for v in face.vertices],
                "l": l,
                "l_star": l_star,
                "d": degree(face) if face.dim else None,
            })
    return {"f_vector": list(p.face_numbers()), "faces": rows}


def _hodge(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    return hodge_report(p).to_dict()


def _euler(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    return {"euler": euler_cy3(p)}


def _k3(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    ranks = k3_edge_rank(p)
    return {
        "edge_degree_sum": check_24(p),
        "rank_f": ranks.rank_f,
        "rank_g": ranks.rank_g,
        "rank_total": ranks.total,
        "bound_attained": ranks.bound_attained,
    }


def _fundgroup(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    return {
        "pi1_pair": list(fundamental_group(p, GroupKind.PAIR)),
        "pi1_polytope": list(fundamental_group(p, GroupKind.POLYTOPE)),
    }


def _periods(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    return pi0(p, config.kmax).to_dict()


def _recurrence(config: RunConfig, p: LatticePolytope) -> Dict[str, Any]:
    series = pi0(p, config.kmax)
    found = fit_recurrence(series, config.max_order, config.max_degree)
    report = series.to_dict(found)
    report["found"] = found is not None
    if found is not None and config.extend:
        report["extended_check"] = extended_check(p, found, series)
    return report


PolytopeHandler = Callable[[RunConfig, LatticePolytope], Dict[str, Any]]

POLYTOPE_COMMANDS: Dict[str, PolytopeHandler] = {
    "dual": _dual,
    "reflexive": _reflexive,
    "ehrhart": _ehrhart,
    "faces": _faces,
    "hodge": _hodge,
    "euler": _euler,
    "k3": _k3,
    "fundgroup": _fundgroup,
    "periods": _periods,
    "recurrence": _recurrence,
}


# ============================================================================
# OTHER COMMANDS
# ============================================================================

def _classify2d(config: RunConfig) -> Any:
    catalog = classify_polygons(config.box)
    entries = [entry.to_dict(i) for i, entry in enumerate(catalog.entries)]
    if config.format == OutputFormat.LINES:
        return entries
    rows = check_12(catalog)
    return {
        "box": catalog.box,
        "count": len(catalog),
        "twelve_relation": all(row.ok for row in rows),
        "entries": entries,
    }


def _weights(config: RunConfig) -> Any:
    systems = [w.to_dict() for w in enumerate_weight_systems(config.n)]
    if config.format == OutputFormat.LINES:
        return systems
    return {"n": config.n, "count": len(systems), "systems": systems}


def _simplex(config: RunConfig) -> Dict[str, Any]:
    w = WeightSystem.from_weights(config.weights)
    p = simplex_from_weights(w)
    check = simplex_matrix_check(p)
    report: Dict[str, Any] = {
        "weight_system": w.to_dict(),
        "simplex": polytope_summary(p),
        "matrix": [list(row) for row in check.matrix],
        "diagonal": list(check.diagonal),
        "recovered_weights": list(check.weights),
        "unit_fraction_sum": check.unit_fraction_sum,
        "ok": check.ok,
    }
    if config.lattices:
        lattices = intermediate_lattices(w)
        report["intermediate_lattices"] = {
            "group": list(lattices.group),
            "subgroup_count": lattices.subgroup_count,
            "orbits": [
                {"size": o.size, "subgroup_order": o.subgroup_order, "simplex": polytope_summary(o.polytope)}
                for o in lattices.orbits
            ],
        }
    return report


def _polytope_and_laurent(config: RunConfig) -> Tuple[LatticePolytope, Any]:
    p = load_polytope(config.inputs[0])
    f = load_laurent(config.inputs[1]) if len(config.inputs) > 1 else None
    return p, f


def _jacobian(config: RunConfig) -> Dict[str, Any]:
    p, f = _polytope_and_laurent(config)
    if f is None:
        f, _ = find_regular(p, config.seed, mode=config.mode, prime=config.prime)
    return jacobian_report(p, f, config.mode, config.prime, config.seed).to_dict()


def _regularity(config: RunConfig) -> Dict[str, Any]:
    p, f = _polytope_and_laurent(config)
    if f is None:
        raise PreconditionError("regularity needs a Laurent polynomial file")
    return jacobian_dims(p, f, config.mode, config.prime, config.seed).to_dict()


def _hasse(config: RunConfig) -> Dict[str, Any]:
    if config.prime is None:
        raise PreconditionError("hasse needs --prime")
    f = load_laurent(config.inputs[0])
    value = hasse_constant_term(f, config.prime)
    return {"prime": config.prime, "constant_term": value, "vanishes": value == 0}


COMMANDS: Dict[str, Callable[[RunConfig], Any]] = {
    "classify2d": _classify2d,
    "weights": _weights,
    "simplex": _simplex,
    "jacobian": _jacobian,
    "regularity": _regularity,
    "hasse": _hasse,
}


# ============================================================================
# EXECUTION
# ============================================================================

def worker_count(config: RunConfig) -> int:
    if config.jobs:
        return max(1, config.jobs)
    env = os.environ.get(CLI.JOBS_ENV, "")
    try:
        return max(1, int(env))
    except ValueError:
        return os.cpu_count() or 1


def _run_one(config: RunConfig, path: str) -> Tuple[int, Dict[str, Any]]:
    handler = POLYTOPE_COMMANDS[config.command]
    try:
        return ExitCode.OK, {"input": path, "result": handler(config, load_polytope(path))}
    except PreconditionError as exc:
        logger.warning("%s: %s", path, exc)
        return ExitCode.PRECONDITION, {"input": path, "error": str(exc)}
    except ConsistencyError as exc:
        logger.error("%s: %s", path, exc)
        return ExitCode.INTERNAL, {"input": path, "error": str(exc)}


def _run_polytope_command(config: RunConfig) -> Tuple[int, Any]:
    source = config.inputs[0]
    if not os.path.isdir(source):
        return ExitCode.OK, POLYTOPE_COMMANDS[config.command](config, load_polytope(source))
    paths = list_inputs(source)
    workers = min(worker_count(config), len(paths))
    logger.info("batch of %d files with %d worker processes", len(paths), workers)
    task = partial(_run_one, config)
    if workers <= 1:
        outcomes = [task(path) for path in paths]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(task, paths))
    codes = {code for code, _ in outcomes}
    status = ExitCode.INTERNAL if ExitCode.INTERNAL in codes else max(codes, default=ExitCode.OK)
    return status, {"command": config.command, "results": [entry for _, entry in outcomes]}


def execute(config: RunConfig) -> Tuple[int, Any]:
    """Run a command; precondition and consistency errors propagate."""
    if config.command in POLYTOPE_COMMANDS:
        return _run_polytope_command(config)
    return ExitCode.OK, COMMANDS[config.command](config)


def render(config: RunConfig, report: Any) -> str:
    if config.format == OutputFormat.TEXT:
        return render_text(report)
    if config.format == OutputFormat.LINES and isinstance(report, list):
        return dump_lines(report)
    return dumps(report)


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def _weight_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=ARITH.DEFAULT_SEED, help="seed for primes and coefficients")
    common.add_argument("--exact", action="store_true", help="exact rational ranks instead of modular")
    common.add_argument("--prime", type=int, default=None, help="modulus (jacobian, regularity, hasse)")
    common.add_argument(
        "--format", choices=[OutputFormat.JSON, OutputFormat.TEXT, OutputFormat.LINES], default=CLI.DEFAULT_FORMAT
    )
    common.add_argument("--jobs", type=int, default=None, help=f"batch worker processes (default ${CLI.JOBS_ENV})")
    common.add_argument("--output", default=None, help="write the report to FILE atomically")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="reflex", description="Exact lattice-polytope and toric mirror-symmetry computations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("dual", "reflexive", "ehrhart", "faces", "hodge", "euler", "k3", "fundgroup"):
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("inputs", nargs=1, metavar="POLYTOPE", help="polytope file or directory")

    for name in ("periods", "recurrence"):
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("inputs", nargs=1, metavar="POLYTOPE")
        cmd.add_argument("--kmax", type=int, required=True)
        if name == "recurrence":
            cmd.add_argument("--max-order", type=int, default=PERIODS.MAX_ORDER)
            cmd.add_argument("--max-degree", type=int, default=PERIODS.MAX_DEGREE)
            cmd.add_argument("--extend", action="store_true", help="check further coefficients")

    cmd = sub.add_parser("classify2d", parents=[common])
    cmd.add_argument("--box", type=int, default=CLASSIFY.SEARCH_BOX)

    cmd = sub.add_parser("weights", parents=[common])
    cmd.add_argument("n", type=int)

    cmd = sub.add_parser("simplex", parents=[common])
    cmd.add_argument("--weights", type=_weight_list, required=True, help="w0,w1,...")
    cmd.add_argument("--lattices", action="store_true", help="also list intermediate lattices")

    cmd = sub.add_parser("jacobian", parents=[common])
    cmd.add_argument("inputs", nargs="+", metavar="FILE", help="polytope file, optional Laurent file")

    cmd = sub.add_parser("regularity", parents=[common])
    cmd.add_argument("inputs", nargs=2, metavar="FILE", help="polytope file and Laurent file")

    cmd = sub.add_parser("hasse", parents=[common])
    cmd.add_argument("inputs", nargs=1, metavar="LAURENT")
    return parser


def parse_config(argv: Sequence[str]) -> Tuple[RunConfig, int]:
    args = vars(build_parser().parse_args(list(argv)))
    verbosity = args.pop("verbose", 0)
    return RunConfig.from_dict(args), verbosity


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(format=CLI.LOG_FORMAT, level=level, stream=sys.stderr)


def run(argv: Sequence[str], stream=None) -> int:
    config, verbosity = parse_config(argv)
    configure_logging(verbosity)
    logger.debug("run config: %s", config.to_dict())
    try:
        status, report = execute(config)
    except PreconditionError as exc:
        print(f"reflex: {exc}", file=sys.stderr)
        return ExitCode.PRECONDITION
    except ConsistencyError as exc:
        print(f"reflex: internal consistency failure: {exc}", file=sys.stderr)
        return ExitCode.INTERNAL
    except OSError as exc:
        print(f"reflex: {exc}", file=sys.stderr)
        return ExitCode.PRECONDITION
    emit(render(config, report), config.output, stream)
    return status


def main() -> None:
    sys.exit(run(sys.argv[1:]))

import argparse
import json
import logging
import pathlib
import sys
from collections.abc import Sequence

import subfactor_workbench.branch_matrix as branch_matrix
import subfactor_workbench.classification as classification
import subfactor_workbench.data.bigraph_models as bigraph_models
import subfactor_workbench.data.bigraph_pairs as bigraph_pairs
import subfactor_workbench.data.catalog as catalog
import subfactor_workbench.graph_ops as graph_ops
import subfactor_workbench.obstructions as obstructions
import subfactor_workbench.spectral as spectral
from subfactor_workbench.config import WorkbenchConfig
from subfactor_workbench.connection_solver_torch import ConnectionSolverTorch
from subfactor_workbench.data.bigraph_pairs import BigraphPair
from subfactor_workbench.data.pair_records import PairRecord

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MISMATCH = 2


def resolve_pair(argument: str) -> tuple[str | None, BigraphPair]:
    """
    A catalog name, a record file (.json or two lines of text), "plus,minus",
    or a single bigraph string paired with itself
    """

    try:
        entry = catalog.lookup(argument)
        return entry.name, entry.pair
    except KeyError:
        pass

    path = pathlib.Path(argument)
    if path.is_file():
        record = PairRecord.load_file(path)
        return record.name, record.pair

    if "," in argument:
        plus_text, minus_text = (part.strip() for part in argument.split(",", 1))
        return None, bigraph_pairs.pair_from_strings(plus_text, minus_text)

    return None, bigraph_pairs.pair_from_strings(argument, argument)


def _print_json(data: object):
    print(json.dumps(data, indent=2, default=str))


def _graph_info(graph: bigraph_models.Bigraph) -> dict[str, object]:
    spectral_data = spectral.norm_squared(graph, 5)
    profile = graph_ops.star_profile(graph)

    info: dict[str, object] = {
        "string": bigraph_models.serialize_bigraph(graph),
        "depth": graph.depth,
        "layer_sizes": list(graph.layer_sizes),
        "norm_squared": spectral_data.to_json(),
        "supertransitivity": spectral.supertransitivity(graph),
        "star_profile": None if profile is None else profile.to_json(),
        "stable_from": graph_ops.stable_from(graph),
    }

    if spectral.is_exact_index(graph, 5):
        info["dimensions"] = spectral.dimension_vector(graph).to_json()

    return info


def command_parse(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    graph = bigraph_models.parse_bigraph(args.string)
    _print_json(
        {
            "string": bigraph_models.serialize_bigraph(graph),
            "depth": graph.depth,
            "layer_sizes": list(graph.layer_sizes),
            "edges": [[list(row) for row in layer] for layer in graph.edges],
            "duals": [[i + 1 for i in layer] for layer in graph.duals],
        }
    )
    return EXIT_OK


def command_info(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    name, pair = resolve_pair(args.pair)
    _print_json(
        {
            "name": name,
            "plus": _graph_info(pair.plus),
            "minus": _graph_info(pair.minus),
            "index_five": obstructions.is_index_five(pair),
            "advisories": list(pair.advisories),
        }
    )
    return EXIT_OK


def command_obstruct(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    _, pair = resolve_pair(args.pair)
    verdicts = obstructions.run_battery(pair, short_circuit=args.short_circuit)
    _print_json([verdict.to_json() for verdict in verdicts])
    return EXIT_OK


def command_iso(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    _, first = resolve_pair(args.first)
    _, second = resolve_pair(args.second)

    iso = bigraph_pairs.pair_isomorphic(first, second, allow_opposite=args.opposite)
    _print_json({"isomorphic": iso is not None, "iso": None if iso is None else iso.to_json()})
    return EXIT_OK


def command_connect(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    _, pair = resolve_pair(args.pair)
    config = config.with_overrides(restarts=args.restarts, tol=args.tol, seed=args.seed)

    solver = ConnectionSolverTorch.from_config(pair, config)
    solver.progress_path = args.save
    result = solver.solve()
    orbits = solver.count_orbits()

    if args.save is not None and result.best is not None:
        solver.save()

    _print_json(
        {
            "cells": solver.cell_complex.to_json(),
            "solve": result.to_json(),
            "orbits": orbits.to_json(),
        }
    )
    return EXIT_OK


def command_classify(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    if args.all:
        records = [classification.classify_entry(entry) for entry in catalog.entries()]
    elif args.pair is not None:
        name, pair = resolve_pair(args.pair)
        records = [classification.classify_pair(pair, name=name)]
    else:
        raise ValueError("classify needs a pair or --all")

    _print_json([record.to_json() for record in records])
    return EXIT_OK


def command_report(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    exit_code = EXIT_OK
    try:
        report = classification.reproduce_classification(
            with_connections=args.connections, config=config
        )
    except classification.ClassificationMismatchError as error:
        logger.error(str(error))
        report = error.report
        exit_code = EXIT_MISMATCH

    if args.markdown:
        print(report.to_markdown(), end="")
    else:
        _print_json(report.to_json())

    return exit_code


def command_branch(args: argparse.Namespace, config: WorkbenchConfig) -> int:
    points = branch_matrix.real_trace_points()
    _print_json(
        {
            "real_points": [
                {
                    "eta": [point.eta.real, point.eta.imag],
                    "trace_defect": point.trace_defect.real,
                }
                for point in points
            ],
            "allowed_values": [
                target.to_json() for target in branch_matrix.locate_allowed_values()
            ],
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="index-five",
        description="Verify standard invariant classifications at index 5",
    )
    parser.add_argument("--config", type=pathlib.Path, help=".env file with workbench settings")
    parser.add_argument("--log-path", type=pathlib.Path, help="Also log to this file")
    parser.add_argument("-v", "--verbose", action="count", default=0)

    subparsers = parser.add_subparsers(dest="command", required=True)

    parse = subparsers.add_parser("parse", help="Parse and normalise a bigraph string")
    parse.add_argument("string")
    parse.set_defaults(handler=command_parse)

    info = subparsers.add_parser("info", help="Norm, dimensions, supertransitivity, star profile")
    info.add_argument("pair")
    info.set_defaults(handler=command_info)

    obstruct = subparsers.add_parser("obstruct", help="Run the obstruction battery")
    obstruct.add_argument("pair")
    obstruct.add_argument("--short-circuit", action="store_true")
    obstruct.set_defaults(handler=command_obstruct)

    iso = subparsers.add_parser("iso", help="Test two pairs for isomorphism")
    iso.add_argument("first")
    iso.add_argument("second")
    iso.add_argument("--opposite", action="store_true", help="Also allow swapping the graphs")
    iso.set_defaults(handler=command_iso)

    connect = subparsers.add_parser("connect", help="Search for bi-unitary connections")
    connect.add_argument("pair")
    connect.add_argument("--restarts", type=int)
    connect.add_argument("--tol", type=float)
    connect.add_argument("--seed", type=int)
    connect.add_argument("--save", type=pathlib.Path, help="Pickle the solver state here")
    connect.set_defaults(handler=command_connect)

    classify = subparsers.add_parser("classify", help="Classify one pair or the whole catalog")
    classify.add_argument("pair", nargs="?")
    classify.add_argument("--all", action="store_true")
    classify.set_defaults(handler=command_classify)

    report = subparsers.add_parser("report", help="Reproduce the index 5 classification")
    output = report.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", default=True)
    output.add_argument("--markdown", action="store_true")
    report.add_argument("--connections", action="store_true", help="Attach connection evidence")
    report.set_defaults(handler=command_report)

    branch = subparsers.add_parser("branch", help="Analyse the 2222 branch matrix")
    branch.set_defaults(handler=command_branch)

    return parser


def setup_logging(config: WorkbenchConfig, verbose: int):
    level = logging.getLevelNamesMapping()[config.log_level]
    if verbose:
        level = min(level, logging.INFO if verbose == 1 else logging.DEBUG)

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_path is not None:
        config.log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(config.log_path))

    logging.basicConfig(level=level, handlers=handlers, force=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = WorkbenchConfig.load(args.config).with_overrides(log_path=args.log_path)
        setup_logging(config, args.verbose)
        return args.handler(args, config)
    except ValueError as error:
        logger.error(str(error))
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

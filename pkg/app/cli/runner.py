"""
qcx Command-Line Runner

    qcx <command> --in <files...> --out <dir> [--seed N] [--tol key=val ...]
                  [--workers N] [--log-level LEVEL]

Inputs are parsed up front; any parse error stops the run with exit 2.
Analyses then run concurrently on worker threads, bounded by a semaphore,
and their records are written in input order.

Exit codes: 0 success, 1 failed certificate or analysis error,
2 parse error, 3 numerical non-convergence.
"""

import argparse
import asyncio
import sys
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app import __version__
from app.cli.commands import RunContext, handle
from app.cli.emit import METADATA_NAME, REPORT_NAME, write_jsonl, write_metadata
from app.cli.gallery import write_gallery
from app.config import config
from app.exceptions import NonConvergence, QcxError, ReportIOError, SpecParseError
from app.logger import define_log_level, logger
from app.models.manifest import RunManifest, parse_tolerance_overrides
from app.models.spec_files import LoadedInput, load_input
from app.schema import COMMAND_VALUES, Command

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_NONCONVERGENCE = 3

# higher wins when inputs disagree
_SEVERITY = {EXIT_OK: 0, EXIT_FAILED: 1, EXIT_NONCONVERGENCE: 2, EXIT_PARSE: 3}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcx",
        description="Quasiconformal extension toolkit for meromorphic functions with a pole of order m.",
    )
    parser.add_argument("command", choices=COMMAND_VALUES, help="Analysis to run")
    parser.add_argument("--in", dest="inputs", nargs="+", default=[], help="Input spec files")
    parser.add_argument("--out", dest="output", required=True, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="Seed recorded in every artifact")
    parser.add_argument(
        "--tol", action="append", default=[], metavar="KEY=VAL", help="Tolerance override"
    )
    parser.add_argument("--workers", type=int, default=None, help="Concurrent inputs")
    parser.add_argument("--log-level", default=None, help="stderr log level")
    parser.add_argument("--version", action="version", version=f"qcx {__version__}")
    return parser


def _status_of(records: List[dict]) -> int:
    for record in records:
        if record.get("kind") == "certificate" and record["verdict"] == "fail" and not record["advisory"]:
            return EXIT_FAILED
    return EXIT_OK


def _run_one(
    command: Command, index: int, loaded: LoadedInput, context: RunContext
) -> Tuple[List[dict], int]:
    """Records and exit status for one input; library errors become error records."""
    try:
        records = handle(command, index, loaded, context)
        return records, _status_of(records)
    except ReportIOError:
        raise
    except QcxError as e:
        if isinstance(e, SpecParseError):
            status = EXIT_PARSE
        elif isinstance(e, NonConvergence):
            status = EXIT_NONCONVERGENCE
        else:
            status = EXIT_FAILED
        logger.error(f"{loaded.path}: {type(e).__name__}: {e.message}")
        error = {"kind": "error", "input": loaded.path, "error": type(e).__name__, "message": e.message}
        return [error], status


async def run_inputs(
    command: Command, inputs: Sequence[LoadedInput], context: RunContext, workers: int
) -> List[Tuple[List[dict], int]]:
    """Results in input order, at most `workers` analyses at a time."""
    semaphore = asyncio.Semaphore(workers)

    async def one(index: int, loaded: LoadedInput):
        async with semaphore:
            return await asyncio.to_thread(_run_one, command, index, loaded, context)

    return await asyncio.gather(*(one(i, loaded) for i, loaded in enumerate(inputs)))


def _worst(statuses: Sequence[int]) -> int:
    return max(statuses, key=lambda status: _SEVERITY[status], default=EXIT_OK)


def run(manifest: RunManifest) -> int:
    """Execute one manifest and write report.jsonl plus metadata.json."""
    started = datetime.now(timezone.utc)
    tolerances = manifest.tolerances()
    output_dir = manifest.prepare_output()
    context = RunContext(seed=manifest.seed, tolerances=tolerances, output_dir=output_dir)

    if manifest.command == Command.GALLERY:
        paths = write_gallery(output_dir)
        records = [{"kind": "gallery_fixture", "name": path.stem, "path": path.name} for path in paths]
        status = EXIT_OK
        inputs: List[LoadedInput] = []
    else:
        try:
            inputs = [load_input(path, manifest.command) for path in manifest.input_paths]
        except SpecParseError as e:
            logger.error(e.message)
            print(f"qcx: parse error: {e.message}", file=sys.stderr)
            return EXIT_PARSE
        if not inputs:
            logger.error(f"'{manifest.command.value}' needs at least one --in file")
            return EXIT_PARSE
        results = asyncio.run(run_inputs(manifest.command, inputs, context, manifest.workers))
        records = [record for result, _ in results for record in result]
        status = _worst([s for _, s in results])

    write_jsonl(records, output_dir / REPORT_NAME, manifest.seed)
    write_metadata(
        {
            "version": __version__,
            "started_at": started.isoformat(),
            "finished_at": datetime.now(timezone.utc).isoformat(),
            "manifest": manifest.to_record(),
            "tolerances": tolerances.model_dump(),
            "inputs": [{"path": loaded.path, "digest": loaded.digest} for loaded in inputs],
            "exit_code": status,
        },
        output_dir / METADATA_NAME,
    )
    logger.info(f"qcx {manifest.command.value}: {len(records)} record(s), exit {status}")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        define_log_level(args.log_level.upper(), config.log.file_level, name="qcx")
    try:
        manifest = RunManifest(
            command=Command(args.command),
            input_paths=args.inputs,
            output_dir=args.output,
            seed=config.run.seed if args.seed is None else args.seed,
            tolerance_overrides=parse_tolerance_overrides(args.tol),
            workers=config.run.workers if args.workers is None else args.workers,
        )
        return run(manifest)
    except SpecParseError as e:
        print(f"qcx: parse error: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as e:
        print(f"qcx: invalid arguments: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ReportIOError as e:
        print(f"qcx: {e.message}", file=sys.stderr)
        return EXIT_FAILED

import argparse
import json
import logging
import shlex
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from .lattice.families import SpecError
from .models import BatchError, RunConfig
from .pipelines.report_pipeline import EXIT_OK, EXIT_VALIDATION, render_text, run

logger = logging.getLogger(__name__)


class _SpecArgumentParser(argparse.ArgumentParser):
    """Reports bad flags as SpecError instead of exiting with status 2."""

    def error(self, message):
        raise SpecError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _SpecArgumentParser(
        prog="diagmolien",
        allow_abbrev=False,
        description="Hilbert series of diagonal invariants for G = H x| S_n.",
    )
    parser.add_argument("--family", "-f", type=str, help="a, b, d, i, g, g2, custom or a full family name")
    parser.add_argument("--n", type=int, help="Number of coordinates")
    parser.add_argument("--N", type=int, help="Modulus / dihedral order")
    parser.add_argument("--d", type=int, help="d of G(de,e,n)")
    parser.add_argument("--e", type=int, help="e of G(de,e,n)")
    parser.add_argument("--modulus", type=int, help="Modulus of a custom H")
    parser.add_argument("--dim", type=int, help="Dimension of a custom H")
    parser.add_argument("--gen", action="append", default=[], help="Generator of a custom H, e.g. 1,1,1 (repeatable)")
    parser.add_argument("--k", "-k", type=int, default=2, help="Number of copies of V")
    parser.add_argument("--format", choices=["text", "json"], default="text", help="Report format")
    parser.add_argument("--check-oracle", action="store_true", help="Compare with brute-force dimension counts")
    parser.add_argument("--depth", type=int, default=4, help="Oracle degree bound per variable")
    parser.add_argument("--cap", type=int, help="Engine enumeration cap")
    parser.add_argument("--oracle-cap", type=int, help="Oracle enumeration cap")
    parser.add_argument("--output", "-o", type=str, help="Write the report to this file")
    parser.add_argument("--batch", type=str, help="File with one flag string per line; JSON array output")
    parser.add_argument("--quiet", "-q", action="store_true", help="Only warnings and errors on stderr")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    return parser


def _parse_vector(text: str, modulus: Optional[int]) -> List[int]:
    try:
        comps = [int(c) for c in text.split(",")]
    except ValueError:
        raise SpecError(f"malformed vector {text!r}: expected comma-separated integers") from None
    if modulus is not None and any(c < 0 or c >= modulus for c in comps):
        raise SpecError(f"vector {text!r} has residues outside [0, {modulus - 1}]")
    return comps


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if not args.family:
        raise SpecError("--family is required")
    N = args.modulus if args.modulus is not None else args.N
    n = args.dim if args.dim is not None else args.n
    return RunConfig(
        family=args.family,
        n=n,
        N=N,
        d=args.d,
        e=args.e,
        generators=[_parse_vector(g, N) for g in args.gen],
        k=args.k,
        output_format=args.format,
        check_oracle=args.check_oracle,
        depth=args.depth,
        cap=args.cap,
        oracle_cap=args.oracle_cap,
        output=args.output,
    )


def parse_spec(argv: Sequence[str]) -> RunConfig:
    """Flags to a validated RunConfig; raises SpecError or pydantic ValidationError."""
    return _config_from_args(build_parser().parse_args(list(argv)))


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        logger.info("Report written to %s", output)
    else:
        print(text)


def _run_batch(path: str, output: Optional[str]) -> int:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        logger.error("Cannot read batch file: %s", exc)
        return EXIT_VALIDATION
    entries = []
    status = EXIT_OK
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            outcome = run(parse_spec(shlex.split(line)))
        except (SpecError, ValidationError, ValueError) as exc:
            logger.error("Invalid batch line %r: %s", line, exc)
            entries.append(BatchError(spec=line, error=str(exc), status=EXIT_VALIDATION).model_dump())
            status = max(status, EXIT_VALIDATION)
            continue
        status = max(status, outcome.status)
        if outcome.report is not None:
            entries.append(outcome.report.model_dump(mode="json"))
        else:
            entries.append(BatchError(spec=line, error=outcome.error or "", status=outcome.status).model_dump())
    _emit(json.dumps(entries, indent=2), output)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    if args.batch:
        return _run_batch(args.batch, args.output)

    try:
        config = _config_from_args(args)
    except (SpecError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    outcome = run(config)
    if outcome.report is None:
        print(f"error: {outcome.error}", file=sys.stderr)
        return outcome.status
    if config.output_format == "json":
        _emit(outcome.report.model_dump_json(indent=2), config.output)
    else:
        _emit(render_text(outcome.report), config.output)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

    python main.py analyze <file> [--tol ε] [--nmax N] [--format json|compact] [--out path]
    python main.py evolve <file> [--m0 ...] [--sigma0 ...] [--T T] [--steps n] [--probe z] [--out path]
    python main.py batch <dir> [--out dir]

Exit codes: 0 when the analysis completed (whatever the verdicts), 2 on
input and validation errors, 1 on anything else.
"""
import argparse
import logging
import sys

import config
from commands import run_analyze, run_batch, run_evolve
from services.exceptions import InadmissibleCovariance, InvalidModel, ShapeError
from stores import ModelFileError, ModelNotFound, StoreError

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ModelFileError, ModelNotFound, ShapeError, InvalidModel, InadmissibleCovariance)


def _floats(text: str) -> list[float]:
	"""Comma- or whitespace-separated numbers."""
	try:
		return [float(x) for x in text.replace(",", " ").split()]
	except ValueError as e:
		raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from e


def cmd_analyze(args) -> int:
	run_analyze(args.file, tol=args.tol, nmax=args.nmax, fmt=args.format, out=args.out)
	return 0


def cmd_evolve(args) -> int:
	text = run_evolve(
		args.file,
		m0=args.m0,
		Sigma0=args.sigma0,
		T=args.T,
		steps=args.steps,
		probe=args.probe,
		out=args.out,
		tol=args.tol,
		precision=args.precision,
	)
	if args.out is None:
		sys.stdout.write(text)
	return 0


def cmd_batch(args) -> int:
	summary = run_batch(args.dir, args.out, tol=args.tol, nmax=args.nmax, fmt=args.format)
	print(f"{len(summary.rows)} analyzed, {len(summary.failures)} failed")
	return 0


def build_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--tol", type=float, default=config.DEFAULT_TOL, help="relative tolerance (default %(default)g)")
	common.add_argument("--nmax", type=int, default=config.RATIONAL_NMAX, help="rational-dependence bound (default %(default)d)")
	common.add_argument("--format", choices=("json", "compact"), default="json", help="report serialization")
	common.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level (default %(default)s)")

	parser = argparse.ArgumentParser(
		prog="gqms",
		description="Invariant states of Gaussian quantum Markov semigroups",
	)
	sub = parser.add_subparsers(dest="command", required=True)

	p_analyze = sub.add_parser("analyze", parents=[common], help="analyze one model file")
	p_analyze.add_argument("file")
	p_analyze.add_argument("--out", help="report path (default: stdout)")
	p_analyze.set_defaults(func=cmd_analyze)

	p_evolve = sub.add_parser("evolve", parents=[common], help="export a moment trajectory")
	p_evolve.add_argument("file")
	p_evolve.add_argument("--m0", type=_floats, help="initial mean (default 0)")
	p_evolve.add_argument("--sigma0", type=_floats, help="initial covariance, row-major (default I)")
	p_evolve.add_argument("--T", type=float, default=10.0, help="horizon (default %(default)g)")
	p_evolve.add_argument("--steps", type=int, default=100, help="number of steps (default %(default)d)")
	p_evolve.add_argument("--probe", type=_floats, help="Weyl probe vector for eid_defect (default e_1)")
	p_evolve.add_argument("--precision", type=int, default=config.TRAJECTORY_DIGITS,
		help="significant digits (default %(default)d)")
	p_evolve.add_argument("--out", help="trajectory path (default: stdout)")
	p_evolve.set_defaults(func=cmd_evolve)

	p_batch = sub.add_parser("batch", parents=[common], help="analyze every model file in a directory")
	p_batch.add_argument("dir")
	p_batch.add_argument("--out", help="output directory (default ./reports)")
	p_batch.set_defaults(func=cmd_batch)
	return parser


def main(argv: list[str] | None = None) -> int:
	parser = build_parser()
	args = parser.parse_args(argv)
	logging.basicConfig(
		level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
		format="%(asctime)s %(levelname)s %(name)s: %(message)s",
	)
	try:
		return args.func(args)
	except INPUT_ERRORS as e:
		logger.debug(f"{e.__class__.__name__}: {e}")
		print(f"error: {e}", file=sys.stderr)
		return 2
	except StoreError as e:
		logger.error(f"{e.__class__.__name__}: {e}")
		print(f"error: {e}", file=sys.stderr)
		return 1
	except Exception as e:
		logger.error(f"unexpected {e.__class__.__name__}: {e}", exc_info=True)
		print(f"error: {e}", file=sys.stderr)
		return 1


if __name__ == "__main__":
	sys.exit(main())

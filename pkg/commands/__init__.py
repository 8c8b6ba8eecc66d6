"""CLI subcommands: one module per subcommand plus the shared analysis pipeline."""

from .analyze import run_analyze
from .evolve import run_evolve
from .batch import run_batch

__all__ = [
	"run_analyze",
	"run_evolve",
	"run_batch",
]

"""Utility helpers used across the project.

Exports:
- validation helpers: `is_valid_name`, `safe_stem`, `VALID_NAME_RE`
- formatting helpers: `sig`, `sig_complex`, `sig_array`

Linear-algebra helpers live in `utils.linalg` and are imported from there.
"""

from .validation import is_valid_name, safe_stem, VALID_NAME_RE
from .formatting import sig, sig_complex, sig_array

__all__ = [
	"is_valid_name",
	"safe_stem",
	"VALID_NAME_RE",
	"sig",
	"sig_complex",
	"sig_array",
]

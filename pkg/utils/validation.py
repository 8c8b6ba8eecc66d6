"""Validation helpers for model-file metadata.

Model names end up in report file names and summary tables, so they are
restricted to letters, digits and a little punctuation.
"""
import regex as re


# Any Unicode letter/mark/number, spaces, and a small set of name punctuation
VALID_NAME_RE = re.compile(r"^[\p{L}\p{M}\p{N} .'\-_()+⊗]+$", flags=re.UNICODE)

# Characters replaced when a model name becomes part of a file name
_UNSAFE_STEM_RE = re.compile(r"[^\p{L}\p{N}._\-]+", flags=re.UNICODE)


def is_valid_name(s: str) -> bool:
	"""Return True if `s` is a reasonable model name.

	- Strips and enforces a sensible maximum length.
	- Uses Unicode-aware character class matching.
	"""
	if not s or s.isspace():
		return False
	s = s.strip()
	if len(s) == 0 or len(s) > 200:
		return False
	return bool(VALID_NAME_RE.match(s))


def safe_stem(s: str) -> str:
	"""File-name stem derived from a model name."""
	return _UNSAFE_STEM_RE.sub("_", s.strip()).strip("_") or "model"


__all__ = [
	"VALID_NAME_RE",
	"is_valid_name",
	"safe_stem",
]

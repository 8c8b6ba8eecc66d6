"""Significant-digit rounding for reports and trajectory files.

Rounded values go through ``float(f"{x:.{digits}g}")`` so that the JSON text
is identical across runs; non-finite values become None and -0.0 becomes 0.0.
"""
import math
from typing import Any

import numpy as np

import config


def sig(x: float, digits: int | None = None) -> float | None:
	digits = config.REPORT_DIGITS if digits is None else digits
	x = float(x)
	if not math.isfinite(x):
		return None
	r = float(f"{x:.{digits}g}")
	return 0.0 if r == 0 else r


def sig_complex(z: complex, digits: int | None = None) -> list[float | None]:
	"""[re, im] pair."""
	z = complex(z)
	return [sig(z.real, digits), sig(z.imag, digits)]


def sig_array(a: Any, digits: int | None = None) -> Any:
	"""Nested lists of rounded floats; complex entries become [re, im] pairs."""
	a = np.asarray(a)
	if np.iscomplexobj(a):
		if a.ndim == 0:
			return sig_complex(a.item(), digits)
		return [sig_array(row, digits) for row in a]
	if a.ndim == 0:
		return sig(a.item(), digits)
	return [sig_array(row, digits) for row in a]


__all__ = [
	"sig",
	"sig_complex",
	"sig_array",
]

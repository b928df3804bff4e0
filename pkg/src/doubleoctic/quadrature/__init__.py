"""Numerical periods of polyhedral cells.

The tensor tanh-sinh kernel is compiled with Cython when available; the numpy
fallback in :mod:`._fallback` is used otherwise or when the environment
variable ``DOUBLEOCTIC_PURE_PYTHON`` is set.
"""
import os

from . import _fallback

if os.environ.get("DOUBLEOCTIC_PURE_PYTHON"):
    cube_sums = _fallback.cube_sums
    BACKEND = "python"
else:
    try:
        from ._kernel import cube_sums  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        cube_sums = _fallback.cube_sums
        BACKEND = "python"

from .periods import (  # noqa: E402
    IMAGINARY,
    REAL,
    PeriodValue,
    QuadratureError,
    QuadratureSettings,
    cell_period,
    power_substitution_period,
    scaling_check,
)

__all__ = [
    "BACKEND",
    "cube_sums",
    "REAL",
    "IMAGINARY",
    "PeriodValue",
    "QuadratureError",
    "QuadratureSettings",
    "cell_period",
    "power_substitution_period",
    "scaling_check",
]

"""Kernel backend selection.

The compiled Cython kernels are used when importable; set ABELQEC_PURE_PYTHON=1
to force the numpy fallback.  Both backends implement identical integer-exact
phase arithmetic, so results agree bit for bit.
"""

from __future__ import annotations

import os

import numpy as np

from ._kernels_py import coords_table, strides_vector
from . import _kernels_py

if os.environ.get("ABELQEC_PURE_PYTHON", "0") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

__all__ = [
    "backend_name",
    "apply_axis_unitary",
    "translate",
    "phase_multiply",
    "coords_table",
    "strides_vector",
]


def backend_name() -> str:
    """Active kernel implementation: 'cython' or 'python'."""
    return _impl.BACKEND


def apply_axis_unitary(
    amps: np.ndarray, moduli: tuple[int, ...], axis: int, matrix: np.ndarray
) -> np.ndarray:
    """Apply an m x m matrix to one tensor factor of a flat state vector."""
    return _impl.apply_axis_unitary(
        np.asarray(amps, dtype=np.complex128), tuple(moduli), int(axis),
        np.asarray(matrix, dtype=np.complex128),
    )


def translate(amps: np.ndarray, moduli: tuple[int, ...], shift: tuple[int, ...]) -> np.ndarray:
    """Map amplitudes under the permutation |y> -> |y + shift|."""
    return _impl.translate(np.asarray(amps, dtype=np.complex128), tuple(moduli), tuple(shift))


def phase_multiply(
    amps: np.ndarray, moduli: tuple[int, ...], char_coords: tuple[int, ...], lcm: int
) -> np.ndarray:
    """Multiply each amplitude by the character value chi_c(y)."""
    return _impl.phase_multiply(
        np.asarray(amps, dtype=np.complex128), tuple(moduli), tuple(char_coords), int(lcm)
    )

"""Pure-numpy state-vector kernels; the fallback when the compiled module is absent.

All kernels treat a state as a flat complex array indexed in mixed radix over
the factor moduli, first factor varying fastest.  Character phases are computed
through exact integer exponents modulo the lcm of the moduli.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

BACKEND = "python"


@lru_cache(maxsize=256)
def coords_table(moduli: tuple[int, ...]) -> np.ndarray:
    """(k, dim) table of mixed-radix digits for every index, first factor fastest."""
    dim = 1
    for m in moduli:
        dim *= m
    rem = np.arange(dim, dtype=np.int64)
    rows = []
    for m in moduli:
        rows.append(rem % m)
        rem = rem // m
    table = np.vstack(rows)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=256)
def strides_vector(moduli: tuple[int, ...]) -> np.ndarray:
    """Mixed-radix strides as an int64 vector."""
    s = np.ones(len(moduli), dtype=np.int64)
    for j in range(1, len(moduli)):
        s[j] = s[j - 1] * moduli[j - 1]
    s.setflags(write=False)
    return s


def apply_axis_unitary(
    amps: np.ndarray, moduli: tuple[int, ...], axis: int, matrix: np.ndarray
) -> np.ndarray:
    """Apply an m x m matrix to the `axis`-th tensor factor of a flat state."""
    m = moduli[axis]
    lo = 1
    for v in moduli[:axis]:
        lo *= v
    hi = amps.shape[0] // (m * lo)
    arr = amps.reshape(hi, m, lo)
    out = np.einsum("ab,hbl->hal", matrix, arr)
    return np.ascontiguousarray(out.reshape(-1))


def translate(amps: np.ndarray, moduli: tuple[int, ...], shift: tuple[int, ...]) -> np.ndarray:
    """Permutation |y> -> |y + shift| on the flat state."""
    table = coords_table(moduli)
    strides = strides_vector(moduli)
    mods = np.asarray(moduli, dtype=np.int64)
    sh = np.asarray(shift, dtype=np.int64)
    src = ((table - sh[:, None]) % mods[:, None]).T @ strides
    return amps[src]


def phase_multiply(
    amps: np.ndarray, moduli: tuple[int, ...], char_coords: tuple[int, ...], lcm: int
) -> np.ndarray:
    """Multiply amplitude at y by the character chi_c(y), via exact integer exponents."""
    table = coords_table(moduli)
    mods = np.asarray(moduli, dtype=np.int64)
    c = np.asarray(char_coords, dtype=np.int64)
    factor_weights = (c * (lcm // mods)) % lcm
    exponents = (factor_weights @ table) % lcm
    roots = np.exp((2j * np.pi / lcm) * np.arange(lcm))
    return amps * roots[exponents]

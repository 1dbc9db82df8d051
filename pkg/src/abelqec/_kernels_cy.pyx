# cython: language_level=3
"""Compiled state-vector kernels; semantics match _kernels_py exactly.

The integer phase and index arithmetic mirrors the pure backend exactly;
permutations are bit-identical across backends and the complex arithmetic
agrees to floating-point round-off.
"""

import numpy as np

BACKEND = "cython"


def apply_axis_unitary(amps, moduli, axis, matrix):
    """Apply an m x m matrix to the `axis`-th tensor factor of a flat state."""
    in_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    u_arr = np.ascontiguousarray(matrix, dtype=np.complex128)
    cdef const double complex[::1] a = in_arr
    cdef const double complex[:, ::1] u = u_arr
    cdef Py_ssize_t m = moduli[axis]
    cdef Py_ssize_t lo = 1
    cdef Py_ssize_t j
    for j in range(axis):
        lo *= moduli[j]
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t hi = dim // (m * lo)
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t h, l, r, b, base
    cdef double complex acc
    for h in range(hi):
        for l in range(lo):
            base = h * m * lo + l
            for r in range(m):
                acc = 0
                for b in range(m):
                    acc = acc + u[r, b] * a[base + b * lo]
                out[base + r * lo] = acc
    return out_arr


def translate(amps, moduli, shift):
    """Permutation |y> -> |y + shift| on the flat state."""
    in_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    mods_arr = np.asarray(moduli, dtype=np.int64)
    sh_arr = np.asarray(shift, dtype=np.int64)
    cdef const double complex[::1] a = in_arr
    cdef const long long[::1] mods = mods_arr
    cdef const long long[::1] sh = sh_arr
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t k = mods.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef long long rem, dst, stride, c
    for i in range(dim):
        rem = i
        dst = 0
        stride = 1
        for j in range(k):
            c = (rem % mods[j] + sh[j]) % mods[j]
            dst += c * stride
            stride *= mods[j]
            rem //= mods[j]
        out[dst] = a[i]
    return out_arr


def phase_multiply(amps, moduli, char_coords, lcm):
    """Multiply amplitude at y by the character chi_c(y), via exact integer exponents."""
    in_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    mods_arr = np.asarray(moduli, dtype=np.int64)
    c_arr = np.asarray(char_coords, dtype=np.int64)
    cdef long long L = lcm
    weights_arr = (c_arr * (L // mods_arr)) % L
    roots_arr = np.exp((2j * np.pi / L) * np.arange(L))
    cdef const double complex[::1] a = in_arr
    cdef const long long[::1] mods = mods_arr
    cdef const long long[::1] w = weights_arr
    cdef const double complex[::1] roots = roots_arr
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t k = mods.shape[0]
    out_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef long long rem, e
    for i in range(dim):
        rem = i
        e = 0
        for j in range(k):
            e = (e + w[j] * (rem % mods[j])) % L
            rem //= mods[j]
        out[i] = a[i] * roots[e]
    return out_arr

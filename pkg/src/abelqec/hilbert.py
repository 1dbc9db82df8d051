"""State vectors over group algebras, the group Fourier transform, and Weyl operators.

A state over G = Z_{m_1} x ... x Z_{m_k} is a complex vector indexed by group
elements in mixed-radix order (first factor fastest).  The Fourier transform is
the tensor product of the single-factor DFTs, F[y, x] = omega_m^{x*y} / sqrt(m),
and the Fourier basis vector for label t is F^dagger |t> =
(1/sqrt|G|) sum_y conj(chi_t(y)) |y>.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import InvariantViolationError, ResourceLimitError
from .groups import GroupElement, GroupSpec, Subgroup, annihilator, character_eval

DEFAULT_DIMENSION_CAP = 1 << 16

_SUPPORT_TOL = 1e-12


def ensure_dimension(group: GroupSpec, cap: int = DEFAULT_DIMENSION_CAP) -> None:
    """Refuse to allocate state vectors beyond the dimension cap."""
    if group.order > cap:
        raise ResourceLimitError(
            f"group of order {group.order} exceeds the dimension cap {cap}"
        )


@dataclass
class StateVector:
    """A (usually unit-norm) vector over the group algebra of `group`."""

    group: GroupSpec
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        ensure_dimension(self.group)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.group.order,):
            raise ValueError(
                f"amplitude vector of shape {amps.shape} does not match group order {self.group.order}"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n < _SUPPORT_TOL:
            raise InvariantViolationError("cannot normalize a ~zero vector")
        return StateVector(self.group, self.amplitudes / n)

    def copy(self) -> StateVector:
        return StateVector(self.group, self.amplitudes.copy())


@dataclass
class DensityOperator:
    """A density (or more general) operator over the group algebra of `group`."""

    group: GroupSpec
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=np.complex128)
        d = self.group.order
        if mat.shape != (d, d):
            raise ValueError(f"matrix of shape {mat.shape} does not match group order {d}")
        self.matrix = mat


def inner(a: StateVector, b: StateVector) -> complex:
    """Hermitian inner product <a|b>."""
    if a.group != b.group:
        raise ValueError("inner product needs states over the same group")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 for unit vectors."""
    return float(abs(inner(a, b)) ** 2)


def density(state: StateVector) -> DensityOperator:
    """The rank-one density operator |psi><psi|."""
    return DensityOperator(state.group, np.outer(state.amplitudes, state.amplitudes.conj()))


def basis_state(x: GroupElement) -> StateVector:
    """The standard basis vector |x>."""
    ensure_dimension(x.group)
    amps = np.zeros(x.group.order, dtype=np.complex128)
    amps[x.index] = 1.0
    return StateVector(x.group, amps)


def fourier_basis_state(t: GroupElement) -> StateVector:
    """The Fourier basis vector (1/sqrt|G|) sum_y conj(chi_t(y)) |y>."""
    group = t.group
    ensure_dimension(group)
    amps = np.full(group.order, 1.0 / np.sqrt(group.order), dtype=np.complex128)
    amps = kernels.phase_multiply(amps, group.moduli, (-t).coords, group.lcm_exponent)
    return StateVector(group, amps)


@lru_cache(maxsize=256)
def dft_matrix(m: int) -> np.ndarray:
    """The m x m DFT matrix with entries omega^{x*y} / sqrt(m)."""
    if m < 2:
        raise ValueError(f"DFT size must be >= 2, got {m}")
    grid = np.outer(np.arange(m), np.arange(m)) % m
    roots = np.exp((2j * np.pi / m) * np.arange(m))
    mat = roots[grid] / np.sqrt(m)
    mat.setflags(write=False)
    return mat


def qft(state: StateVector) -> StateVector:
    """The group Fourier transform, applied factor by factor."""
    amps = state.amplitudes
    for axis, m in enumerate(state.group.moduli):
        amps = kernels.apply_axis_unitary(amps, state.group.moduli, axis, dft_matrix(m))
    return StateVector(state.group, amps)


def qft_inverse(state: StateVector) -> StateVector:
    """The inverse group Fourier transform."""
    amps = state.amplitudes
    for axis, m in enumerate(state.group.moduli):
        amps = kernels.apply_axis_unitary(amps, state.group.moduli, axis, dft_matrix(m).conj())
    return StateVector(state.group, amps)


def coset_state(b: GroupElement, subgroup: Subgroup, a: GroupElement) -> StateVector:
    """(1/sqrt|H|) sum_{h in H} conj(chi_a(h)) |b + h>.

    b locates the coset b + H and a selects the character modulation; with
    H = G and b = 0 this is exactly fourier_basis_state(a).
    """
    group = subgroup.group
    if b.group != group or a.group != group:
        raise ValueError("coset state labels must live in the subgroup's ambient group")
    ensure_dimension(group)
    amps = np.zeros(group.order, dtype=np.complex128)
    scale = 1.0 / np.sqrt(subgroup.order)
    for h in subgroup:
        amps[(b + h).index] = scale * character_eval(a, h).conjugate()
    return StateVector(group, amps)


def coset_state_fourier_image(
    b: GroupElement,
    subgroup: Subgroup,
    a: GroupElement,
    subgroup_annihilator: Subgroup | None = None,
) -> StateVector:
    """Closed form of qft(coset_state(b, H, a)): a chi_b-modulated coset state on a + H-perp.

    The returned vector is (chi_a(b)/sqrt|H_perp|) sum_{z in H_perp} chi_b(z) |z + a>,
    with the global phase chi_a(b) included.
    """
    group = subgroup.group
    if b.group != group or a.group != group:
        raise ValueError("coset state labels must live in the subgroup's ambient group")
    perp = subgroup_annihilator if subgroup_annihilator is not None else annihilator(subgroup)
    if perp.group != group:
        raise ValueError("annihilator subgroup must live in the same ambient group")
    ensure_dimension(group)
    amps = np.zeros(group.order, dtype=np.complex128)
    global_phase = character_eval(a, b)
    scale = global_phase / np.sqrt(perp.order)
    for z in perp:
        amps[(z + a).index] = scale * character_eval(b, z)
    return StateVector(group, amps)


def weyl_x(e: GroupElement, state: StateVector) -> StateVector:
    """The translation operator X_e |y> = |y + e>."""
    if e.group != state.group:
        raise ValueError("translation label must live in the state's group")
    return StateVector(state.group, kernels.translate(state.amplitudes, state.group.moduli, e.coords))


def weyl_z(e: GroupElement, state: StateVector) -> StateVector:
    """The modulation operator Z_e |y> = chi_e(y) |y>."""
    if e.group != state.group:
        raise ValueError("modulation label must live in the state's group")
    return StateVector(
        state.group,
        kernels.phase_multiply(state.amplitudes, state.group.moduli, e.coords, state.group.lcm_exponent),
    )


def corrupt(e1: GroupElement, e2: GroupElement, state: StateVector) -> StateVector:
    """The error operator X_{e1} Z_{e2} (modulation first, then translation)."""
    return weyl_x(e1, weyl_z(e2, state))


def translate_action_check(x: GroupElement, t: GroupElement, tol: float = 1e-9) -> bool:
    """Whether translating the Fourier basis vector for t by x just scales it by chi_t(x)."""
    if x.group != t.group:
        raise ValueError("both labels must live in the same group")
    vec = fourier_basis_state(t)
    lhs = weyl_x(x, vec)
    rhs = character_eval(t, x) * vec.amplitudes
    return bool(np.max(np.abs(lhs.amplitudes - rhs)) <= tol)


def density_sum(states: Iterable[StateVector]) -> DensityOperator:
    """Sum of the rank-one operators |psi><psi| (no normalization)."""
    states = list(states)
    if not states:
        raise ValueError("density_sum needs at least one state")
    group = states[0].group
    total = np.zeros((group.order, group.order), dtype=np.complex128)
    for s in states:
        if s.group != group:
            raise ValueError("all states must share one group")
        total += np.outer(s.amplitudes, s.amplitudes.conj())
    return DensityOperator(group, total)


def pair_sum(states: Iterable[StateVector]) -> StateVector:
    """Sum of the doubled vectors |psi>|psi| on the squared group (no normalization)."""
    states = list(states)
    if not states:
        raise ValueError("pair_sum needs at least one state")
    group = states[0].group
    doubled = GroupSpec(group.moduli * 2)
    ensure_dimension(doubled)
    total = np.zeros(doubled.order, dtype=np.complex128)
    for s in states:
        if s.group != group:
            raise ValueError("all states must share one group")
        total += np.kron(s.amplitudes, s.amplitudes)
    return StateVector(doubled, total)


def convolve(f: StateVector, g: StateVector) -> StateVector:
    """Group convolution (f * g)[y] = sum_u f[u] g[y - u]; O(|G|^2) table lookup."""
    if f.group != g.group:
        raise ValueError("convolution needs states over the same group")
    group = f.group
    d = group.order
    if d * d > (1 << 24):
        raise ResourceLimitError(f"convolution table for order {d} exceeds the size cap")
    table = kernels.coords_table(group.moduli)
    strides = kernels.strides_vector(group.moduli)
    mods = np.asarray(group.moduli, dtype=np.int64)
    diff = (table[:, :, None] - table[:, None, :]) % mods[:, None, None]
    diff_index = np.tensordot(strides, diff, axes=(0, 0))
    out = g.amplitudes[diff_index] @ f.amplitudes
    return StateVector(group, out)


def kron_state(a: StateVector, b: StateVector) -> StateVector:
    """The product state on the concatenated group, a's factors varying fastest."""
    moduli = a.group.moduli + b.group.moduli
    group = GroupSpec(moduli)
    ensure_dimension(group)
    return StateVector(group, np.kron(b.amplitudes, a.amplitudes))


def _validated_factors(group: GroupSpec, factors: Iterable[int]) -> tuple[int, ...]:
    fs = tuple(int(f) for f in factors)
    if len(fs) == 0:
        raise ValueError("at least one factor index is required")
    if len(set(fs)) != len(fs):
        raise ValueError(f"factor indices must be distinct, got {fs}")
    for f in fs:
        if not 0 <= f < len(group.moduli):
            raise ValueError(f"factor index {f} out of range for {len(group.moduli)} factors")
    return fs


def measure_standard(
    state: StateVector, factors: Iterable[int], rng: np.random.Generator
) -> tuple[tuple[int, ...], StateVector]:
    """Projectively measure the listed factors in the standard basis.

    Returns the outcome digits (in the order the factors were given) and the
    collapsed, renormalized state.
    """
    fs = _validated_factors(state.group, factors)
    p = np.abs(state.amplitudes) ** 2
    total = p.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"measurement requires a normalized state, got norm^2 = {total}")
    table = kernels.coords_table(state.group.moduli)
    sizes = [state.group.moduli[f] for f in fs]
    key = np.zeros(state.group.order, dtype=np.int64)
    stride = 1
    for f, m in zip(fs, sizes):
        key += table[f] * stride
        stride *= m
    n_outcomes = stride
    marginal = np.bincount(key, weights=p, minlength=n_outcomes)
    outcome_key = int(rng.choice(n_outcomes, p=marginal / marginal.sum()))
    digits = []
    rem = outcome_key
    for m in sizes:
        digits.append(rem % m)
        rem //= m
    masked = np.where(key == outcome_key, state.amplitudes, 0.0)
    branch_norm = np.linalg.norm(masked)
    if branch_norm**2 < _SUPPORT_TOL:
        raise InvariantViolationError("collapsed onto a branch of ~zero probability")
    return tuple(digits), StateVector(state.group, masked / branch_norm)


def measure_fourier(
    state: StateVector, factors: Iterable[int], rng: np.random.Generator
) -> tuple[tuple[int, ...], StateVector]:
    """Projectively measure the listed factors in the Fourier basis.

    The outcome labels t are such that fourier_basis_state(t) is reported as t
    with probability one; the collapsed state is returned in the standard basis.
    """
    fs = _validated_factors(state.group, factors)
    moduli = state.group.moduli
    amps = state.amplitudes
    for f in fs:
        amps = kernels.apply_axis_unitary(amps, moduli, f, dft_matrix(moduli[f]))
    outcome, collapsed = measure_standard(StateVector(state.group, amps), fs, rng)
    amps = collapsed.amplitudes
    for f in fs:
        amps = kernels.apply_axis_unitary(amps, moduli, f, dft_matrix(moduli[f]).conj())
    return outcome, StateVector(state.group, amps)


def project_factors(state: StateVector, assignment: Mapping[int, int]) -> StateVector:
    """Slice out the sub-state where each factor in `assignment` has the given digit.

    This is a deterministic restriction (no renormalization); the remaining
    factors keep their relative order.
    """
    k = len(state.group.moduli)
    if not assignment:
        raise ValueError("assignment must fix at least one factor")
    for f, v in assignment.items():
        if not 0 <= f < k:
            raise ValueError(f"factor index {f} out of range for {k} factors")
        if not 0 <= v < state.group.moduli[f]:
            raise ValueError(f"digit {v} out of range for modulus {state.group.moduli[f]}")
    kept = [j for j in range(k) if j not in assignment]
    if not kept:
        raise ValueError("at least one factor must remain after projection")
    strides = kernels.strides_vector(state.group.moduli)
    reduced = GroupSpec(tuple(state.group.moduli[j] for j in kept))
    table = kernels.coords_table(reduced.moduli)
    base = sum(v * int(strides[f]) for f, v in assignment.items())
    full_index = base + np.tensordot(
        np.asarray([int(strides[j]) for j in kept], dtype=np.int64), table, axes=(0, 0)
    )
    return StateVector(reduced, state.amplitudes[full_index])


def support_elements(state: StateVector, tol: float = _SUPPORT_TOL) -> list[GroupElement]:
    """Group elements whose amplitude magnitude squared exceeds `tol`."""
    p = np.abs(state.amplitudes) ** 2
    return [state.group.element_at(int(i)) for i in np.nonzero(p > tol)[0]]


def state_to_json_dict(state: StateVector) -> dict:
    """JSON-ready dump: the moduli header plus [re, im] pairs in index order."""
    return {
        "moduli": list(state.group.moduli),
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_json_dict(data: Mapping) -> StateVector:
    """Inverse of state_to_json_dict."""
    group = GroupSpec(tuple(int(m) for m in data["moduli"]))
    amps = np.array([complex(re, im) for re, im in data["amplitudes"]], dtype=np.complex128)
    return StateVector(group, amps)

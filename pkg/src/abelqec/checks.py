"""Numerical identity checks used by the command-line verifier.

Each check measures the worst-case deviation of an algebraic identity on a
given group (or code) and reports a status: "ok" when the deviation is within
tolerance, "failed" when it is not, and "hypothesis-violated" when the
identity's preconditions do not hold for the subject, in which case the
measured deviation is informational only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .css import (
    CssCode,
    family_states,
    mixture_diagonal,
    pair_diagonal_target,
    phase_family_states,
)
from .groups import (
    GroupSpec,
    all_subgroups,
    annihilator,
    character_eval,
    character_sum_over,
)
from .hilbert import (
    StateVector,
    basis_state,
    convolve,
    coset_state,
    coset_state_fourier_image,
    density_sum,
    dft_matrix,
    fourier_basis_state,
    pair_sum,
    qft,
    qft_inverse,
    weyl_x,
    weyl_z,
)

DEFAULT_TOL = 1e-9
EXACT_FORM_TOL = 1e-12

DEFAULT_SWEEP: tuple[tuple[int, ...], ...] = ((2,), (3,), (4,), (6,), (2, 2), (2, 4))


@dataclass
class IdentityReport:
    """Outcome of one identity check on one subject."""

    identity: str
    subject: str
    cases: int
    max_error: float
    tolerance: float
    status: str

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "subject": self.subject,
            "cases": self.cases,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "status": self.status,
        }


def _group_label(group: GroupSpec) -> str:
    return "x".join(str(m) for m in group.moduli)


def _report(identity: str, subject: str, cases: int, err: float, tol: float) -> IdentityReport:
    status = "ok" if err <= tol else "failed"
    return IdentityReport(identity, subject, cases, float(err), tol, status)


def _random_state(group: GroupSpec, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=group.order) + 1j * rng.normal(size=group.order)
    return StateVector(group, amps / np.linalg.norm(amps))


def check_transform_coset(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """qft(coset_state(b, H, a)) equals its closed-form image, global phase included."""
    subgroups = all_subgroups(group)
    err = 0.0
    for _ in range(trials):
        sub = subgroups[int(rng.integers(len(subgroups)))]
        b = group.element_at(int(rng.integers(group.order)))
        a = group.element_at(int(rng.integers(group.order)))
        lhs = qft(coset_state(b, sub, a))
        rhs = coset_state_fourier_image(b, sub, a)
        err = max(err, float(np.max(np.abs(lhs.amplitudes - rhs.amplitudes))))
    return _report("transform-coset", _group_label(group), trials, err, DEFAULT_TOL)


def check_character_sum(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """sum_{h in H} chi_x(h) is |H| on the annihilator and 0 off it, exhaustively."""
    err = 0.0
    cases = 0
    for sub in all_subgroups(group):
        perp = annihilator(sub)
        for x in group.elements():
            expected = float(sub.order) if x in perp else 0.0
            err = max(err, abs(character_sum_over(sub, x) - expected))
            cases += 1
    return _report("character-sum", _group_label(group), cases, err, DEFAULT_TOL)


def _full_transform_matrix(group: GroupSpec) -> np.ndarray:
    cols = [qft(basis_state(x)).amplitudes for x in group.elements()]
    return np.column_stack(cols)


def check_qft_unitary(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """F^dagger F = I and qft_inverse really inverts qft."""
    f = _full_transform_matrix(group)
    err = float(np.max(np.abs(f.conj().T @ f - np.eye(group.order))))
    state = _random_state(group, rng)
    round_trip = qft_inverse(qft(state))
    err = max(err, float(np.max(np.abs(round_trip.amplitudes - state.amplitudes))))
    return _report("qft-unitary", _group_label(group), group.order + 1, err, DEFAULT_TOL)


def check_qft_form(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """The transform matrix equals the tensor product of single-factor DFTs."""
    f = _full_transform_matrix(group)
    expected = reduce(
        lambda acc, m: np.kron(dft_matrix(m), acc),
        group.moduli[1:],
        dft_matrix(group.moduli[0]),
    )
    err = float(np.max(np.abs(f - expected)))
    return _report("qft-form", _group_label(group), group.order**2, err, EXACT_FORM_TOL)


def check_weyl_commutation(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """Z_f X_e = chi_f(e) X_e Z_f, exhaustively on small groups, sampled otherwise."""
    psi = _random_state(group, rng)
    if group.order <= 16:
        pairs = [(e, f) for e in group.elements() for f in group.elements()]
    else:
        pairs = [
            (
                group.element_at(int(rng.integers(group.order))),
                group.element_at(int(rng.integers(group.order))),
            )
            for _ in range(trials)
        ]
    err = 0.0
    for e, f in pairs:
        lhs = weyl_z(f, weyl_x(e, psi))
        rhs = character_eval(f, e) * weyl_x(e, weyl_z(f, psi)).amplitudes
        err = max(err, float(np.max(np.abs(lhs.amplitudes - rhs))))
    return _report("weyl-commutation", _group_label(group), len(pairs), err, DEFAULT_TOL)


def check_convolution(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """qft(f * g) = sqrt|G| qft(f) qft(g) pointwise, on random pairs."""
    err = 0.0
    scale = np.sqrt(group.order)
    for _ in range(trials):
        f = _random_state(group, rng)
        g = _random_state(group, rng)
        lhs = qft(convolve(f, g)).amplitudes
        rhs = scale * qft(f).amplitudes * qft(g).amplitudes
        err = max(err, float(np.max(np.abs(lhs - rhs))))
    return _report("convolution", _group_label(group), trials, err, DEFAULT_TOL)


def check_translate_action(
    group: GroupSpec, rng: np.random.Generator, trials: int
) -> IdentityReport:
    """Translating a Fourier basis vector by x scales it by chi_t(x), exhaustively."""
    err = 0.0
    cases = 0
    for t in group.elements():
        vec = fourier_basis_state(t)
        for x in group.elements():
            shifted = weyl_x(x, vec)
            target = character_eval(t, x) * vec.amplitudes
            err = max(err, float(np.max(np.abs(shifted.amplitudes - target))))
            cases += 1
    return _report("translate-action", _group_label(group), cases, err, DEFAULT_TOL)


GROUP_IDENTITIES = {
    "transform-coset": check_transform_coset,
    "character-sum": check_character_sum,
    "qft-unitary": check_qft_unitary,
    "qft-form": check_qft_form,
    "weyl-commutation": check_weyl_commutation,
    "convolution": check_convolution,
    "translate-action": check_translate_action,
}

CODE_FAMILY_IDENTITY = "code-family"

ALL_IDENTITIES = tuple(GROUP_IDENTITIES) + (CODE_FAMILY_IDENTITY,)


def _is_two_torsion(code: CssCode) -> bool:
    return all((w + w).index == 0 for w in code.c2)


def check_code_family(code: CssCode, label: str, tol: float = DEFAULT_TOL) -> list[IdentityReport]:
    """The three codeword-family identities, with per-identity hypothesis tracking.

    Phase averaging needs C2 to meet its annihilator trivially; completeness
    and the pair identity additionally need the same for C1; the pair identity
    also needs every C2 word to be its own inverse.
    """
    reports: list[IdentityReport] = []

    err = 0.0
    cases = 0
    for v in code.key_cosets.representatives:
        for x in code.c1_perp:
            lhs = density_sum(phase_family_states(code, v, x)).matrix
            rhs = mixture_diagonal(code, v, x).matrix
            err = max(err, float(np.max(np.abs(lhs - rhs))))
            cases += 1
    status = "ok" if err <= tol else "failed"
    if not code.c2_pairing_nondegenerate:
        status = "hypothesis-violated"
    reports.append(
        IdentityReport("phase-mixture-diagonal", label, cases, float(err), tol, status)
    )

    states = family_states(code)
    total = density_sum(states).matrix
    err = float(np.max(np.abs(total - np.eye(code.ambient.order))))
    status = "ok" if err <= tol else "failed"
    if not (code.c1_pairing_nondegenerate and code.c2_pairing_nondegenerate):
        status = "hypothesis-violated"
    reports.append(
        IdentityReport("family-completeness", label, len(states), float(err), tol, status)
    )

    paired = pair_sum(states)
    target = pair_diagonal_target(code.ambient)
    err = float(np.max(np.abs(paired.amplitudes - target.amplitudes)))
    status = "ok" if err <= tol else "failed"
    if not (
        code.c1_pairing_nondegenerate
        and code.c2_pairing_nondegenerate
        and _is_two_torsion(code)
    ):
        status = "hypothesis-violated"
    reports.append(
        IdentityReport("pair-diagonal", label, len(states), float(err), tol, status)
    )
    return reports

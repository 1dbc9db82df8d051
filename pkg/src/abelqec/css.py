"""CSS codes over finite abelian groups.

A code is a nested pair of subgroup codes C2 <= C1 <= G^n.  Logical states are
uniform superpositions over cosets of C2 inside C1; bit flips are corrected via
the coset structure of C1 and phase flips via C2-perp after a Fourier transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .groups import (
    CosetTable,
    GroupElement,
    GroupSpec,
    Subgroup,
    annihilator,
    character_eval,
    coerce_element,
    coset_table,
    weight,
)
from .hilbert import DensityOperator, StateVector, corrupt, qft, weyl_x

_SUPPORT_TOL = 1e-12


def min_distance(subgroup: Subgroup, width: int = 1) -> int:
    """Minimum blockwise weight over the nonzero elements of a subgroup code."""
    best: int | None = None
    for e in subgroup:
        if e.index == 0:
            continue
        w = weight(e, width)
        if best is None or w < best:
            best = w
    if best is None:
        raise ValueError("minimum distance is undefined for the trivial subgroup")
    return best


@dataclass(frozen=True, eq=False)
class SyndromeMap:
    """Coset-label syndromes of the ambient group modulo a code subgroup."""

    code_subgroup: Subgroup
    table: CosetTable

    @property
    def leaders(self) -> tuple[GroupElement, ...]:
        """Minimum-weight representative of each coset, indexed by syndrome."""
        return self.table.representatives

    def syndrome(self, w: GroupElement) -> int:
        """Coset index of w; zero exactly on code subgroup members."""
        return self.table.index_of(w)

    def leader(self, s: int) -> GroupElement:
        if not 0 <= s < len(self.table.representatives):
            raise ValueError(f"syndrome {s} out of range for {len(self.table.representatives)} cosets")
        return self.table.representatives[s]


@dataclass(frozen=True, eq=False)
class CssCode:
    """A CSS code pair C2 <= C1 <= G^n with all derived decoding tables."""

    base: GroupSpec
    n: int
    ambient: GroupSpec
    c1: Subgroup
    c2: Subgroup
    c1_perp: Subgroup
    c2_perp: Subgroup
    d1: int
    d2_perp: int
    t1: int
    t2: int
    key_cosets: CosetTable
    bit_syndromes: SyndromeMap
    phase_syndromes: SyndromeMap
    shift_cosets: CosetTable

    @property
    def width(self) -> int:
        """Coordinates per alphabet position (number of base-group factors)."""
        return len(self.base.moduli)

    @property
    def dimension(self) -> int:
        """Number of logical key cosets |C1| / |C2|."""
        return self.c1.order // self.c2.order

    @property
    def c1_pairing_nondegenerate(self) -> bool:
        """Whether C1 and its annihilator intersect only in zero."""
        return len(self.c1._index_set & self.c1_perp._index_set) == 1

    @property
    def c2_pairing_nondegenerate(self) -> bool:
        """Whether the self-pairing (z, w) -> chi_z(w) on C2 x C2 is non-degenerate."""
        return len(self.c2._index_set & self.c2_perp._index_set) == 1


def make_css(
    base: GroupSpec,
    n: int,
    c1_generators: Iterable[GroupElement | Iterable[int]],
    c2_generators: Iterable[GroupElement | Iterable[int]],
    max_elements: int | None = None,
) -> CssCode:
    """Construct the code and all derived tables by brute-force enumeration."""
    if n < 1:
        raise ValueError(f"block length must be >= 1, got {n}")
    ambient = base.direct_power(n)
    c1 = Subgroup.from_generators(ambient, c1_generators, max_elements=max_elements)
    c2 = Subgroup.from_generators(ambient, c2_generators, max_elements=max_elements)
    if not c1.contains_subgroup(c2):
        raise ValueError("C2 must be contained in C1")
    c1_perp = annihilator(c1)
    c2_perp = annihilator(c2)
    width = len(base.moduli)
    if c1.order == 1:
        raise ValueError("C1 must contain a nonzero word to carry any code distance")
    d1 = min_distance(c1, width)
    d2_perp = min_distance(c2_perp, width)
    return CssCode(
        base=base,
        n=n,
        ambient=ambient,
        c1=c1,
        c2=c2,
        c1_perp=c1_perp,
        c2_perp=c2_perp,
        d1=d1,
        d2_perp=d2_perp,
        t1=(d1 - 1) // 2,
        t2=(d2_perp - 1) // 2,
        key_cosets=coset_table(c1, c2, width),
        bit_syndromes=SyndromeMap(c1, coset_table(ambient, c1, width)),
        phase_syndromes=SyndromeMap(c2_perp, coset_table(ambient, c2_perp, width)),
        shift_cosets=coset_table(ambient, c2, width),
    )


def encode(code: CssCode, v: GroupElement | Iterable[int]) -> StateVector:
    """The logical state for v: a uniform superposition over the coset v + C2."""
    v = coerce_element(code.ambient, v)
    if v not in code.c1:
        raise ValueError(f"word {v.coords} is not in C1")
    amps = np.zeros(code.ambient.order, dtype=np.complex128)
    scale = 1.0 / np.sqrt(code.c2.order)
    for w in code.c2:
        amps[(v + w).index] = scale
    return StateVector(code.ambient, amps)


def codeword_state(
    code: CssCode,
    v: GroupElement | Iterable[int],
    z: GroupElement | Iterable[int],
    x: GroupElement | Iterable[int],
) -> StateVector:
    """The padded codeword (1/sqrt|C2|) sum_{w in C2} chi_z(w) |v + w + x>."""
    v = coerce_element(code.ambient, v)
    z = coerce_element(code.ambient, z)
    x = coerce_element(code.ambient, x)
    if v not in code.c1:
        raise ValueError(f"word {v.coords} is not in C1")
    if z not in code.c2:
        raise ValueError(f"phase pad {z.coords} is not in C2")
    if x not in code.c1_perp:
        raise ValueError(f"shift pad {x.coords} is not in the annihilator of C1")
    amps = np.zeros(code.ambient.order, dtype=np.complex128)
    scale = 1.0 / np.sqrt(code.c2.order)
    for w in code.c2:
        amps[(v + w + x).index] = scale * character_eval(z, w)
    return StateVector(code.ambient, amps)


def codeword_family(code: CssCode) -> Iterator[tuple[GroupElement, GroupElement, GroupElement]]:
    """All (v, z, x) labels of the orthogonal codeword family; |G|^n members."""
    for v in code.key_cosets.representatives:
        for z in code.c2:
            for x in code.c1_perp:
                yield v, z, x


def family_states(code: CssCode) -> list[StateVector]:
    """The full codeword family as states, in codeword_family order."""
    return [codeword_state(code, v, z, x) for v, z, x in codeword_family(code)]


def phase_family_states(
    code: CssCode, v: GroupElement | Iterable[int], x: GroupElement | Iterable[int]
) -> list[StateVector]:
    """The states with fixed (v, x) and the phase pad z running over C2."""
    return [codeword_state(code, v, z, x) for z in code.c2]


def mixture_diagonal(
    code: CssCode, v: GroupElement | Iterable[int], x: GroupElement | Iterable[int]
) -> DensityOperator:
    """The diagonal operator sum_{w in C2} |v+w+x><v+w+x| (unnormalized)."""
    v = coerce_element(code.ambient, v)
    x = coerce_element(code.ambient, x)
    mat = np.zeros((code.ambient.order, code.ambient.order), dtype=np.complex128)
    for w in code.c2:
        i = (v + w + x).index
        mat[i, i] = 1.0
    return DensityOperator(code.ambient, mat)


def pair_diagonal_target(group: GroupSpec) -> StateVector:
    """The unnormalized vector sum_y |y>|y> on the squared group."""
    doubled = GroupSpec(group.moduli * 2)
    amps = np.zeros(doubled.order, dtype=np.complex128)
    d = group.order
    for y in range(d):
        amps[y + y * d] = 1.0
    return StateVector(doubled, amps)


def _extract_coset_label(
    state: StateVector,
    table: CosetTable,
    rng: np.random.Generator | None,
    tol: float = _SUPPORT_TOL,
) -> tuple[int, StateVector]:
    """Coset label of a state's support: classical when unambiguous, projective otherwise."""
    labels = table.dense_labels
    p = np.abs(state.amplitudes) ** 2
    present = np.unique(labels[p > tol])
    if len(present) == 0:
        raise ValueError("cannot extract a coset label from a ~zero state")
    if len(present) == 1:
        return int(present[0]), state
    if rng is None:
        raise ValueError(
            "state support spans several cosets; projective extraction needs an rng"
        )
    probs = np.bincount(labels, weights=p, minlength=len(table.representatives))
    label = int(rng.choice(len(table.representatives), p=probs / probs.sum()))
    masked = np.where(labels == label, state.amplitudes, 0.0)
    branch_norm = np.linalg.norm(masked)
    return label, StateVector(state.group, masked / branch_norm)


@dataclass
class CorrectionResult:
    """Output of the correction pipeline, with every intermediate state exposed."""

    restored: StateVector
    e1_hat: GroupElement
    e2_hat: GroupElement
    stages: tuple[StateVector, ...]
    bit_syndrome: int
    phase_syndrome: int
    recenter: GroupElement
    within_bounds: bool


def correct_pipeline(
    code: CssCode, corrupted: StateVector, rng: np.random.Generator | None = None
) -> CorrectionResult:
    """Run the full correction: bit syndrome, transform, phase syndrome, recenter.

    For in-model corruptions (weights within t1/t2 of a logical state) every
    syndrome is a deterministic classical read; out-of-model states fall back to
    projective extraction using the supplied rng.  Miscorrection on oversized
    errors is reported through `within_bounds`, never as an exception.
    """
    if corrupted.group != code.ambient:
        raise ValueError("corrupted state does not live on the code's ambient group")
    s1, psi2 = _extract_coset_label(corrupted, code.bit_syndromes.table, rng)
    e1_hat = code.bit_syndromes.leader(s1)
    psi3 = weyl_x(-e1_hat, psi2)
    psi4 = qft(psi3)
    s2, psi4_collapsed = _extract_coset_label(psi4, code.phase_syndromes.table, rng)
    e2_hat = -code.phase_syndromes.leader(s2)
    psi5 = weyl_x(e2_hat, psi4_collapsed)
    psi6 = qft(psi5)
    s3, psi6_collapsed = _extract_coset_label(psi6, code.shift_cosets, rng)
    recenter = code.shift_cosets.representatives[s3]
    restored = weyl_x(recenter.scaled(-2), psi6_collapsed)
    within = (
        weight(e1_hat, code.width) <= code.t1 and weight(e2_hat, code.width) <= code.t2
    )
    return CorrectionResult(
        restored=restored,
        e1_hat=e1_hat,
        e2_hat=e2_hat,
        stages=(psi2, psi3, psi4, psi5, psi6),
        bit_syndrome=s1,
        phase_syndrome=s2,
        recenter=recenter,
        within_bounds=within,
    )


def weyl_error_pairs(code: CssCode, max_wt1: int, max_wt2: int) -> list[tuple[GroupElement, GroupElement]]:
    """All (e1, e2) with blockwise weights within the given bounds, in index order."""
    singles = [
        e for e in code.ambient.elements() if weight(e, code.width) <= max_wt1
    ]
    doubles = [
        e for e in code.ambient.elements() if weight(e, code.width) <= max_wt2
    ]
    return [(e1, e2) for e1 in singles for e2 in doubles]


@dataclass
class KlCheckResult:
    """alpha matrix and worst-case projector deviation of a correctability check."""

    alpha: np.ndarray
    max_deviation: float
    passed: bool


def kl_check(
    code: CssCode,
    errors: Sequence[tuple[GroupElement | Iterable[int], GroupElement | Iterable[int]]],
    tol: float = 1e-8,
) -> KlCheckResult:
    """Verify P A_k^dag A_l P = alpha_kl P over the encode basis for all error pairs."""
    pairs = [
        (coerce_element(code.ambient, e1), coerce_element(code.ambient, e2))
        for e1, e2 in errors
    ]
    if not pairs:
        raise ValueError("kl_check needs at least one error pair")
    basis = [encode(code, v) for v in code.key_cosets.representatives]
    b_mat = np.column_stack([s.amplitudes for s in basis])
    corrupted = [
        np.column_stack([corrupt(e1, e2, s).amplitudes for s in basis])
        for e1, e2 in pairs
    ]
    k = b_mat.shape[1]
    n_err = len(pairs)
    alpha = np.zeros((n_err, n_err), dtype=np.complex128)
    eye = np.eye(k)
    max_dev = 0.0
    for i in range(n_err):
        left = corrupted[i].conj().T
        for j in range(n_err):
            overlap = left @ corrupted[j]
            a = np.trace(overlap) / k
            alpha[i, j] = a
            dev = float(np.abs(b_mat @ (overlap - a * eye) @ b_mat.conj().T).max())
            if dev > max_dev:
                max_dev = dev
    return KlCheckResult(alpha=alpha, max_deviation=max_dev, passed=bool(max_dev <= tol))


HAMMING_7_4_ROWS: tuple[tuple[int, ...], ...] = (
    (1, 0, 0, 0, 0, 1, 1),
    (0, 1, 0, 0, 1, 0, 1),
    (0, 0, 1, 0, 1, 1, 0),
    (0, 0, 0, 1, 1, 1, 1),
)

HAMMING_DUAL_ROWS: tuple[tuple[int, ...], ...] = (
    (0, 1, 1, 1, 1, 0, 0),
    (1, 0, 1, 1, 0, 1, 0),
    (1, 1, 0, 1, 0, 0, 1),
)


def hamming_css_code() -> CssCode:
    """The binary [7,4] Hamming code with its dual as C2: distance 3, one logical qubit."""
    return make_css(GroupSpec((2,)), 7, HAMMING_7_4_ROWS, HAMMING_DUAL_ROWS)


def trit_repetition_code() -> CssCode:
    """Ternary length-3 repetition C1 with trivial C2: bit-flip-only protection."""
    return make_css(GroupSpec((3,)), 3, ((1, 1, 1),), ())


def phase_toy_code() -> CssCode:
    """Two binary positions, C1 = G^2, C2 = {00, 01}: the non-degenerate family instance."""
    return make_css(GroupSpec((2,)), 2, ((1, 0), (0, 1)), ((0, 1),))


CODE_PRESETS = {
    "hamming7": hamming_css_code,
    "repetition3z3": trit_repetition_code,
    "toy2": phase_toy_code,
}


def decode_to_codeword(code: CssCode, word: GroupElement) -> GroupElement:
    """Nearest-C1-codeword correction: subtract the coset leader of the word's syndrome."""
    return word - code.bit_syndromes.leader(code.bit_syndromes.syndrome(word))


def sweep_errors(
    code: CssCode,
    max_wt1: int | None = None,
    max_wt2: int | None = None,
    rng: np.random.Generator | None = None,
) -> dict:
    """Exhaustive pipeline round-trip over all in-bound errors on every key coset.

    Returns the minimum restored fidelity, whether every syndrome estimate was
    exact, and the case count.
    """
    w1 = code.t1 if max_wt1 is None else max_wt1
    w2 = code.t2 if max_wt2 is None else max_wt2
    pairs = weyl_error_pairs(code, w1, w2)
    min_fidelity = 1.0
    all_exact = True
    cases = 0
    for v in code.key_cosets.representatives:
        reference = encode(code, v)
        for e1, e2 in pairs:
            result = correct_pipeline(code, corrupt(e1, e2, reference), rng)
            fid = float(abs(np.vdot(reference.amplitudes, result.restored.amplitudes)) ** 2)
            min_fidelity = min(min_fidelity, fid)
            if result.e1_hat != e1 or result.e2_hat != e2:
                all_exact = False
            cases += 1
    return {"cases": cases, "min_fidelity": min_fidelity, "exact_syndromes": all_exact}

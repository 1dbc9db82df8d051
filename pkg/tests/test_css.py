"""CSS code construction, encoding, the correction pipeline, and correctability."""

from __future__ import annotations

import numpy as np
import pytest

from abelqec import (
    GroupSpec,
    basis_state,
    codeword_family,
    codeword_state,
    correct_pipeline,
    corrupt,
    decode_to_codeword,
    encode,
    fidelity,
    hamming_css_code,
    kl_check,
    make_css,
    min_distance,
    phase_toy_code,
    qft,
    support_elements,
    sweep_errors,
    trit_repetition_code,
    weight,
    weyl_error_pairs,
    weyl_x,
    weyl_z,
)
from abelqec.checks import check_code_family
from abelqec.css import mixture_diagonal, pair_diagonal_target, phase_family_states
from abelqec.groups import character_eval
from abelqec.hilbert import StateVector, density_sum, pair_sum


def test_hamming_code_parameters():
    """The binary Hamming pair has the frozen distances, radii, and key count."""
    code = hamming_css_code()
    assert code.base.moduli == (2,)
    assert code.n == 7
    assert code.c1.order == 16
    assert code.c2.order == 8
    assert code.d1 == 3
    assert code.d2_perp == 3
    assert code.t1 == 1
    assert code.t2 == 1
    assert code.dimension == 2
    assert not code.c1_pairing_nondegenerate
    assert not code.c2_pairing_nondegenerate


def test_trit_repetition_parameters():
    """The ternary repetition code protects bit flips only."""
    code = trit_repetition_code()
    assert code.base.moduli == (3,)
    assert code.n == 3
    assert code.c1.order == 3
    assert code.c2.order == 1
    assert code.d1 == 3
    assert code.t1 == 1
    assert code.t2 == 0
    assert code.dimension == 3
    assert code.c2_pairing_nondegenerate


def test_toy_code_parameters():
    """The two-position toy code is non-degenerate in both pairings."""
    code = phase_toy_code()
    assert code.n == 2
    assert code.c1.order == 4
    assert code.c2.order == 2
    assert code.dimension == 2
    assert code.c1_pairing_nondegenerate
    assert code.c2_pairing_nondegenerate


def test_min_distance_requires_nontrivial_subgroup():
    """The trivial subgroup has no distance."""
    code = trit_repetition_code()
    assert min_distance(code.c1) == 3
    with pytest.raises(ValueError):
        min_distance(code.c2)


def test_make_css_validations():
    """Nesting and block-length requirements are enforced."""
    base = GroupSpec((2,))
    with pytest.raises(ValueError):
        make_css(base, 0, ((1,),), ())
    with pytest.raises(ValueError):
        make_css(base, 2, ((1, 1),), ((1, 0),))


def test_encode_uniform_over_coset():
    """encode(v) is the flat superposition over v + C2."""
    code = hamming_css_code()
    for v in code.key_cosets.representatives:
        psi = encode(code, v)
        assert abs(psi.norm() - 1.0) < 1e-12
        supp = {e.index for e in support_elements(psi)}
        assert supp == {(v + w).index for w in code.c2}
        scale = 1 / np.sqrt(code.c2.order)
        for w in code.c2:
            assert abs(psi.amplitudes[(v + w).index] - scale) < 1e-12
    with pytest.raises(ValueError):
        encode(code, (1, 0, 0, 0, 0, 0, 0))


def test_encode_states_orthonormal():
    """Distinct key cosets give orthogonal logical states."""
    code = hamming_css_code()
    states = [encode(code, v) for v in code.key_cosets.representatives]
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            expected = 1.0 if i == j else 0.0
            assert abs(np.vdot(a.amplitudes, b.amplitudes) - expected) < 1e-12


def test_codeword_state_amplitudes_and_validation():
    """The padded codeword carries chi_z(w) phases on v + w + x."""
    code = phase_toy_code()
    v = code.key_cosets.representatives[1]
    z = code.c2.elements[1]
    x = code.ambient.zero
    psi = codeword_state(code, v, z, x)
    scale = 1 / np.sqrt(code.c2.order)
    for w in code.c2:
        amp = psi.amplitudes[(v + w + x).index]
        assert abs(amp - scale * character_eval(z, w)) < 1e-12
    with pytest.raises(ValueError):
        codeword_state(code, v, (1, 0), x)
    with pytest.raises(ValueError):
        codeword_state(code, v, z, (1, 0))


def test_codeword_family_size():
    """The family has |C1/C2| * |C2| * |C1_perp| members, which tiles |G|^n."""
    for code in (phase_toy_code(), hamming_css_code()):
        labels = list(codeword_family(code))
        assert len(labels) == code.dimension * code.c2.order * code.c1_perp.order
    toy = phase_toy_code()
    assert len(list(codeword_family(toy))) == toy.ambient.order


def test_pipeline_stages_on_hamming():
    """Each pipeline stage matches its closed form for a one-bit one-phase error."""
    code = hamming_css_code()
    v = code.key_cosets.representatives[1]
    reference = encode(code, v)
    e1 = code.ambient.element((0, 0, 0, 0, 1, 0, 0))
    e2 = code.ambient.element((0, 1, 0, 0, 0, 0, 0))
    result = correct_pipeline(code, corrupt(e1, e2, reference))
    psi2, psi3, psi4, psi5, psi6 = result.stages
    assert result.e1_hat == e1
    assert result.e2_hat == e2
    assert result.bit_syndrome == code.bit_syndromes.syndrome(e1)
    # the bit read is classical, so stage two is the input itself
    assert np.max(np.abs(psi2.amplitudes - corrupt(e1, e2, reference).amplitudes)) < 1e-12
    # undoing the translation leaves a pure phase error
    assert np.max(np.abs(psi3.amplitudes - weyl_z(e2, reference).amplitudes)) < 1e-12
    # in the transform domain the phase error is a translation off C2_perp
    supp4 = {e.index for e in support_elements(psi4)}
    assert supp4 == {(z - e2).index for z in code.c2_perp}
    supp5 = {e.index for e in support_elements(psi5)}
    assert supp5 == {z.index for z in code.c2_perp}
    supp6 = {e.index for e in support_elements(psi6)}
    assert supp6 == {(-v + w).index for w in code.c2}
    assert fidelity(reference, result.restored) > 1 - 1e-12
    assert result.within_bounds


def test_pipeline_restores_exactly_not_only_up_to_phase():
    """The restored vector equals encode(v) elementwise, not just in fidelity."""
    code = hamming_css_code()
    for v in code.key_cosets.representatives:
        reference = encode(code, v)
        for i in range(7):
            coords = [0] * 7
            coords[i] = 1
            e1 = code.ambient.element(coords)
            result = correct_pipeline(code, corrupt(e1, code.ambient.zero, reference))
            assert np.max(np.abs(result.restored.amplitudes - reference.amplitudes)) < 1e-9


def test_sweep_hamming_all_weight_one_pairs():
    """All 64 (e1, e2) pairs of weight <= 1 are corrected with exact syndromes."""
    code = hamming_css_code()
    res = sweep_errors(code)
    assert res["cases"] == 64 * code.dimension
    assert res["min_fidelity"] >= 1 - 1e-9
    assert res["exact_syndromes"]


def test_sweep_trit_repetition_bit_flips():
    """All weight-one trit shifts on every key coset are corrected exactly."""
    code = trit_repetition_code()
    res = sweep_errors(code)
    assert res["cases"] == 7 * code.dimension
    assert res["min_fidelity"] >= 1 - 1e-9
    assert res["exact_syndromes"]


def test_out_of_bound_weight_two_on_trit_is_flagged():
    """A weight-two shift lands on a weight-two leader and is reported out of bounds."""
    code = trit_repetition_code()
    v = code.key_cosets.representatives[1]
    e1 = code.ambient.element((1, 2, 0))
    result = correct_pipeline(code, corrupt(e1, code.ambient.zero, encode(code, v)))
    assert weight(result.e1_hat) == 2
    assert not result.within_bounds


def test_weight_two_on_hamming_miscorrects_to_wrong_coset():
    """A perfect code aliases weight-two errors onto weight-one corrections."""
    code = hamming_css_code()
    v = code.key_cosets.representatives[0]
    reference = encode(code, v)
    e1 = code.ambient.element((1, 1, 0, 0, 0, 0, 0))
    result = correct_pipeline(code, corrupt(e1, code.ambient.zero, reference))
    assert result.e1_hat != e1
    assert weight(result.e1_hat) <= 1
    assert fidelity(reference, result.restored) < 0.5


def test_pipeline_projective_extraction_needs_rng():
    """A support spanning two bit cosets requires a generator, then collapses."""
    code = hamming_css_code()
    v = code.key_cosets.representatives[0]
    clean = encode(code, v)
    shifted = weyl_x(code.ambient.element((1, 0, 0, 0, 0, 0, 0)), clean)
    mixed = StateVector(
        code.ambient, (clean.amplitudes + shifted.amplitudes) / np.sqrt(2)
    )
    with pytest.raises(ValueError):
        correct_pipeline(code, mixed, rng=None)
    result = correct_pipeline(code, mixed, rng=np.random.default_rng(2))
    assert fidelity(encode(code, v), result.restored) > 1 - 1e-9


def test_pipeline_rejects_foreign_states():
    """States over the wrong group are refused."""
    code = phase_toy_code()
    with pytest.raises(ValueError):
        correct_pipeline(code, basis_state(GroupSpec((2,)).zero))


def test_correctability_check_weight_one_passes():
    """The weight-one Weyl set satisfies the pairwise correctability condition."""
    code = hamming_css_code()
    errors = weyl_error_pairs(code, 1, 1)
    assert len(errors) == 64
    res = kl_check(code, errors)
    assert res.passed
    assert res.max_deviation <= 1e-8
    assert res.alpha.shape == (64, 64)
    assert np.max(np.abs(res.alpha - res.alpha.conj().T)) < 1e-12


def test_correctability_check_weight_two_injection_fails():
    """Adding one weight-two bit error breaks the condition."""
    code = hamming_css_code()
    errors = weyl_error_pairs(code, 1, 1)
    errors.append((code.ambient.element((1, 1, 0, 0, 0, 0, 0)), code.ambient.zero))
    res = kl_check(code, errors)
    assert not res.passed
    assert res.max_deviation > 1e-3


def test_correctability_check_trit():
    """Weight-one trit shifts are pairwise correctable."""
    code = trit_repetition_code()
    res = kl_check(code, weyl_error_pairs(code, 1, 0))
    assert res.passed


def test_family_identities_on_toy_instance():
    """Phase averaging, completeness, and the pair identity all hold on the toy code."""
    code = phase_toy_code()
    for v in code.key_cosets.representatives:
        for x in code.c1_perp:
            lhs = density_sum(phase_family_states(code, v, x)).matrix
            rhs = mixture_diagonal(code, v, x).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-9
    states = [codeword_state(code, v, z, x) for v, z, x in codeword_family(code)]
    assert np.max(np.abs(density_sum(states).matrix - np.eye(code.ambient.order))) < 1e-9
    paired = pair_sum(states)
    target = pair_diagonal_target(code.ambient)
    assert np.max(np.abs(paired.amplitudes - target.amplitudes)) < 1e-9


def test_family_identity_statuses_per_preset():
    """Hypothesis tracking separates genuine failures from violated preconditions."""
    by_name = {}
    for code, label in (
        (phase_toy_code(), "toy"),
        (hamming_css_code(), "hamming"),
        (trit_repetition_code(), "trit"),
    ):
        for rep in check_code_family(code, label):
            by_name[(label, rep.identity)] = rep.status
    assert by_name[("toy", "phase-mixture-diagonal")] == "ok"
    assert by_name[("toy", "family-completeness")] == "ok"
    assert by_name[("toy", "pair-diagonal")] == "ok"
    assert by_name[("hamming", "phase-mixture-diagonal")] == "hypothesis-violated"
    assert by_name[("hamming", "family-completeness")] == "hypothesis-violated"
    assert by_name[("trit", "phase-mixture-diagonal")] == "ok"
    assert by_name[("trit", "family-completeness")] == "hypothesis-violated"


def test_decode_to_codeword_corrects_weight_one():
    """Classical decoding removes any single-position shift."""
    code = hamming_css_code()
    for v in code.c1:
        for i in range(7):
            coords = [0] * 7
            coords[i] = 1
            noisy = v + code.ambient.element(coords)
            assert decode_to_codeword(code, noisy) == v


def test_phase_error_in_stabilizer_acts_trivially():
    """Z errors inside C2_perp change encode(v) only by a global phase."""
    code = phase_toy_code()
    for v in code.key_cosets.representatives:
        psi = encode(code, v)
        for f in code.c2_perp:
            out = weyl_z(f, psi)
            overlap = np.vdot(psi.amplitudes, out.amplitudes)
            assert abs(abs(overlap) - 1.0) < 1e-12


def test_transform_of_encode_supported_on_dual():
    """qft(encode(v)) is supported inside C2_perp."""
    code = hamming_css_code()
    for v in code.key_cosets.representatives:
        supp = {e.index for e in support_elements(qft(encode(code, v)))}
        assert supp <= {z.index for z in code.c2_perp}

"""Key-distribution protocols built on CSS codes over finite abelian groups.

Two protocols are provided.  The entanglement-free CSS protocol transmits a
2n-position register holding n check qudits and one padded codeword, with a
random binary mask deciding which positions travel Fourier-transformed.  The
prepare-and-measure variant sends single qudits in random bases and reuses the
code pair purely classically for error correction and privacy amplification.

Channel noise is frame-aware: a bit event shifts the symbol a matched-basis
receiver would read, and a phase event is the conjugate fault, whichever basis
the position travelled in.  All randomness flows through one generator per
trial in a fixed draw order, so transcripts are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .css import CssCode, codeword_state, correct_pipeline, decode_to_codeword, encode
from .groups import GroupElement, GroupSpec, coerce_element
from .hilbert import (
    StateVector,
    basis_state,
    dft_matrix,
    ensure_dimension,
    fourier_basis_state,
    measure_fourier,
    measure_standard,
    project_factors,
    weyl_x,
    weyl_z,
)

PROTOCOL_NAMES = ("css", "bb84")


@dataclass(frozen=True)
class ChannelModel:
    """Independent per-position bit and phase faults with uniform nonzero shifts."""

    p_x: float = 0.0
    p_z: float = 0.0

    def __post_init__(self) -> None:
        for name, p in (("p_x", self.p_x), ("p_z", self.p_z)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")

    def draw_events(
        self, base: GroupSpec, rng: np.random.Generator
    ) -> tuple[GroupElement | None, GroupElement | None]:
        """Draw one position's faults; the two uniforms are consumed either way."""
        u_bit = rng.random()
        u_phase = rng.random()
        d = base.order
        shift = None
        if u_bit < self.p_x:
            shift = base.element_at(1 + int(rng.integers(d - 1)))
        phase = None
        if u_phase < self.p_z:
            phase = base.element_at(1 + int(rng.integers(d - 1)))
        return shift, phase

    def apply_qudit(
        self, state: StateVector, fourier_frame: bool, rng: np.random.Generator
    ) -> StateVector:
        """Noise on one travelling qudit, expressed in its preparation frame."""
        shift, phase = self.draw_events(state.group, rng)
        if shift is not None:
            state = weyl_z(-shift, state) if fourier_frame else weyl_x(shift, state)
        if phase is not None:
            state = weyl_x(phase, state) if fourier_frame else weyl_z(phase, state)
        return state


@dataclass(frozen=True)
class InterceptResendEve:
    """An eavesdropper measuring every position in a random basis and resending."""


@dataclass(frozen=True)
class ProtocolParams:
    """Shared configuration for a protocol run."""

    code: CssCode
    delta: float = 1.0
    t_check: int | None = None
    noise: ChannelModel | None = None
    eve: InterceptResendEve | None = None

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.t_check is not None and self.t_check < 0:
            raise ValueError(f"t_check must be >= 0, got {self.t_check}")

    @property
    def check_threshold(self) -> int:
        """Maximum tolerated check disagreements before aborting."""
        return self.code.t1 if self.t_check is None else self.t_check

    def to_json_dict(self) -> dict:
        return {
            "code": {
                "moduli": list(self.code.base.moduli),
                "n": self.code.n,
                "c1_order": self.code.c1.order,
                "c2_order": self.code.c2.order,
            },
            "delta": float(self.delta),
            "t_check": self.check_threshold,
            "p_x": float(self.noise.p_x) if self.noise is not None else 0.0,
            "p_z": float(self.noise.p_z) if self.noise is not None else 0.0,
            "eve": "intercept-resend" if self.eve is not None else "none",
        }


@dataclass
class ProtocolTranscript:
    """Everything one trial produced, ready for JSON serialization."""

    protocol: str
    group: tuple[int, ...]
    n: int
    seed: int | None
    trial: int
    params: dict
    draws: dict
    announcements: dict
    bob_outcomes: dict
    disagreements: int
    checked: int
    abort: bool
    abort_reason: str | None
    alice_key: int | None
    bob_key: int | None

    def to_json_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "group": list(self.group),
            "n": self.n,
            "seed": self.seed,
            "trial": self.trial,
            "params": self.params,
            "draws": self.draws,
            "announcements": self.announcements,
            "bob_outcomes": self.bob_outcomes,
            "disagreements": self.disagreements,
            "checked": self.checked,
            "abort": self.abort,
            "abort_reason": self.abort_reason,
            "alice_key": self.alice_key,
            "bob_key": self.bob_key,
        }


def _position_axes(width: int, positions: Iterable[int]) -> list[int]:
    return [p * width + c for p in positions for c in range(width)]


def _embed_at_position(
    register: GroupSpec, width: int, position: int, value: GroupElement
) -> GroupElement:
    coords = [0] * len(register.moduli)
    for c, digit in enumerate(value.coords):
        coords[position * width + c] = digit
    return register.element(coords)


def _transform_positions(
    state: StateVector, positions: Iterable[int], width: int, inverse: bool
) -> StateVector:
    amps = state.amplitudes
    moduli = state.group.moduli
    for p in positions:
        for c in range(width):
            axis = p * width + c
            mat = dft_matrix(moduli[axis])
            amps = kernels.apply_axis_unitary(amps, moduli, axis, mat.conj() if inverse else mat)
    return StateVector(state.group, amps)


def _intercept_position(
    state: StateVector, axes: Sequence[int], rng: np.random.Generator
) -> StateVector:
    basis = int(rng.integers(2))
    if basis == 0:
        _, state = measure_standard(state, axes, rng)
    else:
        _, state = measure_fourier(state, axes, rng)
    return state


def _digits_to_positions(digits: Sequence[int], width: int, base: GroupSpec) -> list[int]:
    values = []
    for start in range(0, len(digits), width):
        values.append(base.element(digits[start : start + width]).index)
    return values


def run_css_protocol(
    params: ProtocolParams,
    rng: np.random.Generator,
    *,
    seed: int | None = None,
    trial: int = 0,
) -> ProtocolTranscript:
    """One trial of the register protocol: n check qudits plus one padded codeword."""
    code = params.code
    if not code.c2_pairing_nondegenerate:
        raise ValueError(
            "register protocol requires C2 to meet its annihilator only in zero"
        )
    n = code.n
    base = code.base
    width = code.width
    d = base.order
    register = base.direct_power(2 * n)
    ensure_dimension(register)

    check_word = [int(w) for w in rng.integers(0, d, size=n)]
    key_index = int(rng.integers(code.dimension))
    v = code.key_cosets.representatives[key_index]
    z = code.c2.elements[int(rng.integers(code.c2.order))]
    x = code.c1_perp.elements[int(rng.integers(code.c1_perp.order))]
    check_positions = sorted(int(p) for p in rng.choice(2 * n, size=n, replace=False))
    code_positions = [p for p in range(2 * n) if p not in set(check_positions)]
    mask = [int(b) for b in rng.integers(0, 2, size=2 * n)]

    code_state = codeword_state(code, v, z, x)
    amps = np.zeros(register.order, dtype=np.complex128)
    check_base = sum(c * d**p for c, p in zip(check_word, check_positions))
    idx = np.arange(code.ambient.order, dtype=np.int64)
    block = (idx[:, None] // (d ** np.arange(n, dtype=np.int64))[None, :]) % d
    placed = check_base + block @ (d ** np.asarray(code_positions, dtype=np.int64))
    amps[placed] = code_state.amplitudes
    state = StateVector(register, amps)

    state = _transform_positions(state, [p for p in range(2 * n) if mask[p]], width, inverse=False)

    if params.noise is not None:
        for p in range(2 * n):
            shift, phase = params.noise.draw_events(base, rng)
            if shift is not None:
                emb = _embed_at_position(register, width, p, shift)
                state = weyl_z(emb, state) if mask[p] else weyl_x(emb, state)
            if phase is not None:
                emb = _embed_at_position(register, width, p, phase)
                state = weyl_x(-emb, state) if mask[p] else weyl_z(emb, state)

    if params.eve is not None:
        for p in range(2 * n):
            state = _intercept_position(state, _position_axes(width, [p]), rng)

    state = _transform_positions(state, [p for p in range(2 * n) if mask[p]], width, inverse=True)

    check_axes = _position_axes(width, check_positions)
    digits, state = measure_standard(state, check_axes, rng)
    bob_checks = _digits_to_positions(digits, width, base)
    disagreements = sum(1 for a, b in zip(check_word, bob_checks) if a != b)

    transcript = ProtocolTranscript(
        protocol="css",
        group=base.moduli,
        n=n,
        seed=seed,
        trial=trial,
        params=params.to_json_dict(),
        draws={
            "check_word": check_word,
            "key_index": key_index,
            "phase_pad": list(z.coords),
            "shift_pad": list(x.coords),
            "check_positions": check_positions,
            "mask": mask,
        },
        announcements={
            "mask": mask,
            "check_positions": check_positions,
            "check_values": check_word,
            "phase_pad": list(z.coords),
            "shift_pad": list(x.coords),
        },
        bob_outcomes={"check_values": bob_checks},
        disagreements=disagreements,
        checked=n,
        abort=False,
        abort_reason=None,
        alice_key=None,
        bob_key=None,
    )
    if disagreements > params.check_threshold:
        transcript.abort = True
        transcript.abort_reason = "check-failure"
        return transcript

    assignment = {axis: digit for axis, digit in zip(check_axes, digits)}
    block_state = project_factors(state, assignment).normalized()
    block_state = weyl_z(-z, weyl_x(-x, block_state))
    result = correct_pipeline(code, block_state, rng)
    word_digits, _ = measure_standard(result.restored, range(len(code.ambient.moduli)), rng)
    measured = code.ambient.element(word_digits)
    decoded = decode_to_codeword(code, measured)
    transcript.bob_outcomes["code_word"] = list(measured.coords)
    transcript.bob_outcomes["decoded_word"] = list(decoded.coords)
    transcript.alice_key = key_index
    transcript.bob_key = code.key_cosets.index_of(decoded)
    return transcript


def run_bb84_protocol(
    params: ProtocolParams,
    rng: np.random.Generator,
    *,
    seed: int | None = None,
    trial: int = 0,
) -> ProtocolTranscript:
    """One trial of the prepare-and-measure protocol with classical code-based keys."""
    code = params.code
    n = code.n
    base = code.base
    width = code.width
    d = base.order
    total = int(round((4 + params.delta) * n))

    alice_values = [int(a) for a in rng.integers(0, d, size=total)]
    alice_bases = [int(b) for b in rng.integers(0, 2, size=total)]
    v = code.c1.elements[int(rng.integers(code.c1.order))]

    axes = tuple(range(width))
    bob_values: list[int] = []
    bob_bases: list[int] = []
    for i in range(total):
        a = base.element_at(alice_values[i])
        state = fourier_basis_state(a) if alice_bases[i] else basis_state(a)
        if params.noise is not None:
            state = params.noise.apply_qudit(state, bool(alice_bases[i]), rng)
        if params.eve is not None:
            state = _intercept_position(state, axes, rng)
        b_basis = int(rng.integers(2))
        if b_basis == 0:
            digits, _ = measure_standard(state, axes, rng)
        else:
            digits, _ = measure_fourier(state, axes, rng)
        bob_bases.append(b_basis)
        bob_values.append(base.element(digits).index)

    sifted = [i for i in range(total) if alice_bases[i] == bob_bases[i]]
    transcript = ProtocolTranscript(
        protocol="bb84",
        group=base.moduli,
        n=n,
        seed=seed,
        trial=trial,
        params=params.to_json_dict(),
        draws={
            "alice_values": alice_values,
            "alice_bases": alice_bases,
            "codeword": list(v.coords),
        },
        announcements={"bob_bases": bob_bases, "sifted": sifted},
        bob_outcomes={"values": bob_values},
        disagreements=0,
        checked=0,
        abort=False,
        abort_reason=None,
        alice_key=None,
        bob_key=None,
    )
    if len(sifted) < 2 * n:
        transcript.abort = True
        transcript.abort_reason = "insufficient-sifted"
        return transcript

    picks = rng.choice(len(sifted), size=2 * n, replace=False)
    chosen = sorted(sifted[int(j)] for j in picks)
    check_picks = rng.choice(2 * n, size=n, replace=False)
    check_ids = sorted(chosen[int(j)] for j in check_picks)
    key_ids = [i for i in chosen if i not in set(check_ids)]
    transcript.announcements["check_positions"] = check_ids
    transcript.announcements["key_positions"] = key_ids

    disagreements = sum(1 for i in check_ids if alice_values[i] != bob_values[i])
    transcript.disagreements = disagreements
    transcript.checked = n
    if disagreements > params.check_threshold:
        transcript.abort = True
        transcript.abort_reason = "check-failure"
        return transcript

    x_word = code.ambient.element_at(
        sum(alice_values[i] * d**j for j, i in enumerate(key_ids))
    )
    y_word = code.ambient.element_at(
        sum(bob_values[i] * d**j for j, i in enumerate(key_ids))
    )
    offset = x_word - v
    transcript.announcements["offset"] = list(offset.coords)
    decoded = decode_to_codeword(code, y_word - offset)
    transcript.bob_outcomes["decoded_word"] = list(decoded.coords)
    transcript.alice_key = code.key_cosets.index_of(v)
    transcript.bob_key = code.key_cosets.index_of(decoded)
    return transcript


_RUNNERS = {"css": run_css_protocol, "bb84": run_bb84_protocol}


def run_trials(
    params: ProtocolParams, protocol: str, trials: int, seed: int
) -> list[ProtocolTranscript]:
    """Run independent trials, each on its own child generator of the master seed."""
    if protocol not in _RUNNERS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOL_NAMES}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    runner = _RUNNERS[protocol]
    out = []
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        out.append(runner(params, rng, seed=seed, trial=i))
    return out


@dataclass
class ProtocolSummary:
    """Aggregate statistics over a batch of transcripts."""

    trials: int
    aborts: int
    abort_rate: float
    abort_reasons: dict = field(default_factory=dict)
    checked_total: int = 0
    disagreement_total: int = 0
    disagreement_rate: float | None = None
    disagreement_ci: float | None = None
    key_trials: int = 0
    key_agreement_rate: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "aborts": self.aborts,
            "abort_rate": self.abort_rate,
            "abort_reasons": dict(sorted(self.abort_reasons.items())),
            "checked_total": self.checked_total,
            "disagreement_total": self.disagreement_total,
            "disagreement_rate": self.disagreement_rate,
            "disagreement_ci": self.disagreement_ci,
            "key_trials": self.key_trials,
            "key_agreement_rate": self.key_agreement_rate,
        }


def aggregate_stats(transcripts: Sequence[ProtocolTranscript]) -> ProtocolSummary:
    """Pool abort, disagreement, and key-agreement statistics over transcripts."""
    if not transcripts:
        raise ValueError("aggregate_stats needs at least one transcript")
    trials = len(transcripts)
    aborts = sum(1 for t in transcripts if t.abort)
    reasons: dict[str, int] = {}
    for t in transcripts:
        if t.abort and t.abort_reason is not None:
            reasons[t.abort_reason] = reasons.get(t.abort_reason, 0) + 1
    checked_total = sum(t.checked for t in transcripts)
    disagreement_total = sum(t.disagreements for t in transcripts)
    rate = disagreement_total / checked_total if checked_total else None
    ci = None
    if rate is not None:
        ci = 1.96 * float(np.sqrt(rate * (1.0 - rate) / checked_total))
    keyed = [t for t in transcripts if not t.abort and t.alice_key is not None]
    agreement = None
    if keyed:
        agreement = sum(1 for t in keyed if t.alice_key == t.bob_key) / len(keyed)
    return ProtocolSummary(
        trials=trials,
        aborts=aborts,
        abort_rate=aborts / trials,
        abort_reasons=reasons,
        checked_total=checked_total,
        disagreement_total=disagreement_total,
        disagreement_rate=rate,
        disagreement_ci=ci,
        key_trials=len(keyed),
        key_agreement_rate=agreement,
    )


SAMPLING_VARIANTS = ("masked-codeword", "phase-mixture", "coset-choice", "basis-prep")


def sample_code_words(
    code: CssCode,
    key_index: int,
    x: GroupElement | Iterable[int],
    variant: str,
    trials: int,
    seed: int,
) -> list[int]:
    """Sample transmitted words by one of four equivalent preparation procedures.

    All variants draw from the uniform distribution on the padded coset
    v + C2 + x; comparing their empirical frequencies exercises the reduction
    from phase-padded codewords to classical coset sampling.
    """
    if variant not in SAMPLING_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {SAMPLING_VARIANTS}")
    if not 0 <= key_index < code.dimension:
        raise ValueError(f"key index {key_index} out of range for {code.dimension} cosets")
    v = code.key_cosets.representatives[key_index]
    x = coerce_element(code.ambient, x)
    if x not in code.c1_perp:
        raise ValueError(f"shift pad {x.coords} is not in the annihilator of C1")
    rng = np.random.default_rng(seed)
    axes = range(len(code.ambient.moduli))
    words: list[int] = []
    if variant == "masked-codeword":
        for _ in range(trials):
            z = code.c2.elements[int(rng.integers(code.c2.order))]
            digits, _ = measure_standard(codeword_state(code, v, z, x), axes, rng)
            words.append(code.ambient.element(digits).index)
    elif variant == "phase-mixture":
        for _ in range(trials):
            w = code.c2.elements[int(rng.integers(code.c2.order))]
            words.append((v + w + x).index)
    elif variant == "coset-choice":
        coset = sorted((v + w).index for w in code.c2)
        for _ in range(trials):
            c = code.ambient.element_at(coset[int(rng.integers(len(coset)))])
            words.append((c + x).index)
    else:
        reference = weyl_x(x, encode(code, v))
        for _ in range(trials):
            digits, _ = measure_standard(reference, axes, rng)
            words.append(code.ambient.element(digits).index)
    return words

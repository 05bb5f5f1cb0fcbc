"""Pure states, swap tests, fingerprint states, and coherent-state measurements.

Measurements are simulated by computing the analytic outcome distribution
and sampling from it. No state-vector collapse machinery is involved, so
every operation is a deterministic function of its inputs and the
generator it is handed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ussig.codes import LinearCode, all_messages

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """A normalized state vector over a finite orthonormal basis."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must form a nonempty vector")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return int(self.amplitudes.size)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugating the first argument."""
    if a.dimension != b.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {b.dimension}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def swap_test_outcome_probability(a: PureState, b: PureState) -> float:
    """Probability of the discriminating outcome 1: 1/2 - |<a|b>|^2 / 2."""
    overlap_sq = abs(inner_product(a, b)) ** 2
    return min(max(0.5 - 0.5 * overlap_sq, 0.0), 0.5)


def swap_test(a: PureState, b: PureState, rng: np.random.Generator) -> int:
    """Run one swap test. Equal states give 0 with certainty; outcome 1
    flags the states as different and is destructive for unequal inputs."""
    return int(rng.random() < swap_test_outcome_probability(a, b))


def fingerprint_state(key_bits, code: LinearCode) -> PureState:
    """Equal-magnitude superposition with signs (-1)**codeword_bit.

    Encoding L key bits into log2(m) qubits worth of state, where m is the
    code's output length.
    """
    codeword = code.encode(key_bits)
    m = codeword.size
    amps = (1.0 - 2.0 * codeword.astype(float)) / math.sqrt(m)
    return PureState(amps)


class HashCertificationError(ValueError):
    """The requested code cannot back a usable quantum hash."""


@dataclass(frozen=True)
class HashCertificate:
    """Witness that distinct inputs map to nearly orthogonal states.

    ``delta_hash`` = 1 - 2*d_min/m bounds the (signed) pairwise overlap of
    the fingerprint family, and some minimum-distance pair attains it
    exactly.
    """

    input_bits: int
    mode_count: int
    qubits: float
    delta_hash: float


def certify_quantum_hash(code: LinearCode) -> HashCertificate:
    """Certify the fingerprint family of a code and return its parameters.

    For exhaustively checkable input lengths this confirms, via the
    codeword weight enumeration, that every distinct pair of inputs has
    signed overlap at most delta_hash. A code that is not injective
    (d_min = 0) admits colliding inputs with overlap 1 and is rejected.
    """
    m = code.output_length
    delta = 1.0 - 2.0 * code.d_min / m
    if code.d_min <= 0 or delta >= 1.0:
        raise HashCertificationError(
            "code is not injective; distinct inputs collide (delta = 1)")
    if code.input_length <= 14:
        weights = code.nonzero_codeword_weights()
        overlaps = 1.0 - 2.0 * weights / m
        worst = float(overlaps.max())
        if worst > delta + 1e-12:
            raise HashCertificationError(
                f"pairwise overlap {worst} exceeds certified delta {delta}")
    return HashCertificate(
        input_bits=code.input_length,
        mode_count=m,
        qubits=math.log2(m),
        delta_hash=delta,
    )


def pairwise_overlap_matrix(code: LinearCode) -> np.ndarray:
    """All fingerprint overlaps <psi_k|psi_k'> as a 2**L x 2**L array."""
    msgs = all_messages(code.input_length)
    codewords = code.encode_many(msgs).astype(float)
    m = code.output_length
    signs = 1.0 - 2.0 * codewords
    return (signs @ signs.T) / m


# ---------------------------------------------------------------------------
# Coherent-state trains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoherentTrain:
    """A train of phase-encoded coherent states, one mode per position.

    ``amplitudes`` holds the signed real amplitude of each mode; the sign
    carries the encoded bit and the magnitude the mean photon number
    (|amplitude|^2) of that mode.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must form a nonempty real vector")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_signs(cls, signs, mode_amplitude: float) -> "CoherentTrain":
        signs = np.asarray(signs, dtype=float)
        if not np.isin(signs, (-1.0, 1.0)).all():
            raise ValueError("signs must be +1/-1")
        if mode_amplitude < 0:
            raise ValueError("mode amplitude must be nonnegative")
        return cls(signs * mode_amplitude)

    @property
    def length(self) -> int:
        return int(self.amplitudes.size)

    @property
    def signs(self) -> np.ndarray:
        return np.where(self.amplitudes < 0, -1, 1).astype(np.int8)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.amplitudes)


def fingerprint_to_coherent(key_bits, code: LinearCode, alpha: float) -> CoherentTrain:
    """Coherent-train version of a fingerprint: per-mode amplitude alpha/sqrt(m),
    per-mode sign (-1)**codeword_bit. The total mean photon number is alpha**2."""
    codeword = code.encode(key_bits)
    m = codeword.size
    signs = 1.0 - 2.0 * codeword.astype(float)
    return CoherentTrain(signs * (alpha / math.sqrt(m)))


def train_overlap(a: CoherentTrain, b: CoherentTrain) -> float:
    """Overlap of two coherent trains with real amplitudes.

    The product of per-mode coherent overlaps exp(-(a_i - b_i)^2 / 2);
    for equal-magnitude trains differing in d positions at per-mode
    amplitude beta this equals exp(-2 d beta^2).
    """
    if a.length != b.length:
        raise ValueError("train length mismatch")
    diff = a.amplitudes - b.amplitudes
    return float(np.exp(-0.5 * np.dot(diff, diff)))


def single_photon_projection(train: CoherentTrain) -> PureState:
    """Normalized single-photon component of a coherent train.

    The one-photon subspace amplitude of mode i is proportional to the
    mode's coherent amplitude, so an equal-magnitude train projects onto
    exactly the fingerprint state carrying the same signs.
    """
    amps = train.amplitudes
    norm = float(np.dot(amps, amps))
    if norm == 0.0:
        raise ValueError("train has no photon content to project")
    return PureState(amps / math.sqrt(norm))


# ---------------------------------------------------------------------------
# Binary coherent-state measurements
# ---------------------------------------------------------------------------

def coherent_overlap(alpha: float) -> float:
    """<alpha|-alpha> = exp(-2 alpha^2) for a real amplitude alpha."""
    return math.exp(-2.0 * alpha * alpha)


def usd_conclusive_prob(alpha: float) -> float:
    """Optimal unambiguous-discrimination success rate 1 - exp(-2 alpha^2)."""
    return 1.0 - coherent_overlap(alpha)


def min_error_prob(alpha: float) -> float:
    """Optimal minimum-error rate (1 - sqrt(1 - exp(-4 alpha^2))) / 2."""
    s = coherent_overlap(alpha)
    return 0.5 * (1.0 - math.sqrt(1.0 - s * s))


def usd_measure(true_sign: int, alpha: float,
                rng: np.random.Generator) -> int | None:
    """Unambiguously discriminate |alpha> from |-alpha>.

    Returns the true sign when conclusive (a conclusive result is never
    wrong) and None otherwise.
    """
    if true_sign not in (-1, 1):
        raise ValueError("true_sign must be +1 or -1")
    if rng.random() < usd_conclusive_prob(alpha):
        return true_sign
    return None


def min_error_guess(true_sign: int, alpha: float,
                    rng: np.random.Generator) -> int:
    """Always-conclusive best guess; wrong with probability min_error_prob."""
    if true_sign not in (-1, 1):
        raise ValueError("true_sign must be +1 or -1")
    if rng.random() < min_error_prob(alpha):
        return -true_sign
    return true_sign


def state_elimination_measure(true_sign: int, alpha: float,
                              rng: np.random.Generator) -> int | None:
    """Two-state elimination: rule out one sign, or learn nothing.

    For a binary alphabet this is the complement view of unambiguous
    discrimination; the eliminated sign is never the one actually sent.
    """
    result = usd_measure(true_sign, alpha, rng)
    return None if result is None else -result


class BB84Symbol(Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    MINUS = "-"

    @property
    def basis(self) -> str:
        return "Z" if self in (BB84Symbol.ZERO, BB84Symbol.ONE) else "X"


_ORTHOGONAL = {
    BB84Symbol.ZERO: BB84Symbol.ONE,
    BB84Symbol.ONE: BB84Symbol.ZERO,
    BB84Symbol.PLUS: BB84Symbol.MINUS,
    BB84Symbol.MINUS: BB84Symbol.PLUS,
}


def bb84_use_measure(symbol: BB84Symbol, rng: np.random.Generator) -> BB84Symbol:
    """Eliminate one of the four phase states by a random-basis measurement.

    A uniformly chosen Z or X measurement is applied; the outcome is
    certain in the matching basis and uniform in the conjugate one. The
    returned value is the basis state orthogonal to the outcome, i.e. a
    symbol that was definitely not sent.
    """
    symbol = BB84Symbol(symbol)
    basis = "Z" if rng.random() < 0.5 else "X"
    if basis == symbol.basis:
        outcome = symbol
    else:
        pair = (BB84Symbol.ZERO, BB84Symbol.ONE) if basis == "Z" else (
            BB84Symbol.PLUS, BB84Symbol.MINUS)
        outcome = pair[int(rng.random() < 0.5)]
    return _ORTHOGONAL[outcome]

"""Memoryless coherent-state signature protocol.

The signer encodes each bit of two private L-bit strings as the phase of
a coherent state, |alpha> for 0 and |-alpha> for 1, and sends one such
train per future message value to each recipient. The recipients feed
the two incoming trains through a balanced multiport whose signal
outputs are symmetric in the inputs and whose null ports stay dark
exactly when the trains agree; a click at a null port exposes a signer
who tried to give the recipients different keys. No quantum memory is
needed: each recipient measures its symmetrised train immediately
(unambiguous discrimination or state elimination) and stores only the
classical outcomes.

A signed message releases the string for one value; the recipient counts
positions where a conclusive stored outcome contradicts the declared
sign and accepts when the count stays below its threshold fraction of
the conclusive outcomes it holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ussig.quantum import (
    CoherentTrain,
    min_error_prob,
    usd_conclusive_prob,
)
from ussig.thresholds import accepts


@dataclass(frozen=True)
class MQDSPrivateKey:
    k0: np.ndarray
    k1: np.ndarray
    alpha: float

    @property
    def L(self) -> int:
        return int(self.k0.size)


@dataclass(frozen=True)
class Declaration:
    bit: int
    key_bits: np.ndarray


def generate_key(L: int, alpha: float, rng: np.random.Generator) -> MQDSPrivateKey:
    if L <= 0:
        raise ValueError("L must be positive")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    k0 = rng.integers(0, 2, size=L, dtype=np.uint8)
    k1 = rng.integers(0, 2, size=L, dtype=np.uint8)
    return MQDSPrivateKey(k0, k1, alpha)


def encode(key: MQDSPrivateKey, bit: int) -> CoherentTrain:
    """Phase-encode one key string: position i carries |alpha| with sign
    (+1 for bit 0, -1 for bit 1)."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    bits = key.k0 if bit == 0 else key.k1
    signs = 1.0 - 2.0 * bits.astype(float)
    return CoherentTrain(signs * key.alpha)


def sign(key: MQDSPrivateKey, bit: int) -> Declaration:
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    bits = key.k0 if bit == 0 else key.k1
    return Declaration(bit=bit, key_bits=bits.copy())


@dataclass(frozen=True)
class MultiportOutcome:
    signal_bob: CoherentTrain
    signal_charlie: CoherentTrain
    null_clicks: np.ndarray  # bool per position: any null-port detector fired


def null_click_probabilities(train_bob: CoherentTrain,
                             train_charlie: CoherentTrain) -> np.ndarray:
    """Per-position probability that at least one null port clicks.

    Each of the two null ports receives amplitude (b_i - c_i)/2, so the
    no-click probability is exp(-(b_i - c_i)^2 / 2) in total: zero when
    the inputs agree, 1 - exp(-2 a^2) when equal magnitudes a differ in
    sign.
    """
    if train_bob.length != train_charlie.length:
        raise ValueError("train length mismatch")
    diff = train_bob.amplitudes - train_charlie.amplitudes
    return 1.0 - np.exp(-0.5 * diff * diff)


def multiport(train_bob: CoherentTrain, train_charlie: CoherentTrain,
              rng: np.random.Generator) -> MultiportOutcome:
    """Interfere the two incoming trains on the balanced multiport.

    Both signal outputs carry the mean (b_i + c_i)/2 of the input
    amplitudes, which is symmetric under swapping the recipients; equal
    inputs pass through unchanged with dark null ports, while a sign
    disagreement extinguishes the signal at that position and routes the
    energy to the null ports.
    """
    click_p = null_click_probabilities(train_bob, train_charlie)
    clicks = rng.random(click_p.size) < click_p
    signal = (train_bob.amplitudes + train_charlie.amplitudes) / 2.0
    return MultiportOutcome(
        signal_bob=CoherentTrain(signal.copy()),
        signal_charlie=CoherentTrain(signal.copy()),
        null_clicks=clicks,
    )


@dataclass(frozen=True)
class MeasurementRecord:
    """Classical outcomes a recipient stores instead of quantum memory.

    ``conclusive`` marks positions with a usable outcome and
    ``inferred_sign`` the sign the recipient concluded was sent there.
    For the elimination measurement the stored fact is "this sign was
    ruled out"; ``eliminated_sign`` exposes that complementary view.
    """

    kind: str  # "usd" or "use"
    conclusive: np.ndarray
    inferred_sign: np.ndarray

    @property
    def length(self) -> int:
        return int(self.conclusive.size)

    @property
    def conclusive_count(self) -> int:
        return int(self.conclusive.sum())

    @property
    def eliminated_sign(self) -> np.ndarray:
        return -self.inferred_sign


def measure(train: CoherentTrain, kind: str, rng: np.random.Generator,
            noise: float = 0.0) -> MeasurementRecord:
    """Measure every position of a train and keep the classical outcomes.

    Both supported measurements are conclusive with probability
    1 - exp(-2 a_i^2) per position (for the binary alphabet, eliminating
    one sign identifies the other, so elimination shares the conclusive
    statistics of unambiguous discrimination). Conclusive outcomes are
    never wrong; an optional noise probability flips each conclusive
    outcome independently to model imperfect hardware.
    """
    if kind not in ("usd", "use"):
        raise ValueError("measurement kind must be 'usd' or 'use'")
    if not 0 <= noise < 1:
        raise ValueError("noise must lie in [0, 1)")
    amps = train.amplitudes
    conclusive = rng.random(amps.size) < (1.0 - np.exp(-2.0 * amps * amps))
    inferred = np.where(amps < 0, -1, 1).astype(np.int8)
    if noise:
        flips = rng.random(amps.size) < noise
        inferred = np.where(flips, -inferred, inferred).astype(np.int8)
    inferred = np.where(conclusive, inferred, 0).astype(np.int8)
    return MeasurementRecord(kind=kind, conclusive=conclusive, inferred_sign=inferred)


def count_mismatches(declaration: Declaration, record: MeasurementRecord) -> int:
    """Conclusive stored outcomes that contradict the declared signs."""
    if declaration.key_bits.size != record.length:
        raise ValueError("declared string length does not match the record")
    declared = (1 - 2 * declaration.key_bits.astype(np.int8)).astype(np.int8)
    return int((record.conclusive & (record.inferred_sign != declared)).sum())


def verify(declaration: Declaration, record: MeasurementRecord,
           s: float) -> tuple[bool, int]:
    """Threshold the contradiction count against the testable outcomes.

    Only conclusive positions can be tested, so the threshold fraction
    ``s`` is applied to the record's conclusive count: accept when
    mismatches < s * conclusive_count (a clean declaration always
    passes). Use s = s_a for a direct message and s = s_v for a
    forwarded one.
    """
    if not 0 <= s < 1:
        raise ValueError("threshold fraction must lie in [0, 1)")
    mismatches = count_mismatches(declaration, record)
    return accepts(mismatches, s, record.conclusive_count), mismatches


class BoundVacuousError(ValueError):
    """The analytic bound's precondition fails: the attack it bounds is
    not suppressed at these parameters, so no bound value exists."""


def forging_bound(p_min: float, p_usd: float, delta_usd: float,
                  s_v: float, L: int) -> float:
    """Tail bound on a recipient forging to another recipient.

    The forger's per-position guesses are wrong with probability at least
    p_min, while the verifying recipient holds at least
    (p_usd - delta_usd) * L conclusive outcomes; the mismatch fraction
    then concentrates above the effective threshold whenever
    p_min > s_v * p_usd / (p_usd - delta_usd), giving

        exp(-2 (p_min - s_v p_usd/(p_usd - delta_usd))^2 (p_usd - delta_usd) L).

    Raises BoundVacuousError when the precondition fails (the forger's
    error rate is inside the accepted region, so forging succeeds with
    high probability and no exponential bound applies).
    """
    if not (0 <= delta_usd < p_usd <= 1):
        raise ValueError("need 0 <= delta_usd < p_usd <= 1")
    if not 0 < p_min <= 0.5:
        raise ValueError("p_min must lie in (0, 1/2]")
    if not 0 <= s_v < 1:
        raise ValueError("s_v must lie in [0, 1)")
    if L <= 0:
        raise ValueError("L must be positive")
    effective = s_v * p_usd / (p_usd - delta_usd)
    if p_min <= effective:
        raise BoundVacuousError(
            f"no suppression: p_min={p_min:.6g} <= s_v*p_usd/(p_usd-delta_usd)"
            f"={effective:.6g}")
    return math.exp(-2.0 * (p_min - effective) ** 2 * (p_usd - delta_usd) * L)


def repudiation_bound(p_usd: float, s_a: float, s_v: float, L: int) -> float:
    """Tail bound exp(-p_usd^2 (s_v - s_a)^2 L / 2) on the signer driving
    the two recipients' mismatch fractions to opposite sides of the
    threshold gap, given that each planted mismatch is detected by each
    recipient independently with probability p_usd."""
    if not 0 < p_usd <= 1:
        raise ValueError("p_usd must lie in (0, 1]")
    if not 0 <= s_a < s_v < 1:
        raise ValueError("need 0 <= s_a < s_v < 1")
    if L <= 0:
        raise ValueError("L must be positive")
    return math.exp(-0.5 * p_usd ** 2 * (s_v - s_a) ** 2 * L)


def calibration(alpha: float) -> dict[str, float]:
    """The three analytic rates every experiment at this amplitude uses."""
    return {
        "p_usd": usd_conclusive_prob(alpha),
        "p_min": min_error_prob(alpha),
        "overlap": math.exp(-2.0 * alpha * alpha),
    }

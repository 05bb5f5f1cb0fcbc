"""One-time quantum signatures from fingerprint states.

The signer draws M pairs of L-bit strings, one pair per future message
bit value, and publishes quantum fingerprints of every string through a
swap-test distribution procedure that forces the copies held by the two
recipients to agree. Signing a bit releases the M strings for that
value; a recipient checks each released string by recomputing its
fingerprint and swap testing it against the retained copy, counting
outcome-1 events as mismatches. Keys are strictly one time: signing
consumes the private key, and a verification swap test consumes the
retained copy whenever it flags a mismatch.

The information a forger can extract from the circulating states is
capped by the Holevo bound: T copies of an n-qubit fingerprint carry at
most T*n bits about an L-bit string, so the scheme needs T*n < L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ussig.codes import LinearCode
from ussig.quantum import (
    PureState,
    fingerprint_state,
    inner_product,
    swap_test_outcome_probability,
)
from ussig.thresholds import accepts


@dataclass
class GCPrivateKey:
    """M pairs of L-bit strings; consumed wholesale by the first signature."""

    strings: np.ndarray  # shape (M, 2, L), dtype uint8
    consumed: bool = False

    @property
    def M(self) -> int:
        return int(self.strings.shape[0])

    @property
    def L(self) -> int:
        return int(self.strings.shape[2])


@dataclass(frozen=True)
class GCThresholds:
    s_a: float
    s_v: float
    M: int

    def __post_init__(self) -> None:
        if not (0 <= self.s_a < self.s_v < 1):
            raise ValueError(
                f"need 0 <= s_a < s_v < 1, got s_a={self.s_a}, s_v={self.s_v}")
        if self.M <= 0:
            raise ValueError("M must be positive")


@dataclass(frozen=True)
class Declaration:
    bit: int
    keys: np.ndarray  # shape (M, L)


@dataclass
class HeldCopy:
    """A retained public-key state with its post-measurement bookkeeping.

    A swap test against an unequal state either destroys the copy
    (outcome 1) or leaves it disturbed (outcome 0 symmetrises the pair),
    so trial-and-error probing by a forger burns through copies.
    """

    state: PureState
    pristine: bool = True
    consumed: bool = False


def keygen(M: int, L: int, code: LinearCode, rng: np.random.Generator,
           ) -> tuple[GCPrivateKey, Callable[[np.ndarray], PureState]]:
    """Draw the private strings and return them with the public state map."""
    if code.input_length != L:
        raise ValueError(
            f"code input length {code.input_length} does not match L={L}")
    strings = rng.integers(0, 2, size=(M, 2, L), dtype=np.uint8)

    def make_state(bits: np.ndarray) -> PureState:
        return fingerprint_state(bits, code)

    return GCPrivateKey(strings), make_state


def copies_required(cross_rounds: int) -> tuple[int, int]:
    """Copies each recipient needs per state: one to retain, one per own
    forwarding turn, and at least two so the self test can run."""
    if cross_rounds < 0:
        raise ValueError("cross_rounds must be nonnegative")
    bob_forwards = (cross_rounds + 1) // 2
    charlie_forwards = cross_rounds // 2
    return max(2, 1 + bob_forwards), max(2, 1 + charlie_forwards)


def symmetry_test_single(bob_copies: Sequence[PureState],
                         charlie_copies: Sequence[PureState],
                         rng: np.random.Generator,
                         cross_rounds: int = 1,
                         ) -> tuple[bool, HeldCopy | None, HeldCopy | None]:
    """Distribution check for one public-key state.

    Each recipient first swap tests two of its own copies (catching a
    signer who hands one recipient inconsistent copies), then the parties
    alternate forwarding a spare copy for a swap test against the other
    side's retained copy. Any outcome 1 aborts. Copies used in cross
    tests are discarded; each recipient retains a single copy on success.

    Cross tests consume distinct forwarded copies, so with identical
    honest copies the outcomes are independent across tests; a signer
    who sends the two recipients orthogonal states is caught with
    probability 1 - (1/2)**cross_rounds.
    """
    need_bob, need_charlie = copies_required(cross_rounds)
    if len(bob_copies) != need_bob or len(charlie_copies) != need_charlie:
        raise ValueError(
            f"copy-count mismatch: need {need_bob}/{need_charlie} copies, "
            f"got {len(bob_copies)}/{len(charlie_copies)}")
    for copies in (bob_copies, charlie_copies):
        if rng.random() < swap_test_outcome_probability(copies[0], copies[1]):
            return False, None, None
    retained = {"bob": bob_copies[0], "charlie": charlie_copies[0]}
    spares = {"bob": list(bob_copies[1:]), "charlie": list(charlie_copies[1:])}
    for t in range(cross_rounds):
        forwarder, tester = ("bob", "charlie") if t % 2 == 0 else ("charlie", "bob")
        forwarded = spares[forwarder].pop()
        if rng.random() < swap_test_outcome_probability(retained[tester], forwarded):
            return False, None, None
    return True, HeldCopy(retained["bob"]), HeldCopy(retained["charlie"])


def distribute_and_test(bob_copies: Sequence[Sequence[PureState]],
                        charlie_copies: Sequence[Sequence[PureState]],
                        rng: np.random.Generator,
                        cross_rounds: int = 1,
                        ) -> tuple[bool, list[HeldCopy], list[HeldCopy]]:
    """Run the distribution check for every public-key state.

    The sequences hold, per state slot, the copies sent to each
    recipient. The whole distribution aborts as soon as any slot's test
    does; on success each recipient retains one copy per slot.
    """
    if len(bob_copies) != len(charlie_copies):
        raise ValueError("recipients must receive the same number of state slots")
    retained_bob: list[HeldCopy] = []
    retained_charlie: list[HeldCopy] = []
    for slot_bob, slot_charlie in zip(bob_copies, charlie_copies):
        ok, kept_b, kept_c = symmetry_test_single(
            slot_bob, slot_charlie, rng, cross_rounds)
        if not ok:
            return False, [], []
        retained_bob.append(kept_b)
        retained_charlie.append(kept_c)
    return True, retained_bob, retained_charlie


def honest_copy_slots(key: GCPrivateKey,
                      make_state: Callable[[np.ndarray], PureState],
                      cross_rounds: int = 1,
                      ) -> tuple[list[list[PureState]], list[list[PureState]]]:
    """The copy lists an honest signer distributes: identical fingerprints
    of every string, ordered (index, bit value)."""
    need_bob, need_charlie = copies_required(cross_rounds)
    bob, charlie = [], []
    for i in range(key.M):
        for b in (0, 1):
            state = make_state(key.strings[i, b])
            bob.append([state] * need_bob)
            charlie.append([state] * need_charlie)
    return bob, charlie


def sign(key: GCPrivateKey, bit: int) -> Declaration:
    """Release all M strings for one bit value and burn the key."""
    if bit not in (0, 1):
        raise ValueError("message bit must be 0 or 1")
    if key.consumed:
        raise RuntimeError("one-time key already used")
    key.consumed = True
    return Declaration(bit=bit, keys=key.strings[:, bit, :].copy())


def mismatch_probabilities(overlaps: np.ndarray, noise: float = 0.0) -> np.ndarray:
    """Per-index probability that a verification swap test flags a mismatch.

    The clean rate is (1 - |overlap|^2)/2; an optional symmetric noise
    probability flips additional outcomes independently.
    """
    if not 0 <= noise < 1:
        raise ValueError("noise must lie in [0, 1)")
    clean = 0.5 - 0.5 * np.abs(np.asarray(overlaps)) ** 2
    clean = np.clip(clean, 0.0, 0.5)
    return 1.0 - (1.0 - clean) * (1.0 - noise)


def sample_mismatch_counts(probs: np.ndarray, trials: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Sum of independent per-index mismatch indicators, per trial."""
    probs = np.asarray(probs, dtype=float)
    return (rng.random((trials, probs.size)) < probs).sum(axis=1)


def verify(declaration: Declaration, copies: Sequence[HeldCopy],
           code: LinearCode, thresholds: GCThresholds, forwarded: bool,
           rng: np.random.Generator, noise: float = 0.0) -> tuple[bool, int]:
    """Swap test every declared string's fingerprint against the retained
    copies and threshold the mismatch count (s_a direct, s_v forwarded).

    Copies that return outcome 1 are consumed; copies that pass against a
    state other than their own are marked disturbed.
    """
    M = thresholds.M
    if declaration.keys.shape[0] != M or len(copies) != M:
        raise ValueError("declaration/copy count does not match M")
    mismatches = 0
    for i in range(M):
        held = copies[i]
        if held.consumed:
            raise RuntimeError(f"retained copy {i} was already consumed")
        candidate = fingerprint_state(declaration.keys[i], code)
        overlap = inner_product(held.state, candidate)
        p = mismatch_probabilities(np.array([overlap]), noise)[0]
        if rng.random() < p:
            mismatches += 1
            held.consumed = True
        elif abs(abs(overlap) - 1.0) > 1e-12:
            held.pristine = False
    rate = thresholds.s_v if forwarded else thresholds.s_a
    return accepts(mismatches, rate, M), mismatches


def holevo_budget(T: int, n_qubits: float, L: int) -> bool:
    """Whether T circulating n-qubit copies stay below the L-bit content
    of each key string (strict inequality)."""
    if T < 0 or L <= 0 or n_qubits <= 0:
        raise ValueError("T must be >= 0 and n_qubits, L positive")
    return T * n_qubits < L

"""Classical two-recipient signature protocol built on private random strings.

The signer privately hands each recipient one random L-bit string per
message value (four strings in total for one-bit messages). The
recipients then symmetrise: for each message value, each forwards the bit
values at a uniformly random half of the positions to the other, keeping
the chosen subset secret from the signer. An honest recipient never
tests positions it forwarded, so each of a string's positions is tested
by exactly one party and any mismatch the signer plants has an even
chance of landing with either recipient.

A signed message is the pair of full strings for the declared value.
The direct recipient accepts below the authentication threshold s_a, a
recipient judging a forwarded message accepts below the larger
verification threshold s_v, with 0 <= s_a < s_v < 1/2. Repudiation is
suppressed like (1/2)**(s_v L) and forgery like exp(-(1/2 - s_v)**2 L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ussig.thresholds import accepts


@dataclass(frozen=True)
class ThresholdConfig:
    s_a: float
    s_v: float
    L: int

    def __post_init__(self) -> None:
        if not (0 <= self.s_a < self.s_v < 0.5):
            raise ValueError(
                f"need 0 <= s_a < s_v < 1/2, got s_a={self.s_a}, s_v={self.s_v}")
        if self.L <= 0 or self.L % 2:
            raise ValueError(f"L must be positive and even, got {self.L}")


@dataclass(frozen=True)
class SenderKeys:
    """The four private strings, indexed by recipient and message value."""

    strings: dict[str, dict[int, np.ndarray]]  # strings[recipient][bit]
    L: int


@dataclass
class RecipientHolding:
    """One recipient's view: its own strings plus the exchanged halves."""

    name: str
    peer: str
    L: int
    direct: dict[int, np.ndarray]
    kept_positions: dict[int, np.ndarray] = field(default_factory=dict)
    forwarded_positions: dict[int, np.ndarray] = field(default_factory=dict)
    received_positions: dict[int, np.ndarray] = field(default_factory=dict)
    received_values: dict[int, np.ndarray] = field(default_factory=dict)
    symmetrised: bool = False


@dataclass(frozen=True)
class Declaration:
    """A signed message: the value plus the two full strings for it."""

    message: int
    string_for: dict[str, np.ndarray]


def distribute(L: int, rng: np.random.Generator,
               ) -> tuple[SenderKeys, RecipientHolding, RecipientHolding]:
    """Sample the four strings and hand each recipient its two."""
    if L <= 0 or L % 2:
        raise ValueError(f"L must be positive and even, got {L}")
    strings = {
        name: {b: rng.integers(0, 2, size=L, dtype=np.uint8) for b in (0, 1)}
        for name in ("bob", "charlie")
    }
    keys = SenderKeys(strings=strings, L=L)
    bob = RecipientHolding(
        name="bob", peer="charlie", L=L,
        direct={b: strings["bob"][b].copy() for b in (0, 1)})
    charlie = RecipientHolding(
        name="charlie", peer="bob", L=L,
        direct={b: strings["charlie"][b].copy() for b in (0, 1)})
    return keys, bob, charlie


def symmetrise(bob: RecipientHolding, charlie: RecipientHolding,
               rng: np.random.Generator) -> None:
    """Exchange half of each direct string, hidden from the signer.

    For each message value, each recipient forwards the bit values at a
    uniformly random size-L/2 subset of its own string's positions and
    marks them as untestable for itself. Mutates both holdings in place;
    calling twice is an error.
    """
    if bob.symmetrised or charlie.symmetrised:
        raise ValueError("holdings already symmetrised")
    half = bob.L // 2
    for sender, receiver in ((bob, charlie), (charlie, bob)):
        for b in (0, 1):
            order = rng.permutation(sender.L)
            forwarded = np.sort(order[:half])
            kept = np.sort(order[half:])
            sender.forwarded_positions[b] = forwarded
            sender.kept_positions[b] = kept
            receiver.received_positions[b] = forwarded
            receiver.received_values[b] = sender.direct[b][forwarded].copy()
    bob.symmetrised = True
    charlie.symmetrised = True


def sign(keys: SenderKeys, message: int) -> Declaration:
    """Release the two strings for one message value, and nothing else."""
    if message not in (0, 1):
        raise ValueError("message must be 0 or 1")
    return Declaration(
        message=message,
        string_for={name: keys.strings[name][message].copy()
                    for name in ("bob", "charlie")})


def count_mismatches(declaration: Declaration, holding: RecipientHolding) -> int:
    """Mismatches over the positions this recipient is entitled to test:
    the kept half of its own string plus the received half of the peer's."""
    if not holding.symmetrised:
        raise ValueError("symmetrise before verifying")
    b = declaration.message
    own = declaration.string_for[holding.name]
    peer = declaration.string_for[holding.peer]
    if own.shape[0] != holding.L or peer.shape[0] != holding.L:
        raise ValueError("declared string length does not match the protocol L")
    kept = holding.kept_positions[b]
    recv = holding.received_positions[b]
    own_bad = int((own[kept] != holding.direct[b][kept]).sum())
    peer_bad = int((peer[recv] != holding.received_values[b]).sum())
    return own_bad + peer_bad


def verify(declaration: Declaration, holding: RecipientHolding,
           config: ThresholdConfig, forwarded: bool) -> tuple[bool, int]:
    """Accept or reject a declaration; returns (accepted, mismatch count).

    ``forwarded`` selects the threshold: s_a for a message received
    directly from the signer, s_v for one relayed by the other recipient.
    """
    mismatches = count_mismatches(declaration, holding)
    rate = config.s_v if forwarded else config.s_a
    return accepts(mismatches, rate, config.L), mismatches


def repudiation_bound(s_v: float, L: int) -> float:
    """Probability that planted mismatches all dodge the direct recipient
    yet push the other recipient past its threshold: at most (1/2)**(s_v L)."""
    if not 0 <= s_v < 0.5:
        raise ValueError("s_v must lie in [0, 1/2)")
    if L < 0:
        raise ValueError("L must be nonnegative")
    return 0.5 ** (s_v * L)


def forging_bound(s_v: float, L: int) -> float:
    """Tail bound exp(-(1/2 - s_v)**2 L) on guessing the unseen half-string
    accurately enough to pass the relayed-message threshold."""
    if not 0 <= s_v < 0.5:
        raise ValueError("s_v must lie in [0, 1/2)")
    if L < 0:
        raise ValueError("L must be nonnegative")
    return math.exp(-((0.5 - s_v) ** 2) * L)

"""Binary linear codes used to build fingerprint states.

A code maps L input bits to m output bits through a generator matrix over
GF(2). The minimum distance equals the minimum weight of a nonzero
codeword and is computed exhaustively at construction for desk-scale
input lengths, or supplied as a certified value for structured codes
whose distance is known in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EXHAUSTIVE_LIMIT = 14  # largest input length for which 2**L enumeration is allowed


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
        raise ValueError("expected a one-dimensional 0/1 array")
    return arr


def all_messages(L: int) -> np.ndarray:
    """All 2**L binary messages as a (2**L, L) array, row index = integer value."""
    ints = np.arange(2 ** L, dtype=np.uint32)
    return ((ints[:, None] >> np.arange(L, dtype=np.uint32)) & 1).astype(np.uint8)


def gf2_rank(matrix: np.ndarray) -> int:
    m = matrix.copy().astype(np.uint8)
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        eliminate = m[:, col].astype(bool).copy()
        eliminate[rank] = False
        m[eliminate] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def gf2_solve(A: np.ndarray, b: np.ndarray,
              rng: np.random.Generator | None = None) -> np.ndarray | None:
    """Solve A x = b over GF(2); return one solution or None.

    When ``rng`` is given the returned solution is drawn uniformly from the
    full affine solution space (particular solution plus a random element
    of the null space).
    """
    A = A.astype(np.uint8)
    b = b.astype(np.uint8)
    rows, cols = A.shape
    aug = np.concatenate([A, b[:, None]], axis=1)
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if aug[rr, c]:
                pivot = rr
                break
        if pivot is None:
            continue
        aug[[r, pivot]] = aug[[pivot, r]]
        elim = aug[:, c].astype(bool).copy()
        elim[r] = False
        aug[elim] ^= aug[r]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    # Inconsistent system: a zero row with nonzero right-hand side.
    for rr in range(r, rows):
        if aug[rr, -1] and not aug[rr, :-1].any():
            return None
    x = np.zeros(cols, dtype=np.uint8)
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    if rng is not None and free_cols:
        x[free_cols] = rng.integers(0, 2, size=len(free_cols), dtype=np.uint8)
    for row, c in reversed(list(enumerate(pivot_cols))):
        acc = aug[row, -1]
        for cc in range(c + 1, cols):
            if aug[row, cc]:
                acc ^= x[cc]
        x[c] = acc
    return x


@dataclass(frozen=True)
class LinearCode:
    """Binary linear code given by an (L, m) generator matrix.

    ``d_min`` is exact: either computed here by enumerating every nonzero
    message (L <= EXHAUSTIVE_LIMIT), or passed in for codes with a proved
    closed-form distance.
    """

    generator: np.ndarray
    d_min: int = field(default=-1)

    def __post_init__(self) -> None:
        gen = np.asarray(self.generator, dtype=np.uint8)
        if gen.ndim != 2 or not np.isin(gen, (0, 1)).all():
            raise ValueError("generator must be a binary matrix")
        object.__setattr__(self, "generator", gen)
        if self.d_min < 0:
            if self.input_length > EXHAUSTIVE_LIMIT:
                raise ValueError(
                    f"input length {self.input_length} exceeds the exhaustive "
                    f"distance-check limit {EXHAUSTIVE_LIMIT}; pass a certified d_min"
                )
            object.__setattr__(self, "d_min", self._exhaustive_min_distance())

    @property
    def input_length(self) -> int:
        return int(self.generator.shape[0])

    @property
    def output_length(self) -> int:
        return int(self.generator.shape[1])

    def encode(self, bits) -> np.ndarray:
        bits = _as_bits(bits)
        if bits.shape[0] != self.input_length:
            raise ValueError(
                f"message length {bits.shape[0]} != code input length {self.input_length}")
        return (bits @ self.generator) % 2

    def encode_many(self, messages: np.ndarray) -> np.ndarray:
        return (np.asarray(messages, dtype=np.uint8) @ self.generator) % 2

    def _exhaustive_min_distance(self) -> int:
        msgs = all_messages(self.input_length)[1:]
        weights = self.encode_many(msgs).sum(axis=1)
        return int(weights.min())

    def nonzero_codeword_weights(self) -> np.ndarray:
        """Weights of every nonzero-message codeword (exhaustive)."""
        if self.input_length > EXHAUSTIVE_LIMIT:
            raise ValueError("enumeration limited to small input lengths")
        msgs = all_messages(self.input_length)[1:]
        return self.encode_many(msgs).sum(axis=1)


def identity_code(L: int) -> LinearCode:
    """The trivial code: the message is its own codeword (d_min = 1)."""
    return LinearCode(np.eye(L, dtype=np.uint8))


def hadamard_code(L: int) -> LinearCode:
    """Inner-product code of length 2**L: codeword(k)_x = parity(k & x).

    Every nonzero codeword has weight exactly 2**(L-1), so d_min = m/2 and
    the fingerprint states built on it are pairwise orthogonal.
    """
    if L > EXHAUSTIVE_LIMIT:
        raise ValueError(f"L={L} too large; mode count would be 2**{L}")
    masks = np.arange(2 ** L, dtype=np.uint32)
    gen = ((masks[None, :] >> np.arange(L, dtype=np.uint32)[:, None]) & 1).astype(np.uint8)
    return LinearCode(gen, d_min=2 ** (L - 1))


def random_linear_code(L: int, m: int, rng: np.random.Generator,
                       max_attempts: int = 64) -> LinearCode:
    """A uniformly random full-rank generator with exhaustively checked d_min."""
    if L > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"L={L} exceeds the exhaustive certification limit {EXHAUSTIVE_LIMIT}")
    if m < L:
        raise ValueError("output length must be at least the input length for full rank")
    for _ in range(max_attempts):
        gen = rng.integers(0, 2, size=(L, m), dtype=np.uint8)
        if gf2_rank(gen) == L:
            return LinearCode(gen)
    raise RuntimeError("failed to sample a full-rank generator")


def get_code(name: str, L: int, rng: np.random.Generator,
             m: int | None = None) -> LinearCode:
    """Code factory used by the command line: identity, hadamard, or random."""
    if name == "identity":
        return identity_code(L)
    if name == "hadamard":
        return hadamard_code(L)
    if name == "random":
        return random_linear_code(L, m if m is not None else 2 * L, rng)
    raise ValueError(f"unknown code {name!r}")

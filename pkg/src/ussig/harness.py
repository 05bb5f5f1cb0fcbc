"""Adversary harness: attack simulations, exact oracles, bound compliance.

Each attack entry point runs a Monte Carlo experiment against one of the
protocols and returns a TrialReport pairing the empirical success
frequency with the matching analytic bound and, where the attack admits
one, an exactly computed success probability (the oracle). Experiments
derive all randomness from a root seed through counter-based splits, one
generator per fixed-size batch of trials, so results do not depend on
how batches are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

import numpy as np

from ussig import gc_qds, hanaoka, mqds, p2
from ussig.codes import get_code, gf2_solve
from ussig.fields import FieldElement
from ussig.quantum import (
    PureState,
    min_error_prob,
    usd_conclusive_prob,
)
from ussig.thresholds import accepts, threshold_count

BATCH = 10_000

BOUND_TAGS = {
    ("p2", "repudiate"): "p2_repudiation",
    ("p2", "forge"): "p2_forging",
    ("mqds", "repudiate"): "mqds_repudiation",
    ("mqds", "forge"): "mqds_forging",
}

_SUPPORTED = {
    "p2": {"none", "repudiate", "forge"},
    "mqds": {"none", "repudiate", "forge"},
    "gc-qds": {"none", "forge", "tamper-keys"},
    "hanaoka": {"none", "forge"},
}


def batch_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one batch, split off the root seed by counter."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def batches(seed: int, trials: int):
    """Yield (generator, batch_size) pairs covering ``trials`` runs."""
    index = 0
    remaining = trials
    while remaining > 0:
        size = min(BATCH, remaining)
        yield batch_rng(seed, index), size
        index += 1
        remaining -= size


def three_sigma(p_ref: float, trials: int) -> float:
    """Three binomial standard deviations of a frequency estimator."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    return 3.0 * math.sqrt(max(p_ref * (1.0 - p_ref), 0.0) / trials)


@dataclass(frozen=True)
class AttackSpec:
    """A fully specified attack run; identical specs give identical reports."""

    protocol: str
    kind: str
    params: dict
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.protocol not in _SUPPORTED:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.kind not in _SUPPORTED[self.protocol]:
            raise ValueError(
                f"protocol {self.protocol!r} does not support attack {self.kind!r}")
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass
class TrialReport:
    """Outcome of one experiment, ready for serialization.

    ``oracle`` is the exact success probability of the simulated attack
    when it can be computed in closed form; ``bound`` the analytic bound
    value with its tag, or None when no bound applies (for instance when
    a bound's precondition fails, recorded in ``flags``).
    """

    protocol: str
    attack: str
    params: dict
    trials: int
    successes: int
    frequency: float
    oracle: float | None
    bound: float | None
    bound_tag: str | None
    seed: int
    flags: dict = dc_field(default_factory=dict)
    elapsed_s: float | None = None

    def oracle_consistent(self) -> bool:
        if self.oracle is None:
            return True
        return abs(self.frequency - self.oracle) <= three_sigma(self.oracle, self.trials)

    def within_bound(self) -> bool | None:
        """None when no bound applies; otherwise empirical <= bound + 3 sigma."""
        if self.bound is None:
            return None
        slack = three_sigma(self.frequency, self.trials)
        return self.frequency <= self.bound + slack

    def to_record(self, include_timing: bool = False) -> dict:
        record = {
            "protocol": self.protocol,
            "attack": self.attack,
            "params": dict(sorted(self.params.items())),
            "trials": self.trials,
            "successes": self.successes,
            "empirical": self.frequency,
            "oracle": self.oracle,
            "bound": self.bound,
            "bound_tag": self.bound_tag,
            "seed": self.seed,
            "flags": dict(sorted(self.flags.items())),
        }
        if include_timing:
            record["elapsed_s"] = self.elapsed_s
        return record


def _accepts_array(counts: np.ndarray, rate: float, base) -> np.ndarray:
    """Vectorized form of the shared threshold rule."""
    base = np.asarray(base, dtype=float)
    t = rate * base
    r = np.rint(t)
    thr = np.where(np.abs(t - r) < 1e-9, r, t)
    return (counts == 0) | (counts < thr)


# ---------------------------------------------------------------------------
# Exact oracles
# ---------------------------------------------------------------------------

def binomial_tail_below(n: int, p: Fraction | float, rate: float,
                        base: int | float) -> float:
    """P[accepts(X, rate, base)] for X ~ Binomial(n, p), computed exactly
    when p is rational (exact Fraction pmf) and in floats otherwise."""
    exact = isinstance(p, Fraction)
    total_exact = Fraction(0)
    total_float = 0.0
    for x in range(n + 1):
        if not accepts(x, rate, base):
            continue
        if exact:
            total_exact += Fraction(math.comb(n, x)) * p ** x * (1 - p) ** (n - x)
        else:
            total_float += _binom_pmf(n, x, p)
    return float(total_exact) if exact else total_float


def _binom_pmf(n: int, k: int, p: float) -> float:
    if p in (0.0, 1.0):
        return float((p == 1.0) == (k == n)) if k in (0, n) else (
            1.0 if (p == 0.0 and k == 0) else 0.0)
    log_pmf = (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
               + k * math.log(p) + (n - k) * math.log1p(-p))
    return math.exp(log_pmf)


def p2_forging_oracle(L: int, s_v: float) -> float:
    """The forger knows everything the verifier tests except the L/2 kept
    positions of the peer string; those are uniform guesses, so the
    mismatch count is Binomial(L/2, 1/2). Success is a mismatch rate
    below s_v over the guessed positions: the known positions contribute
    no mismatches and are excluded from the rate's base, which is the
    event the analytic forging bound controls."""
    return binomial_tail_below(L // 2, Fraction(1, 2), s_v, L // 2)


def _all_avoid(kept_out_of: int, half: int, t: int) -> Fraction:
    """P[t uniformly placed distinct positions all avoid a uniform
    half-subset of kept_out_of positions]."""
    prob = Fraction(1)
    for i in range(t):
        if half - i <= 0:
            return Fraction(0)
        prob *= Fraction(half - i, kept_out_of - i)
    return prob


def p2_repudiation_oracle(L: int, s_a: float, s_v: float, j: int) -> float:
    """Exact success probability of planting j mismatches uniformly over
    the 2L string positions: the direct recipient must accept at s_a and
    the other recipient must reject at s_v.

    Every planted position is tested by exactly one recipient; the split
    follows hypergeometric laws driven by which halves were exchanged.
    """
    if j == 0:
        return 0.0  # nothing planted: the other recipient accepts cleanly
    half = L // 2
    total = Fraction(0)
    denom_split = math.comb(2 * L, j)
    for t in range(max(0, j - L), min(j, L) + 1):
        p_split = Fraction(math.comb(L, t) * math.comb(L, j - t), denom_split)
        if p_split == 0:
            continue
        # Of the t mismatches in the direct recipient's own string, u land
        # in its kept (tested) half; of the j-t in the peer string, w land
        # in the half forwarded to the direct recipient.
        for u in range(0, min(t, half) + 1):
            p_u = Fraction(math.comb(half, u) * math.comb(half, t - u),
                           math.comb(L, t)) if t <= L else Fraction(0)
            if p_u == 0:
                continue
            for w in range(0, min(j - t, half) + 1):
                p_w = Fraction(math.comb(half, w) * math.comb(half, j - t - w),
                               math.comb(L, j - t))
                if p_w == 0:
                    continue
                direct_count = u + w
                other_count = j - direct_count
                if accepts(direct_count, s_a, L) and not accepts(other_count, s_v, L):
                    total += p_split * p_u * p_w
    return float(total)


def mqds_forging_oracle(L: int, alpha: float, s_v: float) -> float:
    """Exact law of the min-error forger: the verifier holds
    n ~ Binomial(L, p_usd) conclusive outcomes and sees X ~ Binomial(n, p_min)
    contradictions; success is acceptance of X against base n."""
    p_usd = usd_conclusive_prob(alpha)
    p_min = min_error_prob(alpha)
    total = 0.0
    for n in range(L + 1):
        outer = _binom_pmf(L, n, p_usd)
        if outer < 1e-18:
            continue
        inner = 0.0
        for x in range(n + 1):
            if not accepts(x, s_v, n):
                break
            inner += _binom_pmf(n, x, p_min)
        total += outer * inner
    return total


def _mqds_side_prob(L: int, j: int, p_usd: float, rate: float,
                    want_accept: bool) -> float:
    """P[recipient accepts (or rejects) j planted mismatches at ``rate``].

    Detections among the planted positions are Binomial(j, p_usd); the
    conclusive base adds Binomial(L - j, p_usd) clean outcomes.
    """
    total = 0.0
    for d in range(j + 1):
        pd = _binom_pmf(j, d, p_usd)
        if pd < 1e-18:
            continue
        if d == 0:
            acc = 1.0  # clean: accepted at any rate
        else:
            acc = 0.0
            for n in range(L - j + 1):
                pn = _binom_pmf(L - j, n, p_usd)
                if pn < 1e-18:
                    continue
                if accepts(d, rate, d + n):
                    acc += pn
        total += pd * (acc if want_accept else 1.0 - acc)
    return total


def mqds_repudiation_oracle(L: int, alpha: float, s_a: float, s_v: float,
                            j: int) -> float:
    if j == 0:
        return 0.0
    p_usd = usd_conclusive_prob(alpha)
    p_accept_direct = _mqds_side_prob(L, j, p_usd, s_a, want_accept=True)
    p_reject_other = _mqds_side_prob(L, j, p_usd, s_v, want_accept=False)
    return p_accept_direct * p_reject_other


def tamper_oracle(overlap: float, cross_rounds: int) -> float:
    """Abort probability of the distribution test against a signer who
    hands the recipients states with the given overlap."""
    detect = 0.5 - 0.5 * overlap * overlap
    return 1.0 - (1.0 - detect) ** cross_rounds


# ---------------------------------------------------------------------------
# Attack runners
# ---------------------------------------------------------------------------

def optimal_injection(s_v: float, L: int) -> int:
    """Smallest mismatch count that forces rejection at threshold s_v."""
    thr = threshold_count(s_v, L)
    return max(1, math.ceil(thr - 1e-12))


def run_repudiation(spec: AttackSpec) -> TrialReport:
    if spec.kind != "repudiate":
        raise ValueError("spec.kind must be 'repudiate'")
    if spec.protocol == "p2":
        return _p2_repudiation(spec)
    if spec.protocol == "mqds":
        return _mqds_repudiation(spec)
    raise ValueError(f"no repudiation attack for {spec.protocol!r}")


def run_forging(spec: AttackSpec) -> TrialReport:
    if spec.kind != "forge":
        raise ValueError("spec.kind must be 'forge'")
    runner = {
        "p2": _p2_forging,
        "mqds": _mqds_forging,
        "gc-qds": _gc_forging,
        "hanaoka": _hanaoka_forging,
    }.get(spec.protocol)
    if runner is None:
        raise ValueError(f"no forging attack for {spec.protocol!r}")
    return runner(spec)


def run_key_tamper(spec: AttackSpec) -> TrialReport:
    """Signer hands the two recipients states of chosen overlap for one
    key slot and hopes the distribution swap tests all pass."""
    if spec.kind != "tamper-keys" or spec.protocol != "gc-qds":
        raise ValueError("key tampering is a gc-qds attack")
    overlap = float(spec.params.get("overlap", 0.0))
    rounds = int(spec.params.get("cross_rounds", 1))
    if not -1 <= overlap <= 1:
        raise ValueError("overlap must lie in [-1, 1]")
    state_b = PureState(np.array([1.0, 0.0]))
    state_c = PureState(np.array([overlap, math.sqrt(max(0.0, 1 - overlap ** 2))]))
    need_b, need_c = gc_qds.copies_required(rounds)
    aborts = 0
    for rng, size in batches(spec.seed, spec.trials):
        for _ in range(size):
            ok, _, _ = gc_qds.symmetry_test_single(
                [state_b] * need_b, [state_c] * need_c, rng, rounds)
            aborts += not ok
    freq = aborts / spec.trials
    return TrialReport(
        protocol=spec.protocol, attack=spec.kind,
        params={"overlap": overlap, "cross_rounds": rounds},
        trials=spec.trials, successes=aborts, frequency=freq,
        oracle=tamper_oracle(overlap, rounds), bound=None, bound_tag=None,
        seed=spec.seed)


def run_attack(spec: AttackSpec) -> TrialReport:
    if spec.kind == "repudiate":
        return run_repudiation(spec)
    if spec.kind == "forge":
        return run_forging(spec)
    if spec.kind == "tamper-keys":
        return run_key_tamper(spec)
    raise ValueError(f"unknown attack kind {spec.kind!r}")


def _p2_repudiation(spec: AttackSpec) -> TrialReport:
    """Plant j mismatches uniformly across the two strings and hope they
    all land outside the direct recipient's tested positions."""
    params = spec.params
    L = int(params["L"])
    s_a = float(params.get("s_a", 0.0))
    s_v = float(params["s_v"])
    p2.ThresholdConfig(s_a, s_v, L)
    j = int(params["inject"]) if params.get("inject") is not None else (
        optimal_injection(s_v, L))
    if not 0 <= j <= 2 * L:
        raise ValueError("inject must lie in [0, 2L]")
    half = L // 2
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        in_own = rng.hypergeometric(L, L, j, size=size) if j else np.zeros(size, int)
        in_own_kept = rng.hypergeometric(half, half, in_own)
        in_peer_forwarded = rng.hypergeometric(half, half, j - in_own)
        direct_counts = in_own_kept + in_peer_forwarded
        other_counts = j - direct_counts
        ok = _accepts_array(direct_counts, s_a, L) & ~_accepts_array(
            other_counts, s_v, L)
        successes += int(ok.sum())
    freq = successes / spec.trials
    return TrialReport(
        protocol="p2", attack="repudiate",
        params={"L": L, "s_a": s_a, "s_v": s_v, "inject": j},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=p2_repudiation_oracle(L, s_a, s_v, j),
        bound=p2.repudiation_bound(s_v, L), bound_tag="p2_repudiation",
        seed=spec.seed)


def _p2_forging(spec: AttackSpec) -> TrialReport:
    """One recipient fabricates a declaration, matching every position it
    knows and guessing the L/2 it never saw. Success is assessed at the
    verifier's mismatch rate over those guessed positions; the known
    positions cannot mismatch and are excluded from the rate's base."""
    params = spec.params
    L = int(params["L"])
    s_a = float(params.get("s_a", 0.0))
    s_v = float(params["s_v"])
    p2.ThresholdConfig(s_a, s_v, L)
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        wrong = rng.random((size, L // 2)) < 0.5
        counts = wrong.sum(axis=1)
        successes += int(_accepts_array(counts, s_v, L // 2).sum())
    freq = successes / spec.trials
    return TrialReport(
        protocol="p2", attack="forge",
        params={"L": L, "s_a": s_a, "s_v": s_v},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=p2_forging_oracle(L, s_v),
        bound=p2.forging_bound(s_v, L), bound_tag="p2_forging",
        seed=spec.seed)


def _mqds_repudiation(spec: AttackSpec) -> TrialReport:
    """Declare a string differing from the distributed one in j positions.

    Under the multiport the recipients hold identically distributed
    records, so each planted mismatch is caught by each recipient
    independently with the conclusive probability.
    """
    params = spec.params
    L = int(params["L"])
    alpha = float(params["alpha"])
    s_a = float(params.get("s_a", 0.0))
    s_v = float(params["s_v"])
    if not 0 <= s_a < s_v < 1:
        raise ValueError("need 0 <= s_a < s_v < 1")
    p_usd = usd_conclusive_prob(alpha)
    j = int(params["inject"]) if params.get("inject") is not None else (
        optimal_injection(s_v, L))
    if not 0 <= j <= L:
        raise ValueError("inject must lie in [0, L]")
    mode = params.get("symmetrise", "multiport")
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        if mode == "multiport":
            d_direct = rng.binomial(j, p_usd, size=size)
            n_direct = rng.binomial(L - j, p_usd, size=size)
            d_other = rng.binomial(j, p_usd, size=size)
            n_other = rng.binomial(L - j, p_usd, size=size)
        elif mode == "forwarding":
            d_direct, n_direct, d_other, n_other = _forwarding_counts(
                rng, size, L, j, p_usd)
        else:
            raise ValueError(f"unknown symmetrisation mode {mode!r}")
        ok = _accepts_array(d_direct, s_a, d_direct + n_direct) & ~_accepts_array(
            d_other, s_v, d_other + n_other)
        successes += int(ok.sum())
    freq = successes / spec.trials
    oracle = (mqds_repudiation_oracle(L, alpha, s_a, s_v, j)
              if mode == "multiport" else None)
    return TrialReport(
        protocol="mqds", attack="repudiate",
        params={"L": L, "alpha": alpha, "s_a": s_a, "s_v": s_v, "inject": j,
                "symmetrise": mode},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=oracle,
        bound=mqds.repudiation_bound(p_usd, s_a, s_v, L),
        bound_tag="mqds_repudiation", seed=spec.seed)


def _forwarding_counts(rng: np.random.Generator, size: int, L: int, j: int,
                       p_usd: float):
    """Measurement-and-forward symmetrisation: each of the two copies of
    every position is routed to a uniformly random recipient, so one
    recipient holds 0, 1, or 2 measurable copies per position."""
    def side_counts(n_positions: int):
        routed_direct = rng.random((size, n_positions, 2)) < 0.5
        conclusive = rng.random((size, n_positions, 2)) < p_usd
        direct_hit = (routed_direct & conclusive).any(axis=2)
        other_hit = (~routed_direct & conclusive).any(axis=2)
        return direct_hit.sum(axis=1), other_hit.sum(axis=1)
    d_direct, d_other = side_counts(j) if j else (np.zeros(size, int),) * 2
    n_direct, n_other = side_counts(L - j)
    return d_direct, n_direct, d_other, n_other


def _mqds_forging(spec: AttackSpec) -> TrialReport:
    """The forging recipient measures its own symmetrised train with the
    minimum-error strategy and declares its guesses; the verifier counts
    contradictions at its conclusive positions."""
    params = spec.params
    L = int(params["L"])
    alpha = float(params["alpha"])
    s_v = float(params["s_v"])
    if not 0 <= s_v < 1:
        raise ValueError("s_v must lie in [0, 1)")
    p_usd = usd_conclusive_prob(alpha)
    p_min = min_error_prob(alpha)
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        conclusive = rng.random((size, L)) < p_usd
        wrong = rng.random((size, L)) < p_min
        counts = (conclusive & wrong).sum(axis=1)
        bases = conclusive.sum(axis=1)
        successes += int(_accepts_array(counts, s_v, bases).sum())
    freq = successes / spec.trials
    flags = {}
    try:
        bound = mqds.forging_bound(p_min, p_usd, 0.0, s_v, L)
        tag = "mqds_forging"
    except mqds.BoundVacuousError:
        bound, tag = None, None
        flags["bound_vacuous"] = True
    return TrialReport(
        protocol="mqds", attack="forge",
        params={"L": L, "alpha": alpha, "s_v": s_v},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=mqds_forging_oracle(L, alpha, s_v),
        bound=bound, bound_tag=tag, seed=spec.seed, flags=flags)


def _gc_forging(spec: AttackSpec) -> TrialReport:
    """Forger capped at the Holevo information budget.

    The T circulating copies of each n-qubit fingerprint reveal at most
    T*n bits; the simulation grants exactly that, as the values of a
    uniformly chosen subset of codeword positions, and the forger signs
    with a uniformly chosen key consistent with what it saw.
    """
    params = spec.params
    M = int(params.get("M", 4))
    L = int(params["L"])
    s_v = float(params["s_v"])
    T = int(params.get("T", 1))
    if not 0 <= s_v < 1:
        raise ValueError("s_v must lie in [0, 1)")
    if T < 0:
        raise ValueError("T must be nonnegative")
    code_name = str(params.get("code", "identity"))
    code_rng = batch_rng(spec.seed, 999_983)
    code = get_code(code_name, L, code_rng, params.get("code_m"))
    n_qubits = math.log2(code.output_length)
    within = gc_qds.holevo_budget(T, n_qubits, L)
    budget = min(int(T * n_qubits), code.output_length)
    m = code.output_length
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        for _ in range(size):
            true_keys = rng.integers(0, 2, size=(M, L), dtype=np.uint8)
            mism = 0
            for i in range(M):
                true_cw = code.encode(true_keys[i])
                revealed = rng.permutation(m)[:budget]
                guess = gf2_solve(code.generator.T[revealed, :],
                                  true_cw[revealed], rng)
                guess_cw = code.encode(guess)
                distance = int((guess_cw != true_cw).sum())
                overlap = 1.0 - 2.0 * distance / m
                p = 0.5 - 0.5 * overlap * overlap
                mism += rng.random() < p
            successes += accepts(mism, s_v, M)
    freq = successes / spec.trials
    return TrialReport(
        protocol="gc-qds", attack="forge",
        params={"M": M, "L": L, "s_v": s_v, "T": T, "code": code_name},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=None, bound=None, bound_tag=None, seed=spec.seed,
        flags={"holevo_within_budget": within})


def _hanaoka_forging(spec: AttackSpec) -> TrialReport:
    """Forge the authority scheme with a uniformly random signature
    polynomial; exact acceptance is counted by enumerating the candidate
    space when it is small enough."""
    params = spec.params
    q = int(params.get("q", 5))
    n = int(params.get("n", 3))
    omega = int(params.get("omega", 1))
    psi = int(params.get("psi", 1))
    n_verifiers = int(params.get("verifiers", 1))
    if not 1 <= n_verifiers <= n - 1:
        raise ValueError("verifiers must lie in [1, n-1]")
    inst_rng = batch_rng(spec.seed, 999_979)
    _, users = hanaoka.setup(n, omega, psi, q, inst_rng)
    signer, verifiers = users[0], users[1:1 + n_verifiers]
    message = FieldElement(int(inst_rng.integers(0, q)), q)

    # Exact enumeration over all q**(omega+1) candidate signatures.
    oracle = None
    if q ** (omega + 1) <= 200_000:
        hits = 0
        for alpha in hanaoka.enumerate_signature_candidates(q, omega):
            cand = hanaoka.Signature(message, alpha)
            if all(hanaoka.verify(v, signer.identity, cand) for v in verifiers):
                hits += 1
        oracle = hits / q ** (omega + 1)

    # Monte Carlo with uniformly random candidate coefficients.
    targets = []
    for v in verifiers:
        r1 = v.verification_poly.evaluate({"x": signer.identity, "z": message})
        targets.append((np.array([int(c) for c in v.verification_vector]), r1.value))
    successes = 0
    for rng, size in batches(spec.seed, spec.trials):
        coeffs = rng.integers(0, q, size=(size, omega + 1))
        ok = np.ones(size, dtype=bool)
        for v_vec, r1 in targets:
            r2 = (coeffs[:, 0] + coeffs[:, 1:] @ v_vec) % q
            ok &= r2 == r1
        successes += int(ok.sum())
    freq = successes / spec.trials
    return TrialReport(
        protocol="hanaoka", attack="forge",
        params={"q": q, "n": n, "omega": omega, "psi": psi,
                "verifiers": n_verifiers},
        trials=spec.trials, successes=successes, frequency=freq,
        oracle=oracle, bound=None, bound_tag=None, seed=spec.seed)


# ---------------------------------------------------------------------------
# Honest runs
# ---------------------------------------------------------------------------

def run_honest(protocol: str, params: dict, trials: int, seed: int) -> TrialReport:
    """End-to-end honest executions through the full protocol objects."""
    runner: Callable[[np.random.Generator], tuple[bool, int]]
    if protocol == "p2":
        runner = _honest_p2(params)
    elif protocol == "gc-qds":
        runner = _honest_gc(params)
    elif protocol == "mqds":
        runner = _honest_mqds(params)
    elif protocol == "hanaoka":
        runner = _honest_hanaoka(params)
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    successes = 0
    mismatch_total = 0
    for rng, size in batches(seed, trials):
        for _ in range(size):
            ok, mism = runner(rng)
            successes += ok
            mismatch_total += mism
    noiseless = float(params.get("noise", 0.0)) == 0.0
    return TrialReport(
        protocol=protocol, attack="none", params=dict(params), trials=trials,
        successes=successes, frequency=successes / trials,
        oracle=1.0 if noiseless else None, bound=None, bound_tag=None,
        seed=seed, flags={"mean_mismatches": mismatch_total / trials})


def _honest_p2(params: dict):
    L = int(params["L"])
    config = p2.ThresholdConfig(float(params.get("s_a", 0.0)),
                                float(params["s_v"]), L)

    def run(rng: np.random.Generator) -> tuple[bool, int]:
        keys, bob, charlie = p2.distribute(L, rng)
        p2.symmetrise(bob, charlie, rng)
        declaration = p2.sign(keys, int(rng.integers(0, 2)))
        ok_direct, m1 = p2.verify(declaration, bob, config, forwarded=False)
        ok_fwd, m2 = p2.verify(declaration, charlie, config, forwarded=True)
        return ok_direct and ok_fwd, m1 + m2
    return run


def _honest_gc(params: dict):
    M = int(params.get("M", 8))
    L = int(params["L"])
    rounds = int(params.get("cross_rounds", 1))
    noise = float(params.get("noise", 0.0))
    code_rng = batch_rng(int(params.get("code_seed", 0)), 999_991)
    code = get_code(str(params.get("code", "identity")), L, code_rng,
                    params.get("code_m"))
    thresholds = gc_qds.GCThresholds(float(params.get("s_a", 0.0)),
                                     float(params["s_v"]), M)

    def run(rng: np.random.Generator) -> tuple[bool, int]:
        key, make_state = gc_qds.keygen(M, L, code, rng)
        slots_b, slots_c = gc_qds.honest_copy_slots(key, make_state, rounds)
        passed, kept_b, kept_c = gc_qds.distribute_and_test(
            slots_b, slots_c, rng, rounds)
        if not passed:
            return False, 0
        bit = int(rng.integers(0, 2))
        declaration = gc_qds.sign(key, bit)
        copies_b = [kept_b[2 * i + bit] for i in range(M)]
        copies_c = [kept_c[2 * i + bit] for i in range(M)]
        ok_direct, m1 = gc_qds.verify(declaration, copies_b, code, thresholds,
                                      forwarded=False, rng=rng, noise=noise)
        ok_fwd, m2 = gc_qds.verify(declaration, copies_c, code, thresholds,
                                   forwarded=True, rng=rng, noise=noise)
        return ok_direct and ok_fwd, m1 + m2
    return run


def _honest_mqds(params: dict):
    L = int(params["L"])
    alpha = float(params["alpha"])
    s_a = float(params.get("s_a", 0.0))
    s_v = float(params["s_v"])
    kind = str(params.get("measurement", "usd"))
    noise = float(params.get("noise", 0.0))
    if not 0 <= s_a < s_v < 1:
        raise ValueError("need 0 <= s_a < s_v < 1")

    def run(rng: np.random.Generator) -> tuple[bool, int]:
        key = mqds.generate_key(L, alpha, rng)
        bit = int(rng.integers(0, 2))
        outcome = mqds.multiport(mqds.encode(key, bit), mqds.encode(key, bit), rng)
        if outcome.null_clicks.any():
            return False, 0
        record_b = mqds.measure(outcome.signal_bob, kind, rng, noise)
        record_c = mqds.measure(outcome.signal_charlie, kind, rng, noise)
        declaration = mqds.sign(key, bit)
        ok_direct, m1 = mqds.verify(declaration, record_b, s_a)
        ok_fwd, m2 = mqds.verify(declaration, record_c, s_v)
        return ok_direct and ok_fwd, m1 + m2
    return run


def _honest_hanaoka(params: dict):
    q = int(params.get("q", 11))
    n = int(params.get("n", 3))
    omega = int(params.get("omega", 1))
    psi = int(params.get("psi", 1))

    def run(rng: np.random.Generator) -> tuple[bool, int]:
        _, users = hanaoka.setup(n, omega, psi, q, rng)
        signer_idx = int(rng.integers(0, n))
        signer = users[signer_idx]
        signature = hanaoka.sign(signer, int(rng.integers(0, q)))
        others = [u for i, u in enumerate(users) if i != signer_idx]
        results = hanaoka.transfer_check(signature, others, signer.identity)
        return all(results), sum(not r for r in results)
    return run


# ---------------------------------------------------------------------------
# Dispute resolution and transferability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DisputeVerdict:
    valid: bool
    tie: bool
    weight_valid: float
    weight_invalid: float


def resolve_dispute(votes, weights=None) -> DisputeVerdict:
    """Majority vote over recipients' accept/reject verdicts.

    Requires at least three votes. The verdict follows the strict
    (optionally weighted) majority; an exact tie never validates the
    message and is flagged rather than silently broken. Passing all the
    weight to one voter recovers a single-arbiter policy.
    """
    votes = [bool(v) for v in votes]
    if len(votes) < 3:
        raise ValueError("dispute resolution needs at least three votes")
    if weights is None:
        weights = [1.0] * len(votes)
    weights = [float(w) for w in weights]
    if len(weights) != len(votes):
        raise ValueError("one weight per vote required")
    if any(w < 0 for w in weights) or sum(weights) == 0:
        raise ValueError("weights must be nonnegative and not all zero")
    w_valid = sum(w for v, w in zip(votes, weights) if v)
    w_invalid = sum(w for v, w in zip(votes, weights) if not v)
    tie = math.isclose(w_valid, w_invalid, rel_tol=0.0, abs_tol=1e-12)
    return DisputeVerdict(valid=(not tie) and w_valid > w_invalid, tie=tie,
                          weight_valid=w_valid, weight_invalid=w_invalid)


@dataclass
class TransferabilityReport:
    protocol: str
    params: dict
    trials: int
    gap_mean: float
    gap_max: int
    within_fraction: float  # fraction of trials with |gap| <= 5 sqrt(M or L)
    transfer_fail_freq: float
    bound: float | None
    bound_tag: str | None
    seed: int

    def to_record(self) -> dict:
        return {
            "protocol": self.protocol,
            "attack": "transferability",
            "params": dict(sorted(self.params.items())),
            "trials": self.trials,
            "gap_mean": self.gap_mean,
            "gap_max": self.gap_max,
            "within_fraction": self.within_fraction,
            "empirical": self.transfer_fail_freq,
            "bound": self.bound,
            "bound_tag": self.bound_tag,
            "seed": self.seed,
        }


def transferability_experiment(protocol: str, params: dict, trials: int,
                               seed: int) -> TransferabilityReport:
    """Honest signer, symmetric per-position noise: how far apart can the
    two recipients' mismatch counts drift, and how often does a message
    accepted directly fail to transfer?"""
    noise = float(params.get("noise", 0.0))
    s_a = float(params.get("s_a", 0.0))
    s_v = float(params["s_v"])
    if protocol == "gc-qds":
        M = int(params["M"])
        probs = np.full(M, noise)
        bound = bound_tag = None
    elif protocol == "p2":
        M = int(params["L"])
        probs = np.full(M, noise)
        bound, bound_tag = p2.repudiation_bound(s_v, M), "p2_repudiation"
    elif protocol == "mqds":
        M = int(params["L"])
        alpha = float(params["alpha"])
        p_usd = usd_conclusive_prob(alpha)
        bound = mqds.repudiation_bound(p_usd, s_a, s_v, M)
        bound_tag = "mqds_repudiation"
    else:
        raise ValueError(f"unknown protocol {protocol!r}")

    gaps = []
    fails = 0
    for rng, size in batches(seed, trials):
        if protocol == "mqds":
            conclusive_b = rng.random((size, M)) < p_usd
            conclusive_c = rng.random((size, M)) < p_usd
            flips_b = rng.random((size, M)) < noise
            flips_c = rng.random((size, M)) < noise
            count_b = (conclusive_b & flips_b).sum(axis=1)
            count_c = (conclusive_c & flips_c).sum(axis=1)
            base_b = conclusive_b.sum(axis=1)
            base_c = conclusive_c.sum(axis=1)
        else:
            count_b = gc_qds.sample_mismatch_counts(probs, size, rng)
            count_c = gc_qds.sample_mismatch_counts(probs, size, rng)
            base_b = np.full(size, M)
            base_c = np.full(size, M)
        gaps.append(np.abs(count_b - count_c))
        fail = _accepts_array(count_b, s_a, base_b) & ~_accepts_array(
            count_c, s_v, base_c)
        fails += int(fail.sum())
    gap = np.concatenate(gaps)
    return TransferabilityReport(
        protocol=protocol, params=dict(params), trials=trials,
        gap_mean=float(gap.mean()), gap_max=int(gap.max()),
        within_fraction=float((gap <= 5.0 * math.sqrt(M)).mean()),
        transfer_fail_freq=fails / trials,
        bound=bound, bound_tag=bound_tag, seed=seed)

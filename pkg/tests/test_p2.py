import math

import numpy as np
import pytest

from ussig import p2

# chi-square critical value, 5 degrees of freedom, 99.9th percentile
CHI2_5DOF_999 = 20.515


def _session(L=16, seed=0):
    rng = np.random.default_rng(seed)
    keys, bob, charlie = p2.distribute(L, rng)
    p2.symmetrise(bob, charlie, rng)
    return keys, bob, charlie


def test_distribute_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        p2.distribute(7, rng)
    with pytest.raises(ValueError):
        p2.distribute(0, rng)


def test_distribute_shapes():
    keys, bob, charlie = p2.distribute(10, np.random.default_rng(1))
    for name in ("bob", "charlie"):
        for b in (0, 1):
            assert keys.strings[name][b].shape == (10,)
    assert (bob.direct[0] == keys.strings["bob"][0]).all()
    assert (charlie.direct[1] == keys.strings["charlie"][1]).all()
    assert not bob.symmetrised


def test_symmetrise_structure():
    keys, bob, charlie = _session(L=12, seed=2)
    for holder, other in ((bob, charlie), (charlie, bob)):
        for b in (0, 1):
            kept = holder.kept_positions[b]
            fwd = holder.forwarded_positions[b]
            assert len(kept) == len(fwd) == 6
            assert sorted(np.concatenate([kept, fwd]).tolist()) == list(range(12))
            # the peer received exactly what was forwarded
            assert (other.received_positions[b] == fwd).all()
            assert (other.received_values[b] == holder.direct[b][fwd]).all()
    assert bob.symmetrised and charlie.symmetrised


def test_symmetrise_twice_rejected():
    rng = np.random.default_rng(3)
    keys, bob, charlie = p2.distribute(8, rng)
    p2.symmetrise(bob, charlie, rng)
    with pytest.raises(ValueError):
        p2.symmetrise(bob, charlie, rng)


def test_every_position_tested_by_exactly_one_recipient():
    """Across both recipients, each position of each distributed string is
    checked once: the owner keeps half, the peer checks the other half."""
    keys, bob, charlie = _session(L=20, seed=4)
    for owner, peer in ((bob, charlie), (charlie, bob)):
        for b in (0, 1):
            owner_tests = set(owner.kept_positions[b].tolist())
            peer_tests = set(peer.received_positions[b].tolist())
            assert owner_tests & peer_tests == set()
            assert owner_tests | peer_tests == set(range(20))


def test_forwarded_subset_is_uniform():
    """The exchanged half-subset must be uniform over all size-L/2 subsets,
    otherwise the signer could bias which positions stay testable. With
    L = 4 there are 6 subsets; a chi-square test at the 99.9 percent level
    checks the empirical counts."""
    rng = np.random.default_rng(5)
    counts: dict[tuple, int] = {}
    n = 60_000
    for _ in range(n):
        keys, bob, charlie = p2.distribute(4, rng)
        p2.symmetrise(bob, charlie, rng)
        key = tuple(bob.forwarded_positions[0].tolist())
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    expected = n / 6
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < CHI2_5DOF_999


def test_honest_signing_accepted_by_both():
    keys, bob, charlie = _session(L=32, seed=6)
    config = p2.ThresholdConfig(s_a=0.0, s_v=0.1, L=32)
    for message in (0, 1):
        declaration = p2.sign(keys, message)
        for holding in (bob, charlie):
            for forwarded in (False, True):
                ok, mismatches = p2.verify(declaration, holding, config, forwarded)
                assert ok
                assert mismatches == 0


def test_sign_validates_message():
    keys, _, _ = _session()
    with pytest.raises(ValueError):
        p2.sign(keys, 2)


def test_message_keys_are_separated():
    # Reusing the message-0 strings to declare message 1 looks like a
    # uniformly random guess: about half of the tested positions mismatch.
    L = 2000
    keys, bob, charlie = _session(L=L, seed=7)
    forged = p2.Declaration(
        message=1,
        string_for={name: keys.strings[name][0] for name in ("bob", "charlie")})
    for holding in (bob, charlie):
        mismatches = p2.count_mismatches(forged, holding)
        assert abs(mismatches - L / 2) < 3 * math.sqrt(L * 0.25)


def test_count_mismatches_requires_symmetrisation():
    keys, bob, charlie = p2.distribute(8, np.random.default_rng(8))
    declaration = p2.sign(keys, 0)
    with pytest.raises(ValueError):
        p2.count_mismatches(declaration, bob)


def test_count_mismatches_checks_length():
    keys, bob, _ = _session(L=8, seed=9)
    bad = p2.Declaration(message=0, string_for={
        "bob": np.zeros(6, dtype=np.uint8),
        "charlie": np.zeros(8, dtype=np.uint8)})
    with pytest.raises(ValueError):
        p2.count_mismatches(bad, bob)


def test_flip_lands_on_exactly_one_recipient():
    keys, bob, charlie = _session(L=16, seed=10)
    declaration = p2.sign(keys, 0)

    tampered = {name: arr.copy() for name, arr in declaration.string_for.items()}
    kept_pos = int(bob.kept_positions[0][0])
    tampered["bob"][kept_pos] ^= 1
    flipped = p2.Declaration(message=0, string_for=tampered)
    assert p2.count_mismatches(flipped, bob) == 1
    assert p2.count_mismatches(flipped, charlie) == 0

    tampered = {name: arr.copy() for name, arr in declaration.string_for.items()}
    fwd_pos = int(bob.forwarded_positions[0][0])
    tampered["bob"][fwd_pos] ^= 1
    flipped = p2.Declaration(message=0, string_for=tampered)
    assert p2.count_mismatches(flipped, bob) == 0
    assert p2.count_mismatches(flipped, charlie) == 1


def test_verify_threshold_depends_on_path():
    keys, bob, charlie = _session(L=8, seed=11)
    config = p2.ThresholdConfig(s_a=0.0, s_v=0.25, L=8)
    declaration = p2.sign(keys, 0)
    tampered = {name: arr.copy() for name, arr in declaration.string_for.items()}
    tampered["bob"][int(bob.kept_positions[0][0])] ^= 1
    flipped = p2.Declaration(message=0, string_for=tampered)

    ok_direct, count = p2.verify(flipped, bob, config, forwarded=False)
    assert count == 1 and not ok_direct  # 1 >= s_a * L = 0
    ok_relayed, _ = p2.verify(flipped, bob, config, forwarded=True)
    assert ok_relayed  # 1 < s_v * L = 2


def test_config_validation():
    with pytest.raises(ValueError):
        p2.ThresholdConfig(s_a=0.2, s_v=0.1, L=8)
    with pytest.raises(ValueError):
        p2.ThresholdConfig(s_a=0.1, s_v=0.1, L=8)
    with pytest.raises(ValueError):
        p2.ThresholdConfig(s_a=0.0, s_v=0.6, L=8)
    with pytest.raises(ValueError):
        p2.ThresholdConfig(s_a=0.0, s_v=0.1, L=9)


def test_bound_formulas():
    assert p2.repudiation_bound(0.1, 64) == pytest.approx(0.5 ** 6.4)
    assert p2.forging_bound(0.1, 32) == pytest.approx(math.exp(-0.16 * 32))
    assert p2.forging_bound(0.0, 50) == pytest.approx(math.exp(-12.5))
    for bad in (-0.1, 0.5, 0.7):
        with pytest.raises(ValueError):
            p2.repudiation_bound(bad, 16)
        with pytest.raises(ValueError):
            p2.forging_bound(bad, 16)
    with pytest.raises(ValueError):
        p2.repudiation_bound(0.1, -1)

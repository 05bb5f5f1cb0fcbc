import numpy as np
import pytest

from ussig import gc_qds
from ussig.codes import hadamard_code, identity_code
from ussig.quantum import PureState, fingerprint_state, inner_product


def _orthogonal_pair():
    # Hadamard fingerprints of distinct inputs are exactly orthogonal.
    code = hadamard_code(2)
    a = fingerprint_state(np.array([0, 0], dtype=np.uint8), code)
    b = fingerprint_state(np.array([0, 1], dtype=np.uint8), code)
    assert inner_product(a, b) == pytest.approx(0.0)
    return a, b


def test_keygen_shapes_and_state_map():
    rng = np.random.default_rng(0)
    code = identity_code(6)
    key, make_state = gc_qds.keygen(4, 6, code, rng)
    assert key.strings.shape == (4, 2, 6)
    assert key.M == 4 and key.L == 6
    state = make_state(key.strings[2, 1])
    target = fingerprint_state(key.strings[2, 1], code)
    assert inner_product(state, target).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gc_qds.keygen(4, 8, code, rng)


def test_copies_required():
    assert gc_qds.copies_required(0) == (2, 2)
    assert gc_qds.copies_required(1) == (2, 2)
    assert gc_qds.copies_required(2) == (2, 2)
    assert gc_qds.copies_required(3) == (3, 2)
    assert gc_qds.copies_required(4) == (3, 3)
    assert gc_qds.copies_required(5) == (4, 3)
    with pytest.raises(ValueError):
        gc_qds.copies_required(-1)


def test_symmetry_test_passes_identical_copies():
    rng = np.random.default_rng(1)
    a, _ = _orthogonal_pair()
    for cross_rounds in (1, 2, 3):
        nb, nc = gc_qds.copies_required(cross_rounds)
        ok, kept_b, kept_c = gc_qds.symmetry_test_single(
            [a] * nb, [a] * nc, rng, cross_rounds)
        assert ok
        assert inner_product(kept_b.state, a).real == pytest.approx(1.0)
        assert inner_product(kept_c.state, a).real == pytest.approx(1.0)


def test_symmetry_test_copy_count_validation():
    rng = np.random.default_rng(2)
    a, _ = _orthogonal_pair()
    with pytest.raises(ValueError):
        gc_qds.symmetry_test_single([a], [a, a], rng, cross_rounds=1)


def test_self_test_catches_inconsistent_copies():
    # A recipient holding two orthogonal copies aborts with probability 1/2
    # from the self test alone (no cross rounds here).
    rng = np.random.default_rng(3)
    a, b = _orthogonal_pair()
    n = 6000
    aborts = 0
    for _ in range(n):
        ok, kept_b, kept_c = gc_qds.symmetry_test_single([a, b], [a, a], rng, 0)
        if not ok:
            aborts += 1
            assert kept_b is None and kept_c is None
    assert abs(aborts / n - 0.5) < 0.03


@pytest.mark.parametrize("cross_rounds,expected", [(1, 0.5), (2, 0.75)])
def test_cross_tests_catch_orthogonal_distributions(cross_rounds, expected):
    rng = np.random.default_rng(4)
    a, b = _orthogonal_pair()
    nb, nc = gc_qds.copies_required(cross_rounds)
    n = 6000
    aborts = sum(
        not gc_qds.symmetry_test_single([a] * nb, [b] * nc, rng, cross_rounds)[0]
        for _ in range(n))
    assert abs(aborts / n - expected) < 0.03


def test_cross_test_partial_overlap_rate():
    # Overlap c leaks through each cross test with probability 1/2 + c^2/2.
    rng = np.random.default_rng(5)
    c = 0.6
    a, perp = _orthogonal_pair()
    tilted = PureState(c * a.amplitudes + np.sqrt(1 - c * c) * perp.amplitudes)
    n = 6000
    expected = 1 - (0.5 + 0.5 * c * c) ** 2
    aborts = sum(
        not gc_qds.symmetry_test_single([a, a], [tilted, tilted], rng, 2)[0]
        for _ in range(n))
    assert abs(aborts / n - expected) < 0.03


def test_distribute_and_test_honest_and_mismatched_lengths():
    rng = np.random.default_rng(6)
    code = identity_code(4)
    key, make_state = gc_qds.keygen(3, 4, code, rng)
    bob_slots, charlie_slots = gc_qds.honest_copy_slots(key, make_state)
    assert len(bob_slots) == len(charlie_slots) == 2 * key.M
    ok, kept_b, kept_c = gc_qds.distribute_and_test(bob_slots, charlie_slots, rng)
    assert ok
    assert len(kept_b) == len(kept_c) == 6
    # slot 2i + b retains the fingerprint of strings[i, b]
    for i in range(3):
        for b in (0, 1):
            target = make_state(key.strings[i, b])
            assert inner_product(
                kept_b[2 * i + b].state, target).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gc_qds.distribute_and_test(bob_slots, charlie_slots[:-1], rng)


def test_sign_is_one_time():
    rng = np.random.default_rng(7)
    key, _ = gc_qds.keygen(3, 4, identity_code(4), rng)
    original = key.strings.copy()
    declaration = gc_qds.sign(key, 1)
    assert (declaration.keys == original[:, 1, :]).all()
    declaration.keys[0, 0] ^= 1  # a tampered declaration cannot reach back
    assert (key.strings == original).all()
    with pytest.raises(RuntimeError):
        gc_qds.sign(key, 0)
    fresh, _ = gc_qds.keygen(3, 4, identity_code(4), rng)
    with pytest.raises(ValueError):
        gc_qds.sign(fresh, 2)


def test_mismatch_probabilities_law():
    probs = gc_qds.mismatch_probabilities(np.array([1.0, 0.0, 0.6, -1.0]))
    assert probs == pytest.approx([0.0, 0.5, 0.5 - 0.18, 0.0])
    noisy = gc_qds.mismatch_probabilities(np.array([1.0, 0.0]), noise=0.1)
    assert noisy == pytest.approx([0.1, 1 - 0.5 * 0.9])
    with pytest.raises(ValueError):
        gc_qds.mismatch_probabilities(np.array([1.0]), noise=1.0)


def test_sample_mismatch_counts_moments():
    rng = np.random.default_rng(8)
    probs = np.array([0.5, 0.25, 0.0, 1.0])
    counts = gc_qds.sample_mismatch_counts(probs, 20000, rng)
    assert counts.shape == (20000,)
    assert counts.min() >= 1  # the certain index always fires
    assert counts.max() <= 4
    assert abs(counts.mean() - probs.sum()) < 0.03


def _honest_session(M=4, L=4, seed=9):
    rng = np.random.default_rng(seed)
    code = identity_code(L)
    key, make_state = gc_qds.keygen(M, L, code, rng)
    bob_slots, charlie_slots = gc_qds.honest_copy_slots(key, make_state)
    ok, kept_b, kept_c = gc_qds.distribute_and_test(bob_slots, charlie_slots, rng)
    assert ok
    return rng, code, key, kept_b, kept_c


def test_verify_accepts_honest_declaration():
    rng, code, key, kept_b, kept_c = _honest_session()
    thresholds = gc_qds.GCThresholds(s_a=0.0, s_v=0.25, M=key.M)
    declaration = gc_qds.sign(key, 0)
    for retained in (kept_b, kept_c):
        copies = [retained[2 * i + 0] for i in range(key.M)]
        ok, mismatches = gc_qds.verify(
            declaration, copies, code, thresholds, forwarded=False, rng=rng)
        assert ok and mismatches == 0
        assert all(copy.pristine and not copy.consumed for copy in copies)


def test_verify_flags_wrong_string_and_consumes_copies():
    mismatch_seen = pass_seen = False
    for seed in range(40):
        rng, code, key, kept_b, _ = _honest_session(seed=seed)
        declaration = gc_qds.sign(key, 0)
        # flip one bit of one declared string: overlap 1/2, flagged w.p. 3/8
        declaration.keys[0, 0] ^= 1
        copies = [kept_b[2 * i] for i in range(key.M)]
        thresholds = gc_qds.GCThresholds(s_a=0.0, s_v=0.5, M=key.M)
        ok, mismatches = gc_qds.verify(
            declaration, copies, code, thresholds, forwarded=True, rng=rng)
        if mismatches:
            mismatch_seen = True
            assert copies[0].consumed
            with pytest.raises(RuntimeError):
                gc_qds.verify(declaration, copies, code, thresholds, True, rng)
        else:
            pass_seen = True
            assert not copies[0].pristine  # survived, but disturbed
    assert mismatch_seen and pass_seen


def test_verify_cannot_see_a_global_sign_flip():
    """Complementing every bit of an identity-coded string produces the
    antipodal fingerprint. A swap test depends only on |overlap|^2, so the
    complemented declaration is indistinguishable from the honest one."""
    rng, code, key, kept_b, _ = _honest_session()
    declaration = gc_qds.sign(key, 0)
    declaration.keys[:] ^= 1
    copies = [kept_b[2 * i] for i in range(key.M)]
    thresholds = gc_qds.GCThresholds(s_a=0.0, s_v=0.25, M=key.M)
    ok, mismatches = gc_qds.verify(
        declaration, copies, code, thresholds, forwarded=False, rng=rng)
    assert ok and mismatches == 0
    assert all(copy.pristine for copy in copies)


def test_verify_shape_checks():
    rng, code, key, kept_b, _ = _honest_session()
    declaration = gc_qds.sign(key, 0)
    thresholds = gc_qds.GCThresholds(s_a=0.0, s_v=0.25, M=key.M)
    with pytest.raises(ValueError):
        gc_qds.verify(declaration, [kept_b[0]], code, thresholds, False, rng)


def test_threshold_config_validation():
    with pytest.raises(ValueError):
        gc_qds.GCThresholds(s_a=0.3, s_v=0.2, M=4)
    with pytest.raises(ValueError):
        gc_qds.GCThresholds(s_a=0.0, s_v=0.2, M=0)


def test_holevo_budget_is_strict():
    assert gc_qds.holevo_budget(3, 2.0, 7)
    assert not gc_qds.holevo_budget(3, 2.0, 6)  # equality leaks everything
    assert not gc_qds.holevo_budget(4, 2.0, 6)
    assert gc_qds.holevo_budget(0, 2.0, 1)
    with pytest.raises(ValueError):
        gc_qds.holevo_budget(-1, 2.0, 6)
    with pytest.raises(ValueError):
        gc_qds.holevo_budget(1, 0.0, 6)

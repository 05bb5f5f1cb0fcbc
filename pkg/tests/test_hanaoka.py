"""Polynomial signature scheme: correctness, secrecy, forgery statistics."""

import numpy as np
import pytest

from ussig import hanaoka
from ussig.fields import FieldElement, MultivariatePolynomial


def test_master_support_shape():
    rng = np.random.default_rng(0)
    poly = hanaoka.sample_master_polynomial(n=4, omega=2, psi=1, q=11, rng=rng)
    assert poly.variables == ("x", "y1", "y2", "z")
    assert hanaoka.matches_master_support(poly, n=4, omega=2, psi=1)
    # No monomial mixes two y variables, and each y power is at most 1.
    for key in poly.coeffs:
        y_powers = key[1:-1]
        assert sum(1 for p in y_powers if p) <= 1
        assert all(p <= 1 for p in y_powers)
        assert key[0] < 4 and key[-1] <= 1


def _frozen_instance():
    """A tiny instance small enough to check by hand.

    Master: F(x, y, z) = 2 + 3x + xz + 4y + 2 x^2 y z over GF(5).
    """
    q = 5
    master = MultivariatePolynomial(
        ("x", "y1", "z"),
        {(0, 0, 0): 2, (1, 0, 0): 3, (1, 0, 1): 1, (0, 1, 0): 4, (2, 1, 1): 2},
        q)
    assert hanaoka.matches_master_support(master, n=3, omega=1, psi=1)

    def make_user(ident_value, v_value):
        ident = FieldElement(ident_value, q)
        v = (FieldElement(v_value, q),)
        return hanaoka.UserKeys(
            identity=ident,
            signing_key=master.restrict({"x": ident}),
            verification_vector=v,
            verification_poly=master.restrict({"y1": v[0]}),
        )

    return q, master, make_user


def test_frozen_signature_value():
    # Signer U = 3 signing m = 2:
    #   s(y, z) = F(3, y, z) = 1 + 3z + 4y + 3yz   (mod 5)
    #   alpha(y) = s(y, 2) = 7 + 10y = 2
    q, _, make_user = _frozen_instance()
    signer = make_user(3, 0)
    sig = hanaoka.sign(signer, 2)
    assert sig.alpha.coeffs == {(0,): 2}
    # Every verification point must agree, whatever v the verifier holds.
    for v in range(q):
        verifier = make_user(1, v)
        assert hanaoka.verify(verifier, signer.identity, sig)


def test_frozen_tampered_signature_rejected():
    q, _, make_user = _frozen_instance()
    signer = make_user(3, 0)
    sig = hanaoka.sign(signer, 2)
    bad = hanaoka.Signature(sig.message,
                            MultivariatePolynomial(("y1",), {(0,): 3}, q))
    # alpha' = 3 differs from F(3, v, 2) = 2 for every v: reject always.
    for v in range(q):
        assert not hanaoka.verify(make_user(1, v), signer.identity, bad)


def test_honest_rounds_exhaustive_small_field():
    rng = np.random.default_rng(42)
    auth, users = hanaoka.setup(n=4, omega=1, psi=1, q=11, rng=rng)
    for signer in users:
        others = [u for u in users if u.identity != signer.identity]
        for m in range(11):
            sig = hanaoka.sign(signer, m)
            assert all(hanaoka.transfer_check(sig, others, signer.identity))


def test_setup_is_deterministic_given_seed():
    a1, u1 = hanaoka.setup(3, 1, 1, 11, np.random.default_rng(5))
    a2, u2 = hanaoka.setup(3, 1, 1, 11, np.random.default_rng(5))
    assert a1.master.coeffs == a2.master.coeffs
    assert all(x.verification_vector == y.verification_vector
               for x, y in zip(u1, u2))


def test_setup_parameter_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        hanaoka.setup(3, 1, 1, 15, rng)  # q not prime
    with pytest.raises(ValueError):
        hanaoka.setup(5, 1, 1, 5, rng)  # q <= n
    with pytest.raises(ValueError):
        hanaoka.setup(2, 1, 1, 11, rng)  # too few users
    with pytest.raises(ValueError):
        hanaoka.setup(3, 0, 1, 11, rng)  # omega
    with pytest.raises(ValueError):
        hanaoka.setup(3, 1, -1, 11, rng)  # psi


def test_transfer_check_needs_two_verifiers():
    rng = np.random.default_rng(1)
    _, users = hanaoka.setup(3, 1, 1, 11, rng)
    sig = hanaoka.sign(users[0], 4)
    with pytest.raises(ValueError):
        hanaoka.transfer_check(sig, [users[1]], users[0].identity)


def test_candidate_enumeration_size_and_shape():
    candidates = list(hanaoka.enumerate_signature_candidates(5, 2))
    assert len(candidates) == 5 ** 3
    seen = {tuple(sorted(c.coeffs.items())) for c in candidates}
    assert len(seen) == 5 ** 3


def _consistent_masters(view_user, n, omega, psi, q):
    """Enumerate master polynomials matching one verifier's full view.

    The view consists of the user's own signing key (its x-restriction)
    and its verification polynomial (its y-restriction). Brute force over
    the coefficient space is feasible only for the tiniest parameters.
    """
    import itertools

    assert omega == 1, "enumeration helper written for one y variable"
    variables = hanaoka.master_variables(omega)
    support = [(i, y, k)
               for i in range(n) for y in (0, 1) for k in range(psi + 1)]
    matches = []
    for values in itertools.product(range(q), repeat=len(support)):
        cand = MultivariatePolynomial(
            variables, dict(zip(support, values)), q)
        if cand.restrict({"x": view_user.identity}).coeffs != \
                view_user.signing_key.coeffs:
            continue
        if cand.restrict({"y1": view_user.verification_vector[0]}).coeffs != \
                view_user.verification_poly.coeffs:
            continue
        matches.append(cand)
    return matches


def test_one_view_leaves_other_keys_underdetermined():
    # With q = 5, n = 3, omega = psi = 1 the master has 12 coefficients;
    # 5^12 is too many, so shrink further: psi = 0 gives 6 coefficients.
    q, n, omega, psi = 5, 3, 1, 0
    rng = np.random.default_rng(9)
    auth, users = hanaoka.setup(n, omega, psi, q, rng)
    eve, target = users[0], users[1]
    masters = _consistent_masters(eve, n, omega, psi, q)
    assert auth.master.coeffs in [m.coeffs for m in masters]
    target_keys = {
        tuple(sorted(m.restrict({"x": target.identity}).coeffs.items()))
        for m in masters
    }
    # Eve's view must not pin down the target's signing key.
    assert len(target_keys) >= 2


def test_forged_alpha_acceptance_is_pointwise():
    # A wrong alpha can fool one verifier only by hitting its secret
    # evaluation point; a second verifier with a different point catches
    # it unless that one is also hit. On a q=5 instance, count exactly.
    q, _, make_user = _frozen_instance()
    signer = make_user(3, 0)
    v1, v2 = make_user(1, 1), make_user(2, 4)
    message = FieldElement(2, q)
    both = one = 0
    for cand in hanaoka.enumerate_signature_candidates(q, 1):
        sig = hanaoka.Signature(message, cand)
        a = hanaoka.verify(v1, signer.identity, sig)
        b = hanaoka.verify(v2, signer.identity, sig)
        both += a and b
        one += a
    # Exactly q of q^2 candidates pass a single verifier (choose the free
    # coefficient after fixing alpha(v)); passing two distinct-point
    # verifiers pins both coefficients: exactly 1 candidate.
    assert one == q
    assert both == 1

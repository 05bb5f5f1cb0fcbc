"""Trusted-authority polynomial signature scheme (Hanaoka-style USS).

A trusted authority samples a master polynomial

    F(x, y_1 .. y_w, z) = sum_{i<n, k<=p} a_{i0k} x^i z^k
                        + sum_{i<n, 1<=j<=w, k<=p} a_{ijk} x^i y_j z^k

with uniformly random coefficients in a prime field. Every monomial has
degree at most n-1 in x, at most p in z, and involves at most one y
variable with exponent at most one; in particular no y_j*y_k products
occur. User i (identity U_i = i) receives the signing key
s_i = F(U_i, y, z), a random verification vector v_i, and the
verification polynomial vt_i = F(x, v_i, z). A signature on message m is
the restriction alpha = s_i(y, z=m); a verifier j accepts when alpha
evaluated at its own v_j equals vt_j evaluated at (x=U_i, z=m).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ussig.fields import FieldElement, MultivariatePolynomial, is_prime


def _y_names(omega: int) -> tuple[str, ...]:
    return tuple(f"y{j}" for j in range(1, omega + 1))


def master_variables(omega: int) -> tuple[str, ...]:
    return ("x",) + _y_names(omega) + ("z",)


def sample_master_polynomial(n: int, omega: int, psi: int, q: int,
                             rng: np.random.Generator) -> MultivariatePolynomial:
    """Uniformly random authority polynomial with the structure above."""
    variables = master_variables(omega)
    coeffs: dict[tuple[int, ...], int] = {}
    zeros = (0,) * omega
    for i in range(n):
        for k in range(psi + 1):
            coeffs[(i, *zeros, k)] = int(rng.integers(0, q))
            for j in range(omega):
                y_exp = tuple(1 if t == j else 0 for t in range(omega))
                coeffs[(i, *y_exp, k)] = int(rng.integers(0, q))
    return MultivariatePolynomial(variables, coeffs, q)


def matches_master_support(poly: MultivariatePolynomial, n: int, omega: int,
                           psi: int) -> bool:
    """True when every monomial fits the authority polynomial's shape."""
    if poly.variables != master_variables(omega):
        return False
    for exps in poly.coeffs:
        x_e, y_es, z_e = exps[0], exps[1:-1], exps[-1]
        if x_e >= n or z_e > psi:
            return False
        if any(e > 1 for e in y_es) or sum(y_es) > 1:
            return False
    return True


@dataclass(frozen=True)
class UserKeys:
    """Per-user material handed out by the authority."""

    identity: FieldElement
    signing_key: MultivariatePolynomial       # in (y_1..y_w, z)
    verification_vector: tuple[FieldElement, ...]
    verification_poly: MultivariatePolynomial  # in (x, z)


@dataclass(frozen=True)
class AuthorityState:
    n: int
    omega: int
    psi: int
    q: int
    master: MultivariatePolynomial
    identities: tuple[FieldElement, ...]


@dataclass(frozen=True)
class Signature:
    message: FieldElement
    alpha: MultivariatePolynomial  # in (y_1..y_w); degree <= 1 per variable


def setup(n: int, omega: int, psi: int, q: int,
          rng: np.random.Generator) -> tuple[AuthorityState, list[UserKeys]]:
    """Run the authority: sample the master polynomial and derive all keys.

    Identities are the field elements 1..n, so the field must satisfy
    q > n for them to be distinct and nonzero.
    """
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if n < 3:
        raise ValueError("need at least three users (signer plus two verifiers)")
    if q <= n:
        raise ValueError(f"q={q} must exceed the user count n={n}")
    if omega < 1:
        raise ValueError("omega must be at least 1")
    if psi < 0:
        raise ValueError("psi must be nonnegative")

    master = sample_master_polynomial(n, omega, psi, q, rng)
    y_names = _y_names(omega)
    identities = tuple(FieldElement(i, q) for i in range(1, n + 1))
    users = []
    for ident in identities:
        signing_key = master.restrict({"x": ident})
        v = tuple(FieldElement(int(c), q) for c in rng.integers(0, q, size=omega))
        verification_poly = master.restrict(dict(zip(y_names, v)))
        users.append(UserKeys(ident, signing_key, v, verification_poly))
    return AuthorityState(n, omega, psi, q, master, identities), users


def sign(keys: UserKeys, message: int | FieldElement) -> Signature:
    """Restrict the signing key at z = message; the result is the signature."""
    q = keys.signing_key.modulus
    m = message if isinstance(message, FieldElement) else FieldElement(message, q)
    if m.modulus != q:
        raise ValueError(f"message modulus {m.modulus} != key modulus {q}")
    return Signature(m, keys.signing_key.restrict({"z": m}))


def verify(verifier: UserKeys, signer_identity: FieldElement,
           signature: Signature) -> bool:
    """Check alpha at the verifier's secret point against its own polynomial."""
    r1 = verifier.verification_poly.evaluate(
        {"x": signer_identity, "z": signature.message})
    y_names = _y_names(len(verifier.verification_vector))
    r2 = signature.alpha.evaluate(dict(zip(y_names, verifier.verification_vector)))
    return r1 == r2


def transfer_check(signature: Signature, verifiers: list[UserKeys],
                   signer_identity: FieldElement) -> list[bool]:
    """Verify the same signature independently with several recipients.

    Transferability means all results agree; at least two verifiers are
    required for the check to be meaningful.
    """
    if len(verifiers) < 2:
        raise ValueError("transfer check needs at least two verifiers")
    return [verify(v, signer_identity, signature) for v in verifiers]


def enumerate_signature_candidates(q: int, omega: int):
    """Yield every polynomial of a signature's shape: c_0 + sum_j c_j y_j.

    This is the full space a forger without key material draws from;
    there are q**(omega+1) candidates.
    """
    y_names = _y_names(omega)
    keys = [tuple(0 for _ in y_names)]
    for j in range(omega):
        keys.append(tuple(1 if t == j else 0 for t in range(omega)))
    for values in itertools.product(range(q), repeat=omega + 1):
        yield MultivariatePolynomial(y_names, dict(zip(keys, values)), q)

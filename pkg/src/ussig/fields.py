"""Exact arithmetic in prime fields and sparse multivariate polynomials.

Everything here is exact integer arithmetic modulo a prime; no floating
point is involved anywhere in the signing scheme built on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

_KNOWN_PRIMES: set[int] = set()


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for desk-scale moduli."""
    if n in _KNOWN_PRIMES:
        return True
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    _KNOWN_PRIMES.add(n)
    return True


Scalar = Union[int, "FieldElement"]


@dataclass(frozen=True)
class FieldElement:
    """An element of the prime field of integers modulo ``modulus``.

    Values are reduced into [0, modulus) at construction. The modulus must
    be prime; mixing elements from different fields raises ValueError.
    """

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: Scalar) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}"
                )
            return other
        if isinstance(other, (int,)):
            return FieldElement(other, self.modulus)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Scalar) -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value - other.value, self.modulus)

    def __rsub__(self, other: Scalar) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: Scalar) -> "FieldElement":
        other = self._coerce(other)
        return FieldElement(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via Fermat's little theorem."""
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return FieldElement(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def __truediv__(self, other: Scalar) -> "FieldElement":
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


def _as_int(value: Scalar, modulus: int) -> int:
    if isinstance(value, FieldElement):
        if value.modulus != modulus:
            raise ValueError(f"modulus mismatch: {modulus} vs {value.modulus}")
        return value.value
    return value % modulus


@dataclass(frozen=True)
class MultivariatePolynomial:
    """Sparse multivariate polynomial over a prime field.

    ``coeffs`` maps exponent tuples (aligned with ``variables``) to integer
    coefficients in [0, modulus). Zero coefficients are dropped at
    construction so equality of the mapping is equality of the polynomial.
    """

    variables: tuple[str, ...]
    coeffs: dict[tuple[int, ...], int]
    modulus: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        cleaned: dict[tuple[int, ...], int] = {}
        for exps, coeff in self.coeffs.items():
            if len(exps) != len(self.variables):
                raise ValueError(
                    f"exponent tuple {exps} does not match variables {self.variables}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = int(coeff) % self.modulus
            if c:
                cleaned[tuple(int(e) for e in exps)] = c
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "variables", tuple(self.variables))

    @classmethod
    def constant(cls, value: Scalar, modulus: int,
                 variables: tuple[str, ...] = ()) -> "MultivariatePolynomial":
        v = _as_int(value, modulus)
        return cls(variables, {tuple(0 for _ in variables): v}, modulus)

    def degree(self, variable: str) -> int:
        """Largest exponent of ``variable`` appearing with nonzero coefficient."""
        idx = self._var_index(variable)
        return max((exps[idx] for exps in self.coeffs), default=0)

    def _var_index(self, variable: str) -> int:
        try:
            return self.variables.index(variable)
        except ValueError:
            raise ValueError(f"unknown variable {variable!r}") from None

    def evaluate(self, assignment: Mapping[str, Scalar]) -> FieldElement:
        """Evaluate at a point. Every variable must be bound.

        Extra keys in ``assignment`` are ignored, which lets callers pass a
        single context holding values for several polynomials at once.
        """
        q = self.modulus
        try:
            point = [_as_int(assignment[v], q) for v in self.variables]
        except KeyError as missing:
            raise ValueError(f"unbound variable {missing.args[0]!r}") from None
        total = 0
        for exps, coeff in self.coeffs.items():
            term = coeff
            for value, e in zip(point, exps):
                if e:
                    term = term * pow(value, e, q) % q
            total += term
        return FieldElement(total % q, q)

    def restrict(self, binding: Mapping[str, Scalar]) -> "MultivariatePolynomial":
        """Substitute a strict subset of the variables, keeping the rest free.

        Raises if the binding is empty, covers every variable (use
        ``evaluate``), or names a variable the polynomial does not have.
        """
        if not binding:
            raise ValueError("empty binding; nothing to restrict")
        unknown = set(binding) - set(self.variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)!r}")
        if set(binding) == set(self.variables):
            raise ValueError("binding covers all variables; use evaluate()")
        q = self.modulus
        bound = {self._var_index(v): _as_int(val, q) for v, val in binding.items()}
        keep = [i for i in range(len(self.variables)) if i not in bound]
        new_vars = tuple(self.variables[i] for i in keep)
        new_coeffs: dict[tuple[int, ...], int] = {}
        for exps, coeff in self.coeffs.items():
            term = coeff
            for i, value in bound.items():
                if exps[i]:
                    term = term * pow(value, exps[i], q) % q
            key = tuple(exps[i] for i in keep)
            new_coeffs[key] = (new_coeffs.get(key, 0) + term) % q
        return MultivariatePolynomial(new_vars, new_coeffs, q)

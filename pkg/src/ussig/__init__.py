"""Unconditionally secure signature protocols: simulators, attacks, bounds.

The package provides exact finite-field machinery for a trusted-authority
polynomial signature scheme, a classical two-recipient string protocol,
and two quantum digital signature protocols (one-time fingerprint keys and
memoryless coherent-state keys), together with an adversary harness that
checks analytic forging/repudiation bounds against Monte Carlo runs.
"""

__version__ = "0.1.0"

from ussig.fields import FieldElement, MultivariatePolynomial

__all__ = ["FieldElement", "MultivariatePolynomial", "__version__"]

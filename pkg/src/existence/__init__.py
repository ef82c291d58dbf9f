"""Existence e = e0 + int x dt, its conjugate force, and the bichromatic force.

Submodules:

kinematics   sampled trajectories, existence quadrature, SHM generator
relativity   collinear boosts of velocity, position, time and existence
canonical    (e, F) Lagrangian/Hamiltonian residuals and Poisson brackets
quantize     action integrals, quantum conditions, quantum force
bichromatic  optical Bloch equations and velocity-resolved mean force
analysis     peak detection and integer-multiple fits on force curves
cli          command-line front end
"""

from .errors import DomainError, InputError, IntegrationError

__version__ = "0.1.0"

__all__ = ["DomainError", "InputError", "IntegrationError", "__version__"]

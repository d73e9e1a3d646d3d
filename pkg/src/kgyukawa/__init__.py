"""Effective-mass Klein-Gordon spectra for Yukawa scalar and vector potentials."""
from .errors import (
    AccuracyWarning,
    ComplexBranchError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InternalError,
    KGYukawaError,
    NonNormalizableError,
    NoRealStateError,
    NotFoundError,
    UsageError,
)
from .harness import ComparisonReport, emit, reproduce_table
from .kg_spectrum import SpectrumMode, energy_rhs, residual, solve_levels
from .model import (
    Branch,
    CouplingSet,
    EnergyLevel,
    MassModel,
    ProblemParams,
    QuantumNumbers,
    UnitSystem,
)
from .nonrel import coulomb_energy, nonrel_energy
from .oracle import numerov_eigenvalue, quadratic_roots

__version__ = "0.1.0"

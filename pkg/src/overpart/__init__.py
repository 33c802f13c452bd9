"""Overpartition congruences: q-series engine, Hecke operators, eta-quotients
and a verification harness."""

from .kernels import BACKEND, available_backends
from .qseries import (
    EXACT,
    HorizonError,
    InexactDivisionError,
    QSeries,
    Ring,
    eta_quotient_series,
    overpartition_series,
    phi_st,
    theta_phi,
    theta_psi,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "EXACT",
    "HorizonError",
    "InexactDivisionError",
    "QSeries",
    "Ring",
    "eta_quotient_series",
    "overpartition_series",
    "phi_st",
    "theta_phi",
    "theta_psi",
]

"""Colouring profiles, first-moment optimisation and certified limits for random graphs."""
from .errors import (BudgetExceeded, CertificationError, ConvergenceError, DomainError,
                     NoSignChange, TamechromaError)
from .graphs import BitGraph, OrderedPartition, sample_gnm, sample_gnp
from .iset import GraphParams, alpha, alpha0, mu, theta
from .numeric import Interval, LogReal
from .profiles import Profile, expect_ordered, expect_unordered

__version__ = "0.1.0"

__all__ = [
    "BitGraph", "BudgetExceeded", "CertificationError", "ConvergenceError", "DomainError",
    "GraphParams", "Interval", "LogReal", "NoSignChange", "OrderedPartition", "Profile",
    "TamechromaError", "alpha", "alpha0", "expect_ordered", "expect_unordered", "mu",
    "sample_gnm", "sample_gnp", "theta",
]

"""Belief-elicitation incentives: profit-maximizing reports, Bayesian
updating, and what goes wrong when modal reports are read as means."""
from .distributions import BetaBelief, DiscreteBelief
from .elicitation import Absolute, NoIncentive, Quadratic, Window, expected_payoff, optimal_report
from .errors import (
    AmbiguousMode,
    DegenerateData,
    DomainError,
    EmptyPosterior,
    NoBestResponse,
    NonConvergence,
    UndefinedMode,
    ZeroVariance,
)
from .updating import BinomialSignal, UniformSignal

__version__ = "0.1.0"

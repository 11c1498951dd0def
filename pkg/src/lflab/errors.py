"""Exception types shared across the package.

All errors raised on contract violations are subclasses of LflabError so
callers can distinguish "the input was bad" from genuine bugs.  A few named
errors signal *internal* inconsistencies; those indicate a defect in the
package itself (e.g. a conductor computed wrongly) and are never expected
to fire on valid inputs.
"""


class LflabError(Exception):
    """Base class for all package errors."""


class DomainMismatch(LflabError):
    """Operands live over different fields or coefficient rings."""


class EmptyFactorization(LflabError):
    """Factorization of the zero polynomial was requested."""


class UndefinedValuation(LflabError):
    """Valuation of the zero function."""


class SymbolUndefined(LflabError):
    """Power-residue symbol requested where d does not divide q_v - 1."""


class NotIntegral(LflabError):
    """Residue of a function with a pole at the place."""


class TamenessViolation(LflabError):
    """A wildly ramified configuration was requested."""


class BadReduction(LflabError):
    """Point-count or trace requested at a place of bad reduction."""


class UnsupportedCharacteristic(LflabError):
    """Elliptic-curve machinery requires p > 3."""


class DegreeUndefined(LflabError):
    """L-function of a geometrically trivial representation has poles."""


class FunctionalEquationViolation(LflabError):
    """A computed L-polynomial failed the exact functional equation."""


class InternalInconsistency(LflabError):
    """Two independent computations of the same quantity disagree."""


class Unsupported(LflabError):
    """Configuration outside the implemented cases."""


class ContextError(LflabError):
    """Inconsistent context passed to a forced-factor or classifier call."""


class SamplingExhausted(LflabError):
    """No family member satisfying the constraints found within budget."""


class BudgetExceeded(LflabError):
    """A point-count or enumeration would exceed the configured budget."""


class NumericalFailure(LflabError):
    """A floating-point root solve failed to converge."""


class HypothesisInapplicable(LflabError):
    """Local conductor parity is not fixed, so the parity hypothesis is moot."""


class ConfigError(LflabError):
    """Malformed experiment configuration."""

"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A matrix fails the density-operator invariants (Hermiticity,
    unit trace, positivity) beyond numerical tolerance."""


class ContractError(ValueError):
    """An argument violates an operation's precondition (wrong dimension,
    out-of-range parameter, missing configuration)."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its iteration budget."""

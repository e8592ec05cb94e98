"""Exception hierarchy shared by every vpgkit module."""

from __future__ import annotations


class VpgError(Exception):
    """Base class for all vpgkit errors."""


class FormatError(VpgError):
    """A representation document is malformed or violates a model invariant."""


class UnknownVertexError(VpgError, KeyError):
    """A vertex id that is not part of the graph or representation."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class PreconditionError(VpgError):
    """An operation was called on an input outside its domain."""


class BudgetExceeded(VpgError):
    """A configured search or table budget was exhausted."""


class InstanceTooLarge(BudgetExceeded):
    """Exact search refused because the instance exceeds the configured size."""


class ClassBudgetExceeded(BudgetExceeded):
    """Neighbor-class enumeration produced more classes than allowed."""


class GenerationExhausted(BudgetExceeded):
    """A random generator could not satisfy its constraints within its retry budget."""

"""Exception types shared across the package.

The CLI maps these onto stable exit codes, so keep the hierarchy flat:
plain ``ValueError`` covers ordinary argument validation.
"""


class TableTooSmallError(ValueError):
    """A computation referenced integers beyond the sieve table's limit."""


class ArcOverlapError(ValueError):
    """Requested Farey dissection parameters would produce overlapping arcs."""


class BudgetExceededError(RuntimeError):
    """A parameter sweep was refused because it exceeds the work budget."""

    def __init__(self, estimated_cells: int, budget: int):
        self.estimated_cells = estimated_cells
        self.budget = budget
        super().__init__(
            f"sweep refused: estimated {estimated_cells} (k,l)-cells "
            f"exceeds budget {budget}"
        )


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (roundoff blew past its tolerance)."""

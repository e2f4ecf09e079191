"""Exception types shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class SingularQuantizerError(DomainError):
    """The quantization map is not invertible (mixing parameter r = 0)."""


class InfeasibleChoiceError(DomainError):
    """A proposed joint-POVM parametrization violates a positivity condition."""


class BudgetExceededError(RuntimeError):
    """A quadrature grid would exceed the configured node budget."""

    def __init__(self, nodes, budget):
        self.nodes = nodes
        self.budget = budget
        super().__init__(f"grid needs {nodes:.3g} nodes, budget is {budget:.3g}")

class DomainError(ValueError):
    """An argument lies outside the admissible region of a formula."""

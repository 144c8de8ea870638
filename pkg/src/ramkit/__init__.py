"""Number-theoretic toolkit: pi series, LPS expander graphs, continued
fractions, and Ramanujan-sum signal analysis."""

__version__ = "0.1.0"


class DomainError(ValueError):
    """Raised when an argument violates a documented precondition.

    The command line maps this to exit code 1, as opposed to usage
    errors (bad flags), which exit 2.
    """

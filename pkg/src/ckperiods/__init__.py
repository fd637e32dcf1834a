"""Weight-filtered linear algebra, unipotent period loops and Selmer-style cocycle computations."""

__version__ = "0.1.0"

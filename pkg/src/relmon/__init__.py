"""relmon: a finite-category engine for relative monads and monadicity checks."""

__version__ = "0.1.0"

"""mzlab: exact experiments with derivations, E-derivations and MZ spaces."""

__version__ = "0.1.0"

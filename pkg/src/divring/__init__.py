"""Cyclic division algebras over Hahn series fields and twisted-polynomial machinery."""

__version__ = "0.1.0"

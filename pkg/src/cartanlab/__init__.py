"""Cartan projections and compact Clifford-Klein forms of SO(2,n)/H."""

__version__ = "0.1.0"

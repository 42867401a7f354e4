"""Catenary tether modelling, tension estimation and tension-based flight for a tethered quadcopter."""

__version__ = "0.1.0"

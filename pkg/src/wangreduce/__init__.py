"""Compile Wang tile sets into translational polycube tilings and verify them."""

__version__ = "0.1.0"

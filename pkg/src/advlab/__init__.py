"""Memoryless-adversary channel laboratory: code spectra, adversaries, simulation, bounds and LP certificates."""

__version__ = "0.1.0"

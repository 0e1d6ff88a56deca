"""Desk-scale toolkit for Nisan-Wigderson generators as proof systems:
designs, tau-translation SAT benchmarks, a decent Frege kernel, and the
Cert/Find/Err/Pair search tasks."""

__version__ = "0.1.0"

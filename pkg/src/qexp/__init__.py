"""Noncommutative Renyi/Augustin information measures for classical-quantum
channels: divergences, means, capacities, auxiliary functions, error-exponent
transforms, and numerical certification suites for their structural laws."""

__version__ = "0.1.0"

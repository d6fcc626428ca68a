"""Wideband spectrum sensing with unknown noise variance.

Pipeline stages: ratio-based sub-band edge detection, reference white
sub-band isolation, generalized (reference-normalized) energy detection,
and sensing-time optimization for secondary-network throughput. A seeded
Monte Carlo harness reproduces the calibration tables and operating points
at desk scale.
"""

__version__ = "0.1.0"

"""Fidelity and quantum process randomness for finite-dimensional processes."""

from .process import (
    KrausChannel,
    MeasurementDistribution,
    ProcessStats,
    apply_channel,
    average_over_haar,
    figure_of_merit,
    fidelity,
    measurement_distribution,
    pure_output_randomness,
    randomness_closed_form,
    randomness_from_distribution,
)

__version__ = "0.1.0"

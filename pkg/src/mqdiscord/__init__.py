"""Quantum discord, concurrence and MQ NMR coherence intensities of a spin-1/2 dimer."""

from .coherence import (
    CoherenceSpectrum,
    beta_from_g,
    coherence_decompose,
    coherence_spectrum,
    g2_closed,
    intensity,
    magnetization,
    magnetization_fourier,
    xi_from_g,
)
from .discord import (
    CorrelationReport,
    MeasurementBasis,
    Spectrum4,
    appendix_derivative,
    classical_correlations,
    correlations,
    discord_beta_g,
    discord_closed,
    discord_g_xi,
    discord_measurement_oracle,
    mutual_information,
    omega,
    reduced_entropy,
    spectrum,
)
from .entanglement import (
    ThresholdReport,
    concurrence_beta_g,
    concurrence_beta_xi,
    concurrence_g_xi,
    concurrence_oracle,
    thresholds,
)
from .exceptions import DomainError
from .state import (
    DimerParams,
    DipolarGeometry,
    XState,
    dimer_state,
    dipolar_coupling,
    evolve,
    evolve_unitary_oracle,
    heat_operator,
    thermal_state,
)

__version__ = "0.1.0"

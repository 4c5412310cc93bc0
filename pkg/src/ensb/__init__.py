"""Resonant spontaneous bremsstrahlung of an electron on a nucleus in two pulsed laser waves."""
from .constants import CONSTANTS, M_E, PhysicalConstants
from .errors import (ConfigError, ConvergenceError, DomainError, EnsbError, KinematicSingularityError,
                     NumericalConsistencyError, SingularConfigurationError)
from .kinematics import ElectronState, FourVector, PhotonDirection
from .profiles import ProfileParams, profile_partial, profile_res
from .waves import LaserWave, TwoWaveField
from .xsec import (ResonanceInputs, bethe_heitler, emission_probability, mott, ratio_closed_form, ratio_direct,
                   resonant_integrated_xsec, resonant_partial_xsec, resonant_summed_xsec)

__version__ = "0.1.0"

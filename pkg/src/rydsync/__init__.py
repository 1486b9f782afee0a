"""Mean-field simulator for non-reciprocal synchronization in thermal
Rydberg vapors: three-level Bloch dynamics with a power-law Rydberg
shift, fixed-point/regime analysis, Doppler-broadened ensembles, and
synchronization / non-reciprocity metrics."""

from .analysis import (ContrastResult, SpectralResult, SyncMetrics,
                       contrast_ratio, dominant_frequency, sync_metrics)
from .errors import (AnalysisError, ConfigError, DomainError,
                     IntegrationError, RydsyncError, SingularSystemError)
from .fixed_points import (FixedPoint, HysteresisResult, Regime, RegimeTag,
                           classify_regime, hysteresis_sweep, jacobian,
                           self_consistent_fixed_points,
                           steady_state_given_shift)
from .integrator import IntegratorConfig, Trajectory, integrate
from .model import (BlochState, ModelParams, bloch_rhs, ground_state,
                    self_shift)
from .scenario import (AnalysisConfig, ScanAxis, Scenario, parse_scenario,
                       preset_fig2, preset_fig3, serialize_scenario)
from .thermal import (CouplingMode, EnsembleTrajectory, Geometry, Sampling,
                      ThermalConfig, TransmissionConfig, VelocityClass,
                      doppler_detunings, integrate_ensemble,
                      sample_velocities, shared_shift, transmission)

__version__ = "0.1.0"

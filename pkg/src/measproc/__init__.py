"""Discrete-observable quantum measuring processes.

Object observable, apparatus preparation, interaction unitary and probe are
bundled in :class:`MeasuringProcess`. The package checks the transduction and
amplification stages and derives posterior states and instruments from the
composite dynamics.
"""
from .amplifier import (AmplifierSpec, MeterObservable, amplified_probe, macro_commutativity,
                        meter_observable, readout_equivalence)
from .catalog import by_name, cnot_model, non_projective_model, shift_model, swap_model
from .errors import (ContextMismatch, DimensionError, InfiniteValueError, MeasurementError,
                     NotHermitianError, NotMonomialError, NotNormalizedError, NotUnitaryError,
                     SpectrumError, ZeroProbabilityOutcome)
from .hyperscalar import (GainSymbol, HyperOperator, HyperScalar, hs_add, hs_invert, hs_mul,
                          hs_neg, hyper_commutator, is_infinite, is_infinitesimal, standard_part)
from .linalg import (Observable, commutator, is_psd, is_unitary, operator_distance,
                     partial_trace_apparatus, spectral_decompose, tensor)
from .model import (MeasuringProcess, TransductionReport, check_transduction, heisenberg_probe,
                    induced_pvm, noise_operator, object_distribution, outcome_distribution)
from .reduction import (EvolutionSpec, Instrument, bayes_check, conditional_probability,
                        consecutive_joint, consecutive_via_reduction, extract_instrument,
                        joint_probability, posterior_state, prior_state)

__version__ = "0.1.0"

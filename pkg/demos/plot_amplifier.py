"""
Amplifying the probe into a meter
=================================

The meter observable is C = G^-1 B with an infinite gain symbol G. Gains are
formal Laurent monomials, so cancellations are exact and infinitesimal terms
stay visible instead of rounding away.
"""

import numpy as np

from measproc import catalog
from measproc.amplifier import (AmplifierSpec, amplified_probe, macro_commutativity,
                                meter_observable, readout_equivalence)
from measproc.hyperscalar import GainSymbol, is_infinite

mp = catalog.cnot_model()
spec = AmplifierSpec(mp.probe, conjugate_gain=GainSymbol("G'"))

meter = meter_observable(spec)
print("meter values:", [str(v) for v in meter.meter_values])
print("standard readings:", meter.standard_values)
print("G B is infinite:", is_infinite(amplified_probe(spec)[0, 0]))

# Reading the meter after amplification reproduces the measured distribution.
psi = np.array([np.sqrt(0.8), np.sqrt(0.2)])
rep = readout_equivalence(mp, spec, psi)
print("readout exact:", rep.readout_exact)
print("meter distribution:", rep.meter_distribution)
print("object distribution:", rep.object_distribution)

# Canonically conjugate microscopic probes still give commuting meters:
# [C, C'] = -i hbar G^-1 G'^-1, an infinitesimal.
hbar = 1.0
com = macro_commutativity(spec, -1j * hbar * np.eye(2))
print("[C, C'] diagonal entry:", com.commutator[0, 0])
print("standard part vanishes:", com.standard_part_zero)

"""
Transduction: does the probe carry the measured value?
======================================================

A measuring process couples an object to an apparatus prepared in a fixed
state. It measures the object observable A when, right after the
interaction, the apparatus probe B reproduces A's statistics for every
input. Two independent checks decide this: the noise operator and the
object-side measure induced by the probe.
"""

import numpy as np

from measproc import catalog
from measproc.model import MeasuringProcess, check_transduction, induced_pvm, outcome_distribution

# The CNOT model copies the sigma_z value of the object onto the apparatus.
mp = catalog.cnot_model()
rep = check_transduction(mp)
print("cnot transduces:", rep.holds)
print("  noise norm    ", rep.noise_norm)
print("  pvm distance  ", rep.pvm_distance)

# The induced operator for probe outcome +1 is the object projector |0><0|.
print(np.round(induced_pvm(mp, 1.0).real, 12))

# A three-level shift model with evenly spaced eigenvalues.
mp3 = catalog.shift_model(3)
psi = np.array([1, 1j, -1]) / np.sqrt(3)
print("shift:3 outcome distribution:", outcome_distribution(mp3, psi))

# Leave the apparatus alone and the probe learns nothing.
idle = MeasuringProcess.from_matrices(catalog.SIGMA_Z, [1, 0], np.eye(4), catalog.SIGMA_Z)
rep = check_transduction(idle)
print("identity coupling transduces:", rep.holds, "noise", round(rep.noise_norm, 6))

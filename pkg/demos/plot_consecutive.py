"""
Two measurements in a row
=========================

Run two measuring processes on the same object with separate apparatuses,
then read both probes. The joint table computed on the three-system
composite matches the one obtained by reducing the object state after the
first reading.
"""

import numpy as np

from measproc import catalog
from measproc.reduction import consecutive_joint, consecutive_via_reduction

psi = np.array([np.cos(0.4), np.exp(0.3j) * np.sin(0.4)])

for first, second in [("cnot", "cnot"), ("nonproj:hadamard", "cnot")]:
    mp1, mp2 = catalog.by_name(first), catalog.by_name(second)
    full = consecutive_joint(mp1, mp2, psi)
    piped = consecutive_via_reduction(mp1, mp2, psi)
    print(f"{first} then {second}")
    for (a, b), p in full.items():
        print(f"  ({a:+g}, {b:+g})  composite {p:.6f}  reduced {piped[(a, b)]:.6f}")

# Repeating cnot gives a perfectly correlated table; after the Hadamard kick
# the second reading is a fair coin regardless of the first.

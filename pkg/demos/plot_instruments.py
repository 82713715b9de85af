"""
Instruments from the interaction
================================

Each probe outcome defines a completely positive map on object states. We
build its Choi matrix, read off Kraus operators, and confirm the maps add
up to a trace-preserving channel.
"""

import numpy as np

from measproc import catalog
from measproc.reduction import check_instrument, extract_instrument

for name in ("cnot", "nonproj:hadamard", "swap"):
    mp = catalog.by_name(name)
    inst = extract_instrument(mp)
    print(f"{name}: completely positive={inst.is_completely_positive()}, "
          f"completeness error={inst.completeness_error():.1e}")
    for br in inst:
        print(f"  outcome {br.outcome:+g}: {len(br.kraus)} Kraus operator(s)")
        for k in br.kraus:
            print("   ", np.round(k, 6).tolist())

# The swap model discards the input and prepares a fresh state: measure and prepare.
psi = np.array([0.6, 0.8j])
chk = check_instrument(catalog.swap_model(), extract_instrument(catalog.swap_model()), psi)
print("swap posterior error:", chk.posterior_error)

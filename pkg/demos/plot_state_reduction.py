"""
Posterior states and the Bayes check
====================================

Conditioning on a probe reading gives the object's posterior state. Its
predictions for any later measurement must agree with the joint statistics
computed on the full object plus apparatus system.
"""

import numpy as np

from measproc import catalog, linalg as la
from measproc.reduction import (EvolutionSpec, bayes_check, posterior_state, prior_state,
                                projection_postulate_state)

plus = np.array([1, 1]) / np.sqrt(2)

# CNOT leaves the object in the measured eigenstate.
cnot = catalog.cnot_model()
print("cnot posterior for +1:\n", np.round(posterior_state(cnot, plus, 1.0).real, 12))

# Kicking the object with a Hadamard after the copy gives the same statistics
# but a different posterior, so the projection postulate fails here.
kicked = catalog.non_projective_model(catalog.HADAMARD)
post = posterior_state(kicked, plus, 1.0)
naive = projection_postulate_state(kicked, plus, 1.0)
print("kicked posterior:\n", np.round(post.real, 12))
print("distance to projection postulate:", la.operator_distance(post, naive))

# Averaging posteriors over outcomes returns the prior.
rho = sum(0.5 * posterior_state(kicked, plus, a) for a in (1.0, -1.0))
print("mixture equals prior:", la.operator_distance(rho, prior_state(kicked, plus)) < 1e-12)

# Let the object evolve under H for a while, then measure sigma_x.
evo = EvolutionSpec(0.5 * catalog.SIGMA_Y, delay=0.7)
x_obs = la.spectral_decompose(catalog.SIGMA_X)
rep = bayes_check(kicked, plus, evo, x_obs)
for row in rep.rows:
    print(f"a={row.a:+g} x={row.x:+g}  joint={row.joint:.6f}  "
          f"conditional={row.conditional:.6f}  from posterior={row.from_posterior:.6f}")
print("bayes check passed:", rep.passed)

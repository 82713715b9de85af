"""Random operators and measuring processes for tests."""
import numpy as np

from measproc import linalg as la
from measproc.catalog import basis, cyclic_shift
from measproc.model import MeasuringProcess


def random_ket(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_hermitian(rng, d, scale=1.0):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (m + m.conj().T) / 2


def random_unitary(rng, d):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_transducer(rng, d):
    """A transducing model with random basis, eigenvalues, kicks and preparation.

    Start from the shift coupling in a random object basis V, then apply a
    random object unitary R after it, random probe-diagonal phases D on the
    apparatus, and a random apparatus unitary W before it (so xi = W^dag |0>).
    None of these change U^dag (I (x) B) U restricted to psi (x) xi.
    """
    vals = np.sort(rng.uniform(-2, 2, size=d))[::-1]
    v = random_unitary(rng, d)
    a = v @ np.diag(vals) @ v.conj().T
    shift = cyclic_shift(d)
    core = sum(la.tensor(la.projector(v[:, k]), np.linalg.matrix_power(shift, k))
               for k in range(d))
    r = random_unitary(rng, d)
    phases = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, size=d)))
    w = random_unitary(rng, d)
    u = la.tensor(r, phases) @ core @ la.tensor(np.eye(d), w)
    xi = w.conj().T @ basis(d, 0)
    b = np.diag(vals).astype(complex)
    return MeasuringProcess.from_matrices(a, xi, u, b)


def perturbed(rng, mp, strength=0.3):
    """Compose the interaction with a random coupling exp(-i strength K)."""
    k = random_hermitian(rng, mp.dim_s * mp.dim_a)
    u = mp.interaction @ la.unitary_exp(k, strength)
    return MeasuringProcess.from_matrices(mp.measured.matrix, mp.preparation, u,
                                          mp.probe.matrix)


def random_process(rng, ds, da):
    """Arbitrary (generally non-transducing) model with random everything."""
    return MeasuringProcess.from_matrices(
        random_hermitian(rng, ds), random_ket(rng, da), random_unitary(rng, ds * da),
        random_hermitian(rng, da))


def gaussian_integer_matrix(rng, d, low=-5, high=6):
    return (rng.integers(low, high, size=(d, d))
            + 1j * rng.integers(low, high, size=(d, d))).astype(complex)

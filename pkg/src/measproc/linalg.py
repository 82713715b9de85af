"""Dense complex linear algebra for object/apparatus composite systems.

Operators are plain ``complex128`` numpy arrays. Composite indices are
object-major: for ``H_S (x) H_A`` the row index of ``|s, a>`` is
``s * dim_a + a``, which is what ``np.kron(object_op, apparatus_op)`` produces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, NotNormalizedError, SpectrumError

TOL_NORM = 1e-9
TOL_HERM = 1e-9
TOL_UNITARY = 1e-9
TOL_PSD = 1e-9
TOL_CLUSTER = 1e-8


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def as_square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def as_ket(v, tol: float = TOL_NORM) -> np.ndarray:
    """Return ``v`` as a 1-d complex vector, checking that it has unit norm."""
    arr = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > tol:
        raise NotNormalizedError(f"ket has norm {norm:.12g}, expected 1")
    return arr


def normalize(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(arr)
    if norm == 0:
        raise NotNormalizedError("cannot normalize the zero vector")
    return arr / norm


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def projector(v) -> np.ndarray:
    """``|v><v|`` for a 1-d vector ``v``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def tensor(m1, m2) -> np.ndarray:
    """Kronecker product ``m1 (x) m2``."""
    return np.kron(np.asarray(m1, dtype=complex), np.asarray(m2, dtype=complex))


def partial_trace_apparatus(m, dim_s: int, dim_a: int) -> np.ndarray:
    """Trace out the apparatus factor of an object-major composite operator."""
    m = as_matrix(m)
    n = dim_s * dim_a
    if m.shape != (n, n):
        raise DimensionError(
            f"operator of shape {m.shape} does not act on a {dim_s}x{dim_a} composite")
    return np.einsum("iaja->ij", m.reshape(dim_s, dim_a, dim_s, dim_a))


def commutator(x, y) -> np.ndarray:
    x, y = as_square(x), as_square(y)
    if x.shape != y.shape:
        raise DimensionError(f"commutator of shapes {x.shape} and {y.shape}")
    return x @ y - y @ x


def hermiticity_error(m) -> float:
    m = as_square(m)
    return float(np.max(np.abs(m - dagger(m)), initial=0.0))


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    return hermiticity_error(m) <= tol


def is_unitary(m, tol: float = TOL_UNITARY) -> bool:
    m = as_square(m)
    return float(np.linalg.norm(dagger(m) @ m - np.eye(m.shape[0]))) <= tol


def is_psd(m, tol: float = TOL_PSD) -> bool:
    m = as_square(m)
    if not is_hermitian(m, tol):
        return False
    return float(np.linalg.eigvalsh((m + dagger(m)) / 2).min()) >= -tol


def operator_distance(m1, m2) -> float:
    """Frobenius norm of ``m1 - m2``."""
    m1, m2 = as_matrix(m1), as_matrix(m2)
    if m1.shape != m2.shape:
        raise DimensionError(f"distance between shapes {m1.shape} and {m2.shape}")
    return float(np.linalg.norm(m1 - m2))


def unitary_exp(h, t: float, hbar: float = 1.0) -> np.ndarray:
    """``exp(-i h t / hbar)`` for Hermitian ``h``, via its eigendecomposition."""
    h = as_square(h)
    if not is_hermitian(h):
        raise NotHermitianError("generator of a unitary evolution must be Hermitian")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(-1j * w * t / hbar)) @ dagger(v)


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix together with its clustered spectral decomposition.

    ``outcomes`` holds ``(eigenvalue, projector)`` pairs in descending
    eigenvalue order, one pair per distinct eigenvalue.
    """

    matrix: np.ndarray
    outcomes: tuple[tuple[float, np.ndarray], ...]
    tol_cluster: float = TOL_CLUSTER

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.outcomes)

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        return tuple(p for _, p in self.outcomes)

    def __iter__(self) -> Iterator[tuple[float, np.ndarray]]:
        return iter(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def match_tolerance(self) -> float:
        return self.tol_cluster * max(1.0, float(np.linalg.norm(self.matrix)))

    def find(self, value: float) -> int | None:
        """Index of the outcome equal to ``value`` within the clustering tolerance."""
        tol = self.match_tolerance()
        for k, a in enumerate(self.eigenvalues):
            if abs(a - value) <= tol:
                return k
        return None

    def index(self, value: float) -> int:
        k = self.find(value)
        if k is None:
            raise SpectrumError(
                f"{value!r} is not an eigenvalue; spectrum is {list(self.eigenvalues)}")
        return k

    def projector(self, value: float) -> np.ndarray:
        return self.outcomes[self.index(value)][1]


def spectral_decompose(h, tol_cluster: float = TOL_CLUSTER,
                       tol_herm: float = TOL_HERM) -> Observable:
    """Build an :class:`Observable` from a Hermitian matrix.

    Sorted raw eigenvalues closer than ``tol_cluster * max(1, ||h||_F)`` to
    their neighbour are merged into one outcome (single linkage); the outcome
    value is the cluster mean and its projector is the sum of the cluster's
    eigenvector outer products.
    """
    h = as_square(h)
    err = hermiticity_error(h)
    if err > tol_herm:
        raise NotHermitianError(f"matrix is not Hermitian (max |M - M^dag| = {err:.3e})")
    h = (h + dagger(h)) / 2
    w, v = np.linalg.eigh(h)
    scale = tol_cluster * max(1.0, float(np.linalg.norm(h)))

    clusters: list[list[int]] = []
    for k in range(len(w)):
        if clusters and w[k] - w[clusters[-1][-1]] < scale:
            clusters[-1].append(k)
        else:
            clusters.append([k])

    outcomes = []
    for idx in reversed(clusters):
        value = float(np.mean(w[idx]))
        vecs = v[:, idx]
        outcomes.append((value, vecs @ dagger(vecs)))
    return Observable(matrix=h, outcomes=tuple(outcomes), tol_cluster=tol_cluster)


def observable_from_outcomes(pairs: Sequence[tuple[float, np.ndarray]],
                             tol_cluster: float = TOL_CLUSTER) -> Observable:
    """Assemble ``sum_a a E(a)`` from explicit pairs and re-decompose it."""
    pairs = list(pairs)
    dim = as_square(pairs[0][1]).shape[0]
    m = np.zeros((dim, dim), dtype=complex)
    for a, p in pairs:
        m += a * as_square(p)
    return spectral_decompose(m, tol_cluster)


def embed_ket(dim_s: int, xi) -> np.ndarray:
    """The ``(dim_s*dim_a) x dim_s`` isometry ``psi -> psi (x) xi``."""
    xi = np.asarray(xi, dtype=complex).reshape(-1, 1)
    return tensor(np.eye(dim_s), xi)

"""Built-in measuring processes.

``cnot_model`` is the smallest exact transducer. ``shift_model`` generalizes
it to ``d`` outcomes, and ``non_projective_model`` follows the CNOT coupling
with a unitary kick on the object. That model still transduces but its
posterior states are not the eigenstates the projection postulate predicts.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import MeasurementError, NotUnitaryError
from .model import MeasuringProcess

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)

NAMED_UNITARIES = {
    "hadamard": HADAMARD,
    "identity": np.eye(2, dtype=complex),
    "sigmax": SIGMA_X,
    "sigmay": SIGMA_Y,
    "sigmaz": SIGMA_Z,
}


def basis(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def cyclic_shift(d: int) -> np.ndarray:
    """``S|j> = |j+1 mod d>``."""
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def cnot_model() -> MeasuringProcess:
    return MeasuringProcess.from_matrices(
        measured=SIGMA_Z, preparation=basis(2, 0), interaction=CNOT, probe=SIGMA_Z)


def shift_model(d: int, eigenvalues: Sequence[float] | None = None) -> MeasuringProcess:
    """``U = sum_k |k><k| (x) S^k`` with both observables ``diag(eigenvalues)``.

    Defaults to ``d`` evenly spaced eigenvalues from +1 down to -1.
    """
    if d < 2:
        raise MeasurementError(f"shift model needs d >= 2, got {d}")
    vals = np.linspace(1.0, -1.0, d) if eigenvalues is None else np.asarray(eigenvalues, float)
    if vals.shape != (d,):
        raise MeasurementError(f"need exactly {d} eigenvalues, got {len(vals)}")
    if len(set(vals.tolist())) != d:
        raise MeasurementError(f"eigenvalues must be distinct, got {vals.tolist()}")
    diag = np.diag(vals).astype(complex)
    shift = cyclic_shift(d)
    u = sum(la.tensor(la.projector(basis(d, k)), np.linalg.matrix_power(shift, k))
            for k in range(d))
    return MeasuringProcess.from_matrices(
        measured=diag, preparation=basis(d, 0), interaction=u, probe=diag)


def non_projective_model(r=HADAMARD) -> MeasuringProcess:
    """CNOT coupling followed by the object unitary ``r``: ``U = (r (x) I) CNOT``."""
    r = la.as_square(r)
    if r.shape != (2, 2) or not la.is_unitary(r):
        raise NotUnitaryError("object kick r must be a 2x2 unitary")
    return MeasuringProcess.from_matrices(
        measured=SIGMA_Z, preparation=basis(2, 0),
        interaction=la.tensor(r, np.eye(2)) @ CNOT, probe=SIGMA_Z)


def swap_model() -> MeasuringProcess:
    """Object and apparatus exchange states; the object is left in the preparation."""
    swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    return MeasuringProcess.from_matrices(
        measured=SIGMA_Z, preparation=basis(2, 0), interaction=swap, probe=SIGMA_Z)


CATALOG_NAMES = ("cnot", "shift:<d>", "nonproj:<hadamard|identity|sigmax|sigmay|sigmaz>", "swap")


def by_name(name: str) -> MeasuringProcess:
    """Resolve ``cnot``, ``shift:3``, ``nonproj:hadamard`` or ``swap``."""
    kind, _, arg = name.strip().partition(":")
    kind = kind.lower()
    if kind == "cnot" and not arg:
        return cnot_model()
    if kind == "swap" and not arg:
        return swap_model()
    if kind == "shift":
        try:
            d = int(arg)
        except ValueError:
            raise MeasurementError(f"shift model needs an integer dimension, got {arg!r}")
        return shift_model(d)
    if kind == "nonproj":
        key = (arg or "hadamard").lower()
        if key not in NAMED_UNITARIES:
            raise MeasurementError(
                f"unknown object unitary {arg!r}; choose from {sorted(NAMED_UNITARIES)}")
        return non_projective_model(NAMED_UNITARIES[key])
    raise MeasurementError(f"unknown catalog model {name!r}; known: {', '.join(CATALOG_NAMES)}")


def catalog_models() -> dict[str, MeasuringProcess]:
    """The three reference models used across tests and demos."""
    return {"cnot": cnot_model(), "nonproj:hadamard": non_projective_model(HADAMARD),
            "shift:3": shift_model(3)}

"""Measuring processes and the transduction stage.

A :class:`MeasuringProcess` bundles the measured object observable, the
apparatus preparation, the object-apparatus interaction unitary and the
apparatus probe observable. The functions here compute the probe in the
Heisenberg picture just after the interaction and check whether the
interaction transduces the measured observable to the probe.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import DimensionError, NotUnitaryError, SpectrumError
from .linalg import Observable

TOL_TRANSDUCE = 1e-8
TOL_PROB_CLAMP = 1e-12
TOL_PROB_SUM = 1e-9

OutcomeDistribution = dict[float, float]


@dataclass(frozen=True, eq=False)
class MeasuringProcess:
    """Object observable, apparatus preparation, interaction and probe.

    ``interaction`` acts on ``H_S (x) H_A`` with object-major indexing.
    """

    measured: Observable
    preparation: np.ndarray
    interaction: np.ndarray
    probe: Observable
    tol_unitary: float = la.TOL_UNITARY

    def __post_init__(self):
        xi = la.as_ket(self.preparation)
        u = la.as_square(self.interaction)
        object.__setattr__(self, "preparation", xi)
        object.__setattr__(self, "interaction", u)
        if xi.shape[0] != self.probe.dim:
            raise DimensionError(
                f"preparation has dim {xi.shape[0]}, probe acts on dim {self.probe.dim}")
        n = self.dim_s * self.dim_a
        if u.shape != (n, n):
            raise DimensionError(
                f"interaction has shape {u.shape}, expected ({n}, {n}) "
                f"for dim_s={self.dim_s}, dim_a={self.dim_a}")
        if not la.is_unitary(u, self.tol_unitary):
            raise NotUnitaryError("interaction not unitary")

    @classmethod
    def from_matrices(cls, measured, preparation, interaction, probe,
                      tol_cluster: float = la.TOL_CLUSTER,
                      tol_unitary: float = la.TOL_UNITARY) -> "MeasuringProcess":
        return cls(measured=la.spectral_decompose(measured, tol_cluster),
                   preparation=np.asarray(preparation, dtype=complex),
                   interaction=np.asarray(interaction, dtype=complex),
                   probe=la.spectral_decompose(probe, tol_cluster),
                   tol_unitary=tol_unitary)

    @property
    def dim_s(self) -> int:
        return self.measured.dim

    @property
    def dim_a(self) -> int:
        return self.probe.dim

    def input_state(self, psi) -> np.ndarray:
        """``psi (x) xi`` as a composite vector."""
        psi = la.as_ket(psi)
        if psi.shape[0] != self.dim_s:
            raise DimensionError(f"state has dim {psi.shape[0]}, object has dim {self.dim_s}")
        return np.kron(psi, self.preparation)

    def output_state(self, psi) -> np.ndarray:
        """``U (psi (x) xi)``, the composite state just after the interaction."""
        return self.interaction @ self.input_state(psi)

    def probe_projector(self, b: float) -> np.ndarray:
        """``I (x) E^B(b)`` on the composite space."""
        return la.tensor(np.eye(self.dim_s), self.probe.projector(b))


@dataclass(frozen=True)
class TransductionReport:
    holds: bool
    noise_norm: float
    pvm_distance: float
    outcome_matching: dict[float, float | None]
    unmatched_probe: tuple[float, ...] = ()
    per_outcome: dict[float, float] = field(default_factory=dict)
    tol: float = TOL_TRANSDUCE

    @property
    def unmatched_measured(self) -> tuple[float, ...]:
        return tuple(a for a, b in self.outcome_matching.items() if b is None)


def heisenberg_probe(mp: MeasuringProcess) -> np.ndarray:
    """``U^dag (I (x) B) U``."""
    u = mp.interaction
    out = la.dagger(u) @ la.tensor(np.eye(mp.dim_s), mp.probe.matrix) @ u
    return (out + la.dagger(out)) / 2


def noise_operator(mp: MeasuringProcess) -> np.ndarray:
    return heisenberg_probe(mp) - la.tensor(mp.measured.matrix, np.eye(mp.dim_a))


def induced_pvm(mp: MeasuringProcess, b: float) -> np.ndarray:
    """Object operator ``Tr_A[(I (x) |xi><xi|) U^dag (I (x) E^B(b)) U]``.

    Its expectation in ``psi`` is the probability of probe outcome ``b``; it
    equals the spectral projector of the measured observable at ``b`` exactly
    when the interaction transduces that outcome.
    """
    u = mp.interaction
    heis = la.dagger(u) @ mp.probe_projector(b) @ u
    prep = la.tensor(np.eye(mp.dim_s), la.projector(mp.preparation))
    out = la.partial_trace_apparatus(prep @ heis, mp.dim_s, mp.dim_a)
    return (out + la.dagger(out)) / 2


def match_outcomes(measured: Observable, probe: Observable) -> dict[float, float | None]:
    """Pair each measured eigenvalue with the probe eigenvalue equal to it, if any."""
    matching: dict[float, float | None] = {}
    for a in measured.eigenvalues:
        k = probe.find(a)
        if k is None:
            k = _find_with(probe, a, measured.match_tolerance())
        matching[a] = None if k is None else probe.eigenvalues[k]
    return matching


def _find_with(obs: Observable, value: float, tol: float) -> int | None:
    for k, b in enumerate(obs.eigenvalues):
        if abs(b - value) <= tol:
            return k
    return None


def check_transduction(mp: MeasuringProcess, tol: float = TOL_TRANSDUCE) -> TransductionReport:
    """Evaluate both the noise criterion and the induced-PVM criterion.

    ``noise_norm`` is ``||N E_xi||_F`` with ``E_xi: psi -> psi (x) xi``. The
    PVM criterion compares, over the union of both spectra, the measured
    projector against the induced operator; an outcome missing from one
    spectrum is compared against the zero operator.
    """
    embed = la.embed_ket(mp.dim_s, mp.preparation)
    noise_norm = float(np.linalg.norm(noise_operator(mp) @ embed))

    matching = match_outcomes(mp.measured, mp.probe)
    matched_b = {b for b in matching.values() if b is not None}
    zero = np.zeros((mp.dim_s, mp.dim_s), dtype=complex)

    per_outcome: dict[float, float] = {}
    for a, proj in mp.measured:
        b = matching[a]
        induced = zero if b is None else induced_pvm(mp, b)
        per_outcome[a] = la.operator_distance(proj, induced)
    unmatched_probe = tuple(b for b in mp.probe.eigenvalues if b not in matched_b)
    for b in unmatched_probe:
        per_outcome[b] = la.operator_distance(zero, induced_pvm(mp, b))

    pvm_distance = max(per_outcome.values(), default=0.0)
    return TransductionReport(
        holds=noise_norm <= tol and pvm_distance <= tol,
        noise_norm=noise_norm,
        pvm_distance=pvm_distance,
        outcome_matching=matching,
        unmatched_probe=unmatched_probe,
        per_outcome=per_outcome,
        tol=tol,
    )


def _clamp(p: float) -> float:
    if p < -TOL_PROB_CLAMP or p > 1 + TOL_PROB_CLAMP:
        raise ArithmeticError(f"probability {p!r} outside [0, 1]")
    return min(1.0, max(0.0, p))


def outcome_distribution(mp: MeasuringProcess, psi) -> OutcomeDistribution:
    """Probe-side Born probabilities ``<psi xi| U^dag (I (x) E^B(b)) U |psi xi>``."""
    phi = mp.output_state(psi)
    dist = {}
    for b, proj in mp.probe:
        p = np.vdot(phi, la.tensor(np.eye(mp.dim_s), proj) @ phi).real
        dist[b] = _clamp(float(p))
    return dist


def born_distribution(obs: Observable, psi) -> OutcomeDistribution:
    """``<psi|E(a)|psi>`` for every outcome of ``obs``."""
    psi = la.as_ket(psi)
    if psi.shape[0] != obs.dim:
        raise DimensionError(f"state has dim {psi.shape[0]}, observable acts on {obs.dim}")
    return {a: _clamp(float(np.vdot(psi, proj @ psi).real)) for a, proj in obs}


def object_distribution(mp: MeasuringProcess, psi) -> OutcomeDistribution:
    return born_distribution(mp.measured, psi)


def distribution_distance(p: OutcomeDistribution, q: OutcomeDistribution,
                          tol_match: float = la.TOL_CLUSTER) -> float:
    """Max absolute difference over the union of outcomes (missing keys count as 0)."""
    keys = list(p)
    for b in q:
        if not any(abs(b - a) <= tol_match for a in keys):
            keys.append(b)

    def lookup(d, key):
        for k, v in d.items():
            if abs(k - key) <= tol_match:
                return v
        return 0.0

    return max((abs(lookup(p, k) - lookup(q, k)) for k in keys), default=0.0)


def require_outcome(obs: Observable, value: float) -> float:
    """Return the stored eigenvalue matching ``value`` or raise :class:`SpectrumError`."""
    k = obs.find(value)
    if k is None:
        raise SpectrumError(f"{value!r} is not in the spectrum {list(obs.eigenvalues)}")
    return obs.eigenvalues[k]

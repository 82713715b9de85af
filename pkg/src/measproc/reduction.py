"""State reduction derived from the measuring process.

Density operators are plain Hermitian numpy arrays. Everything here is built
from the composite state ``U (psi (x) xi)`` and the probe projectors; no
projection rule on the object is assumed anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import DimensionError, MeasurementError, NotHermitianError, ZeroProbabilityOutcome
from .linalg import Observable
from .model import (MeasuringProcess, OutcomeDistribution, _clamp, outcome_distribution,
                    require_outcome)

TOL_PROB = 1e-12
TOL_TRACE = 1e-9


@dataclass(frozen=True, eq=False)
class EvolutionSpec:
    """Free object evolution ``exp(-i H t / hbar)`` applied between measurements."""

    hamiltonian: np.ndarray
    delay: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        h = la.as_square(self.hamiltonian)
        if not la.is_hermitian(h):
            raise NotHermitianError("hamiltonian is not Hermitian")
        if self.delay < 0:
            raise ValueError(f"delay must be non-negative, got {self.delay}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "hamiltonian", h)

    @classmethod
    def free(cls, dim: int, delay: float = 0.0, hbar: float = 1.0) -> "EvolutionSpec":
        return cls(np.zeros((dim, dim), dtype=complex), delay, hbar)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def propagator(self) -> np.ndarray:
        return la.unitary_exp(self.hamiltonian, self.delay, self.hbar)

    def heisenberg(self, op) -> np.ndarray:
        """``exp(iHt/hbar) op exp(-iHt/hbar)``."""
        v = self.propagator()
        return la.dagger(v) @ np.asarray(op, dtype=complex) @ v


def check_density(rho, tol: float = TOL_TRACE) -> np.ndarray:
    """Validate a density operator (Hermitian, PSD, unit trace) and return it."""
    rho = la.as_square(rho)
    if not la.is_hermitian(rho, tol):
        raise NotHermitianError("density operator is not Hermitian")
    if not la.is_psd(rho, tol):
        raise MeasurementError("density operator is not positive semidefinite")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise MeasurementError(f"density operator has trace {tr:.12g}")
    return rho


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + la.dagger(m)) / 2


def _output_density(mp: MeasuringProcess, psi) -> np.ndarray:
    phi = mp.output_state(psi)
    return np.outer(phi, phi.conj())


def prior_state(mp: MeasuringProcess, psi) -> np.ndarray:
    """``Tr_A[U |psi xi><psi xi| U^dag]``, the object state with the outcome unread."""
    rho = la.partial_trace_apparatus(_output_density(mp, psi), mp.dim_s, mp.dim_a)
    return check_density(_hermitize(rho))


def _unnormalized_posterior(mp: MeasuringProcess, psi, b: float) -> np.ndarray:
    joint = mp.probe_projector(b) @ _output_density(mp, psi)
    return _hermitize(la.partial_trace_apparatus(joint, mp.dim_s, mp.dim_a))


def posterior_state(mp: MeasuringProcess, psi, a: float,
                    tol_prob: float = TOL_PROB) -> np.ndarray:
    """Object state conditional on probe outcome ``a``.

    Raises :class:`ZeroProbabilityOutcome` when the outcome has probability at
    most ``tol_prob``.
    """
    b = require_outcome(mp.probe, a)
    sigma = _unnormalized_posterior(mp, psi, b)
    p = float(np.trace(sigma).real)
    if p <= tol_prob:
        raise ZeroProbabilityOutcome(b, p)
    return check_density(sigma / p)


def projection_postulate_state(mp: MeasuringProcess, psi, a: float) -> np.ndarray:
    """``E^A(a)|psi><psi|E^A(a) / p(a)``; used only for comparison."""
    psi = la.as_ket(psi)
    proj = mp.measured.projector(a)
    v = proj @ psi
    p = float(np.vdot(v, v).real)
    if p <= TOL_PROB:
        raise ZeroProbabilityOutcome(a, p)
    return np.outer(v, v.conj()) / p


def _check_evolution(mp: MeasuringProcess, evo: EvolutionSpec, x_obs: Observable) -> None:
    if evo.dim != mp.dim_s or x_obs.dim != mp.dim_s:
        raise DimensionError(
            f"evolution (dim {evo.dim}) and X (dim {x_obs.dim}) must act on the object "
            f"(dim {mp.dim_s})")


def joint_probability(mp: MeasuringProcess, psi, evo: EvolutionSpec, x_obs: Observable,
                      a: float, x: float) -> float:
    """Probability of probe outcome ``a`` followed by ``X = x`` after the delay.

    ``<psi xi| U^dag (X_t(x) (x) E^B(a)) U |psi xi>`` with
    ``X_t(x) = exp(iHt/hbar) E^X(x) exp(-iHt/hbar)``.
    """
    _check_evolution(mp, evo, x_obs)
    b = require_outcome(mp.probe, a)
    ex = x_obs.projector(x)
    phi = mp.output_state(psi)
    op = la.tensor(evo.heisenberg(ex), mp.probe.projector(b))
    return _clamp(float(np.vdot(phi, op @ phi).real))


def conditional_probability(mp: MeasuringProcess, psi, evo: EvolutionSpec, x_obs: Observable,
                            x: float, a: float, tol_prob: float = TOL_PROB) -> float:
    b = require_outcome(mp.probe, a)
    p = outcome_distribution(mp, psi)[b]
    if p <= tol_prob:
        raise ZeroProbabilityOutcome(b, p)
    return _clamp(joint_probability(mp, psi, evo, x_obs, b, x) / p)


@dataclass(frozen=True)
class BayesRow:
    a: float
    x: float
    joint: float
    conditional: float
    from_posterior: float

    @property
    def discrepancy(self) -> float:
        return abs(self.conditional - self.from_posterior)


@dataclass(frozen=True)
class BayesReport:
    passed: bool
    max_discrepancy: float
    rows: tuple[BayesRow, ...]
    skipped: tuple[float, ...] = ()
    tol: float = 1e-8


def bayes_check(mp: MeasuringProcess, psi, evo: EvolutionSpec, x_obs: Observable,
                tol: float = 1e-8, tol_prob: float = TOL_PROB) -> BayesReport:
    """Compare conditional probabilities from the joint formula against the posterior.

    For every probe outcome with nonzero probability and every ``x``, the
    conditional probability computed on the composite system is checked against
    ``Tr[X_t(x) rho(a)]`` with ``rho(a)`` from :func:`posterior_state`.
    """
    _check_evolution(mp, evo, x_obs)
    dist = outcome_distribution(mp, psi)
    rows, skipped = [], []
    for b in mp.probe.eigenvalues:
        if dist[b] <= tol_prob:
            skipped.append(b)
            continue
        rho = posterior_state(mp, psi, b, tol_prob)
        for x, ex in x_obs:
            joint = joint_probability(mp, psi, evo, x_obs, b, x)
            cond = conditional_probability(mp, psi, evo, x_obs, x, b, tol_prob)
            via_state = float(np.trace(evo.heisenberg(ex) @ rho).real)
            rows.append(BayesRow(b, x, joint, cond, via_state))
    worst = max((r.discrepancy for r in rows), default=0.0)
    return BayesReport(passed=worst <= tol, max_discrepancy=worst, rows=tuple(rows),
                       skipped=tuple(skipped), tol=tol)


@dataclass(frozen=True, eq=False)
class InstrumentBranch:
    outcome: float
    kraus: tuple[np.ndarray, ...]
    choi: np.ndarray

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        out = np.zeros((self.choi.shape[0] // rho.shape[0],) * 2, dtype=complex)
        for k in self.kraus:
            out += k @ rho @ la.dagger(k)
        return out


@dataclass(frozen=True, eq=False)
class Instrument:
    """Outcome-indexed completely positive maps, each as Kraus operators and a Choi matrix.

    Choi matrices use the input-first convention
    ``J = sum_ij |i><j| (x) Phi(|i><j|)``.
    """

    branches: tuple[InstrumentBranch, ...]
    dim: int

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    @property
    def outcomes(self) -> tuple[float, ...]:
        return tuple(br.outcome for br in self.branches)

    def branch(self, a: float, tol: float = la.TOL_CLUSTER) -> InstrumentBranch:
        for br in self.branches:
            if abs(br.outcome - a) <= tol * max(1.0, abs(a)):
                return br
        raise MeasurementError(f"instrument has no outcome {a!r}")

    def apply(self, a: float, rho) -> np.ndarray:
        return self.branch(a).apply(rho)

    def completeness(self) -> np.ndarray:
        """``sum over outcomes and Kraus operators of K^dag K``; the identity when normalized."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for br in self.branches:
            for k in br.kraus:
                total += la.dagger(k) @ k
        return total

    def completeness_error(self) -> float:
        return la.operator_distance(self.completeness(), np.eye(self.dim))

    def is_completely_positive(self, tol: float = la.TOL_PSD) -> bool:
        return all(la.is_psd(br.choi, tol) for br in self.branches)


def branch_map(mp: MeasuringProcess, b: float, rho) -> np.ndarray:
    """``Tr_A[(I (x) E^B(b)) U (rho (x) |xi><xi|) U^dag]`` for an object operator ``rho``."""
    u = mp.interaction
    big = u @ la.tensor(rho, la.projector(mp.preparation)) @ la.dagger(u)
    return la.partial_trace_apparatus(mp.probe_projector(b) @ big, mp.dim_s, mp.dim_a)


def choi_matrix(mp: MeasuringProcess, b: float) -> np.ndarray:
    d = mp.dim_s
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            choi += la.tensor(unit, branch_map(mp, b, unit))
    return _hermitize(choi)


def kraus_from_choi(choi: np.ndarray, dim_in: int, tol_psd: float = la.TOL_PSD
                    ) -> tuple[np.ndarray, ...]:
    """Factor an input-first Choi matrix into Kraus operators.

    Eigenvalues at or below ``tol_psd`` are dropped.
    """
    dim_out = choi.shape[0] // dim_in
    w, v = np.linalg.eigh(_hermitize(choi))
    kraus = []
    for lam, vec in zip(w[::-1], v[:, ::-1].T):
        if lam <= tol_psd:
            break
        kraus.append(np.sqrt(lam) * vec.reshape(dim_in, dim_out).T)
    return tuple(kraus)


def extract_instrument(mp: MeasuringProcess, tol_psd: float = la.TOL_PSD) -> Instrument:
    branches = []
    for b in mp.probe.eigenvalues:
        choi = choi_matrix(mp, b)
        branches.append(InstrumentBranch(b, kraus_from_choi(choi, mp.dim_s, tol_psd), choi))
    return Instrument(tuple(branches), mp.dim_s)


JointDistribution = dict[tuple[float, float], float]


def consecutive_joint(mp1: MeasuringProcess, mp2: MeasuringProcess, psi) -> JointDistribution:
    """Joint outcome distribution of two measurements applied back to back.

    The composite is ``H_S (x) H_A1 (x) H_A2``. The first interaction couples
    S with A1, the second couples S with A2, and both probes are read at the
    end, so ``Pr(a, b) = ||(I (x) E1(a) (x) E2(b)) U2 U1 |psi xi1 xi2>||^2``.
    """
    if mp1.dim_s != mp2.dim_s:
        raise DimensionError(f"object dims differ: {mp1.dim_s} vs {mp2.dim_s}")
    ds, d1, d2 = mp1.dim_s, mp1.dim_a, mp2.dim_a
    psi = la.as_ket(psi)
    if psi.shape[0] != ds:
        raise DimensionError(f"state has dim {psi.shape[0]}, object has dim {ds}")

    state = np.einsum("s,a,b->sab", psi, mp1.preparation, mp2.preparation)
    u1 = mp1.interaction.reshape(ds, d1, ds, d1)
    u2 = mp2.interaction.reshape(ds, d2, ds, d2)
    state = np.einsum("SAsa,sab->SAb", u1, state)
    state = np.einsum("SBsb,sab->SaB", u2, state)

    dist: JointDistribution = {}
    for a, p1 in mp1.probe:
        for b, p2 in mp2.probe:
            branch = np.einsum("Aa,Bb,sab->sAB", p1, p2, state)
            dist[(a, b)] = _clamp(float(np.vdot(branch, branch).real))
    return dist


def consecutive_via_reduction(mp1: MeasuringProcess, mp2: MeasuringProcess, psi,
                              tol_prob: float = TOL_PROB) -> JointDistribution:
    """Same distribution as :func:`consecutive_joint`, through the reduced object state.

    ``Pr(a, b) = p1(a) * Tr[Phi2_b(rho1(a))]`` with ``rho1(a)`` the posterior
    after the first measurement and ``Phi2_b`` the second measurement's
    instrument branch.
    """
    if mp1.dim_s != mp2.dim_s:
        raise DimensionError(f"object dims differ: {mp1.dim_s} vs {mp2.dim_s}")
    p1 = outcome_distribution(mp1, psi)
    inst2 = extract_instrument(mp2)
    dist: JointDistribution = {}
    for a in mp1.probe.eigenvalues:
        if p1[a] <= tol_prob:
            for b in mp2.probe.eigenvalues:
                dist[(a, b)] = 0.0
            continue
        rho = posterior_state(mp1, psi, a, tol_prob)
        for br in inst2:
            dist[(a, br.outcome)] = _clamp(p1[a] * float(np.trace(br.apply(rho)).real))
    return dist


@dataclass(frozen=True)
class InstrumentCheck:
    choi_min_eigenvalue: float
    completeness_error: float
    posterior_error: float
    probability_error: float
    per_outcome: dict[float, float] = field(default_factory=dict)


def check_instrument(mp: MeasuringProcess, inst: Instrument, psi,
                     tol_prob: float = TOL_PROB) -> InstrumentCheck:
    """Compare the instrument's action on ``|psi><psi|`` with the direct formulas."""
    rho_in = la.projector(la.as_ket(psi))
    dist = outcome_distribution(mp, psi)
    post_err = prob_err = 0.0
    per_outcome = {}
    for br in inst:
        out = br.apply(rho_in)
        p = float(np.trace(out).real)
        prob_err = max(prob_err, abs(p - dist[br.outcome]))
        if dist[br.outcome] > tol_prob:
            err = la.operator_distance(out / p, posterior_state(mp, psi, br.outcome, tol_prob))
            per_outcome[br.outcome] = err
            post_err = max(post_err, err)
    min_eig = min(float(np.linalg.eigvalsh(br.choi).min()) for br in inst)
    return InstrumentCheck(min_eig, inst.completeness_error(), post_err, prob_err, per_outcome)

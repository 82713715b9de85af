"""Amplification of the probe to a macroscopic meter with infinite gain.

The meter observable is ``C = G^-1 B`` for a positive infinite gain symbol
``G``. The readout-stage dynamics is not given as a unitary. It is defined by
its Heisenberg action on ``psi (x) xi``, which multiplies the evolved probe by
``G``. All gain bookkeeping is exact Laurent-polynomial arithmetic, so
``G^-1 (G B) == B`` holds with no tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import DimensionError, MeasurementError
from .hyperscalar import (Context, GainSymbol, HyperOperator, HyperScalar, hs_invert,
                          hs_mul, hyper_commutator, is_infinite, is_infinitesimal,
                          make_context, standard_part)
from .linalg import Observable
from .model import (MeasuringProcess, OutcomeDistribution, TOL_PROB_SUM, check_transduction,
                    distribution_distance, heisenberg_probe, object_distribution,
                    outcome_distribution)

TOL_READOUT = 1e-9


@dataclass(frozen=True, eq=False)
class AmplifierSpec:
    """Gain symbols, the probe and an optional conjugate probe.

    ``micro_unit`` is the probe's unit; the macroscopic unit is
    ``gain * micro_unit`` (likewise for the conjugate pair).
    """

    probe: Observable
    gain: GainSymbol = GainSymbol("G")
    conjugate_gain: GainSymbol | None = None
    conjugate_probe: np.ndarray | None = None
    micro_unit: float = 1.0
    conjugate_micro_unit: float = 1.0

    def __post_init__(self):
        if self.conjugate_gain is not None and self.conjugate_gain == self.gain:
            raise MeasurementError(
                f"gain and conjugate gain must be distinct symbols, both are {self.gain.name!r}")
        if self.conjugate_probe is not None:
            bp = la.as_square(self.conjugate_probe)
            if bp.shape != self.probe.matrix.shape:
                raise DimensionError(
                    f"conjugate probe shape {bp.shape} != probe shape {self.probe.matrix.shape}")
            object.__setattr__(self, "conjugate_probe", bp)
        if self.micro_unit <= 0 or self.conjugate_micro_unit <= 0:
            raise ValueError("units must be positive")

    @property
    def context(self) -> Context:
        if self.conjugate_gain is None:
            return make_context(self.gain)
        return make_context(self.gain, self.conjugate_gain)

    def gain_value(self) -> HyperScalar:
        return HyperScalar.symbol(self.gain, self.context)

    def inverse_gain(self) -> HyperScalar:
        return hs_invert(self.gain_value())

    def macro_unit(self) -> HyperScalar:
        return self.gain_value() * self.micro_unit

    def conjugate_macro_unit(self) -> HyperScalar:
        if self.conjugate_gain is None:
            raise MeasurementError("no conjugate gain given")
        return HyperScalar.symbol(self.conjugate_gain, self.context) * self.conjugate_micro_unit

    def lift(self, m, scale: HyperScalar | None = None) -> HyperOperator:
        return HyperOperator.lift(m, self.context, scale)


@dataclass(frozen=True, eq=False)
class MeterObservable:
    """``C = G^-1 B`` with the probe's spectral projectors as outcome map.

    ``meter_values[k]`` is the (infinitesimal) eigenvalue ``G^-1 a_k`` of C;
    ``outcome_map[k]`` pairs the standard reading ``a_k`` with its projector.
    """

    matrix: HyperOperator
    meter_values: tuple[HyperScalar, ...]
    outcome_map: tuple[tuple[float, np.ndarray], ...]

    @property
    def standard_values(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.outcome_map)


def meter_observable(spec: AmplifierSpec) -> MeterObservable:
    inv = spec.inverse_gain()
    c = spec.lift(spec.probe.matrix, inv)
    g = spec.gain_value()
    values, outcome_map = [], []
    for a, proj in spec.probe:
        value = inv * a
        reading = standard_part(hs_mul(g, value)).real
        values.append(value)
        outcome_map.append((reading, proj))
    return MeterObservable(c, tuple(values), tuple(outcome_map))


def amplified_probe(spec: AmplifierSpec) -> HyperOperator:
    """``G B``: the probe after infinite amplification."""
    return spec.lift(spec.probe.matrix, spec.gain_value())


def readout_operator(mp: MeasuringProcess, spec: AmplifierSpec) -> HyperOperator:
    """Heisenberg meter at readout on the composite: ``G^-1 (G B(t+dt))``."""
    evolved = spec.lift(heisenberg_probe(mp))
    amplified = evolved.scale(spec.gain_value())
    return amplified.scale(spec.inverse_gain())


@dataclass(frozen=True)
class ReadoutReport:
    readout_exact: bool
    meter_distribution: OutcomeDistribution
    probe_distribution: OutcomeDistribution
    object_distribution: OutcomeDistribution
    meter_vs_probe: float
    meter_vs_object: float
    transduction_holds: bool
    tol: float = TOL_READOUT

    @property
    def meter_matches_probe(self) -> bool:
        return self.meter_vs_probe <= self.tol

    @property
    def meter_matches_object(self) -> bool:
        return self.meter_vs_object <= self.tol

    @property
    def passed(self) -> bool:
        return self.readout_exact and self.meter_matches_probe and self.meter_matches_object


def meter_distribution(mp: MeasuringProcess, spec: AmplifierSpec, psi) -> OutcomeDistribution:
    """Readout probabilities of the meter's standard values.

    Uses the standard part of :func:`readout_operator` as the composite
    observable read at the end, decomposes it spectrally and evaluates each
    reading's projector on ``psi (x) xi``.
    """
    meter = meter_observable(spec)
    readout = la.spectral_decompose(readout_operator(mp, spec).standard_part(),
                                    spec.probe.tol_cluster)
    state = mp.input_state(psi)
    dist = {}
    for reading in meter.standard_values:
        k = readout.find(reading)
        if k is None:
            dist[reading] = 0.0
            continue
        proj = readout.outcomes[k][1]
        dist[reading] = min(1.0, max(0.0, float(np.vdot(state, proj @ state).real)))
    total = sum(dist.values())
    if abs(total - 1) > TOL_PROB_SUM:
        raise ArithmeticError(f"meter distribution sums to {total!r}")
    return dist


def readout_equivalence(mp: MeasuringProcess, spec: AmplifierSpec, psi,
                        tol: float = TOL_READOUT) -> ReadoutReport:
    """Check the readout chain: meter at readout == probe just after == measured.

    The first check is exact: ``G^-1 (G B(t+dt))`` must equal ``B(t+dt)``
    entry for entry. The distribution comparisons use ``tol``. Agreement with
    the measured observable is expected only when the model transduces.
    """
    if not np.array_equal(spec.probe.matrix, mp.probe.matrix):
        raise MeasurementError("amplifier probe differs from the measuring process probe")
    exact = readout_operator(mp, spec) == spec.lift(heisenberg_probe(mp))
    meter = meter_distribution(mp, spec, psi)
    probe = outcome_distribution(mp, psi)
    obj = object_distribution(mp, psi)
    return ReadoutReport(
        readout_exact=exact,
        meter_distribution=meter,
        probe_distribution=probe,
        object_distribution=obj,
        meter_vs_probe=distribution_distance(meter, probe),
        meter_vs_object=distribution_distance(meter, obj),
        transduction_holds=check_transduction(mp).holds,
        tol=tol,
    )


@dataclass(frozen=True)
class CommutatorReport:
    commutator: HyperOperator
    expected: HyperOperator
    scaling_exact: bool
    all_infinitesimal: bool
    standard_part_zero: bool
    supplied: bool

    @property
    def passed(self) -> bool:
        return self.scaling_exact and self.all_infinitesimal and self.standard_part_zero


def macro_commutativity(spec: AmplifierSpec, supplied_commutator=None) -> CommutatorReport:
    """Commutator of the meter ``C = G^-1 B`` with ``C' = G'^-1 B'``.

    Without ``supplied_commutator`` the commutator is computed over
    hyperscalars from the actual ``B`` and ``B'`` and compared exactly with
    ``G^-1 G'^-1 [B, B']``. A supplied ``K`` stands in for ``[B, B']`` when no
    finite matrices realize it (``-i hbar I`` is the usual case); the result is
    then ``G^-1 G'^-1 K``, built with the same hyperscalar product.
    """
    if spec.conjugate_gain is None:
        raise MeasurementError("macro commutativity needs a conjugate gain symbol")
    ctx = spec.context
    inv_g = spec.inverse_gain()
    inv_gp = hs_invert(HyperScalar.symbol(spec.conjugate_gain, ctx))
    both = hs_mul(inv_g, inv_gp)

    if supplied_commutator is None:
        if spec.conjugate_probe is None:
            raise MeasurementError("macro commutativity needs a conjugate probe or a commutator")
        c = spec.lift(spec.probe.matrix, inv_g)
        cp = spec.lift(spec.conjugate_probe, inv_gp)
        result = hyper_commutator(c, cp)
        k = la.commutator(spec.probe.matrix, spec.conjugate_probe)
    else:
        k = la.as_square(supplied_commutator)
        result = spec.lift(k).scale(both)
    expected = spec.lift(k, both)
    finite_k = bool(np.all(np.isfinite(k)))
    return CommutatorReport(
        commutator=result,
        expected=expected,
        scaling_exact=result == expected,
        all_infinitesimal=finite_k and result.all_entries(is_infinitesimal),
        standard_part_zero=not np.any(result.standard_part()),
        supplied=supplied_commutator is not None,
    )


def amplified_is_infinite(spec: AmplifierSpec) -> bool:
    """Every nonzero entry of ``G B`` is infinite."""
    return amplified_probe(spec).all_entries(lambda h: h.is_zero() or is_infinite(h))

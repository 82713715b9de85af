import numpy as np
import pytest

from measproc import linalg as la
from measproc.amplifier import (AmplifierSpec, amplified_is_infinite, amplified_probe,
                                macro_commutativity, meter_distribution, meter_observable,
                                readout_equivalence, readout_operator)
from measproc.catalog import SIGMA_X, SIGMA_Z
from measproc.errors import MeasurementError
from measproc.hyperscalar import (GainSymbol, HyperOperator, HyperScalar, hs_invert,
                                  is_infinite, is_infinitesimal, standard_part)
from measproc.model import MeasuringProcess, born_distribution, outcome_distribution

from conftest import PLUS, ZERO
from randmodels import gaussian_integer_matrix, random_hermitian, random_ket, random_transducer

G, GP = GainSymbol("G"), GainSymbol("G'")


def spec_for(matrix, **kw):
    return AmplifierSpec(probe=la.spectral_decompose(matrix), **kw)


def test_meter_observable_sigmaz():
    spec = spec_for(SIGMA_Z)
    meter = meter_observable(spec)
    ginv = spec.inverse_gain()
    assert meter.matrix == HyperOperator.lift(SIGMA_Z, spec.context, ginv)
    assert meter.standard_values == (1.0, -1.0)
    assert meter.meter_values == (ginv * 1.0, ginv * -1.0)
    assert all(is_infinitesimal(v) for v in meter.meter_values)


def test_meter_observable_zero_and_scalar():
    assert meter_observable(spec_for(np.zeros((2, 2)))).matrix.is_zero()
    spec = spec_for(3 * np.eye(2))
    meter = meter_observable(spec)
    assert meter.matrix.all_entries(is_infinitesimal)
    assert meter.standard_values == pytest.approx((3.0,))
    assert meter.matrix[0, 0] == 3 * spec.inverse_gain()


def test_standard_part_of_rescaled_meter_recovers_probe_eigenvalues(rng):
    spec = spec_for(random_hermitian(rng, 4))
    g = spec.gain_value()
    for value, (a, _) in zip(meter_observable(spec).meter_values, spec.probe):
        assert standard_part(g * value).real == a


def test_amplified_probe():
    spec = spec_for(SIGMA_Z)
    amp = amplified_probe(spec)
    g = spec.gain_value()
    assert amp[0, 0] == g and amp[1, 1] == -1 * g and amp[0, 1].is_zero()
    assert amplified_is_infinite(spec)
    assert is_infinite(amp[0, 0])
    assert amp.scale(spec.inverse_gain()) == HyperOperator.lift(SIGMA_Z, spec.context)


def test_exact_cancellation_random(rng):
    spec = spec_for(SIGMA_Z, conjugate_gain=GP)
    for _ in range(10):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        op = spec.lift(m)
        assert op.scale(spec.gain_value()).scale(spec.inverse_gain()) == op


def test_units():
    spec = spec_for(SIGMA_Z, micro_unit=2.0, conjugate_gain=GP, conjugate_micro_unit=0.5)
    assert spec.macro_unit() == HyperScalar.monomial(2.0, spec.context, G=1)
    assert spec.conjugate_macro_unit() == HyperScalar.monomial(0.5, spec.context, **{"G'": 1})
    assert is_infinite(spec.macro_unit())


def test_spec_rejects_same_symbols():
    with pytest.raises(MeasurementError):
        spec_for(SIGMA_Z, conjugate_gain=GainSymbol("G"))


def test_readout_cnot_plus(cnot):
    rep = readout_equivalence(cnot, AmplifierSpec(cnot.probe), PLUS)
    assert rep.readout_exact
    assert rep.meter_distribution == pytest.approx({1.0: 0.5, -1.0: 0.5}, abs=1e-12)
    assert rep.meter_matches_object and rep.passed


def test_readout_cnot_eigenstate(cnot):
    rep = readout_equivalence(cnot, AmplifierSpec(cnot.probe), ZERO)
    assert rep.meter_distribution[1.0] == pytest.approx(1.0, abs=1e-12)


def test_readout_failing_transduction_separates_verdicts(rng):
    mp = MeasuringProcess.from_matrices(SIGMA_Z, PLUS, np.eye(4), SIGMA_Z)
    psi = np.array([np.sqrt(0.9), np.sqrt(0.1)])
    rep = readout_equivalence(mp, AmplifierSpec(mp.probe), psi)
    assert rep.readout_exact
    assert rep.meter_matches_probe
    assert not rep.transduction_holds
    # object-side Born oracle: 0.9 / 0.1, while the untouched apparatus reads 0.5 / 0.5
    oracle = born_distribution(la.spectral_decompose(SIGMA_Z), psi)
    assert oracle == pytest.approx({1.0: 0.9, -1.0: 0.1})
    assert rep.meter_vs_object == pytest.approx(0.4, abs=1e-12)
    assert not rep.meter_matches_object


def test_readout_requires_matching_probe(cnot):
    with pytest.raises(MeasurementError):
        readout_equivalence(cnot, spec_for(SIGMA_X), PLUS)


def test_meter_distribution_random_transducers(rng):
    for d in (2, 3):
        mp = random_transducer(rng, d)
        spec = AmplifierSpec(mp.probe)
        assert readout_operator(mp, spec).standard_part().shape == (d * d, d * d)
        for _ in range(10):
            psi = random_ket(rng, d)
            rep = readout_equivalence(mp, spec, psi)
            assert rep.passed
            meter = rep.meter_distribution
            probe = outcome_distribution(mp, psi)
            assert max(meter, key=meter.get) == max(probe, key=probe.get)


def test_macro_commutativity_canonical():
    spec = spec_for(SIGMA_Z, conjugate_gain=GP)
    hbar = 1.0
    rep = macro_commutativity(spec, -1j * hbar * np.eye(2))
    assert rep.supplied and rep.passed
    expected = HyperScalar.monomial(-1j * hbar, spec.context, **{"G": -1, "G'": -1})
    assert rep.commutator[0, 0] == expected
    assert rep.commutator[0, 1].is_zero()
    assert rep.commutator.all_entries(is_infinitesimal)


def test_macro_commutativity_self():
    spec = spec_for(SIGMA_Z, conjugate_gain=GP, conjugate_probe=SIGMA_Z)
    rep = macro_commutativity(spec)
    assert rep.commutator.is_zero() and rep.passed


def test_macro_commutativity_random_pairs(rng):
    for _ in range(10):
        b = gaussian_integer_matrix(rng, 3)
        b = b + b.conj().T
        bp = gaussian_integer_matrix(rng, 3)
        spec = spec_for(b, conjugate_gain=GP, conjugate_probe=bp)
        rep = macro_commutativity(spec)
        assert rep.scaling_exact and rep.all_infinitesimal
        both = hs_invert(spec.gain_value()) * hs_invert(HyperScalar.symbol(GP, spec.context))
        assert rep.commutator == spec.lift(la.commutator(b, bp), both)


def test_macro_commutativity_needs_conjugate_data():
    with pytest.raises(MeasurementError):
        macro_commutativity(spec_for(SIGMA_Z))
    with pytest.raises(MeasurementError):
        macro_commutativity(spec_for(SIGMA_Z, conjugate_gain=GP))


def test_meter_distribution_sums_to_one(nonproj, rng):
    spec = AmplifierSpec(nonproj.probe)
    for _ in range(5):
        dist = meter_distribution(nonproj, spec, random_ket(rng, 2))
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)

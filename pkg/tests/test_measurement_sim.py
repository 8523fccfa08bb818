import numpy as np
import pytest

import oracles
from entsplit.discrimination import StateSet, check_property1
from entsplit.errors import ContractViolation, NormalizationError, ZeroProbabilityError
from entsplit.measurement_sim import (
    ProjectiveMeasurement,
    born_probabilities,
    certify_property2,
    measure,
    sample_product_states,
)
from entsplit.product_search import SearchConfig
from entsplit.splitting import FIXTURE_IDS, Splitting, fixture, orthonormalize
from entsplit.tensor_core import Bipartition, Ket, TensorSpace, all_bipartitions, ket_from_terms, second_schmidt

CFG = SearchConfig()
CUT = Bipartition.of([0], 2)
S = 1 / np.sqrt(2)


def meas_of(fid: str) -> ProjectiveMeasurement:
    return ProjectiveMeasurement.from_splitting(fixture(fid))


def mode_of(fid: str) -> str:
    return "bipartite" if fixture(fid).space.parties == 2 else "genuine"


def test_from_splitting_rejects_rank1_and_incomplete():
    sp = TensorSpace((2, 2))
    e = np.eye(4)
    rank1 = Splitting(sp, tuple(orthonormalize(sp, [e[k]]) for k in range(4)))
    with pytest.raises(ContractViolation):
        ProjectiveMeasurement.from_splitting(rank1)
    partial = Splitting(sp, (orthonormalize(sp, [e[0], e[1]]),))
    with pytest.raises(ContractViolation):
        ProjectiveMeasurement.from_splitting(partial)


def test_sample_product_states_examples():
    sp = TensorSpace((2, 3))
    a, b = sample_product_states(sp, 3, seed=7), sample_product_states(sp, 3, seed=7)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.amplitudes, y.amplitudes)
    sp4 = TensorSpace((2, 2, 2, 2))
    for k in sample_product_states(sp4, 200, seed=1):
        assert k.is_normalized
        for cut in all_bipartitions(4):
            assert second_schmidt(k.amplitudes, sp4.dims, cut) <= 1e-10


@pytest.mark.parametrize("rank_idx", [0, 1])
def test_haar_moment(rank_idx):
    # DERIVED: E <phi|P|phi> over Haar product states equals Tr P / D; Monte Carlo within 3 standard errors
    sub = fixture("RHOPRIME_2x3").subspaces[rank_idx]
    kets = sample_product_states(sub.space, 10_000, seed=99)
    vals = np.array([float(np.real(k.amplitudes.conj() @ sub.projector @ k.amplitudes)) for k in kets])
    mean, se = vals.mean(), vals.std(ddof=1) / np.sqrt(len(vals))
    assert abs(mean - sub.dim / 6) <= 3 * se
    # the oracle's own sampler agrees as well
    m2, se2 = oracles.haar_product_mean(sub.projector, (2, 3), 10_000, seed=5)
    assert abs(m2 - sub.dim / 6) <= 3 * se2


def test_measure_ex1_examples():
    m = meas_of("EX1_2x2")
    sp = m.space
    rec = measure(m, ket_from_terms(sp, {"01": 1}), outcome=0)
    assert rec.probability == pytest.approx(1.0)
    np.testing.assert_allclose(np.abs(rec.post_state.amplitudes), [0, 1, 0, 0], atol=1e-12)
    assert rec.min_entanglement <= 1e-9
    with pytest.raises(ZeroProbabilityError):
        measure(m, ket_from_terms(sp, {"01": 1}), outcome=1)
    # DERIVED: |00> = (Phi+ + Phi-)/sqrt2 splits evenly onto the two supports
    phi_plus, phi_minus = np.array([S, 0, 0, S]), np.array([S, 0, 0, -S])
    for k, target in enumerate([phi_plus, phi_minus]):
        rec = measure(m, ket_from_terms(sp, {"00": 1}), outcome=k)
        assert rec.probability == pytest.approx(0.5, abs=1e-12)
        assert abs(np.vdot(target, rec.post_state.amplitudes)) == pytest.approx(1.0, abs=1e-12)
        assert rec.schmidt_second[CUT] == pytest.approx(S, abs=1e-12)


def test_measure_ex2_on_00():
    m = meas_of("EX2_2x3")
    psi = ket_from_terms(m.space, {"00": 1})
    for i, p in enumerate(born_probabilities(m, psi.amplitudes)[0]):
        if p > 1e-9:
            assert measure(m, psi, outcome=i).min_entanglement > 1e-6


def test_measure_random_outcome_and_input_checks():
    m = meas_of("EX2_2x3")
    psi = sample_product_states(m.space, 1, seed=3)[0]
    rng = np.random.default_rng(0)
    rec = measure(m, psi, rng=rng)
    assert 0 <= rec.outcome < 3 and rec.probability > 0
    with pytest.raises(NormalizationError):
        measure(m, Ket(m.space, 2 * psi.amplitudes))


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_born_and_support_membership(fid):
    m = meas_of(fid)
    for psi in sample_product_states(m.space, 100, seed=2):
        probs = born_probabilities(m, psi.amplitudes)[0]
        assert np.all(probs >= -1e-15) and abs(probs.sum() - 1) <= 1e-9
        for i, p in enumerate(probs):
            if p > 1e-9:
                post = measure(m, psi, outcome=i).post_state.amplitudes
                assert float(np.real(post.conj() @ m.projectors[i].matrix @ post)) >= 1 - 1e-9


def test_certify_examples():
    rep = certify_property2(meas_of("EX2_2x3"), CFG, "bipartite", samples=10_000)
    assert rep.holds and rep.empirical.counterexample is None
    assert rep.empirical.max_born_error <= 1e-9
    rep = certify_property2(meas_of("EX1_2x2"), CFG, "bipartite", samples=0)
    assert not rep.holds
    cx = rep.empirical.counterexample.amplitudes
    assert np.flatnonzero(np.abs(cx) > 0).tolist() in ([1], [2])
    rep = certify_property2(meas_of("EX6_4QUBIT"), CFG, "genuine", samples=300)
    assert rep.holds and rep.empirical.min_entanglement > 1e-6


def test_counterexample_reproduces():
    m = meas_of("EX1_2x2")
    rep = certify_property2(m, CFG, "bipartite", samples=1000)
    psi = rep.empirical.counterexample
    rec = measure(m, psi, outcome=rep.empirical.counterexample_outcome)
    assert rec.min_entanglement <= 1e-9


def test_mode_preconditions():
    with pytest.raises(ContractViolation):
        certify_property2(meas_of("EX2_2x3"), CFG, "genuine")
    with pytest.raises(ContractViolation):
        certify_property2(meas_of("EX6_4QUBIT"), CFG, "bipartite")
    with pytest.raises(ContractViolation):
        certify_property2(meas_of("EX2_2x3"), CFG, "sideways")


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_structural_empirical_and_property1_agree(fid):
    sp = fixture(fid)
    rep = certify_property2(ProjectiveMeasurement.from_splitting(sp), CFG, mode_of(fid), samples=1000)
    if rep.holds:
        assert rep.empirical.counterexample is None
    genuine = sp.space.parties > 2
    assert check_property1(StateSet.from_splitting(sp), CFG, genuine=genuine).holds is rep.holds
    if fid == "EX1_2x2":
        assert rep.empirical.counterexample is not None

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcsqueeze.errors import CorruptStateError, InvariantViolationError
from jcsqueeze.jc_evolution import QubitDensityMatrix, QubitSpec, initial_joint_state, reduce_to_qubit
from jcsqueeze.field_states import vacuum
from jcsqueeze.squeezing_metrics import (
    check_entropic_bound,
    entropy_squeeze_factors,
    pauli_expectations,
    pauli_probabilities,
    sample_at,
    shannon_entropies,
    squeezing_table,
    variance_squeeze_factors,
)

LN2 = math.log(2)
SQRT2 = math.sqrt(2)
SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

EXCITED = QubitDensityMatrix(1.0, 0.0)
MIXED = QubitDensityMatrix(0.5, 0.0)
SIGMA_Y_EIGEN = QubitDensityMatrix(0.5, 0.5j)


@st.composite
def bloch_states(draw):
    """Random valid qubit states from a Bloch vector in the closed unit ball."""
    r = draw(st.floats(0.0, 1.0))
    cos_t = draw(st.floats(-1.0, 1.0))
    az = draw(st.floats(0.0, 2 * math.pi))
    sin_t = math.sqrt(max(0.0, 1 - cos_t * cos_t))
    x, y, z = r * sin_t * math.cos(az), r * sin_t * math.sin(az), r * cos_t
    return QubitDensityMatrix(0.5 * (1 + z), 0.5 * (x - 1j * y))


@st.composite
def near_sigma_y_eigenstates(draw):
    eps = 10.0 ** draw(st.floats(-12.0, -1.0))
    y = (1 - eps) * draw(st.sampled_from([-1.0, 1.0]))
    rest = math.sqrt(1 - y * y) * draw(st.floats(0.0, 1.0))
    az = draw(st.floats(0.0, 2 * math.pi))
    return QubitDensityMatrix(0.5 * (1 + rest * math.sin(az)), 0.5 * (rest * math.cos(az) - 1j * y))


def eigen_entropy(rho, axis):
    """Shannon entropy from projections on numerically diagonalized Pauli eigenvectors."""
    _, vecs = np.linalg.eigh(SIGMA[axis])
    probs = [float(np.real(v.conj() @ rho.matrix() @ v)) for v in vecs.T]
    return -sum(p * math.log(p) for p in probs if p > 0)


class TestProbabilities:
    def test_excited(self):
        p = pauli_probabilities(EXCITED)
        assert (p.x1, p.x2, p.y1, p.y2, p.z1, p.z2) == (0.5, 0.5, 0.5, 0.5, 0.0, 1.0)

    def test_sigma_y_eigenstate(self):
        p = pauli_probabilities(SIGMA_Y_EIGEN)
        assert p.y1 == 0.0 and p.y2 == 1.0

    def test_maximally_mixed(self):
        p = pauli_probabilities(MIXED)
        assert {p.x1, p.x2, p.y1, p.y2, p.z1, p.z2} == {0.5}

    def test_tiny_excursion_is_clamped(self):
        p = pauli_probabilities(QubitDensityMatrix(1.0 + 5e-11, 0.0))
        assert p.z2 == 1.0 and p.z1 == 0.0

    def test_large_excursion_is_an_error(self):
        with pytest.raises(CorruptStateError):
            pauli_probabilities(QubitDensityMatrix(0.5, 0.6))
        p = pauli_probabilities(QubitDensityMatrix(0.5, 0.6), strict=False)
        assert math.isnan(p.x2)


class TestEntropies:
    @pytest.mark.parametrize("rho, expected", [
        (EXCITED, (LN2, LN2, 0.0)),
        (SIGMA_Y_EIGEN, (LN2, 0.0, LN2)),
        (MIXED, (LN2, LN2, LN2)),
    ])
    def test_examples(self, rho, expected):
        np.testing.assert_allclose(shannon_entropies(rho), expected, atol=1e-15)

    @given(bloch_states())
    def test_against_eigenvector_projections(self, rho):
        h = shannon_entropies(rho)
        for value, axis in zip(h, "xyz"):
            assert value == pytest.approx(eigen_entropy(rho, axis), abs=1e-12)

    @given(bloch_states())
    def test_range(self, rho):
        assert all(0.0 <= h <= LN2 + 1e-12 for h in shannon_entropies(rho))

    @given(bloch_states())
    def test_invariant_under_coherence_sign_flip(self, rho):
        flipped = QubitDensityMatrix(rho.rho_ee, -rho.rho_eg)
        np.testing.assert_allclose(shannon_entropies(rho), shannon_entropies(flipped), atol=1e-15)

    def test_works_on_arrays(self):
        rho = QubitDensityMatrix(np.array([1.0, 0.5]), np.array([0.0, 0.5j]))
        h_x, h_y, h_z = shannon_entropies(rho)
        np.testing.assert_allclose(h_y, [LN2, 0.0], atol=1e-15)


class TestFactors:
    def test_excited_is_marginal(self):
        assert entropy_squeeze_factors(LN2, LN2, 0.0) == pytest.approx((0.0, 0.0), abs=1e-15)

    def test_sigma_y_optimum(self):
        _, e_y = entropy_squeeze_factors(LN2, 0.0, LN2)
        assert e_y == pytest.approx(1 - SQRT2, abs=1e-15)
        assert e_y == pytest.approx(-0.41421, abs=5e-6)

    def test_mixed(self):
        e = entropy_squeeze_factors(LN2, LN2, LN2)
        assert e == pytest.approx((2 - SQRT2, 2 - SQRT2), abs=1e-15)
        assert e[0] == pytest.approx(0.58579, abs=5e-6)

    def test_variance_examples(self):
        assert variance_squeeze_factors(EXCITED) == pytest.approx((1 - math.sqrt(0.5),) * 2, abs=1e-15)
        assert variance_squeeze_factors(EXCITED)[0] == pytest.approx(0.29289, abs=5e-6)
        assert variance_squeeze_factors(MIXED) == pytest.approx((1.0, 1.0), abs=1e-15)
        assert variance_squeeze_factors(SIGMA_Y_EIGEN)[1] == pytest.approx(0.0, abs=1e-15)

    @given(bloch_states())
    def test_expectations_match_traces(self, rho):
        expected = [np.real(np.trace(rho.matrix() @ SIGMA[a])) for a in "xyz"]
        np.testing.assert_allclose(pauli_expectations(rho), expected, atol=1e-15)

    @given(bloch_states())
    def test_factor_range(self, rho):
        e_x, e_y = entropy_squeeze_factors(*shannon_entropies(rho))
        for e in (e_x, e_y):
            assert 1 - SQRT2 - 1e-12 <= e <= 2 - SQRT2 + 1e-12

    @given(st.one_of(bloch_states(), near_sigma_y_eigenstates()))
    def test_optimum_only_in_sigma_y_eigenstate(self, rho):
        # Distance above 1 - sqrt 2 controls the distance from a sigma_y eigenstate.
        _, e_y = entropy_squeeze_factors(*shannon_entropies(rho))
        _, exp_y, _ = pauli_expectations(rho)
        assert e_y - (1 - SQRT2) >= 0.4 * (1 - abs(exp_y)) - 1e-12

    def test_optimum_attained(self):
        _, e_y = entropy_squeeze_factors(*shannon_entropies(QubitDensityMatrix(0.5, -0.5j)))
        assert e_y == pytest.approx(1 - SQRT2, abs=1e-15)

    def test_variance_blind_where_entropy_sees_squeezing(self):
        rho = reduce_to_qubit(initial_joint_state(QubitSpec(math.pi / 2, math.pi / 2), vacuum(3)))
        s = sample_at(rho, 0.0)
        # sqrt(|<sigma_z>|/2) turns a 1e-16 rounding residue in rho_ee into ~1e-8
        assert s.v_y == pytest.approx(0.0, abs=1e-7)
        assert s.e_y < 0


class TestBound:
    @pytest.mark.parametrize("h, slack", [
        ((LN2, 0.0, LN2), 0.0),
        ((LN2, LN2, LN2), LN2),
        ((LN2, LN2, 0.0), 0.0),
    ])
    def test_examples(self, h, slack):
        assert check_entropic_bound(*h) == pytest.approx(slack, abs=1e-15)

    def test_violation_raises(self):
        with pytest.raises(InvariantViolationError):
            check_entropic_bound(0.1, 0.1, 0.1)

    @given(bloch_states())
    def test_holds_for_every_state(self, rho):
        assert check_entropic_bound(*shannon_entropies(rho)) >= -1e-12


class TestSample:
    def test_excited_vacuum(self):
        s = sample_at(reduce_to_qubit(initial_joint_state(QubitSpec(0.0), vacuum(2))), 0.0)
        assert s.e_x == pytest.approx(0.0, abs=1e-15)
        assert s.e_y == pytest.approx(0.0, abs=1e-15)
        assert s.entropy_sum_slack == pytest.approx(0.0, abs=1e-15)

    def test_coherent_qubit(self):
        s = sample_at(reduce_to_qubit(initial_joint_state(QubitSpec(math.pi / 2, math.pi / 2), vacuum(2))), 0.0)
        assert s.e_y == pytest.approx(1 - SQRT2, abs=1e-12)
        assert s.dh_y == pytest.approx(1.0, abs=1e-12)

    def test_fig1_at_tau_2(self):
        from jcsqueeze.scenario_runner import PRESETS, run_time_series

        cfg = PRESETS["fig1_caption"].with_(tau_start=0.0, tau_end=2.0, n_points=2)
        s = run_time_series(cfg).samples[-1]
        assert s.tau == 2.0
        assert s.entropy_sum_slack >= -1e-12
        # frozen from a dense expm + partial-trace computation (n_max = 90)
        assert s.rho_ee == pytest.approx(0.48751409736984, abs=1e-10)
        assert s.e_x == pytest.approx(0.37108475691408, abs=1e-10)
        assert s.e_y == pytest.approx(0.33704696019938, abs=1e-10)

    def test_table_shapes(self):
        t = squeezing_table(QubitDensityMatrix(np.full(4, 0.5), np.zeros(4)), np.arange(4.0))
        assert all(v.shape == (4,) for v in t.values())

import numpy as np
import pytest
from numpy.testing import assert_allclose

from entkink import entmeas
from entkink.entmeas import (
    Method,
    WitnessOperator,
    is_ppt,
    negativity,
    optimal_witness,
    pt_min_eigenvalue,
    random_robustness_bisect,
    random_robustness_closed,
    regime_witness,
    witness_value,
)
from entkink.matlib import DimensionError, kron, partial_transpose
from entkink.qstate import DensityMatrix, bell, bell_diagonal, family_rho, maximally_mixed

from oracles import PHI_P, PSI_M, PSI_P, projector_witness, ginibre_state, lapack_pt_min, proj, random_ket

Q_GRID = np.linspace(0, 1, 41)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def random_states(rng, n):
    return [DensityMatrix(ginibre_state(rng)) for _ in range(n)]


def random_entangled(rng, n):
    out = []
    while len(out) < n:
        m = ginibre_state(rng)
        if lapack_pt_min(m) < -1e-3:
            out.append(DensityMatrix(m))
    return out


class TestPtMinEigenvalue:
    def test_maximally_mixed(self):
        assert pt_min_eigenvalue(maximally_mixed(4)) == pytest.approx(0.25)

    def test_bell(self):
        assert pt_min_eigenvalue(family_rho(0)) == pytest.approx(-0.5, abs=1e-15)

    def test_family_closed_form(self):
        for q in Q_GRID:
            assert pt_min_eigenvalue(family_rho(q)) == pytest.approx(-abs(1 - 2 * q) / 2, abs=1e-15)

    def test_against_lapack(self, rng):
        for rho in random_states(rng, 200):
            assert pt_min_eigenvalue(rho) == pytest.approx(lapack_pt_min(rho.matrix), abs=1e-13)

    def test_rejects_other_dims(self):
        with pytest.raises(DimensionError):
            pt_min_eigenvalue(maximally_mixed(4, dims=(4,)))
        with pytest.raises(DimensionError):
            negativity(maximally_mixed(6, dims=(2, 3)))


class TestIsPpt:
    def test_cases(self):
        assert is_ppt(maximally_mixed(4))
        assert not is_ppt(family_rho(0))
        assert is_ppt(family_rho(0.5))

    def test_product_states(self, rng):
        for _ in range(100):
            a, b = random_ket(rng), random_ket(rng)
            assert is_ppt(DensityMatrix(proj(np.kron(a, b))))

    def test_octahedron(self, rng):
        for _ in range(1000):
            p = rng.dirichlet(np.ones(4))
            assert is_ppt(bell_diagonal(p)) == (p.max() <= 0.5 + 1e-12)

    def test_octahedron_faces(self):
        for p in ([0.5, 0.5, 0, 0], [0.5, 0.25, 0.25, 0], [0.5, 0, 0, 0.5]):
            assert is_ppt(bell_diagonal(p))
        assert not is_ppt(bell_diagonal([0.5 + 1e-6, 0.5 - 1e-6, 0, 0]))


class TestNegativity:
    def test_family(self):
        for q in Q_GRID:
            assert negativity(family_rho(q)) == pytest.approx(abs(1 - 2 * q), abs=1e-14)

    def test_separable(self):
        assert negativity(maximally_mixed(4)) == 0.0
        assert negativity(family_rho(0.5)) == 0.0

    def test_quarter(self):
        assert negativity(family_rho(0.25)) == pytest.approx(0.5, abs=1e-15)

    def test_standard_normalization(self):
        assert negativity(bell("psi-").density(), normalization="standard") == pytest.approx(0.5)
        with pytest.raises(ValueError):
            negativity(family_rho(0), normalization="log")


class TestRobustness:
    def test_closed_bell(self):
        r = random_robustness_closed(family_rho(0))
        assert r.value == pytest.approx(2, abs=1e-14)
        assert r.method is Method.CLOSED_FORM
        # Werner threshold: (|Phi+><Phi+| + 2 I/4)/3 has singlet-type weight 1/2.
        assert_allclose(r.boundary_state.matrix, (proj(PHI_P) + 0.5 * np.eye(4)) / 3, atol=1e-14)

    def test_closed_separable(self):
        r = random_robustness_closed(maximally_mixed(4))
        assert r.value == 0.0
        assert_allclose(r.boundary_state.matrix, np.eye(4) / 4)

    def test_closed_quarter(self):
        assert random_robustness_closed(family_rho(0.25)).value == pytest.approx(1, abs=1e-14)

    def test_bisect_bell(self):
        r = random_robustness_bisect(family_rho(0), tol=1e-8)
        assert abs(r.value - 2) <= 1e-8
        assert r.method is Method.BISECTION

    def test_bisect_separable(self):
        assert random_robustness_bisect(maximally_mixed(4)).value == 0.0

    def test_bisect_quarter(self):
        assert random_robustness_bisect(family_rho(0.25), tol=1e-10).value == pytest.approx(1, abs=1e-9)

    def test_bisect_matches_closed(self, rng):
        tol = 1e-9
        for rho in random_states(rng, 1000):
            closed = random_robustness_closed(rho).value
            assert abs(random_robustness_bisect(rho, tol).value - closed) < 10 * tol

    def test_identity_with_negativity(self, rng):
        for rho in random_entangled(rng, 300):
            assert abs(2 * negativity(rho) - random_robustness_bisect(rho, 1e-9).value) < 1e-7

    def test_boundary_certified(self, rng):
        for rho in random_entangled(rng, 100) + [family_rho(q) for q in Q_GRID]:
            for result in (random_robustness_closed(rho), random_robustness_bisect(rho, 1e-10)):
                lam = pt_min_eigenvalue(result.boundary_state)
                assert -1e-8 <= lam <= 1e-6

    def test_bisect_bad_tol(self):
        with pytest.raises(ValueError):
            random_robustness_bisect(family_rho(0), tol=0)

    def test_bracket_guard(self, monkeypatch):
        monkeypatch.setattr(entmeas, "BRACKET_LIMIT", 1.0)
        with pytest.raises(RuntimeError):
            random_robustness_bisect(family_rho(0))


class TestWitness:
    def test_regimes(self):
        low, high = regime_witness("low"), regime_witness("high")
        assert_allclose(low.matrix, np.eye(4) - 2 * proj(PHI_P), atol=1e-15)
        assert_allclose(high.matrix, np.eye(4) - 2 * proj(PSI_P), atol=1e-15)
        assert low.trace == pytest.approx(2) and high.trace == pytest.approx(2)

    @pytest.mark.parametrize("q", [0.0, 0.1, 0.3, 0.49])
    def test_optimal_low(self, q):
        assert_allclose(optimal_witness(family_rho(q)).matrix, regime_witness("low").matrix, atol=1e-12)

    @pytest.mark.parametrize("q", [0.51, 0.7, 0.9, 1.0])
    def test_optimal_high(self, q):
        assert_allclose(optimal_witness(family_rho(q)).matrix, regime_witness("high").matrix, atol=1e-12)

    def test_singlet_construction(self):
        pt = partial_transpose(proj(PSI_M))
        assert_allclose(pt, np.eye(4) / 2 - proj(PHI_P), atol=1e-15)
        assert_allclose(2 * pt, regime_witness("low").matrix, atol=1e-15)

    def test_separable_rejected(self):
        for rho in (family_rho(0.5), maximally_mixed(4)):
            with pytest.raises(ValueError):
                optimal_witness(rho)

    def test_values_on_family(self):
        low, high = regime_witness("low"), regime_witness("high")
        for q in Q_GRID:
            rho = family_rho(q)
            assert witness_value(low, rho) == pytest.approx(2 * q - 1, abs=1e-14)
            assert witness_value(high, rho) == pytest.approx(1 - 2 * q, abs=1e-14)
            assert abs(min(witness_value(low, rho), witness_value(high, rho)) + abs(1 - 2 * q)) < 1e-12

    def test_value_on_noise(self):
        for w in (regime_witness("low"), regime_witness("high"), optimal_witness(family_rho(0.2))):
            assert witness_value(w, maximally_mixed(4)) == pytest.approx(0.5)

    def test_duality_random(self, rng):
        for rho in random_entangled(rng, 200):
            w = optimal_witness(rho)
            assert_allclose(w.matrix, projector_witness(rho.matrix), atol=1e-10)
            assert abs(witness_value(w, rho) + negativity(rho)) < 1e-8
            assert abs(witness_value(w, rho) + random_robustness_closed(rho).value / 2) < 1e-8

    def test_positive_on_products(self, rng):
        witnesses = [regime_witness("low"), regime_witness("high")]
        witnesses += [optimal_witness(rho) for rho in random_entangled(rng, 5)]
        kets = [np.kron(random_ket(rng), random_ket(rng)) for _ in range(10_000)]
        for w in witnesses:
            values = np.real(np.einsum("ni,ij,nj->n", np.conj(kets), w.matrix, kets))
            assert values.min() >= -1e-10

    def test_operator_validation(self):
        with pytest.raises(ValueError):
            WitnessOperator(np.eye(4))
        with pytest.raises(ValueError):
            WitnessOperator(np.eye(4) / 2 + np.triu(np.ones((4, 4)), 1))
        with pytest.raises(ValueError):
            regime_witness("middle")

    def test_witness_dims(self):
        with pytest.raises(ValueError):
            witness_value(regime_witness("low"), maximally_mixed(2))

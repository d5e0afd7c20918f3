import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from entkink import boundary
from entkink.boundary import (
    ScanRecord,
    cone_point,
    crossing_pc,
    detect_kinks,
    find_kinks,
    scan_family,
    smoothness_probe,
)
from entkink.entmeas import is_ppt, pt_min_eigenvalue, random_robustness_closed
from entkink.qstate import DensityMatrix, family_rho, maximally_mixed

from oracles import PHI_P, ginibre_state, lapack_pt_min, proj


def synthetic(values, q=None):
    q = np.linspace(0, 1, len(values)) if q is None else q
    return [ScanRecord(float(x), float(r) / 2, float(r), 0.0, 0.0, float(r) / (1 + r))
            for x, r in zip(q, values)]


def entangled_states(n, seed=13):
    rng = np.random.default_rng(seed)
    out = [family_rho(q) for q in np.linspace(0, 0.45, 10)] + [family_rho(q) for q in np.linspace(0.55, 1, 10)]
    while len(out) < n:
        m = ginibre_state(rng)
        if lapack_pt_min(m) < -1e-3:
            out.append(DensityMatrix(m))
    return out


class TestCone:
    def test_endpoints(self):
        rho = family_rho(0.2)
        assert_allclose(cone_point(rho, 0).matrix, rho.matrix)
        assert_allclose(cone_point(rho, 1).matrix, np.eye(4) / 4)

    def test_robustness_boundary(self):
        sigma = cone_point(family_rho(0), 2 / 3)
        assert_allclose(sigma.matrix, (proj(PHI_P) + 2 * np.eye(4) / 4) / 3, atol=1e-15)
        assert_allclose(sigma.matrix, random_robustness_closed(family_rho(0)).boundary_state.matrix, atol=1e-14)

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_range(self, p):
        with pytest.raises(ValueError):
            cone_point(family_rho(0), p)


class TestCrossing:
    def test_values(self):
        assert crossing_pc(maximally_mixed(4)) == 0.0
        assert crossing_pc(family_rho(0.5)) == 0.0
        assert crossing_pc(family_rho(0)) == pytest.approx(2 / 3, abs=1e-14)
        assert crossing_pc(family_rho(0.25)) == pytest.approx(0.5, abs=1e-14)

    def test_bisection_route_matches(self):
        for rho in entangled_states(40):
            assert crossing_pc(rho, "bisection") == pytest.approx(crossing_pc(rho), abs=1e-11)

    def test_recovers_robustness(self):
        for rho in entangled_states(60):
            pc = crossing_pc(rho)
            assert abs(pc / (1 - pc) - random_robustness_closed(rho).value) < 1e-9

    def test_tight(self):
        for rho in entangled_states(60):
            pc = crossing_pc(rho)
            lam = pt_min_eigenvalue(cone_point(rho, pc))
            assert -1e-8 <= lam <= 1e-6
            assert is_ppt(cone_point(rho, pc), tol=1e-8)
            if random_robustness_closed(rho).value > 1e-3:
                assert not is_ppt(cone_point(rho, pc * (1 - 1e-4)))

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            crossing_pc(family_rho(0), "newton")


class TestScan:
    def test_three_points(self):
        recs = scan_family(0, 1, 3)
        assert [r.q for r in recs] == [0, 0.5, 1]
        assert_allclose([r.negativity for r in recs], [1, 0, 1], atol=1e-14)

    def test_w_low_column(self):
        assert_allclose([r.w_low for r in scan_family(0, 1, 5)], [-1, -0.5, 0, 0.5, 1], atol=1e-14)

    def test_record_invariants(self):
        for r in scan_family(0, 1, 101):
            assert abs(r.robustness - 2 * r.negativity) < 1e-9
            assert r.p_c == pytest.approx(r.robustness / (1 + r.robustness))
            assert 0 <= r.p_c < 1
            assert abs(min(r.w_low, r.w_high) + r.negativity) < 1e-9

    def test_direct_equals_channel(self):
        a = scan_family(0, 1, 51, "direct")
        b = scan_family(0, 1, 51, "channel")
        for x, y in zip(a, b):
            assert_allclose([x.q, x.negativity, x.robustness, x.w_low, x.w_high, x.p_c],
                            [y.q, y.negativity, y.robustness, y.w_low, y.w_high, y.p_c], atol=1e-12)

    def test_monotone_halves(self):
        recs = scan_family(0, 1, 201)
        r = np.array([x.robustness for x in recs])
        assert np.all(np.diff(r[:101]) < 0)
        assert np.all(np.diff(r[100:]) > 0)

    def test_dynamics_source(self):
        recs = scan_family(0, 1, 101, "dynamics", omega=0.7, g=2.0)
        qs = [r.q for r in recs]
        assert qs == sorted(qs)
        assert qs[0] == pytest.approx(0, abs=1e-12) and qs[-1] == pytest.approx(1)
        times = np.array([r.t for r in recs])
        assert_allclose([r.q for r in recs], np.cos(0.5 * 2.0 * times) ** 2, atol=1e-12)
        for r in recs:
            assert abs(r.negativity - abs(1 - 2 * r.q)) < 1e-9

    def test_dynamics_truncates_after_turning_point(self):
        recs = scan_family(0, 1, 201, "dynamics", g=1.0, t_max=3 * math.pi)
        dt = 3 * math.pi / 200
        assert max(r.t for r in recs) < math.pi + dt
        by_time = sorted(recs, key=lambda r: r.t)
        assert all(b.q < a.q for a, b in zip(by_time, by_time[1:]))

    def test_dynamics_q_window(self):
        recs = scan_family(0.2, 0.8, 101, "dynamics")
        assert all(0.2 - 1e-12 <= r.q <= 0.8 + 1e-12 for r in recs)

    @pytest.mark.parametrize("args", [(0.5, 0.5, 10), (0, 1, 2), (-0.1, 1, 10), (0, 1.2, 10)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            scan_family(*args)

    def test_invalid_source(self):
        with pytest.raises(ValueError):
            scan_family(0, 1, 11, "tomography")
        with pytest.raises(ValueError):
            scan_family(0, 1, 11, "dynamics", g=0.0)


class TestKinks:
    @pytest.mark.parametrize("steps", [51, 101, 201, 401])
    def test_single_kink(self, steps):
        recs = scan_family(0, 1, steps)
        kinks = detect_kinks(recs, 10)
        assert len(kinks) == 1
        k = kinks[0]
        h = 1 / (steps - 1)
        assert k.grid_spacing == pytest.approx(h)
        assert abs(k.q_star - 0.5) <= h
        assert k.robustness < 2 * h
        assert k.jump == pytest.approx(8, rel=1e-9)

    def test_constant(self):
        assert detect_kinks(synthetic(np.full(51, 0.3))) == []

    def test_quadratic(self):
        q = np.linspace(0, 1, 201)
        assert detect_kinks(synthetic(q ** 2, q), 10) == []

    def test_off_grid_kink_merged(self):
        q = np.linspace(0, 1, 50)
        kinks = find_kinks(q, np.abs(q - 0.5))
        assert len(kinks) == 1
        assert abs(kinks[0].q_star - 0.5) <= q[1]

    def test_rounding_dust_ignored(self):
        q = np.linspace(0, 1, 101)
        y = np.ones(101)
        y[40] += 2.2e-16
        assert len(find_kinks(q, y, rel_noise=0.0)) == 1
        assert find_kinks(q, y) == []

    def test_dynamics_time_axis(self):
        recs = scan_family(0, 1, 201, "dynamics", omega=0.7)
        kinks = detect_kinks(recs, axis="t")
        assert len(kinks) == 1
        assert kinks[0].q_star == pytest.approx(0.5, abs=1e-9)

    def test_rejects_non_uniform(self):
        q = np.linspace(0, 1, 11) ** 2
        with pytest.raises(ValueError):
            detect_kinks(synthetic(q, q))
        with pytest.raises(ValueError):
            detect_kinks(synthetic([0, 1, 2, 3]))
        with pytest.raises(ValueError):
            detect_kinks(scan_family(0, 1, 11), axis="t")


class TestSmoothness:
    def test_family(self):
        assert smoothness_probe(scan_family(0, 1, 201)) == pytest.approx(2, abs=1e-9)

    def test_quadratic(self):
        q = np.linspace(0, 1, 201)
        h = q[1]
        assert smoothness_probe(synthetic(q ** 2, q), "robustness") <= 2 * h * 2

    def test_quadratic_shrinks_with_h(self):
        vals = []
        for n in (51, 101, 201, 401):
            q = np.linspace(0, 1, n)
            vals.append(smoothness_probe(synthetic(q ** 2, q), "robustness"))
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_constant(self):
        assert smoothness_probe(synthetic(np.full(21, 1.0))) == 0.0

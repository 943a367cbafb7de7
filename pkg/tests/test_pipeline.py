import math

import numpy as np
import pytest

from rdpinn import equations as eq
from rdpinn import pipeline as pl
from rdpinn import wavenet as wn

FISHER = eq.make_reaction("fisher")


def make_handle(rng, width=8, spec=FISHER, omega=None):
    params = wn.WaveNetParams(
        omega=float(rng.normal()) if omega is None else omega,
        a=rng.uniform(-1, 1, width),
        b=rng.uniform(-1, 1, width),
        c=rng.uniform(-1, 1, width),
        bounds=spec.bounds,
    )
    return pl.SolverHandle(params=params, spec=spec, provenance={"origin": "test"})


def test_handle_requires_matching_bounds(rng):
    params = wn.WaveNetParams(0.0, np.ones(3), np.ones(3), np.ones(3), (0.0, 0.5))
    with pytest.raises(ValueError, match="equilibria"):
        pl.SolverHandle(params=params, spec=FISHER, provenance={})


def test_predict_reduces_to_network_in_1d(rng):
    handle = make_handle(rng)
    co = eq.PhysicalCoeffs(25.0, 4.0)
    for _ in range(20):
        x, t = float(rng.uniform(-2, 2)), float(rng.uniform(0, 1))
        got = pl.predict(handle, co, [1.0], eq.PhysicalPoint(np.array([x]), t))
        s = math.sqrt(co.rho / co.D)
        zeta = s * x - handle.params.omega * co.rho * t
        p = handle.params
        want = float(wn.profile_value(p.a, p.b, p.c, p.bounds, zeta))
        assert got == pytest.approx(want, rel=1e-15)


def test_predict_direction_normalization(rng):
    handle = make_handle(rng)
    co = eq.PhysicalCoeffs(10.0, 1.0)
    point = eq.PhysicalPoint(np.array([0.3, -0.2]), 0.05)
    base = pl.predict(handle, co, [1.0, 3.0], point)
    assert pl.predict(handle, co, [2.0, 6.0], point) == base  # power-of-two scaling is exact
    assert pl.predict(handle, co, [3.0, 9.0], point) == pytest.approx(base, rel=1e-14)
    with pytest.raises(ValueError, match="nonzero"):
        pl.predict(handle, co, [0.0, 0.0], point)


def test_swap_symmetric_directions_match_bitwise(rng):
    handle = make_handle(rng)
    co = eq.PhysicalCoeffs(100.0, 1.0)
    grid13 = pl.evaluate_grid(handle, co, [1.0, 3.0], (-1.0, 5.0), (0.0, 0.2),
                              n_space=40, n_time=10)
    grid31 = pl.evaluate_grid(handle, co, [3.0, 1.0], (-1.0, 5.0), (0.0, 0.2),
                              n_space=40, n_time=10)
    assert np.array_equal(grid13.values, np.swapaxes(grid31.values, 0, 1))


def test_dimension_independence_at_equal_wave_coordinate(rng):
    """The pipeline is a function of the wave coordinate alone: a 2-D
    evaluation at matching zeta reproduces the 1-D value exactly."""
    handle = make_handle(rng)
    co = eq.PhysicalCoeffs(7.0, 2.0)
    n2 = np.array([1.0, 1.0]) / math.sqrt(2.0)
    s = math.sqrt(co.rho / co.D)
    for _ in range(20):
        x1 = float(rng.uniform(-2, 2))
        t = float(rng.uniform(0, 1))
        u2 = pl.predict(handle, co, n2, eq.PhysicalPoint(np.array([x1, x1]), t))
        # 1-D point with the same n . xi
        zeta_space = (n2[0] * (s * x1) + n2[1] * (s * x1)) / s
        u1 = pl.predict(handle, co, [1.0], eq.PhysicalPoint(np.array([zeta_space]), t))
        assert u2 == pytest.approx(u1, rel=1e-14)


def test_range_preservation_on_grid(rng):
    handle = make_handle(rng, spec=eq.make_reaction("bistable", a=0.2))
    co = eq.PhysicalCoeffs(1e4, 1.0)
    grid = pl.evaluate_grid(handle, co, [1.0], (-5.0, 1.0), (0.0, 0.05),
                            n_space=50, n_time=20)
    assert grid.values.min() >= 0.2 and grid.values.max() <= 1.0


def test_evaluate_grid_shapes_and_corners(rng):
    handle = make_handle(rng)
    co = eq.UNIT_COEFFS
    g1 = pl.evaluate_grid(handle, co, [1.0], (-5.0, 25.0), (0.0, 10.0), n_space=2, n_time=2)
    assert g1.values.shape == (2, 2)
    assert g1.axes[0][0] == -5.0 and g1.axes[0][-1] == 25.0
    assert g1.times[0] == 0.0 and g1.times[-1] == 10.0
    g2 = pl.evaluate_grid(handle, co, [1.0, 1.0], (-5.0, 25.0), (0.0, 10.0), n_space=2, n_time=2)
    assert g2.values.shape == (2, 2, 2)


def test_evaluate_grid_default_counts(rng):
    handle = make_handle(rng)
    g = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 25.0), (0.0, 10.0))
    assert g.values.shape == (500, 500)


def test_evaluate_grid_validation(rng):
    handle = make_handle(rng)
    with pytest.raises(ValueError, match="dimension"):
        pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], [(-1.0, 1.0), (-1.0, 1.0)], (0.0, 1.0))
    with pytest.raises(ValueError, match="at least 2"):
        pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-1.0, 1.0), (0.0, 1.0), n_space=1)


def test_error_report_identities(rng):
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 5.0), (0.0, 1.0),
                            n_space=10, n_time=10)
    rep = pl.error_report(grid, grid.values.copy())
    assert rep.l2 == 0.0 and rep.linf == 0.0 and rep.n_points == 100

    oracle = grid.values.copy()
    oracle[3, 7] += 0.125  # exactly representable discrepancy
    rep = pl.error_report(grid, oracle)
    assert rep.linf == 0.125
    assert abs(rep.l2 - 0.125 / math.sqrt(100)) < 1e-15
    assert rep.l2 <= rep.linf


def test_error_report_random_ordering(rng):
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 5.0), (0.0, 1.0),
                            n_space=20, n_time=5)
    oracle = grid.values + rng.normal(0, 1e-3, grid.values.shape)
    rep = pl.error_report(grid, oracle)
    assert 0.0 < rep.l2 <= rep.linf


def test_error_report_shape_mismatch(rng):
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 5.0), (0.0, 1.0),
                            n_space=10, n_time=10)
    with pytest.raises(ValueError, match="shape"):
        pl.error_report(grid, np.zeros((10, 9)))


def test_max_error_over_time(rng):
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 5.0), (0.0, 1.0),
                            n_space=30, n_time=12)
    times, series = pl.max_error_over_time(grid, grid.values.copy())
    assert np.array_equal(times, grid.times)
    assert series.shape == (12,) and np.all(series == 0.0)

    oracle = grid.values + rng.normal(0, 1e-4, grid.values.shape)
    _, series = pl.max_error_over_time(grid, oracle)
    rep = pl.error_report(grid, oracle)
    assert series.max() == rep.linf
    with pytest.raises(ValueError, match="shape"):
        pl.max_error_over_time(grid, np.zeros((3, 3)))


def test_eval_domain_table():
    assert pl.eval_domain("fisher", 1) == ((-5.0, 25.0), (0.0, 10.0))
    assert pl.eval_domain("fisher", 1e6) == ((-1.0, 5.0), (0.0, 0.002))
    assert pl.eval_domain("zeldovich", 100) == ((-1.0, 5.0), (0.0, 0.6))
    assert pl.eval_domain("bistable", 1e4) == ((-5.0, 1.0), (0.0, 0.05))
    assert pl.eval_domain("bistable", 1) == ((-25.0, 5.0), (0.0, 25.0))
    with pytest.raises(ValueError, match="rho"):
        pl.eval_domain("fisher", 17.5)


def test_exact_field_matches_pointwise_oracle(rng):
    co = eq.PhysicalCoeffs(100.0, 1.0)
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, co, [1.0, 3.0], (-1.0, 5.0), (0.0, 0.2),
                            n_space=6, n_time=4)
    field = pl.exact_field(FISHER, co, grid)
    n_hat = np.array([1.0, 3.0]) / math.sqrt(10.0)
    for i in (0, 3, 5):
        for j in (0, 2):
            for k in (0, 3):
                point = eq.PhysicalPoint(np.array([grid.axes[0][i], grid.axes[1][j]]),
                                         float(grid.times[k]))
                want = eq.exact_solution(FISHER, co, n_hat, point)
                assert field[i, j, k] == pytest.approx(want, rel=1e-12)


def test_export_field_csv(tmp_path, rng):
    handle = make_handle(rng)
    grid = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0], (-5.0, 5.0), (0.0, 1.0),
                            n_space=5, n_time=3)
    oracle = pl.exact_field(FISHER, eq.UNIT_COEFFS, grid)
    path = tmp_path / "field.csv"
    pl.export_field_csv(path, grid, oracle)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "x1,t,u_pred,u_exact,abs_err"
    assert len(lines) == 1 + 5 * 3
    assert all(len(line.split(",")) == 5 for line in lines[1:])

    path2 = tmp_path / "slice.csv"
    grid2 = pl.evaluate_grid(handle, eq.UNIT_COEFFS, [1.0, 1.0], (-5.0, 5.0), (0.0, 1.0),
                             n_space=4, n_time=3)
    pl.export_field_csv(path2, grid2, time_index=-1)
    lines = path2.read_text().strip().split("\n")
    assert lines[0] == "x1,x2,t,u_pred"
    assert len(lines) == 1 + 16


def test_checkpoint_handle_round_trip(tmp_path, rng):
    handle = make_handle(rng)
    wn.save_checkpoint(tmp_path / "ck.json", handle.params, handle.spec, meta={"seed": 3})
    loaded = pl.SolverHandle.from_checkpoint(tmp_path / "ck.json")
    assert np.array_equal(loaded.params.to_flat(), handle.params.to_flat())
    assert loaded.spec == handle.spec
    assert loaded.provenance["seed"] == 3

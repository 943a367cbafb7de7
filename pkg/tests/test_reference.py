import math

import numpy as np
import pytest

from rdpinn import equations as eq
from rdpinn import reference as ref
from rdpinn.gtw import GeneralIC, front_position

FISHER = eq.make_reaction("fisher")


def test_config_validation():
    with pytest.raises(ValueError):
        ref.RefConfig(x_lo=1.0, x_hi=-1.0, t_final=1.0)
    with pytest.raises(ValueError):
        ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=0.0)
    with pytest.raises(ValueError, match="cells"):
        ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=1.0, cells=8)
    with pytest.raises(ValueError, match="cfl"):
        ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=1.0, cfl=1.5)
    with pytest.raises(ValueError, match="scheme"):
        ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=1.0, scheme="upwind9")


@pytest.mark.parametrize("value", [0.0, 1.0])
@pytest.mark.parametrize("scheme", ["weno5central", "central2"])
def test_equilibrium_constants_are_fixed_points(value, scheme):
    cfg = ref.RefConfig(x_lo=-10.0, x_hi=10.0, t_final=0.5, cells=200, scheme=scheme)
    grid = ref.ref_solve(FISHER, eq.UNIT_COEFFS, np.full(200, value), cfg,
                         times=np.linspace(0, 0.5, 4))
    assert np.array_equal(grid.values, np.full_like(grid.values, value))


def _restrict_to_coarse(fine: np.ndarray) -> np.ndarray:
    """Fourth-order interpolation of fine-cell values at the centers of the
    twice-coarser grid: coarse center j sits midway between fine centers 2j
    and 2j+1."""
    n_coarse = fine.size // 2
    j = np.arange(1, n_coarse - 1)
    i = 2 * j
    return (-fine[i - 1] + 9.0 * fine[i] + 9.0 * fine[i + 1] - fine[i + 2]) / 16.0


def test_self_convergence_rate():
    co = eq.UNIT_COEFFS
    ic = lambda x: eq.traveling_profile(FISHER, x)  # noqa: E731

    def solve(cells):
        # walls far enough out that the profile sits below the scheme's error
        # floor there; otherwise the pinned boundary values dominate
        cfg = ref.RefConfig(x_lo=-65.0, x_hi=40.0, t_final=1.0, cells=cells)
        return ref.ref_solve(FISHER, co, ic, cfg, times=(0.0, 1.0)).values[:, -1]

    u500, u1000, u2000 = solve(500), solve(1000), solve(2000)
    d_coarse = u500[1:-1] - _restrict_to_coarse(u1000)
    d_fine = u1000[1:-1] - _restrict_to_coarse(u2000)
    ratio = np.sqrt(np.mean(d_coarse**2)) / np.sqrt(np.mean(d_fine**2))
    assert ratio >= 3.5, ratio


def test_reference_matches_exact_solution():
    co = eq.UNIT_COEFFS
    cfg = ref.RefConfig(x_lo=-20.0, x_hi=40.0, t_final=5.0, cells=2000)
    ic = lambda x: eq.traveling_profile(FISHER, x)  # noqa: E731
    grid = ref.ref_solve(FISHER, co, ic, cfg, times=(0.0, 5.0))
    exact = eq.traveling_profile(FISHER, grid.axes[0] - eq.exact_speed(FISHER) * 5.0)
    assert np.max(np.abs(grid.values[:, -1] - exact)) < 1e-3


def test_front_advances_at_exact_speed():
    co = eq.UNIT_COEFFS
    cfg = ref.RefConfig(x_lo=-20.0, x_hi=40.0, t_final=5.0, cells=2000)
    ic = lambda x: eq.traveling_profile(FISHER, x)  # noqa: E731
    grid = ref.ref_solve(FISHER, co, ic, cfg, times=np.linspace(0.0, 5.0, 6))
    f0 = front_position(grid.axes[0], grid.values[:, 0], level=0.25)
    f1 = front_position(grid.axes[0], grid.values[:, -1], level=0.25)
    speed = (f1 - f0) / 5.0
    assert abs(speed / eq.exact_speed(FISHER) - 1.0) < 0.01


@pytest.mark.parametrize("ic", [GeneralIC("step"), GeneralIC("logistic", lam=2.0),
                                GeneralIC("logistic", lam=0.5)])
def test_solution_stays_in_unit_interval(ic):
    co = eq.PhysicalCoeffs(100.0, 1.0)
    cfg = ref.RefConfig(x_lo=-3.0, x_hi=9.0, t_final=0.1, cells=800)
    grid = ref.ref_solve(FISHER, co, ic, cfg, times=np.linspace(0.0, 0.1, 6))
    assert grid.values.min() >= -1e-12
    assert grid.values.max() <= 1.0 + 1e-12


def test_general_ic_is_evaluated_in_scaled_coordinates():
    co = eq.PhysicalCoeffs(100.0, 1.0)
    cfg = ref.RefConfig(x_lo=-3.0, x_hi=9.0, t_final=0.1, cells=200)
    grid = ref.ref_solve(FISHER, co, GeneralIC("logistic", lam=2.0), cfg, times=(0.0,))
    from rdpinn.gtw import ic_eval

    want = ic_eval(GeneralIC("logistic", lam=2.0), 10.0 * grid.axes[0])
    assert np.array_equal(grid.values[:, 0], want)


def test_sampled_profile_length_mismatch():
    cfg = ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=0.1, cells=64)
    with pytest.raises(ValueError, match="cells"):
        ref.ref_solve(FISHER, eq.UNIT_COEFFS, np.zeros(50), cfg)


def test_snapshot_time_validation():
    cfg = ref.RefConfig(x_lo=-1.0, x_hi=1.0, t_final=0.1, cells=64)
    with pytest.raises(ValueError, match="snapshot"):
        ref.ref_solve(FISHER, eq.UNIT_COEFFS, np.zeros(64), cfg, times=(0.0, 0.2))


def test_instability_aborts_with_step_report():
    cfg = ref.RefConfig(x_lo=-10.0, x_hi=10.0, t_final=10.0, cells=64)
    with pytest.raises(ref.RefInstabilityError, match="step"):
        # below the u=0 equilibrium the Fisher reaction is destabilizing
        ref.ref_solve(FISHER, eq.UNIT_COEFFS, np.full(64, -0.5), cfg)


def test_central2_cross_checks_weno_option():
    """The two discretizations agree on resolved smooth data."""
    co = eq.UNIT_COEFFS
    ic = lambda x: eq.traveling_profile(FISHER, x)  # noqa: E731
    outs = {}
    for scheme in ("weno5central", "central2"):
        cfg = ref.RefConfig(x_lo=-15.0, x_hi=20.0, t_final=2.0, cells=1500, scheme=scheme)
        outs[scheme] = ref.ref_solve(FISHER, co, ic, cfg, times=(0.0, 2.0)).values[:, -1]
    assert np.max(np.abs(outs["weno5central"] - outs["central2"])) < 5e-4


# ---------------------------------------------------------------------------
# finite-difference residual oracle
# ---------------------------------------------------------------------------


def test_fd_residual_on_equilibrium_is_zero():
    def flat(x, t):
        return FISHER.v_plus

    r = ref.fd_residual(flat, eq.UNIT_COEFFS, FISHER, np.array([0.3]), 0.1, steps=(1e-3, 1e-3))
    assert r == 0.0


def test_fd_residual_constant_half():
    def half(x, t):
        return 0.5

    r = ref.fd_residual(half, eq.UNIT_COEFFS, FISHER, np.array([0.0]), 0.0, steps=(1e-3, 1e-3))
    assert r == pytest.approx(-0.25, rel=1e-12)


def test_fd_residual_flags_nonsolutions():
    def wrong(x, t):
        return float(eq.traveling_profile(FISHER, x[0] - 0.3 * t))  # wrong speed

    r = ref.fd_residual(wrong, eq.UNIT_COEFFS, FISHER, np.array([0.0]), 0.5, steps=(1e-3, 1e-3))
    assert abs(r) > 1e-2


def test_fd_residual_validates_steps():
    with pytest.raises(ValueError, match="steps"):
        ref.fd_residual(lambda x, t: 0.0, eq.UNIT_COEFFS, FISHER, np.array([0.0]), 0.0,
                        steps=(0.0, 1e-3))

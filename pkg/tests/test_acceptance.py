"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one PASS line on success (run with -s or -rA to see them).
The session fixtures in conftest.py run the full published protocol, so the
module takes tens of minutes end to end on one core.
"""
import math

import numpy as np
import pytest

from conftest import MINI, SPECS
from rdpinn import equations as eq
from rdpinn import harness as hz
from rdpinn import pipeline as pl
from rdpinn import training as tr
from rdpinn import wavenet as wn
from rdpinn.baseline import wavepinn_forward
from rdpinn.gtw import front_position, predict_gtw
from rdpinn.reference import RefConfig, fd_residual, ref_solve


def ok(msg):
    print(f"ACCEPT pass: {msg}")


def _handle(report) -> pl.SolverHandle:
    return pl.SolverHandle.from_report(report)


# -- criterion: oracle validity --------------------------------------------


def test_oracle_validity_full_parameter_sweep():
    """Closed forms satisfy the equation: FD residual < 1e-6 at 100 random
    points for each reaction, rho in {1, 100}, D in {1, 4}."""
    rng = np.random.default_rng(2024)
    for name in ("fisher", "nws2", "nws3", "nws4", "zeldovich", "bistable"):
        spec = SPECS[name]
        c_scaled = eq.exact_speed(spec)
        for rho in (1.0, 100.0):
            for D in (1.0, 4.0):
                co = eq.PhysicalCoeffs(rho, D)

                def sample(x, t, spec=spec, co=co):
                    return eq.exact_solution(spec, co, np.array([1.0]), eq.PhysicalPoint(x, t))

                steps = (1e-2 * math.sqrt(D / rho), 1e-2 / rho)
                worst = 0.0
                for _ in range(100):
                    zeta = rng.uniform(-25.0, 25.0)
                    t = rng.uniform(0.0, 2.0 / rho)
                    x = np.array([(zeta + c_scaled * rho * t) / math.sqrt(rho / D)])
                    worst = max(worst, abs(fd_residual(sample, co, spec, x, t, steps)))
                assert worst < 1e-6, f"{name} rho={rho} D={D}: {worst}"
    ok("oracle validity: FD residual < 1e-6 for all reactions, rho in {1,100}, D in {1,4}")


# -- criterion: derivative / gradient suite ---------------------------------


def test_forward_jet_versus_central_differences():
    rng = np.random.default_rng(7)
    d1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
    d2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
    offs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    for _ in range(10):
        width = 8
        p = wn.WaveNetParams(float(rng.normal()), rng.uniform(-1, 1, width),
                             rng.uniform(-1, 1, width),
                             rng.uniform(-1, 1, width) / math.sqrt(width), (1.0, 0.0))
        xi, tau = float(rng.uniform(-3, 3)), float(rng.uniform(0.1, 2.0))
        jet = wn.forward_jet(p, xi, tau)

        def v(x, t):
            return wn.forward_jet(p, x, t).v

        h = 1e-3
        fd_xi = sum(w * v(xi + o * h, tau) for w, o in zip(d1, offs)) / h
        fd_tau = sum(w * v(xi, tau + o * h) for w, o in zip(d1, offs)) / h
        fd_xixi = sum(w * v(xi + o * 1e-2, tau) for w, o in zip(d2, offs)) / 1e-4
        for got, want in ((jet.v_xi, fd_xi), (jet.v_tau, fd_tau), (jet.v_xixi, fd_xixi)):
            assert got == pytest.approx(want, rel=1e-6, abs=1e-10)
    ok("forward_jet matches central differences at rel err < 1e-6")


def test_loss_grad_versus_finite_differences():
    rng = np.random.default_rng(11)
    spec = SPECS["fisher"]
    worst = 0.0
    for _ in range(10):
        width = 8
        p = wn.WaveNetParams(float(rng.normal()), rng.uniform(-1, 1, width),
                             rng.uniform(-1, 1, width),
                             rng.uniform(-1, 1, width) / math.sqrt(width), spec.bounds)
        icbc = np.stack([rng.uniform(-5, 5, 32), rng.uniform(0, 2, 32),
                         rng.uniform(0.1, 0.9, 32)], axis=1)
        res = np.stack([rng.uniform(-5, 5, 32), rng.uniform(0, 2, 32)], axis=1)
        _, grad = wn.loss_grad(p, spec, icbc, res)
        flat, gflat = p.to_flat(), grad.to_flat()
        fd = np.zeros_like(flat)
        for i in range(flat.size):
            h = 1e-6 * max(1.0, abs(flat[i]))
            up, dn = flat.copy(), flat.copy()
            up[i] += h
            dn[i] -= h
            lu, _ = wn.loss_grad(wn.WaveNetParams.from_flat(up, spec.bounds), spec, icbc, res)
            ld, _ = wn.loss_grad(wn.WaveNetParams.from_flat(dn, spec.bounds), spec, icbc, res)
            fd[i] = (lu - ld) / (2 * h)
        worst = max(worst, float(np.max(np.abs(gflat - fd) / np.maximum(1e-8, np.abs(fd)))))
    assert worst < 1e-5, worst
    ok(f"loss_grad matches finite differences: worst rel err {worst:.1e} < 1e-5")


# -- criterion: wave-speed learning ------------------------------------------


def test_wave_speed_learning_restricted(fisher_restricted_reports):
    c = eq.exact_speed(SPECS["fisher"])
    for seed, report in enumerate(fisher_restricted_reports[:3]):
        err = abs(c - report.final_params.omega)
        assert report.verdict == tr.PHYSICAL, f"seed {seed} not physical"
        assert err < 1e-3, f"seed {seed}: |c-omega| = {err}"
    errs = [abs(c - r.final_params.omega) for r in fisher_restricted_reports[:3]]
    ok(f"wave-speed learning: 3 seeds physical, |c-omega| = "
       + ", ".join(f"{e:.1e}" for e in errs))


def test_speed_learning_property_eight_of_ten(fisher_restricted_reports):
    c = eq.exact_speed(SPECS["fisher"])
    good = sum(1 for r in fisher_restricted_reports
               if r.verdict == tr.PHYSICAL and abs(c - r.final_params.omega) < 1e-3)
    assert good >= 8, f"only {good}/10 seeds converged physically"
    ok(f"speed-learning property: {good}/10 restricted seeds physical with |c-omega| < 1e-3")


def test_loss_monotone_trend(fisher_restricted_reports):
    report = fisher_restricted_reports[0]
    assert report.verdict == tr.PHYSICAL
    window = max(1, 1000 // 10)  # records are strided by 10
    loss = report.loss_history
    tail_avg = float(np.mean(loss[-window:]))
    tenth = max(window, int(0.1 * loss.size))
    early_avg = float(np.mean(loss[tenth - window:tenth]))
    assert tail_avg < early_avg
    ok(f"loss trend: final moving average {tail_avg:.1e} below 10%-mark {early_avg:.1e}")


# -- criterion: coefficient reuse --------------------------------------------


@pytest.mark.parametrize("name,kind", [("fisher", "fisher"), ("nws2", "nws"),
                                       ("zeldovich", "zeldovich"), ("bistable", "bistable")])
def test_coefficient_reuse_accuracy(name, kind, fisher_restricted_reports, restricted_reports):
    report = fisher_restricted_reports[0] if name == "fisher" else restricted_reports[name]
    assert report.verdict == tr.PHYSICAL, f"{name} run not physical"
    spec = SPECS[name]
    handle = _handle(report)
    linf_at_top = None
    for rho in pl.RHO_SWEEP:
        co = eq.PhysicalCoeffs(float(rho), 1.0)
        space, tspan = pl.eval_domain(spec.kind, rho)
        grid = pl.evaluate_grid(handle, co, [1.0], space, tspan)
        rep = pl.error_report(grid, pl.exact_field(spec, co, grid))
        assert rep.l2 < 1e-4, f"{name} rho={rho}: L2 = {rep.l2}"
        if rho == 1_000_000:
            linf_at_top = rep.linf
            assert rep.linf < 5e-3, f"{name} rho=1e6: Linf = {rep.linf}"
    ok(f"coefficient reuse {name}: L2 < 1e-4 at all rho, Linf(1e6) = {linf_at_top:.1e} < 5e-3")


def test_nws_higher_exponents(restricted_reports):
    for name in ("nws3", "nws4"):
        report = restricted_reports[name]
        spec = SPECS[name]
        c = eq.exact_speed(spec)
        err = abs(c - report.final_params.omega)
        assert report.verdict == tr.PHYSICAL
        assert err < 1e-3, f"{name}: |c-omega| = {err}"
        handle = _handle(report)
        for rho in pl.RHO_SWEEP:
            co = eq.PhysicalCoeffs(float(rho), 1.0)
            space, tspan = pl.eval_domain("nws", rho)
            grid = pl.evaluate_grid(handle, co, [1.0], space, tspan)
            rep = pl.error_report(grid, pl.exact_field(spec, co, grid))
            assert rep.l2 < 1e-4, f"{name} rho={rho}: L2 = {rep.l2}"
    ok("NWS q=3,4: |c-omega| < 1e-3 and L2 < 1e-4 across the rho sweep")


# -- criterion: dimension independence ---------------------------------------


def test_dimension_independence(fisher_restricted_reports):
    spec = SPECS["fisher"]
    handle = _handle(fisher_restricted_reports[0])
    for rho in pl.RHO_SWEEP:
        co = eq.PhysicalCoeffs(float(rho), 1.0)
        space, tspan = pl.eval_domain("fisher", rho)
        g1 = pl.evaluate_grid(handle, co, [1.0], space, tspan)
        e1 = pl.error_report(g1, pl.exact_field(spec, co, g1))
        for n_dir in ((1.0, 1.0), (1.0, 3.0)):
            g2 = pl.evaluate_grid(handle, co, n_dir, space, tspan)
            e2 = pl.error_report(g2, pl.exact_field(spec, co, g2))
            assert 0.5 < e2.l2 / e1.l2 < 2.0, f"rho={rho} n={n_dir}: {e2.l2} vs {e1.l2}"
            assert 0.5 < e2.linf / e1.linf < 2.0
    co = eq.PhysicalCoeffs(1e6, 1.0)
    space, tspan = pl.eval_domain("fisher", 1e6)
    g13 = pl.evaluate_grid(handle, co, [1.0, 3.0], space, tspan)
    g31 = pl.evaluate_grid(handle, co, [3.0, 1.0], space, tspan)
    assert np.array_equal(g13.values, np.swapaxes(g31.values, 0, 1))
    ok("dimension independence: 2-D errors within 2x of 1-D; (1,3)/(3,1) swap exact")


# -- criterion: baseline comparison ------------------------------------------


def test_baseline_comparison(fisher_original_report, wavepinn_report):
    spec = SPECS["fisher"]
    rho = 1e6
    co = eq.PhysicalCoeffs(rho, 1.0)
    space, tspan = pl.eval_domain("fisher", rho)
    tw = _handle(fisher_original_report)
    grid = pl.evaluate_grid(tw, co, [1.0], space, tspan)
    tw_l2 = pl.error_report(grid, pl.exact_field(spec, co, grid)).l2

    x = np.linspace(space[0], space[1], 500)
    t = np.linspace(tspan[0], tspan[1], 500)
    wp = wavepinn_report.final_params
    pred = np.stack([wavepinn_forward(wp, rho, x, tk) for tk in t], axis=1)
    exact = eq.traveling_profile(spec, np.sqrt(rho) * x[:, None]
                                 - eq.exact_speed(spec) * rho * t[None, :])
    wp_l2 = float(np.sqrt(np.mean((pred - exact) ** 2)))
    assert wp_l2 >= 5.0 * tw_l2, f"wave-pinn {wp_l2} vs scaled {tw_l2}"

    xf = np.linspace(space[0], space[1], 6001)
    u_wp = wavepinn_forward(wp, rho, xf, tspan[1])
    u_ex = eq.traveling_profile(spec, np.sqrt(rho) * xf - eq.exact_speed(spec) * rho * tspan[1])
    lead = front_position(xf, u_wp) - front_position(xf, u_ex)
    assert lead > 0.0, f"baseline front does not lead (offset {lead})"
    ok(f"baseline comparison: wave-pinn L2 {wp_l2:.1e} >= 5x scaled {tw_l2:.1e}; "
       f"front leads by {lead:.3f}")


# -- criterion: general initial conditions -----------------------------------


def test_reference_self_convergence_gate():
    co = eq.UNIT_COEFFS
    spec = SPECS["fisher"]
    ic = lambda x: eq.traveling_profile(spec, x)  # noqa: E731

    def solve(cells):
        cfg = RefConfig(x_lo=-65.0, x_hi=40.0, t_final=1.0, cells=cells)
        return ref_solve(spec, co, ic, cfg, times=(0.0, 1.0)).values[:, -1]

    def restrict(f):
        n = f.size // 2
        j = np.arange(1, n - 1)
        i = 2 * j
        return (-f[i - 1] + 9 * f[i] + 9 * f[i + 1] - f[i + 2]) / 16.0

    u500, u1000, u2000 = solve(500), solve(1000), solve(2000)
    d1 = u500[1:-1] - restrict(u1000)
    d2 = u1000[1:-1] - restrict(u2000)
    ratio = float(np.sqrt(np.mean(d1**2)) / np.sqrt(np.mean(d2**2)))
    assert ratio >= 3.5, ratio
    ok(f"reference self-convergence gate: refinement ratio {ratio:.1f} >= 3.5")


def test_general_ic_front_positions(gtw_reports):
    spec = SPECS["fisher"]
    rho = 100.0
    co = eq.PhysicalCoeffs(rho, 1.0)
    T = 0.3
    fronts = {}
    for key in ("step", "log2", "log05"):
        ic, report = gtw_reports[key]
        ref = ref_solve(spec, co, ic, RefConfig(x_lo=-3.0, x_hi=9.0, t_final=T),
                        times=(0.0, T))
        x = ref.axes[0]
        u = predict_gtw(report.final_params, co, x, T)
        assert np.all(u > 0.0) and np.all(u < 1.0)  # trained output stays inside (0, 1)
        fronts[key] = (front_position(x, u), front_position(x, ref.values[:, -1]))
    for key in ("step", "log2"):
        f_gtw, f_ref = fronts[key]
        assert abs(f_gtw - f_ref) < 0.2, f"{key}: |{f_gtw} - {f_ref}| >= 0.2"
    f_gtw, f_ref = fronts["log05"]
    assert f_gtw < f_ref, f"slow-decay front does not trail ({f_gtw} vs {f_ref})"
    ok("general ICs: step/logistic fronts within 0.2 of the reference; "
       f"lam=0.5 trails by {fronts['log05'][1] - fronts['log05'][0]:.3f}")


# -- criterion: scaling and metric algebra -----------------------------------


def test_scaling_and_metric_algebra():
    rng = np.random.default_rng(17)
    for _ in range(500):
        co = eq.PhysicalCoeffs(10 ** rng.uniform(-3, 9), 10 ** rng.uniform(-3, 9))
        x = rng.uniform(-1e4, 1e4, 2)
        t = float(rng.uniform(0, 1e4))
        back = eq.scale_inverse(co, eq.scale_forward(co, eq.PhysicalPoint(x, t)))
        assert np.all(np.abs(back.x - x) <= 2 * np.spacing(np.abs(x)))
        assert abs(back.t - t) <= 2 * np.spacing(t)

    values = np.zeros((25, 40))
    grid = pl.FieldGrid(axes=[np.linspace(0, 1, 25)], times=np.linspace(0, 1, 40),
                        values=values, direction=np.array([1.0]))
    oracle = values.copy()
    oracle[11, 22] = 0.25
    rep = pl.error_report(grid, oracle)
    assert abs(rep.linf - 0.25) <= 1e-15
    assert abs(rep.l2 - 0.25 / math.sqrt(values.size)) <= 1e-15
    ok("scaling round-trip <= 2 ulp; single-point L2/Linf identities exact to 1e-15")


# -- criterion: determinism ---------------------------------------------------


def test_train_cli_determinism(tmp_path):
    ini = tmp_path / "cfg.ini"
    ini.write_text("[reaction]\nkind = fisher\n\n[training]\npreset = restricted\n"
                   f"epochs = 2000\nn_icbc = {MINI['n_icbc']}\nn_res = {MINI['n_res']}\n"
                   f"width = {MINI['width']}\nseed = 0\n")
    logs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert hz.cli(["train", "--config", str(ini), "--out", str(out)]) == 0
        logs.append((out / "runlogs" / "runlog_0.csv").read_bytes())
    assert logs[0] == logs[1]
    ok("determinism: identical configs produce bitwise-identical run logs")

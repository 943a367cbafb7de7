"""Generalized wave solver for the unit-coefficient Fisher equation under
general initial data.

An initial condition decaying like exp(-lambda * xi) relaxes onto a front
whose asymptotic speed is c(lambda) = lambda + 1/lambda for 0 < lambda < 1
and the minimum speed 2 otherwise; for lambda >= 1 the front also slips
backward by (3/2) ln(tau).  The wave layer therefore replaces omega * tau
with the predicted shift

    d(tau; lambda) = c(lambda) * tau - (3/2) ln(tau + 1) + w * lambda,

where ln(tau + 1) regularizes the origin and the single trainable w absorbs
the bounded offset.  Supervision on the initial/boundary data is applied for
an initial fraction of the epochs only; afterwards the residual alone
drives training.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .equations import EXP_GUARD, ReactionSpec, _reaction_deriv_raw, _reaction_raw
from .training import (
    SPURIOUS,
    AdamState,
    TrainConfig,
    TrainReport,
    adam_step,
    classify_convergence,
    cosine_lr,
    _record_stride,
)
from .wavenet import _hidden_jet, _hidden_value, _phi_chain, sigmoid

GTW_DOMAIN = (-300.0, 900.0, 300.0)  # xi_lo, xi_hi, tau_hi
GTW_EPOCHS = 30_000
STEP_SHIFT_LAMBDA = 1.0  # steep leading edge behaves like lambda >= 1
DEFAULT_SCHEDULE_FRACTION = 0.3


@dataclass(frozen=True)
class GeneralIC:
    """Initial profile: a unit step or the logistic-type front with decay lam."""

    kind: str  # "step" | "logistic"
    lam: float = 1.0

    def __post_init__(self):
        if self.kind not in ("step", "logistic"):
            raise ValueError(f"ic kind must be 'step' or 'logistic', got {self.kind!r}")
        if self.kind == "logistic" and not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be a positive real, got {self.lam}")


@dataclass
class GtwParams:
    """Hidden layer plus the shift-law inputs: decay rate lam, trainable w."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    bounds: tuple[float, float]
    lam: float
    w: float

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))
                and np.all(np.isfinite(self.c)) and math.isfinite(self.w)):
            raise ValueError("parameters must be finite")


def asymptotic_speed(lam: float) -> float:
    """Front speed selected by an IC with decay rate lam: lam + 1/lam below 1,
    the minimum speed 2 at or above 1."""
    if not lam > 0:
        raise ValueError(f"lam must be positive, got {lam}")
    return lam + 1.0 / lam if lam < 1.0 else 2.0


def shift_lambda(ic: GeneralIC) -> float:
    """Decay rate fed to the shift law; a step edge acts like lam = 1."""
    return STEP_SHIFT_LAMBDA if ic.kind == "step" else ic.lam


def wave_shift(gtw: GtwParams, tau) -> float | np.ndarray:
    """d(tau) = c(lam) tau - 1.5 ln(tau + 1) + w lam."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    out = asymptotic_speed(gtw.lam) * tau - 1.5 * np.log1p(tau) + gtw.w * gtw.lam
    return float(out) if out.ndim == 0 else out


def _shift_rate(lam: float, tau):
    """d'(tau) = c(lam) - 1.5 / (tau + 1); the local front speed."""
    return asymptotic_speed(lam) - 1.5 / (np.asarray(tau, dtype=float) + 1.0)


def ic_eval(ic: GeneralIC, xi):
    """Initial profile v0(xi)."""
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    if ic.kind == "step":
        out = np.where(xi < 0.0, 1.0, 0.0)
    else:
        arg = 0.5 * ic.lam * xi
        out = np.empty_like(arg)
        hi, lo = arg > EXP_GUARD, arg < -EXP_GUARD
        mid = ~(hi | lo)
        out[hi], out[lo] = 0.0, 1.0
        out[mid] = (1.0 + np.exp(arg[mid])) ** -2
    return float(out[0]) if scalar else out


def gtw_config(spec: ReactionSpec, seed: int = 0, **overrides) -> TrainConfig:
    """Training defaults for the generalized solver."""
    lo, hi, tau = GTW_DOMAIN
    base = {"epochs": GTW_EPOCHS}
    base.update(overrides)
    return TrainConfig(spec=spec, xi_lo=lo, xi_hi=hi, tau_hi=tau, seed=seed,
                       domain_preset="gtw", **base)


def _gtw_loss_grad(w, a, b, c, bounds, spec, lam, xi_v, tau_v, y_v, xi_r, tau_r, use_icbc):
    """Loss and gradient over {w, a, b, c}; mirrors the constant-speed core
    with the per-point shift rate replacing omega."""
    n = a.size
    ga = np.zeros(n)
    gb = np.zeros(n)
    gc = np.zeros(n)
    gw = 0.0
    loss1 = 0.0
    ca = c * a
    cspeed = asymptotic_speed(lam)

    if use_icbc:
        shift = cspeed * tau_v - 1.5 * np.log1p(tau_v) + w * lam
        zeta = xi_v - shift
        Sig, Sp, s = _hidden_value(a, b, c, zeta)
        v, phip, _, _ = _phi_chain(s, bounds)
        e = v - y_v
        n1 = e.size
        loss1 = float(e @ e) / n1
        wt = (2.0 / n1) * e * phip
        gw += -lam * float(wt @ (Sp @ ca))  # d zeta / d w = -lam
        ga += c * (Sp.T @ (wt * zeta))
        gb += c * (Sp.T @ wt)
        gc += Sig.T @ wt

    shift = cspeed * tau_r - 1.5 * np.log1p(tau_r) + w * lam
    adv = cspeed - 1.5 / (tau_r + 1.0)  # d'(tau)
    zeta = xi_r - shift
    Sig, Sp, Spp, Sppp, s, sp, spp, sppp = _hidden_jet(a, b, c, zeta)
    v, phip, phipp, phippp = _phi_chain(s, bounds)
    vz = phip * sp
    vzz = phipp * sp * sp + phip * spp
    vzzz = phippp * sp**3 + 3.0 * phipp * sp * spp + phip * sppp
    Rv = _reaction_raw(spec, v)
    Rpv = _reaction_deriv_raw(spec, v)
    r = -adv * vz - vzz - Rv
    n2 = r.size
    loss2 = float(r @ r) / n2

    A = -adv * phipp * sp - phippp * sp * sp - phipp * spp - Rpv * phip
    B = -adv * phip - 2.0 * phipp * sp
    C = -phip
    u1 = (2.0 / n2) * r * A
    u2 = (2.0 / n2) * r * B
    u3 = (2.0 / n2) * r * C
    drdz = -adv * vzz - vzzz - Rpv * vz
    gw += -lam * float((2.0 / n2) * (r @ drdz))
    caa = ca * a
    ga += (
        c * (Sp.T @ (u1 * zeta))
        + c * (Sp.T @ u2)
        + ca * (Spp.T @ (u2 * zeta))
        + 2.0 * ca * (Spp.T @ u3)
        + caa * (Sppp.T @ (u3 * zeta))
    )
    gb += c * (Sp.T @ u1) + ca * (Spp.T @ u2) + caa * (Sppp.T @ u3)
    gc += Sig.T @ u1 + a * (Sp.T @ u2) + (a * a) * (Spp.T @ u3)

    return loss1 + loss2, gw, ga, gb, gc


def train_gtw(ic: GeneralIC, config: TrainConfig,
              schedule_fraction: float = DEFAULT_SCHEDULE_FRACTION,
              checkpoint_path=None, runlog_path=None) -> TrainReport:
    """Train the generalized solver on the scaled Fisher equation.

    The data term participates for the first schedule_fraction of the run and
    is then dropped exactly; the residual term runs throughout.
    """
    spec = config.spec
    if spec.kind != "fisher":
        raise ValueError(f"general initial conditions are supported for fisher only, got {spec.kind!r}")
    if not 0.0 <= schedule_fraction <= 1.0:
        raise ValueError("schedule_fraction must lie in [0, 1]")
    lam = shift_lambda(ic)
    rng = np.random.default_rng(config.seed)
    n = config.width
    a = rng.uniform(-1.0, 1.0, n)
    b = rng.uniform(-1.0, 1.0, n)
    c = rng.uniform(-1.0, 1.0, n) / np.sqrt(n)
    w = 0.0
    theta = np.concatenate([[w], a, b, c])
    adam = AdamState.zeros(theta.size)
    stride = _record_stride(config.epochs)
    icbc_cutoff = round(schedule_fraction * config.epochs)

    lo, hi, tau_top = config.xi_lo, config.xi_hi, config.tau_hi
    n_ic = config.n_icbc // 2
    n_lo = config.n_icbc // 4
    n_hb = config.n_icbc - n_ic - n_lo
    bc_xi = np.concatenate([np.full(n_lo, lo), np.full(n_hb, hi)])
    bc_y = np.concatenate([np.full(n_lo, spec.v_minus), np.full(n_hb, spec.v_plus)])
    ic_tau = np.zeros(n_ic)

    def _lhs1(axis_lo, axis_hi, m):
        return axis_lo + (rng.permutation(m) + rng.uniform(size=m)) * ((axis_hi - axis_lo) / m)

    def draw_points():
        xi_ic = _lhs1(lo, hi, n_ic)
        tau_bc = np.concatenate([_lhs1(0.0, tau_top, n_lo), _lhs1(0.0, tau_top, n_hb)])
        xi_v = np.concatenate([xi_ic, bc_xi])
        tau_v = np.concatenate([ic_tau, tau_bc])
        y_v = np.concatenate([ic_eval(ic, xi_ic), bc_y])
        xi_r = _lhs1(lo, hi, config.n_res)
        tau_r = _lhs1(0.0, tau_top, config.n_res)
        return xi_v, tau_v, y_v, xi_r, tau_r

    xi_v, tau_v, y_v, xi_r, tau_r = draw_points()
    records: list[tuple[int, float, float, float]] = []
    diagnostic = ""
    t0 = time.perf_counter()
    for epoch in range(config.epochs):
        if config.resample_every and epoch > 0 and epoch % config.resample_every == 0:
            xi_v, tau_v, y_v, xi_r, tau_r = draw_points()
        lr = cosine_lr(epoch, config)
        use_icbc = epoch < icbc_cutoff
        loss, gw, ga, gb, gc = _gtw_loss_grad(
            theta[0], theta[1 : 1 + n], theta[1 + n : 1 + 2 * n], theta[1 + 2 * n :],
            spec.bounds, spec, lam, xi_v, tau_v, y_v, xi_r, tau_r, use_icbc,
        )
        if not math.isfinite(loss):
            diagnostic = f"non-finite loss at epoch {epoch}; run aborted"
            records.append((epoch, loss, theta[0], lr))
            break
        grad = np.concatenate([[gw], ga, gb, gc])
        try:
            theta = adam_step(adam, theta, grad, lr)
        except ValueError:
            diagnostic = f"non-finite gradient at epoch {epoch}; run aborted"
            records.append((epoch, loss, theta[0], lr))
            break
        if epoch % stride == 0 or epoch == config.epochs - 1:
            records.append((epoch, loss, theta[0], lr))
    wall = time.perf_counter() - t0

    if not records:
        records.append((0, math.nan, theta[0], config.lr0))
        diagnostic = diagnostic or "no optimization performed"

    rec = np.asarray(records, dtype=float)
    params = GtwParams(a=theta[1 : 1 + n], b=theta[1 + n : 1 + 2 * n],
                       c=theta[1 + 2 * n :], bounds=spec.bounds, lam=lam, w=float(theta[0]))
    report = TrainReport(
        epochs_recorded=rec[:, 0].astype(int),
        loss_history=rec[:, 1],
        omega_history=rec[:, 2],  # trainable shift coefficient w
        lr_history=rec[:, 3],
        final_params=params,
        verdict=SPURIOUS,
        wall_time=wall,
        config=config,
        diagnostic=diagnostic,
        speed_label="w",
    )
    if not diagnostic and config.epochs > 0:
        report.verdict = classify_convergence(report, c_exact=None)
    if checkpoint_path is not None:
        save_gtw_checkpoint(checkpoint_path, params, spec, ic, meta={
            "seed": config.seed, "epochs": config.epochs,
            "domain": [config.xi_lo, config.xi_hi, 0.0, config.tau_hi],
            "schedule_fraction": schedule_fraction, "verdict": report.verdict,
        })
    if runlog_path is not None:
        from .training import write_runlog

        write_runlog(report, runlog_path)
    return report


def predict_gtw(params: GtwParams, coeffs, x, t) -> np.ndarray | float:
    """Physical-variable solution u(x, t) = v(sqrt(rho/D) x, rho t)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xi = math.sqrt(coeffs.rho / coeffs.D) * np.atleast_1d(x)
    tau = coeffs.rho * t
    zeta = xi - wave_shift(params, tau)
    s = sigmoid(zeta[:, None] * params.a + params.b) @ params.c
    v_minus, v_plus = params.bounds
    out = v_minus + (v_plus - v_minus) * sigmoid(s)
    return float(out[0]) if scalar else out


def front_position(x, u, level: float = 0.5) -> float:
    """Linearly interpolated location where a monotone profile crosses level.

    Raises if the profile never crosses, or crosses more than once.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("x and u must be matching 1-D arrays with >= 2 samples")
    d = u - level
    hits = []
    for i in range(d.size - 1):
        if d[i] == 0.0 and d[i + 1] == 0.0:
            raise ValueError(f"profile is flat at level {level}; crossing undefined")
        if d[i] == 0.0:
            hits.append(float(x[i]))
        elif d[i] * d[i + 1] < 0.0:
            frac = d[i] / (d[i] - d[i + 1])
            hits.append(float(x[i] + frac * (x[i + 1] - x[i])))
    if d[-1] == 0.0:
        hits.append(float(x[-1]))
    hits = sorted(set(hits))
    if not hits:
        raise ValueError(f"profile does not cross level {level}")
    if len(hits) > 1:
        raise ValueError(f"profile crosses level {level} more than once; not monotone around it")
    return hits[0]


# checkpoint schema: wavenet layout extended with lam, w, and the IC descriptor
def save_gtw_checkpoint(path, params: GtwParams, spec: ReactionSpec, ic: GeneralIC,
                        meta: dict | None = None) -> None:
    doc = {
        "format": "rdpinn-gtw-v1",
        "w": params.w,
        "lam": params.lam,
        "a": params.a.tolist(),
        "b": params.b.tolist(),
        "c": params.c.tolist(),
        "width": int(params.a.size),
        "bounds": list(params.bounds),
        "reaction": spec.to_dict(),
        "ic": {"kind": ic.kind, "lam": ic.lam},
        "meta": meta or {},
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_gtw_checkpoint(path) -> tuple[GtwParams, ReactionSpec, GeneralIC, dict]:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != "rdpinn-gtw-v1":
        raise ValueError(f"not a gtw checkpoint: {path}")
    params = GtwParams(
        a=np.asarray(doc["a"], dtype=float), b=np.asarray(doc["b"], dtype=float),
        c=np.asarray(doc["c"], dtype=float), bounds=tuple(doc["bounds"]),
        lam=float(doc["lam"]), w=float(doc["w"]),
    )
    ic = GeneralIC(kind=doc["ic"]["kind"], lam=float(doc["ic"]["lam"]))
    return params, ReactionSpec.from_dict(doc["reaction"]), ic, doc.get("meta", {})

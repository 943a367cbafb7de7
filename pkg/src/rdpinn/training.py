"""Collocation sampling, Adam with cosine annealing, and the training loop
for the unit-coefficient 1-D equation.

A run draws Latin-hypercube collocation points from a seeded stream, takes
full-batch Adam steps on the combined data + residual loss, and classifies
the outcome as physical (loss settles near 1e-10 with the predicted speed
pinned at the exact value) or spurious (persistent oscillation with the
speed stuck elsewhere).

By default the collocation set is redrawn from the seeded stream every
epoch.  A fixed set lets the network thread its residual between the sample
points and stall in the spurious regime; redrawing closes that loophole
while keeping runs bitwise reproducible per seed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .equations import ReactionSpec, exact_speed, traveling_profile
from .wavenet import WaveNetParams, _loss_grad_core, init_params, save_checkpoint

ORIGINAL_DOMAIN = (-5000.0, 5000.0, 2000.0)  # xi_lo, xi_hi, tau_hi
RESTRICTED_DOMAIN = (-500.0, 500.0, 20.0)

PHYSICAL = "physical"
SPURIOUS = "spurious"

# physical-convergence thresholds, calibrated from the separation between
# the two observed regimes (settled ~1e-10 vs oscillating 1e-9..1e-4)
LOSS_TOL = 1e-8
OMEGA_SPAN_TOL = 1e-3
SPEED_TOL = 1e-2


@dataclass
class TrainConfig:
    spec: ReactionSpec
    xi_lo: float
    xi_hi: float
    tau_hi: float
    n_icbc: int = 1024
    n_res: int = 1024
    epochs: int = 100_000
    lr0: float = 0.01
    lr_min: float = 0.0
    seed: int = 0
    width: int = 20
    domain_preset: str = "custom"  # original | restricted | custom
    resample_every: int = 1  # 0 keeps one fixed collocation set

    def __post_init__(self):
        if not self.xi_lo < self.xi_hi:
            raise ValueError("xi_lo must be < xi_hi")
        if not self.tau_hi > 0:
            raise ValueError("tau_hi must be > 0")
        if self.n_icbc < 1 or self.n_res < 1:
            raise ValueError("point counts must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not self.lr0 > 0:
            raise ValueError("lr0 must be > 0")
        if self.lr_min < 0:
            raise ValueError("lr_min must be >= 0")
        if self.width < 1:
            raise ValueError("width must be >= 1")
        if self.resample_every < 0:
            raise ValueError("resample_every must be >= 0")

    @classmethod
    def from_preset(cls, spec: ReactionSpec, preset: str, seed: int = 0, **overrides) -> "TrainConfig":
        domains = {"original": ORIGINAL_DOMAIN, "restricted": RESTRICTED_DOMAIN}
        if preset not in domains:
            raise ValueError(f"preset must be one of {sorted(domains)}, got {preset!r}")
        lo, hi, tau = domains[preset]
        return cls(spec=spec, xi_lo=lo, xi_hi=hi, tau_hi=tau, seed=seed,
                   domain_preset=preset, **overrides)


@dataclass
class TrainReport:
    epochs_recorded: np.ndarray
    loss_history: np.ndarray
    omega_history: np.ndarray
    lr_history: np.ndarray
    final_params: WaveNetParams
    verdict: str
    wall_time: float
    config: TrainConfig
    diagnostic: str = ""
    speed_label: str = "omega"  # runlog column name for the trained speed


def lhs_sample(rect, n: int, rng) -> np.ndarray:
    """n Latin-hypercube points in the axis-aligned box `rect`.

    rect is a sequence of (lo, hi) pairs.  Each axis gets exactly one point
    per stratum of the n-way uniform partition; identical seeds give
    identical point sets.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    rect = [(float(lo), float(hi)) for lo, hi in rect]
    for lo, hi in rect:
        if not lo < hi:
            raise ValueError(f"degenerate interval ({lo}, {hi})")
    cols = []
    for lo, hi in rect:
        strata = rng.permutation(n) + rng.uniform(size=n)
        cols.append(lo + strata * (hi - lo) / n)
    return np.stack(cols, axis=1)


def assemble_icbc(config: TrainConfig, rng) -> np.ndarray:
    """Labeled (xi, tau, target) rows: half initial-condition points carrying
    the exact scaled profile, one quarter per boundary pinned at the
    equilibria."""
    spec = config.spec
    n_ic = config.n_icbc // 2
    n_lo = config.n_icbc // 4
    n_hi = config.n_icbc - n_ic - n_lo
    xi_ic = lhs_sample([(config.xi_lo, config.xi_hi)], n_ic, rng)[:, 0]
    tau_lo = lhs_sample([(0.0, config.tau_hi)], n_lo, rng)[:, 0]
    tau_hi = lhs_sample([(0.0, config.tau_hi)], n_hi, rng)[:, 0]
    xi = np.concatenate([xi_ic, np.full(n_lo, config.xi_lo), np.full(n_hi, config.xi_hi)])
    tau = np.concatenate([np.zeros(n_ic), tau_lo, tau_hi])
    target = np.concatenate([
        traveling_profile(spec, xi_ic),
        np.full(n_lo, spec.v_minus),
        np.full(n_hi, spec.v_plus),
    ])
    return np.stack([xi, tau, target], axis=1)


def cosine_lr(epoch: int, config: TrainConfig) -> float:
    """Single-cycle cosine decay from lr0 to lr_min across the run."""
    if not 0 <= epoch < config.epochs:
        raise ValueError(f"epoch {epoch} outside [0, {config.epochs})")
    if config.epochs == 1:
        return config.lr0
    frac = epoch / (config.epochs - 1)
    return config.lr_min + (config.lr0 - config.lr_min) / 2.0 * (1.0 + math.cos(math.pi * frac))


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, n: int) -> "AdamState":
        return cls(m=np.zeros(n), v=np.zeros(n))


def adam_step(state: AdamState, theta: np.ndarray, grad: np.ndarray, lr: float) -> np.ndarray:
    """One bias-corrected Adam update; returns the new parameter vector."""
    if theta.shape != grad.shape or state.m.shape != grad.shape:
        raise ValueError("state/parameter dimensions must match the gradient")
    if not np.all(np.isfinite(grad)):
        raise ValueError("non-finite gradient")
    state.step += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad * grad
    mhat = state.m / (1.0 - state.beta1**state.step)
    vhat = state.v / (1.0 - state.beta2**state.step)
    return theta - lr * mhat / (np.sqrt(vhat) + state.eps)


def _record_stride(epochs: int) -> int:
    return 10 if epochs > 10_000 else 1


def train(config: TrainConfig, checkpoint_path=None, runlog_path=None) -> TrainReport:
    """Run the full training protocol and classify the outcome.

    Identical configs (seed included) produce bitwise-identical histories.
    Optionally persists a checkpoint and a runlog CSV.
    """
    spec = config.spec
    rng = np.random.default_rng(config.seed)
    params = init_params(config.width, spec.bounds, rng)
    theta = params.to_flat()
    n = config.width
    adam = AdamState.zeros(theta.size)
    stride = _record_stride(config.epochs)

    # lean per-epoch sampler; consumes the rng stream exactly like
    # assemble_icbc followed by a 2-axis lhs_sample
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
        y_v = np.concatenate([traveling_profile(spec, xi_ic), bc_y])
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
        loss, gw, ga, gb, gc = _loss_grad_core(
            theta[0], theta[1 : 1 + n], theta[1 + n : 1 + 2 * n], theta[1 + 2 * n :],
            spec.bounds, spec,
            xi_v, tau_v, y_v, xi_r, tau_r,
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

    if not records:  # epochs == 0: log the untouched initial state
        loss, *_ = _loss_grad_core(
            theta[0], theta[1 : 1 + n], theta[1 + n : 1 + 2 * n], theta[1 + 2 * n :],
            spec.bounds, spec,
            xi_v, tau_v, y_v, xi_r, tau_r,
        )
        records.append((0, loss, theta[0], config.lr0))
        diagnostic = diagnostic or "no optimization performed"

    rec = np.asarray(records, dtype=float)
    final_params = WaveNetParams.from_flat(theta, spec.bounds)
    report = TrainReport(
        epochs_recorded=rec[:, 0].astype(int),
        loss_history=rec[:, 1],
        omega_history=rec[:, 2],
        lr_history=rec[:, 3],
        final_params=final_params,
        verdict=SPURIOUS,
        wall_time=wall,
        config=config,
        diagnostic=diagnostic,
    )
    if diagnostic.startswith("non-finite") or config.epochs == 0:
        report.verdict = SPURIOUS
    else:
        report.verdict = classify_convergence(report, c_exact=exact_speed(spec))
    if checkpoint_path is not None:
        save_checkpoint(checkpoint_path, final_params, spec, meta=report_meta(report))
    if runlog_path is not None:
        write_runlog(report, runlog_path)
    return report


def classify_convergence(report: TrainReport, c_exact: float | None = None) -> str:
    """Physical iff the tail loss has settled below 1e-8, the speed is stable
    to 1e-3 across the tail, and (when known) it matches the exact speed."""
    loss = np.asarray(report.loss_history, dtype=float)
    omega = np.asarray(report.omega_history, dtype=float)
    if loss.size == 0 or omega.size == 0:
        raise ValueError("histories must be nonempty")
    k = max(1, math.ceil(0.05 * loss.size))
    tail_loss = loss[-k:]
    tail_omega = omega[-k:]
    ok = float(np.median(tail_loss)) < LOSS_TOL
    ok = ok and float(tail_omega.max() - tail_omega.min()) < OMEGA_SPAN_TOL
    if c_exact is not None:
        ok = ok and abs(c_exact - float(omega[-1])) < SPEED_TOL
    return PHYSICAL if ok else SPURIOUS


def report_meta(report: TrainReport) -> dict:
    c = report.config
    return {
        "seed": c.seed,
        "epochs": c.epochs,
        "domain": [c.xi_lo, c.xi_hi, 0.0, c.tau_hi],
        "domain_preset": c.domain_preset,
        "n_icbc": c.n_icbc,
        "n_res": c.n_res,
        "lr0": c.lr0,
        "lr_min": c.lr_min,
        "width": c.width,
        "resample_every": c.resample_every,
        "verdict": report.verdict,
        "wall_time": report.wall_time,
    }


def write_runlog(report: TrainReport, path) -> None:
    """CSV with columns epoch,loss,<speed>,lr; %.17g keeps it bit-faithful."""
    label = report.speed_label
    lines = [f"epoch,loss,{label},lr"]
    for e, l, o, r in zip(report.epochs_recorded, report.loss_history,
                          report.omega_history, report.lr_history):
        lines.append(f"{int(e)},{l:.17g},{o:.17g},{r:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")

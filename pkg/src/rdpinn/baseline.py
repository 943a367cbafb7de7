"""Deep comparator network: rho-as-input wave layer, three hidden layers.

The wave layer folds the reaction coefficient into the coordinate

    z = omega1 * sqrt(rho) * x + omega2 * rho * t + omega3,

so a single network serves a range of rho while the diffusion coefficient
stays fixed at 1; the coordinate uses the raw (x, t) inputs and is therefore
one-dimensional only.  The body is a stack of three 20-unit logistic layers
and the same output range constraint as the compact solver.  Gradients come
from a small reverse-mode tape over the (u, u_z, u_zz) jet.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _tape as tp
from .equations import ReactionSpec, traveling_profile
from .training import SPURIOUS, AdamState, TrainReport, adam_step, classify_convergence, _record_stride
from .wavenet import sigmoid

DEPTH = 3
WIDTH = 20
RHO_RANGE = (1.0, 1e6)
X_WINDOW = (-5.0, 25.0)
# final evaluation time per rho; log-log interpolated between the anchors
T_ANCHORS = ((1.0, 10.0), (1e2, 0.2), (1e4, 0.02), (1e6, 0.002))


@dataclass
class WavePinnParams:
    """Wave-layer triple plus the dense stack (fixed depth 3, width 20)."""

    omega1: float
    omega2: float
    omega3: float
    layers: list  # [(W, b)] with W shape (n_in, WIDTH)
    w_out: np.ndarray
    b_out: float
    bounds: tuple[float, float]

    def __post_init__(self):
        if len(self.layers) != DEPTH:
            raise ValueError(f"expected {DEPTH} hidden layers")
        for W, b in self.layers:
            if W.shape[-1] != WIDTH or b.shape != (WIDTH,):
                raise ValueError("hidden layers must have width 20")
        vals = [self.omega1, self.omega2, self.omega3, self.b_out]
        if not (all(math.isfinite(v) for v in vals)
                and all(np.all(np.isfinite(W)) and np.all(np.isfinite(b)) for W, b in self.layers)
                and np.all(np.isfinite(self.w_out))):
            raise ValueError("parameters must be finite")

    def to_flat(self) -> np.ndarray:
        parts = [np.array([self.omega1, self.omega2, self.omega3])]
        for W, b in self.layers:
            parts += [W.ravel(), b]
        parts += [self.w_out, np.array([self.b_out])]
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, theta: np.ndarray, bounds) -> "WavePinnParams":
        om1, om2, om3 = theta[:3]
        i = 3
        layers = []
        for ell in range(DEPTH):
            n_in = 1 if ell == 0 else WIDTH
            W = theta[i : i + n_in * WIDTH].reshape(n_in, WIDTH)
            i += n_in * WIDTH
            b = theta[i : i + WIDTH]
            i += WIDTH
            layers.append((W, b))
        w_out = theta[i : i + WIDTH]
        i += WIDTH
        return cls(float(om1), float(om2), float(om3), layers, w_out, float(theta[i]), tuple(bounds))


@dataclass
class WavePinnConfig:
    spec: ReactionSpec
    n_icbc: int = 1024
    n_res: int = 1024
    epochs: int = 100_000
    lr0: float = 0.001
    lr_min: float = 0.0
    seed: int = 0
    rho_range: tuple[float, float] = RHO_RANGE
    resample_every: int = 1
    # sharp-region residual suppression 1/(1 + alpha u_z^2): the method's
    # signature trait of favoring the equilibrium regions over the front
    front_weight_alpha: float = 1000.0

    def __post_init__(self):
        if self.spec.kind != "fisher":
            raise ValueError("the deep baseline is defined for the Fisher reaction only")
        if not (self.rho_range[0] > 0 and self.rho_range[1] > self.rho_range[0]):
            raise ValueError("rho_range must be an increasing positive pair")
        if self.front_weight_alpha < 0:
            raise ValueError("front_weight_alpha must be >= 0")


_T_LOG_RHO = np.log10([r for r, _ in T_ANCHORS])
_T_LOG_T = np.log10([t for _, t in T_ANCHORS])


def final_time_for(rho):
    """Evaluation-window final time at this rho (log-log interpolation)."""
    out = 10.0 ** np.interp(np.log10(np.asarray(rho, dtype=float)), _T_LOG_RHO, _T_LOG_T)
    return float(out) if out.ndim == 0 else out


def init_wavepinn(rng: np.random.Generator, bounds) -> WavePinnParams:
    """Dense layers ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)]; small wave-layer
    coefficients so the huge raw coordinates start inside the active range."""
    layers = []
    for ell in range(DEPTH):
        n_in = 1 if ell == 0 else WIDTH
        s = 1.0 / math.sqrt(n_in)
        layers.append((rng.uniform(-s, s, (n_in, WIDTH)), rng.uniform(-s, s, WIDTH)))
    w_out = rng.uniform(-1.0, 1.0, WIDTH) / math.sqrt(WIDTH)
    om = rng.uniform(-1.0, 1.0, 3) * 1e-3
    return WavePinnParams(float(om[0]), float(om[1]), float(om[2]), layers, w_out, 0.0, tuple(bounds))


def wavepinn_forward(params: WavePinnParams, rho, x, t):
    """u(x, t; rho) for scalar or array inputs (D fixed at 1)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("rho must be positive")
    rho, x, t = np.broadcast_arrays(rho, np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    scalar = rho.ndim == 0
    z = params.omega1 * np.sqrt(rho) * x + params.omega2 * rho * t + params.omega3
    shape = z.shape
    h = np.atleast_1d(z).reshape(-1, 1)
    for W, b in params.layers:
        h = sigmoid(h @ W + b)
    s = h @ params.w_out + params.b_out
    v_minus, v_plus = params.bounds
    out = (v_minus + (v_plus - v_minus) * sigmoid(s)).reshape(shape)
    return float(out) if scalar else out


def _col(v: tp.Var) -> tp.Var:
    """View a (P,) tape node as (P, 1) for matmul against (1, W) weights."""
    return tp.Var(v.value[:, None], (v,), lambda g: (g[:, 0],))


def _forward_jet_tape(theta_vars, bounds, sqrho, x, t):
    """(u, u_z, u_zz) as tape nodes; sqrho/x/t are per-point constants.

    The jet is propagated layerwise: for pre-activation p with input jet
    (h, h', h''): sigma(p), sigma'(p) p', sigma''(p) p'^2 + sigma'(p) p''.
    """
    om1, om2, om3 = theta_vars["om"]
    z = om1 * tp.Var(sqrho * x) + om2 * tp.Var(sqrho * sqrho * t) + om3
    ones_col = tp.Var(np.ones((np.asarray(x).size, 1)))
    h = hp = hpp = None
    for ell in range(DEPTH):
        W, b = theta_vars["layers"][ell]
        if ell == 0:
            p = _col(z) @ W + b  # (P,1) @ (1,WIDTH)
            pp = ones_col @ W    # dp/dz = W, broadcast per point
            ppp = None           # d2p/dz2 = 0
        else:
            p = h @ W + b
            pp = hp @ W
            ppp = hpp @ W
        s = tp.sigmoid(p)
        sp = s - tp.square(s)
        spp = sp * (1.0 - 2.0 * s)
        h = s
        hp = sp * pp
        hpp = spp * tp.square(pp) if ppp is None else spp * tp.square(pp) + sp * ppp
    w_out, b_out = theta_vars["out"]
    sv = h @ w_out + b_out
    svp = hp @ w_out
    svpp = hpp @ w_out
    lam = tp.sigmoid(sv)
    lamp = lam - tp.square(lam)
    lampp = lamp * (1.0 - 2.0 * lam)
    v_minus, v_plus = bounds
    delta = v_plus - v_minus
    u = v_minus + delta * lam
    uz = delta * (lamp * svp)
    uzz = delta * (lampp * tp.square(svp) + lamp * svpp)
    return u, uz, uzz


def _theta_vars(params: WavePinnParams) -> dict:
    return {
        "om": [tp.Var(params.omega1), tp.Var(params.omega2), tp.Var(params.omega3)],
        "layers": [(tp.Var(W), tp.Var(b)) for W, b in params.layers],
        "out": (tp.Var(params.w_out), tp.Var(params.b_out)),
    }


def _collect_grad(tv: dict) -> np.ndarray:
    parts = [np.array([float(v.grad) for v in tv["om"]])]
    for W, b in tv["layers"]:
        parts += [W.grad.ravel(), b.grad]
    parts += [tv["out"][0].grad, np.atleast_1d(np.asarray(tv["out"][1].grad, dtype=float))]
    return np.concatenate(parts)


def wavepinn_loss_grad(params: WavePinnParams, spec: ReactionSpec, icbc_points, res_points,
                       front_weight_alpha: float = 0.0):
    """Mean-squared data + residual loss with gradient (tape route).

    icbc rows: (rho, x, t, target); residual rows: (rho, x, t).  The residual
    is enforced in scaled form through the wave layer:
    r = omega2 u_z - omega1^2 u_zz - u (1 - u),
    equivalent to weighting the physical residual by 1/rho per point.  A
    positive front_weight_alpha additionally suppresses the residual in the
    sharp region with the held-fixed factor 1/(1 + alpha u_z^2).
    """
    icbc = np.asarray(icbc_points, dtype=float).reshape(-1, 4)
    res = np.asarray(res_points, dtype=float).reshape(-1, 3)
    if icbc.size == 0 or res.size == 0:
        raise ValueError("icbc_points and res_points must be nonempty")
    tv = _theta_vars(params)

    sq_v = np.sqrt(icbc[:, 0])
    u, _, _ = _forward_jet_tape(tv, params.bounds, sq_v, icbc[:, 1], icbc[:, 2])
    loss_ic = tp.mean(tp.square(u - tp.Var(icbc[:, 3])))

    rho_r = res[:, 0]
    sq_r = np.sqrt(rho_r)
    u, uz, uzz = _forward_jet_tape(tv, params.bounds, sq_r, res[:, 1], res[:, 2])
    om1, om2 = tv["om"][0], tv["om"][1]
    # residual in scaled form (physical residual / rho): without per-point
    # weighting the rho^2-scaled physical residuals drive the net to the
    # trivial equilibrium
    u_tau = uz * om2
    u_xixi = uzz * tp.square(om1)
    reaction = u * (1.0 - u)
    r = u_tau - u_xixi - reaction
    if front_weight_alpha > 0:
        w = 1.0 / (1.0 + front_weight_alpha * uz.value**2)  # no gradient through w
        loss_res = tp.mean(tp.Var(w) * tp.square(r))
    else:
        loss_res = tp.mean(tp.square(r))

    total = loss_ic + loss_res
    tp.backward(total)
    return float(total.value), _collect_grad(tv)


def _draw_wavepinn_points(rng, cfg: WavePinnConfig, spec: ReactionSpec):
    """Collocation triples (rho, x, t) with rho log-uniform and t drawn inside
    the rho-matched evaluation window; IC targets from the closed form."""
    lo_r, hi_r = np.log10(cfg.rho_range[0] + 1e-12), np.log10(cfg.rho_range[1])

    def lhs1(n):
        return (rng.permutation(n) + rng.uniform(size=n)) / n

    def rho_draw(n):
        return 10 ** (lo_r + lhs1(n) * (hi_r - lo_r))

    n_ic = cfg.n_icbc // 2
    n_bc = cfg.n_icbc - n_ic
    n_bl = n_bc // 2
    n_br = n_bc - n_bl
    x_lo, x_hi = X_WINDOW

    rho_ic = rho_draw(n_ic)
    x_ic = x_lo + lhs1(n_ic) * (x_hi - x_lo)
    y_ic = traveling_profile(spec, np.sqrt(rho_ic) * x_ic)
    rho_bc = rho_draw(n_bc)
    t_bc = lhs1(n_bc) * final_time_for(rho_bc)
    x_bc = np.concatenate([np.full(n_bl, x_lo), np.full(n_br, x_hi)])
    y_bc = np.concatenate([np.full(n_bl, spec.v_minus), np.full(n_br, spec.v_plus)])
    icbc = np.stack([
        np.concatenate([rho_ic, rho_bc]),
        np.concatenate([x_ic, x_bc]),
        np.concatenate([np.zeros(n_ic), t_bc]),
        np.concatenate([y_ic, y_bc]),
    ], axis=1)

    rho_res = rho_draw(cfg.n_res)
    x_res = x_lo + lhs1(cfg.n_res) * (x_hi - x_lo)
    t_res = lhs1(cfg.n_res) * final_time_for(rho_res)
    res = np.stack([rho_res, x_res, t_res], axis=1)
    return icbc, res


def _phi_chain3(s, bounds):
    v_minus, v_plus = bounds
    delta = v_plus - v_minus
    lam = sigmoid(s)
    lamp = lam * (1.0 - lam)
    u = v_minus + delta * lam
    phip = delta * lamp
    phipp = phip * (1.0 - 2.0 * lam)
    phippp = phip * (1.0 - 6.0 * lamp)
    return u, phip, phipp, phippp


def _loss_grad_fast(params: WavePinnParams, spec: ReactionSpec, icbc: np.ndarray, res: np.ndarray,
                    front_weight_alpha: float = 0.0):
    """Hand-rolled reverse pass; numerically identical to the tape route."""
    Ws = [W for W, _ in params.layers]
    bs = [b for _, b in params.layers]
    w1 = Ws[0][0]  # first layer's (1, WIDTH) weights as a row
    w_out = params.w_out
    om1, om2 = params.omega1, params.omega2
    gW = [np.zeros_like(W) for W in Ws]
    gb = [np.zeros_like(b) for b in bs]
    g_wout = np.zeros_like(w_out)
    g_bout = 0.0
    g_om = np.zeros(3)

    # ---- data term: value-only forward/backward
    sq = np.sqrt(icbc[:, 0])
    zx, zt, y = sq * icbc[:, 1], icbc[:, 0] * icbc[:, 2], icbc[:, 3]
    z = om1 * zx + om2 * zt + params.omega3
    acts = []
    h = None
    for ell in range(DEPTH):
        p = z[:, None] * w1 + bs[0] if ell == 0 else h @ Ws[ell] + bs[ell]
        h = sigmoid(p)
        acts.append(h)
    s = h @ w_out + params.b_out
    u, phip, _, _ = _phi_chain3(s, params.bounds)
    e = u - y
    n1 = e.size
    loss1 = float(e @ e) / n1
    gs = (2.0 / n1) * e * phip
    g_wout += acts[-1].T @ gs
    g_bout += float(gs.sum())
    gh = np.outer(gs, w_out)
    for ell in range(DEPTH - 1, -1, -1):
        sig = acts[ell]
        gp = gh * (sig * (1.0 - sig))
        gb[ell] += gp.sum(axis=0)
        if ell == 0:
            gW[0][0] += z @ gp
            gz = gp @ w1
        else:
            h_in = acts[ell - 1]
            gW[ell] += h_in.T @ gp
            gh = gp @ Ws[ell].T
    g_om[0] += gz @ zx
    g_om[1] += gz @ zt
    g_om[2] += gz.sum()

    # ---- residual term: second-order jets forward, adjoint triples back
    rho = res[:, 0]
    sq = np.sqrt(rho)
    zx, zt = sq * res[:, 1], rho * res[:, 2]
    z = om1 * zx + om2 * zt + params.omega3
    P = z.size
    h = hp = hpp = None
    stash = []
    for ell in range(DEPTH):
        if ell == 0:
            p = z[:, None] * w1 + bs[0]
            pp = np.broadcast_to(w1, (P, WIDTH))
            ppp = None
        else:
            p = h @ Ws[ell] + bs[ell]
            pp = hp @ Ws[ell]
            ppp = hpp @ Ws[ell]
        sig = sigmoid(p)
        sigp = sig * (1.0 - sig)
        sigpp = sigp * (1.0 - 2.0 * sig)
        sigppp = sigp * (1.0 - 6.0 * sigp)
        h_in, hp_in, hpp_in = h, hp, hpp
        h = sig
        hp = sigp * pp
        hpp = sigpp * pp * pp if ppp is None else sigpp * pp * pp + sigp * ppp
        stash.append((h_in, hp_in, hpp_in, pp, ppp, sig, sigp, sigpp, sigppp))
    s = h @ w_out + params.b_out
    sp = hp @ w_out
    spp = hpp @ w_out
    u, phip, phipp, phippp = _phi_chain3(s, params.bounds)
    uz = phip * sp
    uzz = phipp * sp * sp + phip * spp
    r = om2 * uz - om1 * om1 * uzz - u * (1.0 - u)
    n2 = r.size
    if front_weight_alpha > 0:
        wgt = 1.0 / (1.0 + front_weight_alpha * uz * uz)  # held fixed
        loss2 = float(wgt @ (r * r)) / n2
        gr = (2.0 / n2) * wgt * r
    else:
        loss2 = float(r @ r) / n2
        gr = (2.0 / n2) * r
    gu = gr * (-(1.0 - 2.0 * u))
    guz = gr * om2
    guzz = gr * (-om1 * om1)
    g_om[1] += gr @ uz
    g_om[0] += gr @ (-2.0 * om1 * uzz)
    gs = gu * phip + guz * phipp * sp + guzz * (phippp * sp * sp + phipp * spp)
    gsp = guz * phip + guzz * 2.0 * phipp * sp
    gspp = guzz * phip
    g_wout += h.T @ gs + hp.T @ gsp + hpp.T @ gspp
    g_bout += float(gs.sum())
    gh = np.outer(gs, w_out)
    ghp = np.outer(gsp, w_out)
    ghpp = np.outer(gspp, w_out)
    for ell in range(DEPTH - 1, -1, -1):
        h_in, hp_in, hpp_in, pp, ppp, sig, sigp, sigpp, sigppp = stash[ell]
        base = sigppp * pp * pp if ppp is None else sigppp * pp * pp + sigpp * ppp
        gp = gh * sigp + ghp * sigpp * pp + ghpp * base
        gpp = ghp * sigp + ghpp * (2.0 * sigpp * pp)
        gppp = None if ppp is None else ghpp * sigp
        gb[ell] += gp.sum(axis=0)
        if ell == 0:
            gW[0][0] += z @ gp + gpp.sum(axis=0)
            gz = gp @ w1
        else:
            gW[ell] += h_in.T @ gp + hp_in.T @ gpp + hpp_in.T @ gppp
            gh = gp @ Ws[ell].T
            ghp = gpp @ Ws[ell].T
            ghpp = gppp @ Ws[ell].T
    g_om[0] += gz @ zx
    g_om[1] += gz @ zt
    g_om[2] += gz.sum()

    grad = np.concatenate(
        [g_om] + [np.concatenate([W.ravel(), b]) for W, b in zip(gW, gb)]
        + [g_wout, np.array([g_bout])]
    )
    return loss1 + loss2, grad


def train_wavepinn(cfg: WavePinnConfig, checkpoint_path=None, runlog_path=None) -> TrainReport:
    """Train the deep baseline with the shared loop machinery."""
    spec = cfg.spec
    rng = np.random.default_rng(cfg.seed)
    params = init_wavepinn(rng, spec.bounds)
    theta = params.to_flat()
    adam = AdamState.zeros(theta.size)
    stride = _record_stride(cfg.epochs)
    icbc, res = _draw_wavepinn_points(rng, cfg, spec)

    records = []
    diagnostic = ""
    t0 = time.perf_counter()
    for epoch in range(cfg.epochs):
        if cfg.resample_every and epoch > 0 and epoch % cfg.resample_every == 0:
            icbc, res = _draw_wavepinn_points(rng, cfg, spec)
        if cfg.epochs == 1:
            lr = cfg.lr0
        else:
            frac = epoch / (cfg.epochs - 1)
            lr = cfg.lr_min + (cfg.lr0 - cfg.lr_min) / 2.0 * (1.0 + math.cos(math.pi * frac))
        cur = WavePinnParams.from_flat(theta, spec.bounds)
        loss, grad = _loss_grad_fast(cur, spec, icbc, res, cfg.front_weight_alpha)
        if not math.isfinite(loss):
            diagnostic = f"non-finite loss at epoch {epoch}; run aborted"
            records.append((epoch, loss, theta[1], lr))
            break
        try:
            theta = adam_step(adam, theta, grad, lr)
        except ValueError:
            diagnostic = f"non-finite gradient at epoch {epoch}; run aborted"
            records.append((epoch, loss, theta[1], lr))
            break
        if epoch % stride == 0 or epoch == cfg.epochs - 1:
            # track omega2 (the time coefficient; its scale sets the speed)
            records.append((epoch, loss, theta[1], lr))
    wall = time.perf_counter() - t0
    if not records:
        records.append((0, math.nan, theta[1], cfg.lr0))
        diagnostic = diagnostic or "no optimization performed"

    rec = np.asarray(records, dtype=float)
    final = WavePinnParams.from_flat(theta, spec.bounds)
    from .training import TrainConfig

    shadow = TrainConfig(spec=spec, xi_lo=X_WINDOW[0], xi_hi=X_WINDOW[1], tau_hi=10.0,
                         n_icbc=cfg.n_icbc, n_res=cfg.n_res, epochs=cfg.epochs,
                         lr0=cfg.lr0, lr_min=cfg.lr_min, seed=cfg.seed,
                         domain_preset="wavepinn", resample_every=cfg.resample_every)
    report = TrainReport(
        epochs_recorded=rec[:, 0].astype(int),
        loss_history=rec[:, 1],
        omega_history=rec[:, 2],
        lr_history=rec[:, 3],
        final_params=final,
        verdict=SPURIOUS,
        wall_time=wall,
        config=shadow,
        diagnostic=diagnostic,
        speed_label="omega2",
    )
    if not diagnostic and cfg.epochs > 0:
        report.verdict = classify_convergence(report, c_exact=None)
    if checkpoint_path is not None:
        save_wavepinn_checkpoint(checkpoint_path, final, spec, meta={
            "seed": cfg.seed, "epochs": cfg.epochs, "lr0": cfg.lr0,
            "rho_range": list(cfg.rho_range), "verdict": report.verdict,
        })
    if runlog_path is not None:
        from .training import write_runlog

        write_runlog(report, runlog_path)
    return report


def save_wavepinn_checkpoint(path, params: WavePinnParams, spec: ReactionSpec,
                             meta: dict | None = None) -> None:
    doc = {
        "format": "rdpinn-wavepinn-v1",
        "omega": [params.omega1, params.omega2, params.omega3],
        "layers": [{"W": W.tolist(), "b": b.tolist()} for W, b in params.layers],
        "w_out": params.w_out.tolist(),
        "b_out": params.b_out,
        "bounds": list(params.bounds),
        "reaction": spec.to_dict(),
        "meta": meta or {},
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_wavepinn_checkpoint(path) -> tuple[WavePinnParams, ReactionSpec, dict]:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != "rdpinn-wavepinn-v1":
        raise ValueError(f"not a wavepinn checkpoint: {path}")
    om = doc["omega"]
    layers = [(np.asarray(l["W"], dtype=float), np.asarray(l["b"], dtype=float))
              for l in doc["layers"]]
    params = WavePinnParams(float(om[0]), float(om[1]), float(om[2]), layers,
                            np.asarray(doc["w_out"], dtype=float), float(doc["b_out"]),
                            tuple(doc["bounds"]))
    return params, ReactionSpec.from_dict(doc["reaction"]), doc.get("meta", {})

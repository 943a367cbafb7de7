"""Compact traveling-wave network with closed-form derivatives.

Architecture: a wave layer producing the predicted coordinate
zeta = xi - omega*tau with trainable speed omega, one hidden layer of N
logistic units, and a range constraint

    v(xi, tau) = phi( sum_i c_i * sigmoid(a_i * zeta + b_i) ),
    phi(s) = v_minus + (v_plus - v_minus) * sigmoid(s),

which pins the output inside the open interval between the equilibria.
Because the architecture is fixed and tiny, the full solution jet
(v, v_tau, v_xi, v_xixi) and all parameter gradients are evaluated from
hand-derived formulas; finite-difference tests cross-check every term.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .equations import ReactionSpec, _reaction_deriv_raw, _reaction_raw, reaction_eval


def sigmoid(z):
    """Logistic function, stable for all real z."""
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def _sigmoid_inplace(z: np.ndarray) -> np.ndarray:
    """sigmoid(z) overwriting z; hot-loop variant."""
    z *= 0.5
    np.tanh(z, out=z)
    z += 1.0
    z *= 0.5
    return z


@dataclass
class WaveNetParams:
    """Trainable state: wave speed omega plus one hidden layer (a, b, c)."""

    omega: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    bounds: tuple[float, float]  # (v_minus, v_plus)

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        n = self.a.size
        if n < 1 or self.b.size != n or self.c.size != n:
            raise ValueError("a, b, c must be equal-length arrays with N >= 1")
        if not (
            np.isfinite(self.omega)
            and np.all(np.isfinite(self.a))
            and np.all(np.isfinite(self.b))
            and np.all(np.isfinite(self.c))
        ):
            raise ValueError("parameters must be finite")

    @property
    def width(self) -> int:
        return self.a.size

    def copy(self) -> "WaveNetParams":
        return WaveNetParams(self.omega, self.a.copy(), self.b.copy(), self.c.copy(), self.bounds)

    # flat layout [omega, a, b, c] used by the optimizer
    def to_flat(self) -> np.ndarray:
        return np.concatenate([[self.omega], self.a, self.b, self.c])

    @classmethod
    def from_flat(cls, theta: np.ndarray, bounds) -> "WaveNetParams":
        n = (theta.size - 1) // 3
        return cls(float(theta[0]), theta[1 : 1 + n], theta[1 + n : 1 + 2 * n], theta[1 + 2 * n :], tuple(bounds))


@dataclass
class WaveNetGrad:
    omega: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def to_flat(self) -> np.ndarray:
        return np.concatenate([[self.omega], self.a, self.b, self.c])


@dataclass
class SolutionJet:
    """Value and the derivatives entering the residual."""

    v: np.ndarray | float
    v_tau: np.ndarray | float
    v_xi: np.ndarray | float
    v_xixi: np.ndarray | float


def init_params(width: int, bounds, rng: np.random.Generator) -> WaveNetParams:
    """Random start: hidden slopes/offsets uniform on [-1, 1], small output
    weights ~ U[-1, 1]/sqrt(N), omega = 0 (sign-agnostic; bistable runs learn
    a negative speed)."""
    a = rng.uniform(-1.0, 1.0, width)
    b = rng.uniform(-1.0, 1.0, width)
    c = rng.uniform(-1.0, 1.0, width) / np.sqrt(width)
    return WaveNetParams(0.0, a, b, c, tuple(bounds))


def wave_coordinate(params: WaveNetParams, xi, tau):
    """Predicted traveling-wave coordinate zeta = xi - omega*tau."""
    return np.asarray(xi, dtype=float) - params.omega * np.asarray(tau, dtype=float)


# ---------------------------------------------------------------------------
# closed-form building blocks
#
# sigma' = sigma(1-sigma); sigma'' = sigma'(1-2 sigma);
# sigma''' = sigma'(1 - 6 sigma + 6 sigma^2); same chain applies to phi.
# ---------------------------------------------------------------------------


def _hidden_value(a, b, c, zeta):
    """s(zeta) plus the unit activations needed for first-order grads."""
    Z = np.asarray(zeta, dtype=float)[..., None] * a + b
    Sig = _sigmoid_inplace(Z)
    Sp = Sig * (1.0 - Sig)
    return Sig, Sp, Sig @ c


def _hidden_jet(a, b, c, zeta):
    """Hidden sums s, s', s'', s''' and activation stacks for residual grads.

    Uses sigma' = sigma(1-sigma), sigma'' = sigma'(1-2 sigma) and
    sigma''' = sigma'(1-6 sigma').
    """
    Z = np.asarray(zeta, dtype=float)[..., None] * a + b
    Sig = _sigmoid_inplace(Z)
    Sp = Sig * (1.0 - Sig)
    Spp = Sp * (1.0 - 2.0 * Sig)
    Sppp = Sp * (1.0 - 6.0 * Sp)
    ca = c * a
    s = Sig @ c
    sp = Sp @ ca
    spp = Spp @ (ca * a)
    sppp = Sppp @ (ca * a * a)
    return Sig, Sp, Spp, Sppp, s, sp, spp, sppp


def _phi_chain(s, bounds):
    """phi(s) and its first three derivatives for the range constraint."""
    v_minus, v_plus = bounds
    delta = v_plus - v_minus
    lam = sigmoid(s)
    lamp = lam * (1.0 - lam)
    v = v_minus + delta * lam
    phip = delta * lamp
    phipp = phip * (1.0 - 2.0 * lam)
    phippp = phip * (1.0 - 6.0 * lamp)
    return v, phip, phipp, phippp


def profile_value(a, b, c, bounds, zeta):
    """phi(s(zeta)) alone; the cheap path used for dense field evaluation."""
    v_minus, v_plus = bounds
    _, _, s = _hidden_value(a, b, c, zeta)
    return v_minus + (v_plus - v_minus) * sigmoid(s)


def profile_jet(a, b, c, bounds, zeta):
    """(v, v_zeta, v_zetazeta) as functions of the wave coordinate."""
    _, _, _, _, s, sp, spp, _ = _hidden_jet(a, b, c, zeta)
    v, phip, phipp, _ = _phi_chain(s, bounds)
    vz = phip * sp
    vzz = phipp * sp * sp + phip * spp
    return v, vz, vzz


def forward_jet(params: WaveNetParams, xi, tau) -> SolutionJet:
    """Evaluate v and (v_tau, v_xi, v_xixi) at (xi, tau).

    The traveling-wave structure gives v_xi = v_zeta, v_xixi = v_zetazeta and
    v_tau = -omega * v_zeta exactly.
    """
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 0
    zeta = wave_coordinate(params, xi, tau)
    v, vz, vzz = profile_jet(params.a, params.b, params.c, params.bounds, zeta)
    jet = SolutionJet(v=v, v_tau=-params.omega * vz, v_xi=vz, v_xixi=vzz)
    if scalar:
        jet = SolutionJet(float(jet.v), float(jet.v_tau), float(jet.v_xi), float(jet.v_xixi))
    return jet


def residual(params: WaveNetParams, spec: ReactionSpec, xi, tau):
    """Unit-coefficient equation residual v_tau - v_xixi - R(v) at (xi, tau)."""
    jet = forward_jet(params, xi, tau)
    return jet.v_tau - jet.v_xixi - reaction_eval(spec, jet.v)


def loss_grad(params: WaveNetParams, spec: ReactionSpec, icbc_points, res_points):
    """Mean-squared data + residual loss and its exact parameter gradient.

    icbc_points: array-like of (xi, tau, target) rows; res_points: (xi, tau)
    rows.  Returns (loss, WaveNetGrad).  Reverse accumulation runs through
    the full jet, including the third-derivative terms the residual gradient
    needs.
    """
    icbc = np.asarray(icbc_points, dtype=float)
    res = np.asarray(res_points, dtype=float)
    if icbc.size == 0 or res.size == 0:
        raise ValueError("icbc_points and res_points must be nonempty")
    icbc = icbc.reshape(-1, 3)
    res = res.reshape(-1, 2)
    loss, gw, ga, gb, gc = _loss_grad_core(
        params.omega, params.a, params.b, params.c, params.bounds, spec,
        icbc[:, 0], icbc[:, 1], icbc[:, 2], res[:, 0], res[:, 1],
    )
    return loss, WaveNetGrad(gw, ga, gb, gc)


def _loss_grad_core(omega, a, b, c, bounds, spec, xi_v, tau_v, y_v, xi_r, tau_r):
    """Flat-array workhorse shared with the training loop."""
    ca = c * a

    # -- data term: L1 = mean (v - y)^2 over IC/BC points
    zeta = xi_v - omega * tau_v
    Sig, Sp, s = _hidden_value(a, b, c, zeta)
    v, phip, _, _ = _phi_chain(s, bounds)
    e = v - y_v
    n1 = e.size
    loss1 = float(e @ e) / n1
    w = (2.0 / n1) * e * phip  # dL1/ds per point
    g_omega = -float((w * (Sp @ ca)) @ tau_v)  # d zeta / d omega = -tau
    ga = c * (Sp.T @ (w * zeta))
    gb = c * (Sp.T @ w)
    gc = Sig.T @ w

    # -- residual term: L2 = mean r^2,  r = -omega*v_z - v_zz - R(v)
    zeta = xi_r - omega * tau_r
    Sig, Sp, Spp, Sppp, s, sp, spp, sppp = _hidden_jet(a, b, c, zeta)
    v, phip, phipp, phippp = _phi_chain(s, bounds)
    vz = phip * sp
    vzz = phipp * sp * sp + phip * spp
    vzzz = phippp * sp**3 + 3.0 * phipp * sp * spp + phip * sppp
    Rv = _reaction_raw(spec, v)
    Rpv = _reaction_deriv_raw(spec, v)
    r = -omega * vz - vzz - Rv
    n2 = r.size
    loss2 = float(r @ r) / n2

    # partials of r with respect to the hidden sums
    A = -omega * phipp * sp - phippp * sp * sp - phipp * spp - Rpv * phip
    B = -omega * phip - 2.0 * phipp * sp
    C = -phip
    u1 = (2.0 / n2) * r * A
    u2 = (2.0 / n2) * r * B
    u3 = (2.0 / n2) * r * C
    drdz = -omega * vzz - vzzz - Rpv * vz  # d r / d zeta
    g_omega += float((2.0 / n2) * (r @ (-vz - tau_r * drdz)))
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

    return loss1 + loss2, g_omega, ga, gb, gc


# ---------------------------------------------------------------------------
# checkpoint format: one flat JSON document per trained solver
# ---------------------------------------------------------------------------


def save_checkpoint(path, params: WaveNetParams, spec: ReactionSpec, meta: dict | None = None) -> None:
    doc = {
        "format": "rdpinn-wavenet-v1",
        "omega": params.omega,
        "a": params.a.tolist(),
        "b": params.b.tolist(),
        "c": params.c.tolist(),
        "width": params.width,
        "bounds": list(params.bounds),
        "reaction": spec.to_dict(),
        "meta": meta or {},
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_checkpoint(path) -> tuple[WaveNetParams, ReactionSpec, dict]:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != "rdpinn-wavenet-v1":
        raise ValueError(f"not a wavenet checkpoint: {path}")
    params = WaveNetParams(
        omega=float(doc["omega"]),
        a=np.asarray(doc["a"], dtype=float),
        b=np.asarray(doc["b"], dtype=float),
        c=np.asarray(doc["c"], dtype=float),
        bounds=tuple(doc["bounds"]),
    )
    return params, ReactionSpec.from_dict(doc["reaction"]), doc.get("meta", {})

"""Reaction-term family, scaling transforms, and closed-form traveling waves.

The governing equation is

    u_t = D * laplacian(u) + rho * u**p * (1 - u**q) * (u - a)**r

with p, q > 0, r in {0, 1} and 0 < a < 1.  Four named members of the family
(Fisher, NWS, Zeldovich, bistable) admit closed-form monotone fronts with a
special wave speed; those closed forms are the accuracy oracles for the rest
of the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("fisher", "nws", "zeldovich", "bistable")

# exponent arguments beyond this would overflow exp(); the closed forms
# saturate to the limiting equilibrium instead
EXP_GUARD = 700.0


@dataclass(frozen=True)
class ReactionSpec:
    """One member of the reaction family rho * u**p * (1-u**q) * (u-a)**r."""

    kind: str
    p: float
    q: float
    r: int
    a: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (self.p > 0 and math.isfinite(self.p)):
            raise ValueError(f"p must be a positive real, got {self.p}")
        if not (self.q > 0 and math.isfinite(self.q)):
            raise ValueError(f"q must be a positive real, got {self.q}")
        if self.r not in (0, 1):
            raise ValueError(f"r must be 0 or 1, got {self.r}")
        if self.r == 1 and not (0.0 < self.a < 1.0):
            raise ValueError(f"a must lie in (0, 1) when r=1, got {self.a}")

    @property
    def v_minus(self) -> float:
        """Equilibrium approached as zeta -> -inf."""
        return self.a if self.kind == "bistable" else 1.0

    @property
    def v_plus(self) -> float:
        """Equilibrium approached as zeta -> +inf."""
        return 1.0 if self.kind == "bistable" else 0.0

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.v_minus, self.v_plus)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "q": self.q, "r": self.r, "a": self.a}

    @classmethod
    def from_dict(cls, d: dict) -> "ReactionSpec":
        return cls(kind=d["kind"], p=d["p"], q=d["q"], r=int(d["r"]), a=d.get("a", 0.0))


@dataclass(frozen=True)
class PhysicalCoeffs:
    """Reaction coefficient rho [1/time] and diffusion coefficient D [length^2/time]."""

    rho: float
    D: float

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ValueError(f"rho must be a positive real, got {self.rho}")
        if not (self.D > 0 and math.isfinite(self.D)):
            raise ValueError(f"D must be a positive real, got {self.D}")


UNIT_COEFFS = PhysicalCoeffs(1.0, 1.0)


@dataclass(frozen=True)
class PhysicalPoint:
    x: np.ndarray  # shape (n,)
    t: float


@dataclass(frozen=True)
class ScaledPoint:
    xi: np.ndarray  # shape (n,)
    tau: float


def make_reaction(kind: str, q: float | None = None, a: float | None = None) -> ReactionSpec:
    """Build the named reaction with preset exponents.

    NWS requires ``q`` (> 0); bistable requires ``a`` in (0, 1).
    """
    kind = kind.lower()
    if kind == "fisher":
        return ReactionSpec("fisher", p=1.0, q=1.0, r=0)
    if kind == "nws":
        if q is None:
            raise ValueError("q is required for the NWS reaction")
        if not (q > 0 and math.isfinite(q)):
            raise ValueError(f"q must be a positive real, got {q}")
        return ReactionSpec("nws", p=1.0, q=float(q), r=0)
    if kind == "zeldovich":
        return ReactionSpec("zeldovich", p=2.0, q=1.0, r=0)
    if kind == "bistable":
        if a is None:
            raise ValueError("a is required for the bistable reaction")
        if not (0.0 < a < 1.0):
            raise ValueError(f"a must lie in (0, 1), got {a}")
        return ReactionSpec("bistable", p=1.0, q=1.0, r=1, a=float(a))
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


def _reaction_raw(spec: ReactionSpec, u, rho: float = 1.0):
    """reaction_eval without input validation; training hot path."""
    out = rho * u**spec.p * (1.0 - u**spec.q)
    if spec.r == 1:
        out = out * (u - spec.a)
    return out


def _reaction_deriv_raw(spec: ReactionSpec, u, rho: float = 1.0):
    p, q = spec.p, spec.q
    core = p * u ** (p - 1.0) * (1.0 - u**q) - q * u ** (p + q - 1.0)
    if spec.r == 1:
        return rho * (core * (u - spec.a) + u**p * (1.0 - u**q))
    return rho * core


def reaction_eval(spec: ReactionSpec, u, rho: float = 1.0):
    """R(u) = rho * u**p * (1-u**q) * (u-a)**r, with (u-a)**0 == 1 exactly."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("u must be finite")
    out = _reaction_raw(spec, u, rho)
    return out if out.ndim else float(out)


def reaction_deriv(spec: ReactionSpec, u, rho: float = 1.0):
    """dR/du for the family; used by residual gradients."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("u must be finite")
    out = _reaction_deriv_raw(spec, u, rho)
    return out if out.ndim else float(out)


def scale_forward(coeffs: PhysicalCoeffs, point: PhysicalPoint) -> ScaledPoint:
    """(x, t) -> (xi, tau) with xi = sqrt(rho/D) x and tau = rho t."""
    s = math.sqrt(coeffs.rho / coeffs.D)
    return ScaledPoint(xi=np.asarray(point.x, dtype=float) * s, tau=coeffs.rho * point.t)


def scale_inverse(coeffs: PhysicalCoeffs, point: ScaledPoint) -> PhysicalPoint:
    """Exact algebraic inverse of scale_forward; field values pass through unchanged."""
    s = math.sqrt(coeffs.D / coeffs.rho)
    return PhysicalPoint(x=np.asarray(point.xi, dtype=float) * s, t=point.tau / coeffs.rho)


def exact_speed(spec: ReactionSpec, coeffs: PhysicalCoeffs = UNIT_COEFFS) -> float:
    """Special wave speed of the closed-form front."""
    rho, D = coeffs.rho, coeffs.D
    if spec.kind == "fisher":
        return 5.0 * math.sqrt(rho * D / 6.0)
    if spec.kind == "nws":
        q = spec.q
        return (q + 4.0) / math.sqrt(2.0 * q + 4.0) * math.sqrt(rho * D)
    if spec.kind == "zeldovich":
        return math.sqrt(rho * D / 2.0)
    if spec.kind == "bistable":
        return -(1.0 + spec.a) * math.sqrt(rho * D / 2.0)
    raise ValueError(f"unsupported kind {spec.kind!r}")


def traveling_profile(spec: ReactionSpec, zeta):
    """Closed-form front V(zeta) of the unit-coefficient equation.

    V solves V'' + c V' + V**p (1-V**q)(V-a)**r = 0 with c = exact_speed(spec)
    at rho = D = 1, and connects v_minus (zeta -> -inf) to v_plus (+inf).
    Saturates exactly to the equilibria once the exponent argument passes
    +-EXP_GUARD.
    """
    zeta = np.asarray(zeta, dtype=float)
    scalar = zeta.ndim == 0
    zeta = np.atleast_1d(zeta)
    if spec.kind == "fisher":
        arg = zeta / math.sqrt(6.0)
        out = np.empty_like(arg)
        hi, lo = arg > EXP_GUARD, arg < -EXP_GUARD
        mid = ~(hi | lo)
        out[hi], out[lo] = 0.0, 1.0
        out[mid] = (1.0 + np.exp(arg[mid])) ** -2
    elif spec.kind == "nws":
        # (1/2 + 1/2 tanh(-q zeta / (2 sqrt(2q+4))))^(2/q) rewritten through
        # the logistic identity; avoids cancellation at the leading edge
        q = spec.q
        arg = q / math.sqrt(2.0 * q + 4.0) * zeta
        out = np.empty_like(arg)
        hi, lo = arg > EXP_GUARD, arg < -EXP_GUARD
        mid = ~(hi | lo)
        out[hi], out[lo] = 0.0, 1.0
        out[mid] = (1.0 + np.exp(arg[mid])) ** (-2.0 / q)
    elif spec.kind == "zeldovich":
        arg = zeta / math.sqrt(2.0)
        out = np.empty_like(arg)
        hi, lo = arg > EXP_GUARD, arg < -EXP_GUARD
        mid = ~(hi | lo)
        out[hi], out[lo] = 0.0, 1.0
        out[mid] = 1.0 / (1.0 + np.exp(arg[mid]))
    elif spec.kind == "bistable":
        a = spec.a
        inner = (1.0 - a) / 4.0 * math.sqrt(2.0) * zeta
        out = (1.0 + a) / 2.0 + (1.0 - a) / 2.0 * np.tanh(inner)
        out[inner > EXP_GUARD] = 1.0
        out[inner < -EXP_GUARD] = a
    else:
        raise ValueError(f"unsupported kind {spec.kind!r}")
    return float(out[0]) if scalar else out


def equilibria(spec: ReactionSpec) -> tuple[float, ...]:
    """All spatially homogeneous states (roots of R): 0, 1, and a when r=1."""
    return (0.0, spec.a, 1.0) if spec.r == 1 else (0.0, 1.0)


def front_steepness(spec: ReactionSpec) -> float:
    """Scale factor multiplying zeta inside the closed form (unit coefficients)."""
    if spec.kind == "fisher":
        return 1.0 / math.sqrt(6.0)
    if spec.kind == "nws":
        return spec.q / (2.0 * math.sqrt(2.0 * spec.q + 4.0))
    if spec.kind == "zeldovich":
        return 1.0 / math.sqrt(2.0)
    if spec.kind == "bistable":
        return (1.0 - spec.a) / 4.0 * math.sqrt(2.0)
    raise ValueError(f"unsupported kind {spec.kind!r}")


def _check_unit(n_dir: np.ndarray) -> np.ndarray:
    n_dir = np.asarray(n_dir, dtype=float)
    norm = float(np.linalg.norm(n_dir))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"n_dir must be a unit vector, |n_dir| = {norm}")
    return n_dir


def exact_solution(spec: ReactionSpec, coeffs: PhysicalCoeffs, n_dir, point: PhysicalPoint) -> float:
    """Closed-form solution u(x, t) of the physical equation along unit direction n_dir.

    Equals the scaled profile evaluated at n . xi - c_scaled * tau.
    """
    n_dir = _check_unit(n_dir)
    x = np.asarray(point.x, dtype=float)
    if not (np.all(np.isfinite(x)) and math.isfinite(point.t)):
        raise ValueError("point must be finite")
    scaled = scale_forward(coeffs, point)
    zeta = float(n_dir @ scaled.xi) - exact_speed(spec) * scaled.tau
    return float(traveling_profile(spec, zeta))

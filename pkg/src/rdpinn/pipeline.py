"""Solution pipeline: scaling transform -> trained solver -> inverse transform.

A trained 1-D solver is reused for any positive (rho, D) and any spatial
dimension: the incoming point is scaled, reduced to the predicted wave
coordinate zeta = n . xi - omega * tau, and the network profile evaluated
there.  The inverse transform is the identity on field values, so the
predicted u(x, t) is the network output itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equations import (
    PhysicalCoeffs,
    PhysicalPoint,
    ReactionSpec,
    exact_speed,
    traveling_profile,
)
from .wavenet import WaveNetParams, load_checkpoint, profile_value


@dataclass
class SolverHandle:
    """A trained network plus its equation metadata; the reusable artifact."""

    params: WaveNetParams
    spec: ReactionSpec
    provenance: dict

    def __post_init__(self):
        if tuple(self.params.bounds) != tuple(self.spec.bounds):
            raise ValueError("params.bounds must equal the reaction equilibria")

    @classmethod
    def from_checkpoint(cls, path) -> "SolverHandle":
        params, spec, meta = load_checkpoint(path)
        return cls(params=params, spec=spec, provenance={"checkpoint": str(path), **meta})

    @classmethod
    def from_report(cls, report) -> "SolverHandle":
        from .training import report_meta

        return cls(params=report.final_params, spec=report.config.spec,
                   provenance=report_meta(report))


@dataclass
class FieldGrid:
    """Dense field samples over a tensor grid of spatial axes x time."""

    axes: list
    times: np.ndarray
    values: np.ndarray  # shape (*spatial, n_times)
    direction: np.ndarray

    def __post_init__(self):
        expect = tuple(len(ax) for ax in self.axes) + (len(self.times),)
        if self.values.shape != expect:
            raise ValueError(f"values shape {self.values.shape} != grid shape {expect}")

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def n_points(self) -> int:
        return int(self.values.size)


@dataclass
class ErrorReport:
    l2: float
    linf: float
    n_points: int


def _normalize_direction(n_dir) -> np.ndarray:
    n_dir = np.asarray(n_dir, dtype=float)
    norm = float(np.linalg.norm(n_dir))
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("direction vector must be nonzero and finite")
    return n_dir / norm


def _zeta_grid(omega: float, coeffs: PhysicalCoeffs, n_hat: np.ndarray, axes, times) -> np.ndarray:
    """Predicted wave coordinate over the tensor grid, shape (*spatial, n_t)."""
    s = math.sqrt(coeffs.rho / coeffs.D)
    dim = len(axes)
    space = None
    for j, ax in enumerate(axes):
        shape = [1] * dim
        shape[j] = len(ax)
        term = (n_hat[j] * (s * np.asarray(ax, dtype=float))).reshape(shape)
        space = term if space is None else space + term
    tau = coeffs.rho * np.asarray(times, dtype=float)
    return space[..., None] - omega * tau


def predict(handle: SolverHandle, coeffs: PhysicalCoeffs, n_dir, point: PhysicalPoint) -> float:
    """u(x, t) for the physical equation with the given coefficients."""
    n_hat = _normalize_direction(n_dir)
    x = np.asarray(point.x, dtype=float)
    if x.shape != n_hat.shape:
        raise ValueError("point dimension must match the direction vector")
    s = math.sqrt(coeffs.rho / coeffs.D)
    zeta = float(n_hat @ (s * x)) - handle.params.omega * (coeffs.rho * point.t)
    p = handle.params
    return float(profile_value(p.a, p.b, p.c, p.bounds, zeta))


def default_counts(dim: int) -> tuple[int, int]:
    """(points per spatial axis, time points): 500 in 1-D, 100 in 2-D."""
    return (500, 500) if dim == 1 else (100, 100)


def evaluate_grid(
    handle: SolverHandle,
    coeffs: PhysicalCoeffs,
    n_dir,
    space,
    time_interval,
    n_space: int | None = None,
    n_time: int | None = None,
) -> FieldGrid:
    """Dense prediction over a uniform tensor grid.

    `space` is one (lo, hi) pair shared by every spatial axis or a list of
    per-axis pairs; the spatial dimension is len(n_dir).
    """
    n_hat = _normalize_direction(n_dir)
    dim = n_hat.size
    space = np.asarray(space, dtype=float)
    if space.ndim == 1:
        space = np.tile(space, (dim, 1))
    if space.shape != (dim, 2):
        raise ValueError(f"domain dimension {space.shape[0]} != direction dimension {dim}")
    d_space, d_time = default_counts(dim)
    n_space = d_space if n_space is None else n_space
    n_time = d_time if n_time is None else n_time
    if n_space < 2 or n_time < 2:
        raise ValueError("grids need at least 2 points per axis")
    axes = [np.linspace(lo, hi, n_space) for lo, hi in space]
    times = np.linspace(float(time_interval[0]), float(time_interval[1]), n_time)
    zeta = _zeta_grid(handle.params.omega, coeffs, n_hat, axes, times)
    p = handle.params
    values = profile_value(p.a, p.b, p.c, p.bounds, zeta)
    return FieldGrid(axes=axes, times=times, values=values, direction=n_hat)


def exact_field(spec: ReactionSpec, coeffs: PhysicalCoeffs, grid: FieldGrid) -> np.ndarray:
    """Closed-form oracle evaluated on the same grid as a prediction."""
    zeta = _zeta_grid(exact_speed(spec), coeffs, grid.direction, grid.axes, grid.times)
    return traveling_profile(spec, zeta.ravel()).reshape(zeta.shape)


def _oracle_values(oracle) -> np.ndarray:
    return oracle.values if isinstance(oracle, FieldGrid) else np.asarray(oracle, dtype=float)


def error_report(predicted: FieldGrid, oracle) -> ErrorReport:
    """L2 = sqrt(mean (u - u_hat)^2) and Linf = max |u - u_hat| over the grid."""
    ref = _oracle_values(oracle)
    if ref.shape != predicted.values.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {predicted.values.shape}")
    diff = predicted.values - ref
    l2 = float(np.sqrt(np.mean(diff * diff)))
    linf = float(np.max(np.abs(diff)))
    return ErrorReport(l2=l2, linf=linf, n_points=diff.size)


def max_error_over_time(predicted: FieldGrid, oracle) -> tuple[np.ndarray, np.ndarray]:
    """Per-time-slice max |u - u_hat|; (times, series) for plotting."""
    ref = _oracle_values(oracle)
    if ref.shape != predicted.values.shape:
        raise ValueError(f"shape mismatch: {ref.shape} vs {predicted.values.shape}")
    diff = np.abs(predicted.values - ref).reshape(-1, len(predicted.times))
    return predicted.times.copy(), diff.max(axis=0)


# spatial/temporal evaluation windows per reaction and rho: the final time is
# chosen so the front stays inside the spatial domain
EVAL_DOMAINS = {
    "fisher": {
        1: ((-5.0, 25.0), (0.0, 10.0)),
        100: ((-1.0, 5.0), (0.0, 0.2)),
        10_000: ((-1.0, 5.0), (0.0, 0.02)),
        1_000_000: ((-1.0, 5.0), (0.0, 0.002)),
    },
    "nws": {
        1: ((-5.0, 25.0), (0.0, 10.0)),
        100: ((-1.0, 5.0), (0.0, 0.2)),
        10_000: ((-1.0, 5.0), (0.0, 0.02)),
        1_000_000: ((-1.0, 5.0), (0.0, 0.002)),
    },
    "zeldovich": {
        1: ((-5.0, 25.0), (0.0, 30.0)),
        100: ((-1.0, 5.0), (0.0, 0.6)),
        10_000: ((-1.0, 5.0), (0.0, 0.06)),
        1_000_000: ((-1.0, 5.0), (0.0, 0.006)),
    },
    "bistable": {
        1: ((-25.0, 5.0), (0.0, 25.0)),
        100: ((-5.0, 1.0), (0.0, 0.5)),
        10_000: ((-5.0, 1.0), (0.0, 0.05)),
        1_000_000: ((-5.0, 1.0), (0.0, 0.005)),
    },
}

RHO_SWEEP = (1, 100, 10_000, 1_000_000)


def eval_domain(kind: str, rho: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Benchmark (space, time) window for the given reaction and rho."""
    table = EVAL_DOMAINS.get(kind)
    if table is None:
        raise ValueError(f"no evaluation domain for kind {kind!r}")
    key = int(round(rho))
    if key not in table or not math.isclose(rho, key):
        raise ValueError(f"no evaluation domain for rho={rho}; choose from {sorted(table)}")
    return table[key]


def export_field_csv(path, grid: FieldGrid, oracle=None, time_index: int | None = None) -> None:
    """Write `x1[,x2],t,u_pred[,u_exact,abs_err]` rows for a field grid.

    time_index restricts the export to a single time slice (useful for 2-D
    contour data); None exports every sample.
    """
    ref = None if oracle is None else _oracle_values(oracle)
    t_sel = range(len(grid.times)) if time_index is None else [range(len(grid.times))[time_index]]
    mesh = np.meshgrid(*grid.axes, indexing="ij")
    cols_space = [m.ravel() for m in mesh]
    n_rows = cols_space[0].size if cols_space else 1
    header = ",".join([f"x{j+1}" for j in range(grid.dim)] + ["t", "u_pred"]
                      + (["u_exact", "abs_err"] if ref is not None else []))
    lines = [header]
    for k in t_sel:
        pred = grid.values[..., k].ravel()
        if ref is not None:
            exact = ref[..., k].ravel()
        for i in range(n_rows):
            row = [f"{col[i]:.12g}" for col in cols_space]
            row.append(f"{grid.times[k]:.12g}")
            row.append(f"{pred[i]:.17g}")
            if ref is not None:
                row.append(f"{exact[i]:.17g}")
                row.append(f"{abs(pred[i] - exact[i]):.17g}")
            lines.append(",".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

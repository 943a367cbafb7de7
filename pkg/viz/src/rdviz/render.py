"""Turn experiment CSVs into figure-style images.

Each plot kind consumes a fixed CSV schema produced by the experiment
harness; rendering applies axis transforms only, never statistics.  Exact
and reference series are drawn as dashed black lines; predicted series in
red, training curves in blue.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("ConvergenceCurves", "SolutionProfiles", "MaxErrorOverTime", "Contour2D", "GtwProfiles")

FIGSIZE = (6.4, 4.2)
DPI = 150

COLOR_PRED = "tab:red"
COLOR_TRAIN = "tab:blue"
COLOR_REF = "black"


class SchemaError(ValueError):
    """The input CSV does not match the plot kind's schema."""


@dataclass
class PlotJob:
    kind: str
    inputs: list
    output: Path
    log_y: bool | None = None  # None: kind default
    exact_speed: float | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}; choose from {KINDS}")
        self.inputs = [Path(p) for p in self.inputs]
        self.output = Path(self.output)


def _read_csv(path: Path) -> dict[str, np.ndarray]:
    if not path.exists():
        raise SchemaError(f"input CSV not found: {path}")
    with open(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty CSV (no header row)")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    cols = {}
    for name in reader.fieldnames:
        try:
            cols[name] = np.array([float(r[name]) for r in rows])
        except (TypeError, ValueError):
            cols[name] = np.array([r[name] for r in rows])
    return cols


def _require(cols: dict, names, path) -> None:
    for name in names:
        if name not in cols:
            raise SchemaError(f"{path}: missing required column {name!r}")


def _first_of(cols: dict, names, path) -> str:
    for name in names:
        if name in cols:
            return name
    raise SchemaError(f"{path}: missing required column; expected one of {names}")


def build_figure(job: PlotJob):
    """Assemble the matplotlib figure for a job without writing it."""
    return _FIGURES[job.kind](job)


def render(job: PlotJob) -> Path:
    """Render one figure; returns the output path.

    Raises SchemaError (and writes nothing) when the inputs do not satisfy
    the kind's schema.
    """
    fig = build_figure(job)
    job.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(job.output, dpi=DPI)
    plt.close(fig)
    return job.output


def _fig_convergence(job: PlotJob):
    cols = _read_csv(job.inputs[0])
    _require(cols, ["epoch", "loss"], job.inputs[0])
    speed_col = _first_of(cols, ["omega", "w", "omega2"], job.inputs[0])
    fig, (ax_loss, ax_speed) = plt.subplots(1, 2, figsize=(FIGSIZE[0] * 1.6, FIGSIZE[1]))
    ax_loss.plot(cols["epoch"], cols["loss"], color=COLOR_TRAIN, lw=1.0)
    if job.log_y is not False:
        ax_loss.set_yscale("log")
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("training loss")
    ax_speed.plot(cols["epoch"], cols[speed_col], color=COLOR_TRAIN, lw=1.0,
                  label="predicted speed")
    if job.exact_speed is not None:
        ax_speed.axhline(job.exact_speed, color=COLOR_REF, ls="--", lw=1.2, label="exact speed")
        ax_speed.legend(frameon=False)
    ax_speed.set_xlabel("epoch")
    ax_speed.set_ylabel(speed_col)
    fig.tight_layout()
    return fig


def _fig_profiles(job: PlotJob):
    cols = _read_csv(job.inputs[0])
    _require(cols, ["x", "u_pred", "u_exact"], job.inputs[0])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(cols["x"], cols["u_pred"], color=COLOR_PRED, lw=1.4, label="predicted")
    ax.plot(cols["x"], cols["u_exact"], color=COLOR_REF, ls="--", lw=1.2, label="exact")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def _fig_maxerr(job: PlotJob):
    cols = _read_csv(job.inputs[0])
    _require(cols, ["t", "max_abs_err"], job.inputs[0])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(cols["t"], cols["max_abs_err"], color=COLOR_PRED, lw=1.2)
    if job.log_y is not False:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("max abs error")
    fig.tight_layout()
    return fig


def _fig_contour(job: PlotJob):
    cols = _read_csv(job.inputs[0])
    _require(cols, ["x1", "x2"], job.inputs[0])
    value_col = _first_of(cols, ["abs_err", "u_pred", "value"], job.inputs[0])
    x1 = np.unique(cols["x1"])
    x2 = np.unique(cols["x2"])
    if x1.size * x2.size != cols[value_col].size:
        raise SchemaError(f"{job.inputs[0]}: rows do not form a dense x1/x2 grid")
    order = np.lexsort((cols["x2"], cols["x1"]))
    Z = cols[value_col][order].reshape(x1.size, x2.size)
    fig, ax = plt.subplots(figsize=(FIGSIZE[0], FIGSIZE[0] * 0.85))
    m = ax.contourf(x1, x2, Z.T, levels=40)
    fig.colorbar(m, ax=ax, label=value_col)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    fig.tight_layout()
    return fig


def _fig_gtw(job: PlotJob):
    cols = _read_csv(job.inputs[0])
    _require(cols, ["x", "u_gtw", "u_ref"], job.inputs[0])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(cols["x"], cols["u_gtw"], color=COLOR_PRED, lw=1.4, label="generalized solver")
    ax.plot(cols["x"], cols["u_ref"], color=COLOR_REF, ls="--", lw=1.2, label="reference")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


_FIGURES = {
    "ConvergenceCurves": _fig_convergence,
    "SolutionProfiles": _fig_profiles,
    "MaxErrorOverTime": _fig_maxerr,
    "Contour2D": _fig_contour,
    "GtwProfiles": _fig_gtw,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="render", description="render experiment CSVs as figures")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    help="input CSV (repeatable)")
    ap.add_argument("--out", required=True)
    ap.add_argument("--exact-speed", type=float, default=None)
    ap.add_argument("--linear-y", action="store_true", help="disable the kind's log-scale default")
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    job = PlotJob(kind=args.kind, inputs=args.inputs, output=args.out,
                  log_y=False if args.linear_y else None, exact_speed=args.exact_speed)
    try:
        render(job)
    except SchemaError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

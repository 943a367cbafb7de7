"""Experiment runner and command-line interface.

Drives seed sweeps until the requested number of physically convergent
solvers is reached, evaluates them over the benchmark windows against the
closed forms, aggregates mean/std error tables, and persists everything as
CSV plus a JSON summary.  The CLI exposes each stage as a subcommand.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import WavePinnConfig, train_wavepinn, wavepinn_forward
from .equations import PhysicalCoeffs, ReactionSpec, exact_speed, make_reaction, traveling_profile
from .gtw import GeneralIC, front_position, gtw_config, predict_gtw, train_gtw
from .pipeline import (
    RHO_SWEEP,
    SolverHandle,
    error_report,
    eval_domain,
    evaluate_grid,
    exact_field,
    export_field_csv,
    max_error_over_time,
)
from .reference import RefConfig, ref_solve
from .training import TrainConfig, train


def spec_name(spec: ReactionSpec) -> str:
    if spec.kind == "nws":
        return f"nws-q{spec.q:g}"
    if spec.kind == "bistable":
        return f"bistable-a{spec.a:g}"
    return spec.kind


@dataclass
class ExperimentPlan:
    equations: list
    seeds: list
    presets: tuple = ("restricted",)
    rhos: tuple = RHO_SWEEP
    dims: tuple = (1,)
    directions: tuple = ((1.0, 1.0), (1.0, 3.0))
    n_physical: int | None = None  # None: keep every seed (fixed-budget mode)
    out_dir: Path = Path("out")
    epochs: int | None = None
    n_icbc: int | None = None
    n_res: int | None = None
    width: int | None = None
    n_space: int | None = None
    n_time: int | None = None

    def __post_init__(self):
        if not self.equations or not self.seeds or not self.rhos or not self.dims:
            raise ValueError("equations, seeds, rhos, and dims must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        self.out_dir = Path(self.out_dir)


@dataclass
class ResultsTable:
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def write_csv(self, path, fieldnames) -> None:
        _write_csv(path, fieldnames, self.rows)


def _write_csv(path, fieldnames, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in fieldnames})


def _mean_std(values) -> tuple[float, float]:
    """Mean and sample standard deviation (0 for a single value)."""
    v = np.asarray(values, dtype=float)
    mean = float(v.mean())
    std = float(v.std(ddof=1)) if v.size > 1 else 0.0
    return mean, std


def _train_config(spec: ReactionSpec, preset: str, seed: int, plan: ExperimentPlan) -> TrainConfig:
    overrides = {}
    for key in ("epochs", "n_icbc", "n_res", "width"):
        val = getattr(plan, key)
        if val is not None:
            overrides[key] = val
    return TrainConfig.from_preset(spec, preset, seed=seed, **overrides)


def train_or_load(config: TrainConfig, out_dir: Path):
    """Checkpoint-cached training: reuse a solver whose stored settings match.

    Returns (SolverHandle, verdict, |c - omega|).
    """
    out_dir = Path(out_dir)
    experiment = f"{spec_name(config.spec)}_{config.domain_preset}"
    name = f"{experiment}_s{config.seed}"
    ck = out_dir / "checkpoints" / f"{name}.json"
    runlog = out_dir / "runlogs" / experiment / f"runlog_{config.seed}.csv"
    wanted = {"seed": config.seed, "epochs": config.epochs, "n_icbc": config.n_icbc,
              "n_res": config.n_res, "width": config.width, "lr0": config.lr0,
              "lr_min": config.lr_min, "resample_every": config.resample_every}
    if ck.exists():
        handle = SolverHandle.from_checkpoint(ck)
        meta = handle.provenance
        if all(meta.get(k) == v for k, v in wanted.items()):
            err = abs(exact_speed(config.spec) - handle.params.omega)
            return handle, meta.get("verdict", "unknown"), err
    ck.parent.mkdir(parents=True, exist_ok=True)
    runlog.parent.mkdir(parents=True, exist_ok=True)
    report = train(config, checkpoint_path=ck, runlog_path=runlog)
    err = abs(exact_speed(config.spec) - report.final_params.omega)
    return SolverHandle.from_report(report), report.verdict, err


def run_plan(plan: ExperimentPlan) -> ResultsTable:
    """Execute the full sweep: train/load, evaluate, aggregate, persist."""
    out = plan.out_dir
    out.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    table = ResultsTable()
    raw_rows = []
    speed_rows = []

    for spec in plan.equations:
        for preset in plan.presets:
            solvers = []
            speed_errs = []
            target = plan.n_physical
            for seed in plan.seeds:
                config = _train_config(spec, preset, seed, plan)
                handle, verdict, err = train_or_load(config, out)
                if verdict == "physical":
                    solvers.append((seed, handle))
                    speed_errs.append(err)
                if target is not None and len(solvers) >= target:
                    break
            if target is not None and len(solvers) < target:
                msg = (f"{spec_name(spec)}/{preset}: only {len(solvers)} of {target} "
                       f"physical solvers within the seed budget")
                table.warnings.append(msg)
                table.rows.append({"equation": spec_name(spec), "preset": preset,
                                   "status": "warning", "detail": msg})
            if not solvers:
                continue
            mean, std = _mean_std(speed_errs)
            speed_rows.append({"equation": spec_name(spec), "preset": preset,
                               "n_seeds": len(solvers),
                               "speed_abs_err_mean": f"{mean:.17g}",
                               "speed_abs_err_std": f"{std:.17g}"})

            for seed, handle in solvers:
                for rho in plan.rhos:
                    coeffs = PhysicalCoeffs(float(rho), 1.0)
                    space, tint = eval_domain(spec.kind, rho)
                    for dim in plan.dims:
                        dirs = [(1.0,)] if dim == 1 else plan.directions
                        for d in dirs:
                            grid = evaluate_grid(handle, coeffs, d, space, tint,
                                                 n_space=plan.n_space, n_time=plan.n_time)
                            rep = error_report(grid, exact_field(spec, coeffs, grid))
                            raw_rows.append({
                                "equation": spec_name(spec), "preset": preset,
                                "seed": seed, "rho": f"{rho:g}", "dim": dim,
                                "direction": "x".join(f"{c:g}" for c in d),
                                "l2": f"{rep.l2:.17g}", "linf": f"{rep.linf:.17g}",
                            })

    _write_csv(out / "errors_raw.csv",
               ["equation", "preset", "seed", "rho", "dim", "direction", "l2", "linf"],
               raw_rows)
    _write_csv(out / "wavespeed.csv",
               ["equation", "preset", "n_seeds", "speed_abs_err_mean", "speed_abs_err_std"],
               speed_rows)
    table.rows.extend(aggregate_tables(out))
    summary = {
        "version": __version__,
        "plan": {
            "equations": [spec_name(s) for s in plan.equations],
            "presets": list(plan.presets),
            "rhos": [float(r) for r in plan.rhos],
            "dims": list(plan.dims),
            "seeds": list(plan.seeds),
            "n_physical": plan.n_physical,
        },
        "warnings": table.warnings,
        "wall_time": time.perf_counter() - t_start,
        "std_convention": "sample (ddof=1); 0 for a single seed",
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=1))
    return table


def aggregate_tables(out_dir) -> list:
    """Aggregate per-seed error rows into mean/std tables (two-pass stats)."""
    out = Path(out_dir)
    raw = out / "errors_raw.csv"
    if not raw.exists():
        raise FileNotFoundError(f"no errors_raw.csv in {out}")
    with open(raw) as fh:
        rows = list(csv.DictReader(fh))
    groups: dict[tuple, dict] = {}
    for r in rows:
        key = (r["equation"], r["preset"], r["rho"], r["dim"], r["direction"])
        groups.setdefault(key, {"l2": [], "linf": []})
        groups[key]["l2"].append(float(r["l2"]))
        groups[key]["linf"].append(float(r["linf"]))
    agg = []
    for (equation, preset, rho, dim, direction), vals in sorted(groups.items()):
        l2m, l2s = _mean_std(vals["l2"])
        lim, lis = _mean_std(vals["linf"])
        agg.append({
            "equation": equation, "preset": preset, "rho": rho, "dim": dim,
            "direction": direction, "n_seeds": len(vals["l2"]),
            "l2_mean": f"{l2m:.17g}", "l2_std": f"{l2s:.17g}",
            "linf_mean": f"{lim:.17g}", "linf_std": f"{lis:.17g}",
        })
    fields = ["equation", "preset", "rho", "dim", "direction", "n_seeds",
              "l2_mean", "l2_std", "linf_mean", "linf_std"]
    _write_csv(out / "errors_1d.csv", fields, [r for r in agg if r["dim"] == "1"])
    _write_csv(out / "errors_2d.csv", fields, [r for r in agg if r["dim"] == "2"])
    return agg


# ---------------------------------------------------------------------------
# configuration files: INI sections [reaction] and [training]
# ---------------------------------------------------------------------------

BUILTIN_REACTIONS = {
    "fisher": ("fisher", {}),
    "nws2": ("nws", {"q": 2.0}),
    "nws3": ("nws", {"q": 3.0}),
    "nws4": ("nws", {"q": 4.0}),
    "zeldovich": ("zeldovich", {}),
    "bistable": ("bistable", {"a": 0.2}),
}


def builtin_config(name: str, seed: int = 0) -> TrainConfig:
    """Named presets like fisher_restricted or nws3_original."""
    try:
        eqname, preset = name.rsplit("_", 1)
        kind, kw = BUILTIN_REACTIONS[eqname]
    except (ValueError, KeyError):
        raise ValueError(f"unknown config preset {name!r}") from None
    return TrainConfig.from_preset(make_reaction(kind, **kw), preset, seed=seed)


def read_config(path_or_name: str, seed: int | None = None,
                preset_override: str | None = None) -> TrainConfig:
    """Build a TrainConfig from an INI file or a builtin preset name."""
    p = Path(path_or_name)
    if not p.exists():
        config = builtin_config(path_or_name, seed=seed or 0)
        if preset_override and preset_override != config.domain_preset:
            config = TrainConfig.from_preset(config.spec, preset_override,
                                             seed=config.seed, epochs=config.epochs)
        return config
    cp = configparser.ConfigParser()
    cp.read(p)
    if "reaction" not in cp:
        raise ValueError(f"config {p} is missing the [reaction] section")
    rx = cp["reaction"]
    spec = make_reaction(rx.get("kind", "fisher"),
                         q=rx.getfloat("q", fallback=None),
                         a=rx.getfloat("a", fallback=None))
    tr = cp["training"] if "training" in cp else {}

    def _get(key, cast, default):
        if isinstance(tr, dict):
            return default
        val = tr.get(key, fallback=None)
        return default if val is None else cast(val)

    preset = preset_override or _get("preset", str, "restricted")
    overrides = {
        "epochs": _get("epochs", int, 100_000),
        "n_icbc": _get("n_icbc", int, 1024),
        "n_res": _get("n_res", int, 1024),
        "lr0": _get("lr0", float, 0.01),
        "lr_min": _get("lr_min", float, 0.0),
        "width": _get("width", int, 20),
        "resample_every": _get("resample_every", int, 1),
    }
    cfg_seed = seed if seed is not None else _get("seed", int, 0)
    if preset in ("original", "restricted"):
        return TrainConfig.from_preset(spec, preset, seed=cfg_seed, **overrides)
    return TrainConfig(spec=spec, xi_lo=_get("xi_lo", float, -500.0),
                       xi_hi=_get("xi_hi", float, 500.0),
                       tau_hi=_get("tau_hi", float, 20.0),
                       seed=cfg_seed, domain_preset="custom", **overrides)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rdpinn",
                                 description="traveling-wave solvers for reaction-diffusion equations")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one solver from a config")
    p.add_argument("--config", required=True, help="INI path or builtin preset name")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--preset", choices=["original", "restricted"], default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--out", default="out")

    p = sub.add_parser("sweep", help="seed sweep until enough physical solvers")
    p.add_argument("--config", required=True)
    p.add_argument("--seeds", default="0,1,2,3,4,5,6,7,8,9")
    p.add_argument("--count", type=int, default=None, help="target number of physical solvers")
    p.add_argument("--preset", choices=["original", "restricted"], default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--rho", default="1,100,10000,1000000")
    p.add_argument("--dim", default="1")
    p.add_argument("--out", default="out")

    p = sub.add_parser("eval", help="evaluate a checkpoint on a benchmark window")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--dim", type=int, choices=[1, 2], default=1)
    p.add_argument("--dir", default="1", help="direction components, e.g. 1,3")
    p.add_argument("--out", default="out")

    p = sub.add_parser("gtw", help="general-IC run with reference comparison")
    p.add_argument("--ic", choices=["step", "logistic"], required=True)
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--rho", type=float, default=100.0)
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--out", default="out")

    p = sub.add_parser("baseline", help="train the deep comparator and compare")
    p.add_argument("--tw-checkpoint", default=None, help="trained solver to compare against")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--out", default="out")

    p = sub.add_parser("reference", help="standalone finite-difference solve")
    p.add_argument("--rho", type=float, default=100.0)
    p.add_argument("--ic", choices=["step", "logistic", "exact"], default="step")
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--t-final", type=float, default=0.3)
    p.add_argument("--cells", type=int, default=2000)
    p.add_argument("--x-lo", type=float, default=-3.0)
    p.add_argument("--x-hi", type=float, default=9.0)
    p.add_argument("--scheme", choices=["weno5central", "central2"], default="weno5central")
    p.add_argument("--out", default="out")

    p = sub.add_parser("tables", help="regenerate aggregate tables from cached results")
    p.add_argument("--out", default="out")

    p = sub.add_parser("export-plots", help="emit plot-ready CSVs from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--runlog", default=None)
    p.add_argument("--rho", type=float, default=1e6)
    p.add_argument("--out", default="out")
    return ap


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def cli(argv=None) -> int:
    """Entry point; returns the process exit status."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    try:
        return _dispatch(args)
    except (ValueError, FileNotFoundError, RuntimeError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    out = Path(args.out) if hasattr(args, "out") else Path("out")
    out.mkdir(parents=True, exist_ok=True)

    if args.command == "train":
        config = read_config(args.config, seed=args.seed, preset_override=args.preset)
        if args.epochs is not None:
            config = TrainConfig(**{**config.__dict__, "epochs": args.epochs})
        name = f"{spec_name(config.spec)}_{config.domain_preset}_s{config.seed}"
        ck = out / "checkpoints" / f"{name}.json"
        runlog = out / "runlogs" / f"runlog_{config.seed}.csv"
        ck.parent.mkdir(parents=True, exist_ok=True)
        runlog.parent.mkdir(parents=True, exist_ok=True)
        report = train(config, checkpoint_path=ck, runlog_path=runlog)
        err = abs(exact_speed(config.spec) - report.final_params.omega)
        print(f"{name}: verdict={report.verdict} speed_abs_err={err:.3e} "
              f"checkpoint={ck} runlog={runlog}")
        return 0

    if args.command == "sweep":
        config = read_config(args.config, preset_override=args.preset)
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
        plan = ExperimentPlan(
            equations=[config.spec], seeds=seeds, presets=(config.domain_preset,),
            rhos=tuple(_parse_floats(args.rho)),
            dims=tuple(int(d) for d in args.dim.split(",")),
            n_physical=args.count, out_dir=out, epochs=args.epochs or config.epochs,
            n_icbc=config.n_icbc, n_res=config.n_res, width=config.width,
        )
        table = run_plan(plan)
        for w in table.warnings:
            print(f"warning: {w}", file=sys.stderr)
        print(f"sweep complete: {len(table.rows)} table rows in {out}")
        return 0

    if args.command == "eval":
        ck = Path(args.checkpoint)
        if not ck.exists():
            raise FileNotFoundError(f"checkpoint not found: {ck}")
        handle = SolverHandle.from_checkpoint(ck)
        direction = _parse_floats(args.dir)
        if len(direction) != args.dim:
            if args.dim == 1:
                direction = [1.0]
            else:
                raise ValueError(f"--dir must have {args.dim} components")
        coeffs = PhysicalCoeffs(args.rho, 1.0)
        space, tint = eval_domain(handle.spec.kind, args.rho)
        grid = evaluate_grid(handle, coeffs, direction, space, tint)
        oracle = exact_field(handle.spec, coeffs, grid)
        rep = error_report(grid, oracle)
        tag = f"{spec_name(handle.spec)}_rho{args.rho:g}_d{args.dim}"
        export_field_csv(out / f"field_{tag}.csv", grid, oracle,
                         time_index=-1 if args.dim == 2 else None)
        _write_csv(out / f"errors_{tag}.csv",
                   ["equation", "rho", "dim", "direction", "l2", "linf", "n_points"],
                   [{"equation": spec_name(handle.spec), "rho": f"{args.rho:g}",
                     "dim": args.dim, "direction": "x".join(f"{c:g}" for c in direction),
                     "l2": f"{rep.l2:.17g}", "linf": f"{rep.linf:.17g}", "n_points": rep.n_points}])
        print(f"{tag}: L2={rep.l2:.3e} Linf={rep.linf:.3e}")
        return 0

    if args.command == "gtw":
        ic = GeneralIC(args.ic, lam=args.lam)
        spec = make_reaction("fisher")
        overrides = {"epochs": args.epochs} if args.epochs else {}
        config = gtw_config(spec, seed=args.seed, **overrides)
        ck = out / "checkpoints" / f"gtw_{args.ic}_lam{args.lam:g}_s{args.seed}.json"
        runlog = out / "runlogs" / f"gtw_{args.ic}_lam{args.lam:g}" / f"runlog_{args.seed}.csv"
        ck.parent.mkdir(parents=True, exist_ok=True)
        runlog.parent.mkdir(parents=True, exist_ok=True)
        report = train_gtw(ic, config, checkpoint_path=ck, runlog_path=runlog)
        coeffs = PhysicalCoeffs(args.rho, 1.0)
        t_final = args.t_final if args.t_final is not None else 30.0 / args.rho
        ref_cfg = RefConfig(x_lo=-3.0, x_hi=9.0, t_final=t_final)
        ref = ref_solve(spec, coeffs, ic, ref_cfg, times=(0.0, t_final))
        x = ref.axes[0]
        u_gtw = predict_gtw(report.final_params, coeffs, x, t_final)
        f_gtw = front_position(x, u_gtw)
        f_ref = front_position(x, ref.values[:, -1])
        _write_csv(out / f"gtw_profiles_{args.ic}_lam{args.lam:g}.csv",
                   ["x", "u_gtw", "u_ref"],
                   [{"x": f"{xi:.12g}", "u_gtw": f"{ug:.17g}", "u_ref": f"{ur:.17g}"}
                    for xi, ug, ur in zip(x, u_gtw, ref.values[:, -1])])
        print(f"gtw {args.ic} lam={args.lam:g} rho={args.rho:g}: front_gtw={f_gtw:.4f} "
              f"front_ref={f_ref:.4f} diff={f_gtw - f_ref:+.4f}")
        return 0

    if args.command == "baseline":
        spec = make_reaction("fisher")
        cfg = WavePinnConfig(spec=spec, seed=args.seed,
                             **({"epochs": args.epochs} if args.epochs else {}))
        ck = out / "checkpoints" / f"wavepinn_s{args.seed}.json"
        ck.parent.mkdir(parents=True, exist_ok=True)
        report = train_wavepinn(cfg, checkpoint_path=ck)
        rows = []
        tw_handle = None
        if args.tw_checkpoint:
            twp = Path(args.tw_checkpoint)
            if not twp.exists():
                raise FileNotFoundError(f"checkpoint not found: {twp}")
            tw_handle = SolverHandle.from_checkpoint(twp)
        for rho in RHO_SWEEP:
            coeffs = PhysicalCoeffs(float(rho), 1.0)
            space, tint = eval_domain("fisher", rho)
            x = np.linspace(space[0], space[1], 500)
            t = np.linspace(tint[0], tint[1], 500)
            pred = np.stack([wavepinn_forward(report.final_params, float(rho), x, tk) for tk in t], axis=1)
            zeta = np.sqrt(rho) * x[:, None] - exact_speed(spec) * rho * t[None, :]
            exact = traveling_profile(spec, zeta.ravel()).reshape(zeta.shape)
            diff = pred - exact
            rows.append({"model": "wave-pinn", "rho": f"{rho:g}",
                         "l2": f"{float(np.sqrt(np.mean(diff**2))):.17g}",
                         "linf": f"{float(np.max(np.abs(diff))):.17g}"})
            if tw_handle is not None:
                grid = evaluate_grid(tw_handle, coeffs, [1.0], space, tint)
                rep2 = error_report(grid, exact_field(spec, coeffs, grid))
                rows.append({"model": "scaled-tw-pinn", "rho": f"{rho:g}",
                             "l2": f"{rep2.l2:.17g}", "linf": f"{rep2.linf:.17g}"})
        _write_csv(out / "comparison.csv", ["model", "rho", "l2", "linf"], rows)
        print(f"baseline sweep written to {out / 'comparison.csv'}")
        return 0

    if args.command == "reference":
        spec = make_reaction("fisher")
        coeffs = PhysicalCoeffs(args.rho, 1.0)
        if args.ic == "exact":
            ic = lambda x: traveling_profile(spec, np.sqrt(args.rho) * x)  # noqa: E731
        else:
            ic = GeneralIC(args.ic, lam=args.lam)
        cfg = RefConfig(x_lo=args.x_lo, x_hi=args.x_hi, t_final=args.t_final,
                        cells=args.cells, scheme=args.scheme)
        grid = ref_solve(spec, coeffs, ic, cfg, times=np.linspace(0.0, args.t_final, 7))
        export_field_csv(out / f"field_reference_rho{args.rho:g}.csv", grid)
        print(f"reference solve: {args.cells} cells, {len(grid.times)} snapshots -> {out}")
        return 0

    if args.command == "tables":
        agg = aggregate_tables(out)
        print(f"tables regenerated: {len(agg)} rows -> {out / 'errors_1d.csv'}, {out / 'errors_2d.csv'}")
        return 0

    if args.command == "export-plots":
        ck = Path(args.checkpoint)
        if not ck.exists():
            raise FileNotFoundError(f"checkpoint not found: {ck}")
        handle = SolverHandle.from_checkpoint(ck)
        spec = handle.spec
        coeffs = PhysicalCoeffs(args.rho, 1.0)
        space, tint = eval_domain(spec.kind, args.rho)
        grid = evaluate_grid(handle, coeffs, [1.0], space, tint)
        oracle = exact_field(spec, coeffs, grid)
        x = grid.axes[0]
        _write_csv(out / f"profiles_rho{args.rho:g}.csv", ["x", "u_pred", "u_exact"],
                   [{"x": f"{xv:.12g}", "u_pred": f"{pv:.17g}", "u_exact": f"{ev:.17g}"}
                    for xv, pv, ev in zip(x, grid.values[:, -1], oracle[:, -1])])
        times, series = max_error_over_time(grid, oracle)
        _write_csv(out / f"maxerr_rho{args.rho:g}.csv", ["t", "max_abs_err"],
                   [{"t": f"{tv:.12g}", "max_abs_err": f"{ev:.17g}"} for tv, ev in zip(times, series)])
        grid2 = evaluate_grid(handle, coeffs, [1.0, 1.0], space, tint)
        oracle2 = exact_field(spec, coeffs, grid2)
        err2 = np.abs(grid2.values[..., -1] - oracle2[..., -1])
        rows = []
        for i, x1 in enumerate(grid2.axes[0]):
            for j, x2 in enumerate(grid2.axes[1]):
                rows.append({"x1": f"{x1:.12g}", "x2": f"{x2:.12g}", "abs_err": f"{err2[i, j]:.17g}"})
        _write_csv(out / f"contour_rho{args.rho:g}.csv", ["x1", "x2", "abs_err"], rows)
        if args.runlog:
            rl = Path(args.runlog)
            if not rl.exists():
                raise FileNotFoundError(f"runlog not found: {rl}")
            (out / "convergence.csv").write_text(rl.read_text())
        print(f"plot CSVs written to {out}")
        return 0

    raise ValueError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(cli(sys.argv[1:]))

"""Shared fixtures.

The session-scoped fixtures run full-protocol trainings (100k epochs, 2048
points, width 20) and are shared between the acceptance module and the
property tests; expect the first use to take minutes per run on one core.
"""
from __future__ import annotations

import numpy as np
import pytest

from rdpinn import equations as eq
from rdpinn import training as tr
from rdpinn.baseline import WavePinnConfig, train_wavepinn
from rdpinn.gtw import GeneralIC, gtw_config, train_gtw

SPECS = {
    "fisher": eq.make_reaction("fisher"),
    "nws2": eq.make_reaction("nws", q=2),
    "nws3": eq.make_reaction("nws", q=3),
    "nws4": eq.make_reaction("nws", q=4),
    "zeldovich": eq.make_reaction("zeldovich"),
    "bistable": eq.make_reaction("bistable", a=0.2),
}

# small-but-physical configuration for fast harness/CLI tests
MINI = dict(epochs=30_000, n_icbc=256, n_res=256, width=16)


@pytest.fixture(scope="session")
def fisher_restricted_reports():
    """Ten restricted-domain runs at the full published protocol."""
    reports = []
    for seed in range(10):
        cfg = tr.TrainConfig.from_preset(SPECS["fisher"], "restricted", seed=seed)
        reports.append(tr.train(cfg))
    return reports


@pytest.fixture(scope="session")
def restricted_reports():
    """One full restricted run per non-Fisher equation (seed 0)."""
    out = {}
    for name in ("nws2", "nws3", "nws4", "zeldovich", "bistable"):
        cfg = tr.TrainConfig.from_preset(SPECS[name], "restricted", seed=0)
        out[name] = tr.train(cfg)
    return out


@pytest.fixture(scope="session")
def fisher_original_report():
    cfg = tr.TrainConfig.from_preset(SPECS["fisher"], "original", seed=0)
    return tr.train(cfg)


@pytest.fixture(scope="session")
def wavepinn_report():
    return train_wavepinn(WavePinnConfig(spec=SPECS["fisher"], seed=0))


@pytest.fixture(scope="session")
def gtw_reports():
    """Generalized-solver runs for the three published initial conditions."""
    out = {}
    for key, ic in {
        "step": GeneralIC("step"),
        "log2": GeneralIC("logistic", lam=2.0),
        "log05": GeneralIC("logistic", lam=0.5),
    }.items():
        out[key] = (ic, train_gtw(ic, gtw_config(SPECS["fisher"], seed=0)))
    return out


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)

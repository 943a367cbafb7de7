"""Figure rendering for experiment CSVs: no computation beyond axis transforms."""

__version__ = "0.1.0"

from .render import PlotJob, SchemaError, render  # noqa: F401

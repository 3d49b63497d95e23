"""Static figures for the norm-table and growth-rate experiment CSVs."""

from .render import PlotSpec, RenderResult, SeriesFit, read_rows, render

__all__ = ["PlotSpec", "RenderResult", "SeriesFit", "read_rows", "render"]

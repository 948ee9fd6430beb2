"""Command-line entry point: run configured experiments, report and plot results."""

from typing import TYPE_CHECKING, Any

from ._app import build_parser, main
from ._errors import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, exit_on_error
from ._manifest import ExperimentOutputs, RunManifest, run_config, write_summary
from ._plots import PLOT_KINDS, emit_plot_data, write_zero_scatter
from ._report import emit_report, format_table

__all__ = [
    "EXIT_CONFIG",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "PLOT_KINDS",
    "ExperimentOutputs",
    "RunManifest",
    "build_parser",
    "emit_plot_data",
    "emit_report",
    "exit_on_error",
    "format_table",
    "main",
    "render_svg",
    "run_config",
    "write_summary",
    "write_zero_scatter",
]

if TYPE_CHECKING:
    from ._svg import render_svg  # noqa: TC004


def __getattr__(name: str) -> Any:
    if name == "render_svg":
        from ._svg import render_svg

        return render_svg
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

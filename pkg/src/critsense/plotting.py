"""Figure rendering for the CLI report path.

Each report subcommand can write a matplotlib figure next to its delimited
output.  The functions take the already-computed table (column names plus
rows) so the figure always shows exactly the emitted data.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_figure"]


def _column(columns, rows, name):
    idx = columns.index(name)
    return [row[idx] for row in rows]


def _group_by(columns, rows, name):
    idx = columns.index(name)
    groups: dict = {}
    for row in rows:
        groups.setdefault(row[idx], []).append(row)
    return groups


def _plot_qfi(ax, columns, rows):
    for lam, group in _group_by(columns, rows, "lambda").items():
        t = _column(columns, group, "t")
        f = _column(columns, group, "F_total")
        ax.plot(t, f, label=f"$\\lambda$ = {lam:g}")
    ax.set_xlabel("$\\omega t$")
    ax.set_ylabel("$F$")
    positive = [v for row in rows for v in [row[columns.index("F_total")]] if v and v > 0]
    if positive and max(positive) / min(positive) > 50:
        ax.set_yscale("log")
        t_vals = [v for v in _column(columns, rows, "t") if v > 0]
        if t_vals and max(t_vals) / min(t_vals) > 10:
            ax.set_xscale("log")
    ax.legend()


def _plot_sweep(ax, columns, rows):
    sweep_col = "zeta" if "zeta" in columns else "lambda"
    x = _column(columns, rows, sweep_col)
    if "A_factor" in columns and sweep_col == "zeta":
        ax.plot(x, _column(columns, rows, "A_factor"))
        ax.set_ylabel("$\\mathcal{A}$")
    else:
        crb_vals = _column(columns, rows, "crb")
        ax.plot(x, [v if v is not None else float("nan") for v in crb_vals])
        ax.set_ylabel("$\\Delta\\lambda$")
    ax.set_xlabel(sweep_col)


def _plot_brachistochrone(fig, columns, rows):
    ax3d = fig.add_subplot(1, 2, 1, projection="3d")
    ax2d = fig.add_subplot(1, 2, 2)
    for lam, group in _group_by(columns, rows, "lambda").items():
        x = _column(columns, group, "x")
        y = _column(columns, group, "y")
        z = _column(columns, group, "z")
        ax3d.plot(x, y, z, label=f"$\\lambda$ = {lam:g}")
        ax2d.plot(x, y, label=f"$\\lambda$ = {lam:g}")
    ax3d.set_xlabel("x")
    ax3d.set_ylabel("y")
    ax3d.set_zlabel("z")
    ax2d.set_xlabel("x")
    ax2d.set_ylabel("y")
    ax2d.set_title("x-y projection (cycloid)")
    ax2d.legend()


def render_figure(command: str, columns: list[str], rows: list[list], path: str) -> None:
    """Render the table of a report subcommand to an image file."""
    if command == "brachistochrone":
        fig = plt.figure(figsize=(11, 5))
        _plot_brachistochrone(fig, columns, rows)
    else:
        fig, ax = plt.subplots(figsize=(7, 5))
        if command == "qfi":
            _plot_qfi(ax, columns, rows)
        elif command == "sweep":
            _plot_sweep(ax, columns, rows)
        else:
            raise ValueError(f"no figure defined for command {command!r}")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)

from typing import Optional, Sequence

from volren.utils.optional_deps import requires

try:
    import plotly.graph_objects as go
except ImportError:
    go = None


CHANNEL_COLORS = {"r": "firebrick", "g": "seagreen", "b": "royalblue"}


@requires("plotly.graph_objects", "plot")
def convergence_figure(rows: Sequence, title: Optional[str] = None):
    """
    Log-log chart of a convergence table: one trace per channel error plus the max error.
    """
    ns = [row.n for row in rows]
    fig = go.Figure()
    for channel, (name, color) in enumerate(CHANNEL_COLORS.items()):
        fig.add_trace(
            go.Scatter(
                x=ns,
                y=[row.errors[channel] for row in rows],
                name=f"err_{name}",
                mode="lines+markers",
                marker_color=color,
            )
        )
    fig.add_trace(
        go.Scatter(
            x=ns,
            y=[row.err_max for row in rows],
            name="err_max",
            mode="lines+markers",
            line=dict(dash="dash", color="black"),
        )
    )
    fig.update_layout(
        title=title,
        xaxis_title="segments (n)",
        yaxis_title="absolute error",
        margin=dict(l=20, r=20, t=40 if title else 20, b=20),
    )
    fig.update_xaxes(type="log")
    fig.update_yaxes(type="log")
    return fig


@requires("plotly.graph_objects", "plot")
def write_convergence_html(rows: Sequence, path: str, title: Optional[str] = None):
    convergence_figure(rows, title).write_html(path)

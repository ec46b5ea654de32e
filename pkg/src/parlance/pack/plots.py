"""Plot payloads for the UI and CLI renderers."""

from ..errors import LengthMismatch
from ..values import PlotSpec


def plot_bar(categories, values, title):
    """Bar spec ordered by descending value; ties keep input order."""
    if len(categories) != len(values):
        raise LengthMismatch("Each category needs exactly one value.")
    pairs = sorted(
        zip([str(c) for c in categories], [float(v) for v in values]),
        key=lambda pair: -pair[1],
    )
    return PlotSpec(
        kind="bar",
        categories=tuple(c for c, _ in pairs),
        values=tuple(v for _, v in pairs),
        title=str(title),
        x_label="category",
        y_label="value",
    )

"""SVG figures rendered through jinja2 templates"""

from coxcat.plotting.svg import (
    Figure,
    fan_figure,
    secondary_fan_figure,
    theta_figure,
    zonotope_figure,
)

__all__ = ["Figure", "fan_figure", "secondary_fan_figure", "theta_figure", "zonotope_figure"]

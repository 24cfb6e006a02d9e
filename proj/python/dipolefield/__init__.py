"""Local dipole-moment vector fields over grayscale images."""

from ._core import (
    DimensionError,
    ParseError,
    angular_agreement,
    cell_dipoles,
    charge_map,
    dipole_field,
    extract_domains,
    gradient_field,
    local_mean,
    magnitude,
    perpendicular_field,
    read_pgm,
    render_overlay,
    run_cli,
    tone_map,
    whole_image_dipole,
    write_pgm,
)

__all__ = [
    "DimensionError",
    "ParseError",
    "angular_agreement",
    "cell_dipoles",
    "charge_map",
    "dipole_field",
    "extract_domains",
    "gradient_field",
    "local_mean",
    "magnitude",
    "perpendicular_field",
    "read_pgm",
    "render_overlay",
    "run_cli",
    "tone_map",
    "whole_image_dipole",
    "write_pgm",
]

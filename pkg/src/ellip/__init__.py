"""Rational points on spheres and integral ellipsoids, counted by height."""

from .quadform import QuadraticForm, load_form, sphere, sphere_map, validate_form
from .lattice_enum import (
    CountRecord,
    RationalPoint,
    omega_count,
    omega_count_mobius,
    omega_cumulative,
    omega_points,
    rational_points,
    rep_count,
    representations,
)
from .sphharm import HarmonicPoly, ZonalSpec, dim_harmonic, harmonic_basis, weyl_sum, zonal

__all__ = [
    "CountRecord",
    "HarmonicPoly",
    "QuadraticForm",
    "RationalPoint",
    "ZonalSpec",
    "dim_harmonic",
    "harmonic_basis",
    "load_form",
    "omega_count",
    "omega_count_mobius",
    "omega_cumulative",
    "omega_points",
    "rational_points",
    "rep_count",
    "representations",
    "sphere",
    "sphere_map",
    "validate_form",
    "weyl_sum",
    "zonal",
]

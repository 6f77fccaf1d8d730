"""Exact and numeric tools for locally conformal parallel G2 / Spin(7) geometry."""

from lcpspin.exterior import Form, OrthMap, hodge, interior, pullback, so_action, stabilizer_dim, wedge
from lcpspin.octonion import Octonion, conj, mul, right_mult_matrix
from lcpspin.structures import g2_form, spin7_form, spin7_form_octonionic

__all__ = [
    "Form",
    "OrthMap",
    "Octonion",
    "conj",
    "g2_form",
    "hodge",
    "interior",
    "mul",
    "pullback",
    "right_mult_matrix",
    "so_action",
    "spin7_form",
    "spin7_form_octonionic",
    "stabilizer_dim",
    "wedge",
]

__version__ = "0.1.0"

"""Octonions on R^8 = span(e0, e1, ..., e7).

The multiplication is not hard-coded: for imaginary units it is read off the
G2 3-form through the cross product, e_i e_j = -delta_ij e0 + sum_k w(e_i, e_j, e_k) e_k.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from lcpspin.exterior import Form, OrthMap


class CayleyTable:
    """Structure constants e_a * e_b = sum_c const[a][b][c] e_c for a, b, c in 0..7."""

    def __init__(self, const):
        self.const = const
        # sparse view for fast products
        self.nonzero = [
            (a, b, c, const[a][b][c])
            for a in range(8) for b in range(8) for c in range(8)
            if const[a][b][c] != 0
        ]

    def product(self, x: Sequence, y: Sequence) -> tuple:
        out = [Fraction(0)] * 8
        for a, b, c, k in self.nonzero:
            xa = x[a]
            if xa:
                yb = y[b]
                if yb:
                    out[c] += k * xa * yb
        return tuple(out)

    def basis_product(self, a: int, b: int) -> tuple:
        return tuple(self.const[a][b])

    def dump(self) -> list[str]:
        """Human-readable list of all e_a * e_b products, for debugging."""
        lines = []
        for a in range(8):
            for b in range(8):
                lines.append(f"e{a}*e{b} = {_fmt(self.const[a][b])}")
        return lines


def _fmt(v) -> str:
    parts = [f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}e{i}" for i, c in enumerate(v) if c]
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[1:] if s.startswith("+") else s


def _composition_probe():
    """Deterministic test vectors used to validate a candidate table."""
    basis = [tuple(Fraction(int(i == j)) for i in range(8)) for j in range(8)]
    extra = [
        tuple(Fraction(x) for x in (1, 2, -1, 3, 0, -2, 1, 1)),
        tuple(Fraction(x) for x in (0, -1, 4, 1, 2, 1, -3, 2)),
        tuple(Fraction(x, 2) for x in (3, 1, 0, -1, 5, 2, 2, -4)),
    ]
    return basis + extra


def build_table(omega: Form) -> CayleyTable:
    """Octonion table from a G2 3-form on R^7.

    Raises ValueError if the result is not a composition algebra, which
    happens when ``omega`` is not of G2 type.
    """
    if omega.dim != 7 or omega.degree != 3:
        raise ValueError("build_table needs a 3-form on R^7")
    z = Fraction(0)
    const = [[[z] * 8 for _ in range(8)] for _ in range(8)]
    for a in range(8):
        const[0][a][a] = Fraction(1)
        const[a][0][a] = Fraction(1)
    for i, j in itertools.product(range(7), repeat=2):
        if i == j:
            const[i + 1][j + 1][0] = Fraction(-1)
            continue
        for k in range(7):
            c = omega.coefficient(*(p + 1 for p in (i, j, k)))
            if c:
                const[i + 1][j + 1][k + 1] = c
    table = CayleyTable(const)
    probe = _composition_probe()
    for x, y in itertools.product(probe, repeat=2):
        xy = table.product(x, y)
        if _nsq(xy) != _nsq(x) * _nsq(y):
            raise ValueError("form is not of G2 type: derived algebra is not a composition algebra")
    return table


def _nsq(v):
    return sum(c * c for c in v)


@lru_cache(maxsize=1)
def default_table() -> CayleyTable:
    from lcpspin.structures import g2_form

    return build_table(g2_form())


@dataclass(frozen=True)
class Octonion:
    components: tuple

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.components)
        if len(c) != 8:
            raise ValueError("an octonion has 8 components")
        object.__setattr__(self, "components", c)

    @classmethod
    def basis(cls, i: int, coef=1) -> Octonion:
        return cls(tuple(coef if j == i else 0 for j in range(8)))

    @classmethod
    def imaginary(cls, v: Sequence) -> Octonion:
        """Imaginary octonion from 7 components along e1..e7."""
        if len(v) != 7:
            raise ValueError("need 7 imaginary components")
        return cls((0, *v))

    @classmethod
    def zero(cls) -> Octonion:
        return cls((0,) * 8)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: Octonion) -> Octonion:
        return Octonion(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: Octonion) -> Octonion:
        return Octonion(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> Octonion:
        return Octonion(tuple(-a for a in self))

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return mul(self, other)
        return Octonion(tuple(other * a for a in self))

    def __rmul__(self, scalar):
        return Octonion(tuple(scalar * a for a in self))

    @property
    def real(self) -> Fraction:
        return self.components[0]

    @property
    def imag(self) -> tuple:
        return self.components[1:]

    def is_imaginary(self) -> bool:
        return self.components[0] == 0

    def norm_sq(self) -> Fraction:
        return _nsq(self.components)

    def inner(self, other: Octonion) -> Fraction:
        return sum(a * b for a, b in zip(self, other))

    def __str__(self) -> str:
        return _fmt(self.components)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.components]

    @classmethod
    def from_json(cls, data) -> Octonion:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(Fraction(x) for x in data))


def mul(x: Octonion, y: Octonion, table: CayleyTable | None = None) -> Octonion:
    table = table or default_table()
    return Octonion(table.product(x.components, y.components))


def conj(x: Octonion) -> Octonion:
    c = x.components
    return Octonion((c[0], *(-a for a in c[1:])))


def right_mult_matrix(x: Octonion, table: CayleyTable | None = None) -> OrthMap:
    """Matrix of o -> o * x in the e0..e7 basis."""
    table = table or default_table()
    cols = [table.product(Octonion.basis(j).components, x.components) for j in range(8)]
    return OrthMap.from_columns(cols)


def left_mult_matrix(x: Octonion, table: CayleyTable | None = None) -> OrthMap:
    table = table or default_table()
    cols = [table.product(x.components, Octonion.basis(j).components) for j in range(8)]
    return OrthMap.from_columns(cols)


def is_associative_triple(a: int, b: int, c: int, table: CayleyTable | None = None) -> bool:
    """True if e_a e_b = +-e_c, i.e. span(1, e_a, e_b, e_c) is a quaternion subalgebra."""
    table = table or default_table()
    prod = table.basis_product(a, b)
    return all((v != 0) == (i == c) for i, v in enumerate(prod))


@dataclass(frozen=True)
class QuaternionFrame:
    """Designated (i, j, k, l) with k = i j and l a unit orthogonal to span(1, i, j, k)."""

    i: Octonion
    j: Octonion
    k: Octonion
    l: Octonion
    note: str


@lru_cache(maxsize=1)
def quaternion_frame() -> QuaternionFrame:
    """(e1, e2, e3, e4) if e1 e2 = +-e3, else the lexicographically first
    associative triple (a, b, c) with k := e_a e_b and l the first basis unit
    outside the triple."""
    table = default_table()
    if is_associative_triple(1, 2, 3, table):
        a, b, c = 1, 2, 3
        d = 4
    else:
        a, b, c = next(t for t in itertools.combinations(range(1, 8), 3) if is_associative_triple(*t, table=table))
        d = next(x for x in range(1, 8) if x not in (a, b, c))
    i, j = Octonion.basis(a), Octonion.basis(b)
    k = mul(i, j)
    l = Octonion.basis(d)
    note = f"i=e{a}, j=e{b}, k=i*j={k}, l=e{d}"
    return QuaternionFrame(i, j, k, l, note)

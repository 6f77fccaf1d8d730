"""Exterior algebra on Euclidean R^n with exact rational coefficients.

Forms are stored sparsely as ``{positions: coefficient}`` where ``positions``
is a strictly increasing tuple of 0-based basis positions. Basis *labels*
follow the usual convention for the two spaces we care about: R^7 is spanned
by e1..e7 (label = position + 1) and R^8 by e0..e7 (label = position).
Labels only matter for construction, printing and JSON.

Orientation is the increasing basis order; the metric is Euclidean, so
vectors and 1-forms are identified componentwise.
"""

from __future__ import annotations

import bisect
import itertools
import math
import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from lcpspin import linalg


def label_base(dim: int) -> int:
    """First basis label: 1 on R^7 (e1..e7), 0 otherwise (e0..e7 on R^8)."""
    return 1 if dim == 7 else 0


def _scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return x  # floats are allowed for pointwise numeric use


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


class Form:
    """An alternating k-form on R^dim, immutable by convention."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: dict | None = None):
        if not 0 <= degree:
            raise ValueError(f"negative degree {degree}")
        self.dim = dim
        self.degree = degree
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if idx and not (0 <= idx[0] and idx[-1] < dim):
                raise ValueError(f"index {idx} out of range for dim {dim}")
            c = _scalar(c)
            if c != 0:
                clean[idx] = c
        self.terms = clean

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> Form:
        return cls(dim, degree, {})

    @classmethod
    def scalar(cls, dim: int, value=1) -> Form:
        return cls(dim, 0, {(): value})

    @classmethod
    def monomial(cls, labels: Iterable[int], dim: int, coef=1) -> Form:
        """``coef * e_{labels}``; labels in any order, sign applied when sorting."""
        labels = list(labels)
        pos = [l - label_base(dim) for l in labels]
        s = perm_sign(pos)
        if s == 0:
            return cls(dim, len(pos))
        return cls(dim, len(pos), {tuple(sorted(pos)): s * _scalar(coef)})

    @classmethod
    def from_labels(cls, dim: int, degree: int, spec: dict) -> Form:
        """Build from ``{(l1, l2, ...): coef}`` written in basis labels."""
        out = cls.zero(dim, degree)
        for labels, c in spec.items():
            out = out + cls.monomial(labels, dim, c)
        return out

    @classmethod
    def covector(cls, components: Sequence) -> Form:
        n = len(components)
        return cls(n, 1, {(i,): c for i, c in enumerate(components)})

    @classmethod
    def volume(cls, dim: int) -> Form:
        return cls(dim, dim, {tuple(range(dim)): 1})

    # access ---------------------------------------------------------------

    def coefficient(self, *labels: int):
        """Coefficient of e_{labels} (labels in any order, sign included)."""
        pos = [l - label_base(self.dim) for l in labels]
        s = perm_sign(pos)
        if s == 0:
            return Fraction(0)
        return s * self.terms.get(tuple(sorted(pos)), Fraction(0))

    def components(self) -> list:
        """Coefficients as a list: a vector for 1-forms, a 1-list for 0-forms."""
        if self.degree == 0:
            return [self.terms.get((), Fraction(0))]
        if self.degree != 1:
            raise ValueError("components() is for degree 0 or 1")
        return [self.terms.get((i,), Fraction(0)) for i in range(self.dim)]

    def __call__(self, *vectors):
        """Evaluate on ``degree`` vectors: sum of coef * det of the selected rows."""
        if len(vectors) != self.degree:
            raise ValueError(f"expected {self.degree} vectors")
        total = Fraction(0)
        for idx, c in self.terms.items():
            minor = [[v[i] for v in vectors] for i in idx]
            total += c * linalg.det(minor)
        return total

    def norm_sq(self):
        return sum((c * c for c in self.terms.values()), Fraction(0))

    def inner(self, other: Form):
        _check_dim(self, other)
        if self.degree != other.degree:
            return Fraction(0)
        return sum((c * other.terms.get(i, 0) for i, c in self.terms.items()), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: Form) -> Form:
        _check_dim(self, other)
        if self.degree != other.degree:
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for i, c in other.terms.items():
            terms[i] = terms.get(i, 0) + c
        return Form(self.dim, self.degree, terms)

    def __neg__(self) -> Form:
        return Form(self.dim, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __mul__(self, scalar) -> Form:
        if isinstance(scalar, Form):
            return NotImplemented
        scalar = _scalar(scalar)
        return Form(self.dim, self.degree, {i: scalar * c for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Form:
        return self * (1 / _scalar(scalar))

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.dim, self.degree, self.terms) == (other.dim, other.degree, other.terms)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Form(dim={self.dim}, degree={self.degree}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        base = label_base(self.dim)
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            name = "e" + "".join(str(i + base) for i in idx) if idx else "1"
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}({abs(c)}){name}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        base = label_base(self.dim)
        return {
            "dim": self.dim,
            "degree": self.degree,
            "terms": [
                {"idx": [i + base for i in idx], "coef": str(self.terms[idx])}
                for idx in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> Form:
        if isinstance(data, str):
            data = json.loads(data)
        dim, degree = int(data["dim"]), int(data["degree"])
        out = cls.zero(dim, degree)
        for t in data["terms"]:
            if len(t["idx"]) != degree:
                raise ValueError(f"term {t} does not match degree {degree}")
            out = out + cls.monomial(t["idx"], dim, Fraction(t["coef"]))
        return out


def _check_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class OrthMap:
    """Square matrix with exact entries; acts on column vectors."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(_scalar(x) for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("OrthMap must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> OrthMap:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> OrthMap:
        return cls(tuple(zip(*cols)))

    def __matmul__(self, other: OrthMap) -> OrthMap:
        bt = list(zip(*other.rows))
        return OrthMap(tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in self.rows))

    def __neg__(self) -> OrthMap:
        return OrthMap(tuple(tuple(-x for x in r) for r in self.rows))

    def __mul__(self, scalar) -> OrthMap:
        return OrthMap(tuple(tuple(scalar * x for x in r) for r in self.rows))

    __rmul__ = __mul__

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(x * y for x, y in zip(r, v)) for r in self.rows)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> OrthMap:
        return OrthMap(tuple(zip(*self.rows)))

    def is_orthogonal(self) -> bool:
        return self.T @ self == OrthMap.identity(self.dim)

    def is_skew(self) -> bool:
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(self.dim) for j in range(self.dim))

    def det(self):
        return linalg.det([list(r) for r in self.rows])

    def to_json(self) -> dict:
        return {"dim": self.dim, "rows": [[str(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict | str) -> OrthMap:
        if isinstance(data, str):
            data = json.loads(data)
        m = cls(tuple(tuple(Fraction(x) for x in r) for r in data["rows"]))
        if m.dim != int(data.get("dim", m.dim)):
            raise ValueError("dim does not match rows")
        return m


def _merge(i: tuple, j: tuple):
    """Sign and sorted union of two index tuples (sign 0 on overlap)."""
    if set(i) & set(j):
        return 0, None
    s = perm_sign(i + j)
    return s, tuple(sorted(i + j))


def wedge(a: Form, b: Form) -> Form:
    _check_dim(a, b)
    deg = a.degree + b.degree
    if deg > a.dim:
        return Form(a.dim, deg)
    terms: dict = {}
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            s, k = _merge(i, j)
            if s:
                terms[k] = terms.get(k, 0) + s * ca * cb
    return Form(a.dim, deg, terms)


def wedge_all(forms: Iterable[Form]) -> Form:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def hodge(a: Form) -> Form:
    """Euclidean Hodge star with the increasing-order orientation."""
    full = set(range(a.dim))
    terms = {}
    for idx, c in a.terms.items():
        comp = tuple(sorted(full - set(idx)))
        terms[comp] = perm_sign(idx + comp) * c
    return Form(a.dim, a.dim - a.degree, terms)


def interior(v: Sequence, a: Form) -> Form:
    """Contraction i_v a into the first slot."""
    if len(v) != a.dim:
        raise ValueError(f"dimension mismatch: vector of length {len(v)} vs dim {a.dim}")
    if a.degree == 0:
        return Form(a.dim, 0)
    terms: dict = {}
    for idx, c in a.terms.items():
        for p, i in enumerate(idx):
            if v[i] == 0:
                continue
            rest = idx[:p] + idx[p + 1:]
            terms[rest] = terms.get(rest, 0) + (-1) ** p * v[i] * c
    return Form(a.dim, a.degree - 1, terms)


def pullback(L: OrthMap, a: Form) -> Form:
    """(L^* a)(x1..xk) = a(L x1, ..., L xk)."""
    if L.dim != a.dim:
        raise ValueError(f"dimension mismatch: map dim {L.dim} vs form dim {a.dim}")
    if a.degree == 0:
        return a
    entries = [x for r in L.rows for x in r] + list(a.terms.values())
    if all(isinstance(x, Fraction) for x in entries):
        return _pullback_exact(L, a)
    # L^* e^i = sum_j L[i][j] e^j; pull back monomials as wedges of those.
    pulled = [Form(a.dim, 1, {(j,): x for j, x in enumerate(row)}) for row in L.rows]
    cache: dict = {}

    def monomial(idx):
        if idx not in cache:
            cache[idx] = pulled[idx[0]] if len(idx) == 1 else wedge(monomial(idx[:-1]), pulled[idx[-1]])
        return cache[idx]

    out = Form.zero(a.dim, a.degree)
    for idx, c in a.terms.items():
        out = out + c * monomial(idx)
    return out


def _pullback_exact(L: OrthMap, a: Form) -> Form:
    # Same algorithm on integers: L = N / D, result scaled back by D^k.
    D = math.lcm(*(x.denominator for r in L.rows for x in r))
    N = [[int(x * D) for x in r] for r in L.rows]
    pulled = [{(j,): x for j, x in enumerate(row) if x} for row in N]
    cache: dict = {}

    def monomial(idx):
        if idx not in cache:
            if len(idx) == 1:
                cache[idx] = pulled[idx[0]]
            else:
                acc: dict = {}
                for i, ci in monomial(idx[:-1]).items():
                    for (j,), cj in pulled[idx[-1]].items():
                        if j in i:
                            continue
                        pos = bisect.bisect(i, j)
                        k = i[:pos] + (j,) + i[pos:]
                        sgn = -1 if (len(i) - pos) % 2 else 1
                        acc[k] = acc.get(k, 0) + sgn * ci * cj
                cache[idx] = acc
        return cache[idx]

    scale = Fraction(1, D ** a.degree)
    terms: dict = {}
    for idx, c in a.terms.items():
        for k, v in monomial(idx).items():
            terms[k] = terms.get(k, 0) + c * v
    return Form(a.dim, a.degree, {k: v * scale for k, v in terms.items()})


def so_basis(n: int) -> list[OrthMap]:
    """E_ij - E_ji for i < j in lexicographic order."""
    out = []
    for i, j in itertools.combinations(range(n), 2):
        rows = [[0] * n for _ in range(n)]
        rows[i][j] = 1
        rows[j][i] = -1
        out.append(OrthMap(tuple(map(tuple, rows))))
    return out


def so_action(A: OrthMap, a: Form) -> Form:
    """Derivation action of a skew matrix: (rho(A) a)(x1..xk) = -sum_i a(.., A xi, ..).

    This is the infinitesimal version of push-forward, rho(A) a =
    d/dt pullback(exp(-tA), a) at t = 0, so that rho is a Lie algebra
    homomorphism and rho(A) a = 0 exactly when exp(tA) fixes a.
    """
    if A.dim != a.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {a.dim}")
    if not A.is_skew():
        raise ValueError("so_action needs a skew-symmetric matrix")
    # rho(A) e^i = -e^i o A = -sum_j A[i][j] e^j, extended as a derivation
    images = [Form(a.dim, 1, {(j,): -x for j, x in enumerate(row)}) for row in A.rows]
    basis = [Form(a.dim, 1, {(i,): 1}) for i in range(a.dim)]
    out = Form.zero(a.dim, a.degree)
    for idx, c in a.terms.items():
        for p in range(len(idx)):
            factors = [images[i] if q == p else basis[i] for q, i in enumerate(idx)]
            out = out + c * wedge_all(factors)
    return out


def stabilizer_basis(a: Form) -> list[OrthMap]:
    """Exact basis of the stabilizer algebra {A in so(n) : rho(A) a = 0}."""
    basis = so_basis(a.dim)
    images = [so_action(A, a) for A in basis]
    keys = sorted({k for f in images for k in f.terms})
    rows = [[f.terms.get(k, Fraction(0)) for f in images] for k in keys]
    out = []
    for v in linalg.nullspace(rows, ncols=len(basis)):
        m = [[Fraction(0)] * a.dim for _ in range(a.dim)]
        for c, A in zip(v, basis):
            for i in range(a.dim):
                for j in range(a.dim):
                    m[i][j] += c * A.rows[i][j]
        out.append(OrthMap(tuple(map(tuple, m))))
    return out


def stabilizer_dim(a: Form) -> int:
    basis = so_basis(a.dim)
    images = [so_action(A, a) for A in basis]
    keys = sorted({k for f in images for k in f.terms})
    rows = [[f.terms.get(k, Fraction(0)) for f in images] for k in keys]
    return len(basis) - linalg.rank(rows)

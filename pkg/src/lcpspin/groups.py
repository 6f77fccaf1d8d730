"""Finite matrix groups in SO(8): closure, octonionic frame groups, freeness, Spin(7) membership."""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from lcpspin import linalg
from lcpspin.exterior import Form, OrthMap, pullback
from lcpspin.octonion import Octonion, quaternion_frame, right_mult_matrix

log = logging.getLogger(__name__)

DEFAULT_CAP = 10000


class GroupError(Exception):
    pass


class NotFiniteError(GroupError):
    """Closure exceeded the element cap."""


class FrameError(GroupError):
    pass


@dataclass
class FiniteGroup:
    dim: int
    elements: list  # OrthMap, in canonical order
    generators: list
    labels: list = field(default_factory=list)  # generator words, parallel to elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: OrthMap) -> bool:
        return g in self._index

    def __post_init__(self):
        self._index = {g: n for n, g in enumerate(self.elements)}

    def label(self, g: OrthMap) -> str:
        return self.labels[self._index[g]] if self.labels else str(self._index[g])

    def is_closed(self) -> bool:
        return all(a @ b in self._index for a in self.elements for b in self.elements)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "order": self.order,
            "generators": [g.to_json() for g in self.generators],
            "elements": [g.to_json() for g in self.elements],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data) -> FiniteGroup:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            dim=int(data["dim"]),
            elements=[OrthMap.from_json(g) for g in data["elements"]],
            generators=[OrthMap.from_json(g) for g in data["generators"]],
            labels=list(data.get("labels", [])),
        )


def _word(word: tuple, names: Sequence[str]) -> str:
    return "*".join(names[i] for i in word) if word else "I"


def closure(generators: Sequence[OrthMap], cap: int = DEFAULT_CAP, names: Sequence[str] | None = None) -> FiniteGroup:
    """Breadth-first closure of the generators under multiplication.

    Elements are discovered as words in the generators (g -> g @ s). BFS
    over generators in order yields shortlex words, which fixes the element
    ordering. For a finite group, closure under products already contains
    all inverses.
    """
    generators = list(generators)
    if not generators:
        raise GroupError("need at least one generator")
    n = generators[0].dim
    for g in generators:
        if g.dim != n:
            raise GroupError("generators have different dimensions")
        if not g.is_orthogonal():
            raise GroupError("generator is not exactly orthogonal")
    names = list(names) if names else [f"g{i}" for i in range(len(generators))]

    identity = OrthMap.identity(n)
    words = {identity: ()}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        w = words[g]
        for s_idx, s in enumerate(generators):
            h = g @ s
            if h not in words:
                if len(words) >= cap:
                    raise NotFiniteError(f"not finite within cap: more than {cap} elements")
                words[h] = w + (s_idx,)
                queue.append(h)
    ordered = sorted(words, key=lambda g: (len(words[g]), words[g], _entry_key(g)))
    return FiniteGroup(
        dim=n,
        elements=ordered,
        generators=generators,
        labels=[_word(words[g], names) for g in ordered],
    )


def _entry_key(g: OrthMap):
    return tuple(x for r in g.rows for x in r)


def _check_frame(frame: Sequence[Octonion]):
    m = len(frame)
    if not 1 <= m <= 7:
        raise FrameError(f"frame size must be between 1 and 7, got {m}")
    for a, x in enumerate(frame):
        if not x.is_imaginary():
            raise FrameError(f"frame vector {a} is not imaginary")
        if x.norm_sq() != 1:
            raise FrameError(f"frame vector {a} does not have unit norm")
        for b in range(a):
            if x.inner(frame[b]) != 0:
                raise FrameError(f"frame vectors {b} and {a} are not orthogonal")


def frame_group(frame: Sequence[Octonion], cap: int = DEFAULT_CAP, check_order: bool = True) -> FiniteGroup:
    """Group generated by right multiplications by an orthonormal imaginary frame.

    With ``check_order`` the order is required to be 2^(m+1); a mismatch
    raises GroupError.
    """
    _check_frame(frame)
    gens = [right_mult_matrix(x) for x in frame]
    names = [f"R{a + 1}" for a in range(len(frame))]
    G = closure(gens, cap=cap, names=names)
    expected = 2 ** (len(frame) + 1)
    if check_order and G.order != expected:
        raise GroupError(f"frame group of size {len(frame)} has order {G.order}, expected {expected}")
    return G


def basis_frame(labels: Sequence[int]) -> list[Octonion]:
    return [Octonion.basis(i) for i in labels]


def parse_frame(spec: str) -> list[Octonion]:
    """'e1,e2,e3' -> basis octonions."""
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok.startswith("e") or not tok[1:].isdigit():
            raise FrameError(f"bad frame label {tok!r}")
        i = int(tok[1:])
        if not 1 <= i <= 7:
            raise FrameError(f"frame label {tok!r} is not an imaginary unit")
        out.append(Octonion.basis(i))
    return out


def fixed_space(g: OrthMap) -> list:
    """Rational basis of ker(g - I)."""
    n = g.dim
    rows = [[g.rows[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return linalg.nullspace(rows)


def has_fixed_point(g: OrthMap) -> bool:
    n = g.dim
    rows = [[g.rows[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return linalg.det(rows) == 0


def is_free_on_sphere(G: FiniteGroup):
    """(free, witnesses): g != I fixes a point of S^(n-1) iff det(g - I) = 0."""
    identity = OrthMap.identity(G.dim)
    witnesses = []
    for g in G.elements:
        if g == identity:
            continue
        if has_fixed_point(g):
            witnesses.append((G.label(g), fixed_space(g)))
    return not witnesses, witnesses


def preserves_form(g: OrthMap, f: Form) -> bool:
    if g.dim != f.dim:
        raise ValueError(f"dimension mismatch: {g.dim} vs {f.dim}")
    return pullback(g, f) == f


@dataclass
class ClassificationReport:
    order: int
    is_free_on_sphere: bool
    fixed_point_witnesses: list
    preserves_spin7: bool
    violating_elements: list

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "is_free_on_sphere": self.is_free_on_sphere,
            "fixed_point_witnesses": [
                {"element": label, "fixed_space_basis": [[str(x) for x in v] for v in basis]}
                for label, basis in self.fixed_point_witnesses
            ],
            "preserves_spin7": self.preserves_spin7,
            "violating_elements": list(self.violating_elements),
        }

    def table(self) -> str:
        lines = [
            f"order              {self.order}",
            f"free on sphere     {self.is_free_on_sphere}",
            f"fixed-point elts   {len(self.fixed_point_witnesses)}",
            f"preserves Spin(7)  {self.preserves_spin7}",
            f"violating elts     {len(self.violating_elements)}",
        ]
        for label, basis in self.fixed_point_witnesses:
            lines.append(f"  {label}: dim ker(g - I) = {len(basis)}")
        return "\n".join(lines)


def classify(G: FiniteGroup, phi: Form) -> ClassificationReport:
    if G.dim != 8 or phi.dim != 8:
        raise ValueError("classify works on subgroups of SO(8) and 4-forms on R^8")
    free, witnesses = is_free_on_sphere(G)
    violating = [G.label(g) for g in G.elements if not preserves_form(g, phi)]
    return ClassificationReport(
        order=G.order,
        is_free_on_sphere=free,
        fixed_point_witnesses=witnesses,
        preserves_spin7=not violating,
        violating_elements=violating,
    )


def quaternion_pair_matrix(x: Octonion) -> OrthMap:
    """Matrix of (q, q') -> (q x, q' x) on O = H + H l, o = q + q' l.

    H = span(1, i, j, k) for the designated quaternion frame and x in H.
    """
    qf = quaternion_frame()
    H = [Octonion.basis(0), qf.i, qf.j, qf.k]
    cols = []
    for e in range(8):
        o = Octonion.basis(e)
        q = _combine(H, [o.inner(h) for h in H])
        qp = _combine(H, [o.inner(h * qf.l) for h in H])
        cols.append(((q * x) + (qp * x) * qf.l).components)
    return OrthMap.from_columns(cols)


def _combine(basis, coefs) -> Octonion:
    out = Octonion.zero()
    for b, c in zip(basis, coefs):
        if c:
            out = out + c * b
    return out


def sp2_example_group() -> FiniteGroup:
    """{+-(q,q'), +-(qi,q'i), +-(qj,q'j), +-(qk,q'k)} as 8x8 matrices."""
    qf = quaternion_frame()
    gens = [quaternion_pair_matrix(qf.i), quaternion_pair_matrix(qf.j)]
    return closure(gens, names=["Ti", "Tj"])


def subset_product_list(frame: Sequence[Octonion]) -> list[OrthMap]:
    """The 32 maps o -> +-(((o x_a) x_b) ...) over increasing subsets of a 4-frame."""
    import itertools

    R = [right_mult_matrix(x) for x in frame]
    out = []
    for r in range(len(frame) + 1):
        for subset in itertools.combinations(range(len(frame)), r):
            m = OrthMap.identity(8)
            for a in subset:  # o -> o x_a applied after the earlier factors
                m = R[a] @ m
            out.extend([m, -m])
    return out


def random_orthogonal(n: int, rng, bound: int = 3) -> OrthMap:
    """Exact rational orthogonal matrix via the Cayley transform (I - S)(I + S)^-1."""
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
            s[i][j], s[j][i] = v, -v
    ident = linalg.identity(n)
    minus = [[ident[i][j] - s[i][j] for j in range(n)] for i in range(n)]
    plus = [[ident[i][j] + s[i][j] for j in range(n)] for i in range(n)]
    return OrthMap(tuple(map(tuple, linalg.matmul(minus, linalg.inverse(plus)))))


def random_frame(m: int, rng, bound: int = 3) -> list[Octonion]:
    """m exact orthonormal imaginary octonions: columns of a random rational O(7) matrix."""
    Q = random_orthogonal(7, rng, bound)
    return [Octonion.imaginary(Q.column(a)) for a in range(m)]


def random_signed_permutation(n: int, rng) -> OrthMap:
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[0] * n for _ in range(n)]
    for j, p in enumerate(perm):
        rows[p][j] = rng.choice((1, -1))
    return OrthMap(tuple(map(tuple, rows)))


def conjugate(G: FiniteGroup, P: OrthMap) -> FiniteGroup:
    """P G P^T (P orthogonal)."""
    Pt = P.T
    return FiniteGroup(
        dim=G.dim,
        elements=[P @ g @ Pt for g in G.elements],
        generators=[P @ g @ Pt for g in G.generators],
        labels=list(G.labels),
    )

"""Exit criteria for a build, runnable from pytest or ``lcpspin verify-all``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from lcpspin import conegeo
from lcpspin.exterior import Form, OrthMap, hodge, interior, stabilizer_dim, wedge
from lcpspin.groups import (
    basis_frame,
    closure,
    frame_group,
    is_free_on_sphere,
    subset_product_list,
    preserves_form,
    random_frame,
    sp2_example_group,
)
from lcpspin.octonion import Octonion, conj, quaternion_frame
from lcpspin.structures import (
    g2_form,
    lee_constant_g2,
    lee_constant_spin7,
    scalar_curvature_g2,
    spin7_form,
    spin7_form_octonionic,
    torsion_g2,
    torsion_spin7,
)

SEED = 0
RANDOM_FRAMES = 10


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number:2d}] {self.title} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "details": _stringify(self.details),
        }


def _stringify(x):
    if isinstance(x, dict):
        return {str(k): _stringify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_stringify(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        limit = res.details.get("time_limit_s")
        if limit is not None and res.seconds >= limit:
            res.passed = False
            res.details["time_exceeded"] = True
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def random_frame_sizes() -> list[int]:
    return [1 + (i % 7) for i in range(RANDOM_FRAMES)]


@lru_cache(maxsize=1)
def frame_groups() -> dict:
    """All frame groups used by the criteria, keyed by a readable name."""
    out = {}
    for m in range(1, 8):
        out[f"basis m={m}"] = frame_group(basis_frame(range(1, m + 1)), check_order=False)
    rng = random.Random(SEED)
    for n, m in enumerate(random_frame_sizes()):
        out[f"random#{n} m={m}"] = frame_group(random_frame(m, rng), check_order=False)
    return out


@_timed
def stabilizer_dimensions() -> CriterionResult:
    dims = {
        "g2": stabilizer_dim(g2_form()),
        "spin7": stabilizer_dim(spin7_form()),
        "spin7-oct": stabilizer_dim(spin7_form_octonionic()),
    }
    ok = dims == {"g2": 14, "spin7": 21, "spin7-oct": 21}
    return CriterionResult(1, "stabilizer dimensions 14 / 21 / 21", ok, details={**dims, "time_limit_s": 5})


@_timed
def group_orders() -> CriterionResult:
    orders = {}
    ok = True
    for name, G in frame_groups().items():
        m = int(name.rsplit("=", 1)[1])
        orders[name] = {"order": G.order, "expected": 2 ** (m + 1)}
        ok &= G.order == 2 ** (m + 1)
    return CriterionResult(2, "frame group orders 2^(m+1)", ok, details={"orders": orders, "time_limit_s": 30})


@_timed
def sigma4_elements() -> CriterionResult:
    qf = quaternion_frame()
    checks = {}
    for label, frame in (("designated " + qf.note, [qf.i, qf.j, qf.k, qf.l]), ("e1,e2,e3,e4", basis_frame([1, 2, 3, 4]))):
        G = frame_group(frame, check_order=False)
        listed = subset_product_list(frame)
        checks[label] = len(set(listed)) == 32 and set(listed) == set(G.elements)
    return CriterionResult(3, "4-frame group equals its 32 signed subset products", all(checks.values()), details=checks)


@_timed
def spin7_membership() -> CriterionResult:
    phi = spin7_form_octonionic()
    groups = dict(frame_groups())
    groups["sp2 example"] = sp2_example_group()
    bad = {name: sum(not preserves_form(g, phi) for g in G.elements) for name, G in groups.items()}
    return CriterionResult(
        4, "every frame_group / sp2 element fixes phi_oct", not any(bad.values()), details={"violations": bad}
    )


def random_octonion(rng, bound=5, imaginary=False) -> Octonion:
    comps = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(8)]
    if imaginary:
        comps[0] = Fraction(0)
    return Octonion(tuple(comps))


def random_orthogonal_pair(rng, bound=5):
    """Nonzero orthogonal imaginary octonions (exact Gram-Schmidt)."""
    while True:
        x = random_octonion(rng, bound, imaginary=True)
        y = random_octonion(rng, bound, imaginary=True)
        if x.norm_sq() == 0:
            continue
        y = y - (y.inner(x) / x.norm_sq()) * x
        if y.norm_sq() != 0:
            return x, y


@_timed
def octonion_identities(count: int = 1000) -> CriterionResult:
    rng = random.Random(SEED)
    failures = {"alternativity": 0, "composition": 0, "anticommutation": 0}
    for _ in range(count):
        o, p = random_octonion(rng), random_octonion(rng)
        if (o * o) * p != o * (o * p) or (p * o) * o != p * (o * o):
            failures["alternativity"] += 1
        if (o * p).norm_sq() != o.norm_sq() * p.norm_sq():
            failures["composition"] += 1
        x, y = random_orthogonal_pair(rng)
        if (o * conj(y)) * x != -((o * conj(x)) * y):
            failures["anticommutation"] += 1
    return CriterionResult(
        5, "octonion identities on random exact inputs", not any(failures.values()), details={"instances": count, **failures}
    )


@_timed
def torsion_formulas() -> CriterionResult:
    w, phi = g2_form(), spin7_form()
    g2_ok = all(
        hodge(wedge(t, w)) == -interior(t.components(), hodge(w)) and torsion_g2(t, w).degree == 3
        for t in (Form(7, 1, {(i,): 1}) for i in range(7))
    )
    s7_ok = all(
        hodge(wedge(t, phi)) == interior(t.components(), hodge(phi)) and torsion_spin7(t, phi).degree == 3
        for t in (Form(8, 1, {(i,): 1}) for i in range(8))
    )
    return CriterionResult(6, "torsion double formulas on basis 1-forms", g2_ok and s7_ok, details={"g2": g2_ok, "spin7": s7_ok})


@_timed
def lee_constants() -> CriterionResult:
    c, c2 = lee_constant_g2(), lee_constant_spin7()
    return CriterionResult(
        7,
        "Lee recovery constants stable over basis 1-forms",
        c["stable"] and c2["stable"],
        details={"g2_lee_constant": c["constant"], "spin7_lee_constant": c2["constant"]},
    )


@_timed
def scalar_curvature() -> CriterionResult:
    s = scalar_curvature_g2(16)
    return CriterionResult(8, "scalar curvature 15/8 * 16 = 30", s == 30, details={"s": s})


@_timed
def cone_identities(samples=50, h=1e-4, tol=1e-6) -> CriterionResult:
    reports = [
        conegeo.verify_cone_identity(g2_form(), samples, h, tol, min_ratio=3.5, name="g2"),
        conegeo.verify_cone_identity(spin7_form(), samples, h, tol, min_ratio=3.5, name="spin7"),
    ]
    return CriterionResult(
        9,
        "cone identities d_S sigma = k rho (k = 3, 4)",
        all(r.passed for r in reports),
        details={r.name: r.to_json() for r in reports} | {"time_limit_s": 60},
    )


@_timed
def nearly_kaehler(samples=50, h=1e-4, tol=1e-6) -> CriterionResult:
    r = conegeo.nearly_kaehler_check(samples, h, tol, triples=20)
    return CriterionResult(10, "nearly Kaehler type residual on S^6", r.passed, details=r.to_json())


@_timed
def lee_closedness(samples=50, h=1e-4, tol=1e-6) -> CriterionResult:
    reports = [conegeo.lee_closedness_check(case, samples, h, tol, spread_tol=1e-8) for case in ("g2", "spin7")]
    return CriterionResult(
        11, "Lee form closed and radial on cylinder models", all(r.passed for r in reports),
        details={r.name: r.to_json() for r in reports},
    )


@_timed
def dilation() -> CriterionResult:
    r = conegeo.dilation_invariance_check(samples=100, tol=1e-12)
    return CriterionResult(12, "dilation invariance of rescaled phi", r.passed, details=r.to_json())


def _diag(*entries) -> OrthMap:
    n = len(entries)
    return OrthMap(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


@_timed
def freeness_sanity() -> CriterionResult:
    minus = closure([-OrthMap.identity(8)])
    free_pm, _ = is_free_on_sphere(minus)
    refl = _diag(-1, 1, 1, 1, 1, 1, 1, 1)
    G = closure([refl, -OrthMap.identity(8)])
    free_r, witnesses = is_free_on_sphere(G)
    witnesses_ok = bool(witnesses)
    for label, basis in witnesses:
        g = G.elements[G.labels.index(label)]
        witnesses_ok &= bool(basis) and all(g.apply(v) == tuple(v) for v in basis)
    refl_label = G.label(refl)
    refl_basis = dict(witnesses).get(refl_label, [])
    # the reflection fixes exactly the hyperplane e0 = 0
    witnesses_ok &= len(refl_basis) == 7 and all(v[0] == 0 for v in refl_basis)
    ok = free_pm and not free_r and witnesses_ok
    return CriterionResult(
        13,
        "freeness engine: {+-I} free, reflection group non-free with witnesses",
        ok,
        details={"pm_identity_free": free_pm, "reflection_group_free": free_r, "witnesses_correct": witnesses_ok},
    )


CRITERIA = [
    stabilizer_dimensions,
    group_orders,
    sigma4_elements,
    spin7_membership,
    octonion_identities,
    torsion_formulas,
    lee_constants,
    scalar_curvature,
    cone_identities,
    nearly_kaehler,
    lee_closedness,
    dilation,
    freeness_sanity,
]


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        if echo:
            echo(res.line())
        results.append(res)
    return results

"""Floating-point checks of the cone geometry over S^6 and S^7.

Numeric forms are dense antisymmetric numpy arrays ``T`` of shape (n,)*k
with ``T[i1, ..., ik] = alpha(e_i1, ..., e_ik)``; this agrees with the exact
``Form`` convention on increasing indices. Nothing computed here is fed
back into the exact modules.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from lcpspin.exterior import Form, perm_sign
from lcpspin.octonion import default_table
from lcpspin.structures import g2_form, lee_g2, lee_spin7, spin7_form, spin7_form_octonionic

DEFAULT_H = 1e-4
DEFAULT_TOL = 1e-6
DEFAULT_SAMPLES = 50
DEFAULT_SEED = 0


# dense tensor helpers ---------------------------------------------------------


def to_tensor(form: Form) -> np.ndarray:
    n, k = form.dim, form.degree
    T = np.zeros((n,) * k)
    for idx, c in form.terms.items():
        c = float(c)
        for p in itertools.permutations(range(k)):
            T[tuple(idx[i] for i in p)] = perm_sign(p) * c
    return T


def from_tensor(T: np.ndarray, dim: int | None = None) -> Form:
    """Float-coefficient Form from a dense antisymmetric tensor."""
    k = T.ndim
    n = dim if dim is not None else (T.shape[0] if k else 0)
    if k == 0:
        return Form(n, 0, {(): float(T)})
    return Form(n, k, {idx: float(T[idx]) for idx in itertools.combinations(range(n), k)})


def wedge1(v: np.ndarray, T: np.ndarray) -> np.ndarray:
    """v^flat ^ T for a covector v."""
    outer = np.multiply.outer(v, T)
    return sum((-1) ** a * np.moveaxis(outer, 0, a) for a in range(T.ndim + 1))


def contract(v: np.ndarray, T: np.ndarray) -> np.ndarray:
    """i_v T."""
    return np.tensordot(v, T, axes=(0, 0))


def pull(M: np.ndarray, T: np.ndarray) -> np.ndarray:
    """M^* T, i.e. T(M x1, ..., M xk)."""
    for axis in range(T.ndim):
        T = np.moveaxis(np.tensordot(T, M, axes=(axis, 0)), -1, axis)
    return T


def projector(u: np.ndarray) -> np.ndarray:
    u = u / np.linalg.norm(u)
    return np.eye(len(u)) - np.outer(u, u)


def evaluate(T: np.ndarray, *vectors) -> float:
    for v in vectors:
        T = np.tensordot(v, T, axes=(0, 0))
    return float(T)


# fields -------------------------------------------------------------------------


@dataclass
class FormField:
    dim: int
    degree: int
    eval: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if not np.any(p):
            raise ValueError("form fields are evaluated away from the origin")
        return self.eval(p)


def numeric_d(f: FormField, p, h: float = DEFAULT_H) -> np.ndarray:
    """Central-difference exterior derivative at p (second order in h)."""
    if h <= 0:
        raise ValueError("step h must be positive")
    p = np.asarray(p, dtype=float)
    n = f.dim
    partials = []
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        partials.append((f(p + step) - f(p - step)) / (2 * h))
    D = np.array(partials)  # D[j, I] = d_j alpha_I
    if f.degree == 0:
        return D
    return sum((-1) ** a * np.moveaxis(D, 0, a) for a in range(f.degree + 1))


def constant_field(form: Form) -> FormField:
    T = to_tensor(form)
    return FormField(form.dim, form.degree, lambda p: T)


def radial_sigma_field(parallel: Form) -> FormField:
    """p -> Pi_p^* i_{p/|p|} parallel, homogeneous of degree 0."""
    T = to_tensor(parallel)

    def ev(p):
        u = p / np.linalg.norm(p)
        return pull(projector(u), contract(u, T))

    return FormField(parallel.dim, parallel.degree - 1, ev)


def radial_rho_field(parallel: Form) -> FormField:
    """p -> Pi_p^* parallel."""
    T = to_tensor(parallel)
    return FormField(parallel.dim, parallel.degree, lambda p: pull(projector(p), T))


# reports ------------------------------------------------------------------------


@dataclass
class ResidualReport:
    name: str
    samples: int
    h: float
    max_residual: float
    residual_half: float | None
    order_estimate: float | None
    tol: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _jsonable(asdict(self))

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: max residual {self.max_residual:.3e} (tol {self.tol:.0e}, h {self.h:g})"


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _order(r_h, r_half):
    if r_half is None or r_half <= 0 or r_h <= 0:
        return None
    return math.log2(r_h / r_half)


def sphere_points(n: int, count: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Fixed-seed normalized Gaussian draws on S^(n-1)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# cone splitting -----------------------------------------------------------------


@dataclass
class ConeSplit:
    u: np.ndarray
    sigma: np.ndarray
    rho: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return wedge1(self.u, self.sigma) + self.rho


def cone_split(parallel: Form, u, atol: float = 1e-12) -> ConeSplit:
    """Split a constant form at a unit point as u^flat ^ sigma + rho, both tangential."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1) > atol:
        raise ValueError("cone_split needs a unit vector")
    T = to_tensor(parallel)
    P = projector(u)
    return ConeSplit(u=u, sigma=pull(P, contract(u, T)), rho=pull(P, T))


def verify_cone_identity(
    parallel: Form,
    samples: int = DEFAULT_SAMPLES,
    h: float = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    min_ratio: float | None = None,
    name: str | None = None,
) -> ResidualReport:
    """Check d_S sigma = k rho and d_S rho = 0 on the unit sphere.

    ``min_ratio`` (e.g. 3.5 for a second-order scheme) additionally requires
    residual(h) / residual(h/2) >= min_ratio.
    """
    k = parallel.degree
    sig, rho = radial_sigma_field(parallel), radial_rho_field(parallel)
    pts = sphere_points(parallel.dim, samples, seed)

    def run(step):
        worst, fitted = 0.0, []
        for u in pts:
            P = projector(u)
            ds = pull(P, numeric_d(sig, u, step))
            dr = pull(P, numeric_d(rho, u, step))
            r = rho(u)
            worst = max(worst, float(np.max(np.abs(ds - k * r), initial=0.0)), float(np.max(np.abs(dr), initial=0.0)))
            rr = float(np.sum(r * r))
            if rr > 1e-20:  # rho is round-off for top-degree forms
                fitted.append(float(np.sum(ds * r)) / rr)
        return worst, fitted

    res_h, fitted = run(h)
    res_half, _ = run(h / 2)
    ratio = res_h / res_half if res_half > 0 else math.inf
    passed = res_h < tol
    if min_ratio is not None:
        passed = passed and ratio >= min_ratio
    return ResidualReport(
        name=name or f"cone identity (degree {k}, dim {parallel.dim})",
        samples=samples,
        h=h,
        max_residual=res_h,
        residual_half=res_half,
        order_estimate=_order(res_h, res_half),
        tol=tol,
        passed=passed,
        details={
            "degree": k,
            "expected_ratio": k,
            "fitted_ratio_mean": float(np.mean(fitted)) if fitted else None,
            "fitted_ratio_spread": float(np.ptp(fitted)) if fitted else None,
            "residual_ratio": ratio,
            "min_ratio": min_ratio,
        },
    )


# nearly Kaehler S^6 -------------------------------------------------------------


def _float_table() -> np.ndarray:
    const = default_table().const
    return np.array([[[float(c) for c in row] for row in plane] for plane in const])


def j_matrix(u: np.ndarray, table: np.ndarray | None = None) -> np.ndarray:
    """7x7 matrix of x -> Im(u * x) for u, x in Im O = R^7."""
    table = _float_table() if table is None else table
    u8 = np.concatenate([[0.0], u])
    # (u x)_c = sum_ab u_a x_b const[a][b][c]
    M = np.einsum("a,abc->cb", u8, table)
    return M[1:, 1:]


def kaehler_field(table: np.ndarray | None = None) -> FormField:
    """F_p(x, y) = <J_u Pi x, Pi y> with u = p/|p| on R^7."""
    table = _float_table() if table is None else table

    def ev(p):
        u = p / np.linalg.norm(p)
        J = j_matrix(u, table)
        return pull(projector(u), J.T)  # bilinear (x, y) -> <J x, y>

    return FormField(7, 2, ev)


def _tangent(rng, u, count):
    v = rng.standard_normal((count, len(u)))
    v -= np.outer(v @ u, u)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def nearly_kaehler_check(
    samples: int = DEFAULT_SAMPLES,
    h: float = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    triples: int = 20,
) -> ResidualReport:
    """dF restricted to S^6 is of type (3,0)+(0,3): psi(Jx, Jy, z) = -psi(x, y, z)."""
    table = _float_table()
    F = kaehler_field(table)
    pts = sphere_points(7, samples, seed)
    rng = np.random.default_rng(seed + 1)
    j_err = f_err = 0.0
    frames = []
    for u in pts:
        J = j_matrix(u, table)
        P = projector(u)
        # J_u^2 = -1 on the tangent space
        j_err = max(j_err, float(np.max(np.abs(P @ J @ J @ P + P))))
        tri = [_tangent(rng, u, 3) for _ in range(triples)]
        Fu = F(u)
        for x, y, _ in tri:
            f_err = max(f_err, abs(evaluate(Fu, J @ x, J @ y) - evaluate(Fu, x, y)))
        frames.append((u, J, P, tri))
    if j_err > 1e-12:
        raise ValueError(f"J_u^2 != -1 on tangent vectors (error {j_err:.2e}); table or projection bug")

    def run(step):
        worst = 0.0
        for u, J, P, tri in frames:
            psi = pull(P, numeric_d(F, u, step))
            for x, y, z in tri:
                worst = max(worst, abs(evaluate(psi, J @ x, J @ y, z) + evaluate(psi, x, y, z)))
        return worst

    res_h, res_half = run(h), run(h / 2)
    return ResidualReport(
        name="nearly Kaehler type of dF on S^6",
        samples=samples,
        h=h,
        max_residual=res_h,
        residual_half=res_half,
        order_estimate=_order(res_h, res_half),
        tol=tol,
        passed=res_h < tol and f_err < tol,
        details={"triples_per_sample": triples, "J_squared_error": j_err, "F_J_invariance_error": f_err},
    )


# Lee form of the cylinder models ----------------------------------------------------


def cylinder_field(case: str) -> tuple[FormField, Form]:
    """|p|^-3 w on R^7 (case 'g2') or |p|^-4 phi on R^8 (case 'spin7')."""
    if case == "g2":
        base, power = g2_form(), 3
    elif case == "spin7":
        base, power = spin7_form(), 4
    else:
        raise ValueError(f"unknown case {case!r}")
    T = to_tensor(base)
    return FormField(base.dim, base.degree, lambda p: T / np.linalg.norm(p) ** power), base


def lee_field(case: str, h: float = DEFAULT_H) -> tuple[FormField, Callable]:
    """Lee form of the cylinder model as a numeric 1-form field.

    The model's metric is |p|^-2 times Euclidean, with orthonormal frame
    |p| e_i; forms are converted to frame components (a k-form gains |p|^k)
    before the pointwise Lee operator, and back afterwards.
    """
    field_, _ = cylinder_field(case)
    lee = lee_g2 if case == "g2" else lee_spin7

    def ev(p):
        r = np.linalg.norm(p)
        w = field_(p)
        dw = numeric_d(field_, p, h)
        theta = lee(from_tensor(w * r ** w.ndim), from_tensor(dw * r ** dw.ndim))
        return np.array([float(c) for c in theta.components()]) / r

    return FormField(field_.dim, 1, ev), field_


def lee_closedness_check(
    case: str = "g2",
    samples: int = DEFAULT_SAMPLES,
    h: float = DEFAULT_H,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    spread_tol: float = 1e-8,
    radius: float = 1.0,
) -> ResidualReport:
    """d(theta) = 0, theta radial, theta(r d/dr) constant, and dw = kappa theta ^ w.

    Samples lie on the sphere of the given radius.
    """
    theta, field_ = lee_field(case, h)
    pts = radius * sphere_points(theta.dim, samples, seed)
    d_res, radial_res, coeffs, kappas = 0.0, 0.0, [], []
    for p in pts:
        t = theta(p)
        u = p / np.linalg.norm(p)
        d_res = max(d_res, float(np.max(np.abs(numeric_d(theta, p, h)))))
        radial_res = max(radial_res, float(np.max(np.abs(t - (t @ u) * u))))
        coeffs.append(float(t @ p))
        w = field_(p)
        dw = numeric_d(field_, p, h)
        tw = wedge1(t, w)
        kappas.append(float(np.sum(dw * tw) / np.sum(tw * tw)))
    coeffs = np.array(coeffs)
    rel_spread = float(np.std(coeffs) / abs(np.mean(coeffs)))
    worst = max(d_res, radial_res)
    return ResidualReport(
        name=f"Lee form closedness ({case} cylinder model)",
        samples=samples,
        h=h,
        max_residual=worst,
        residual_half=None,
        order_estimate=None,
        tol=tol,
        passed=worst < tol and rel_spread < spread_tol,
        details={
            "d_theta_residual": d_res,
            "radial_residual": radial_res,
            "radial_coefficient_mean": float(np.mean(coeffs)),
            "radial_coefficient_rel_std": rel_spread,
            "spread_tol": spread_tol,
            "kappa_mean": float(np.mean(kappas)),
            "kappa_spread": float(np.ptp(kappas)),
        },
    )


# dilation invariance ---------------------------------------------------------------


def rescaled_phi_field(phi: Form | None = None) -> FormField:
    """p -> phi / |p|^4 on R^8 minus the origin."""
    T = to_tensor(phi or spin7_form_octonionic())
    return FormField(8, 4, lambda p: T / np.linalg.norm(p) ** 4)


def phi_tilde(T: np.ndarray, x, y, z, w) -> float:
    """phi(x, y, z, w) / (|x|^2 + |y|^2 + |z|^2 + |w|^2)^2."""
    s = sum(float(np.dot(v, v)) for v in (x, y, z, w))
    return evaluate(T, x, y, z, w) / s**2


def dilation_invariance_check(samples: int = 100, tol: float = 1e-12, seed: int = DEFAULT_SEED) -> ResidualReport:
    """Pullback under p -> lambda p leaves the rescaled Cayley form unchanged."""
    T = to_tensor(spin7_form_octonionic())
    field_ = rescaled_phi_field()
    rng = np.random.default_rng(seed)
    fixed = [(np.eye(8)[0], 1.0), (np.eye(8)[0], 2.0), (rng.standard_normal(8), 1 / 3)]
    cases = fixed + [
        (rng.standard_normal(8), float(np.exp(rng.uniform(-2, 2)))) for _ in range(max(samples - len(fixed), 0))
    ]
    worst_field = worst_display = 0.0
    for p, lam in cases[:samples]:
        vecs = rng.standard_normal((4, 8))
        ref = evaluate(field_(p), *vecs)
        scaled = evaluate(field_(lam * p), *(lam * vecs))
        worst_field = max(worst_field, abs(scaled - ref) / abs(ref))
        ref_d = phi_tilde(T, *vecs)
        scaled_d = phi_tilde(T, *(lam * vecs))
        worst_display = max(worst_display, abs(scaled_d - ref_d) / abs(ref_d))
    worst = max(worst_field, worst_display)
    return ResidualReport(
        name="dilation invariance of the rescaled Cayley form",
        samples=min(samples, len(cases)),
        h=0.0,
        max_residual=worst,
        residual_half=None,
        order_estimate=None,
        tol=tol,
        passed=worst < tol,
        details={"field_rel_error": worst_field, "display_rel_error": worst_display},
    )

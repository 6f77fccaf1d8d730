"""Canonical G2 and Spin(7) forms, Lee forms, torsion and curvature constants."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from lcpspin.exterior import Form, OrthMap, hodge, interior, perm_sign, pullback, wedge


class ConventionError(AssertionError):
    """Two expressions that must agree under our sign conventions did not."""


_G2_TERMS = {
    (1, 2, 7): 1,
    (2, 3, 6): -1,
    (3, 4, 7): 1,
    (5, 6, 7): 1,
    (1, 4, 6): -1,
    (2, 4, 5): -1,
    (1, 3, 5): 1,
}


def g2_form() -> Form:
    """w = e127 - e236 + e347 + e567 - e146 - e245 + e135 on R^7."""
    return Form.from_labels(7, 3, _G2_TERMS)


def embed_r7(a: Form) -> Form:
    """Push a form on R^7 (e1..e7) into R^8 = R e0 + R^7."""
    if a.dim != 7:
        raise ValueError("embed_r7 needs a form on R^7")
    return Form(8, a.degree, {tuple(i + 1 for i in idx): c for idx, c in a.terms.items()})


def spin7_form() -> Form:
    """phi = e0 ^ w + *_7 w on R^8."""
    w = g2_form()
    e0 = Form.monomial([0], 8)
    return wedge(e0, embed_r7(w)) + embed_r7(hodge(w))


def _basis_products(table):
    from lcpspin.octonion import default_table

    table = table or default_table()
    return lambda a, b: table.basis_product(a, b)


def _mul_vec(prod, x, y):
    out = [Fraction(0)] * 8
    for p, xp in enumerate(x):
        if xp:
            for q, yq in enumerate(y):
                if yq:
                    for r, c in enumerate(prod(p, q)):
                        if c:
                            out[r] += xp * yq * c
    return out


def _unit(i):
    return [Fraction(int(i == j)) for j in range(8)]


def _conj_vec(x):
    return [x[0]] + [-c for c in x[1:]]


def cayley_raw(a: int, b: int, c: int, d: int, table=None) -> Fraction:
    """<(e_a e_b) e_c, e_d>, the quadrilinear map before alternation."""
    prod = _basis_products(table)
    return _mul_vec(prod, prod(a, b), _unit(c))[d]


def cayley_triple(a: int, b: int, c: int, d: int, table=None) -> Fraction:
    """<e_a, e_b x e_c x e_d> with the triple cross product
    y x z x v = 1/2 (y (conj(z) v) - v (conj(z) y)).

    Agrees with ``cayley_raw`` whenever the first argument is e0 and the
    others are distinct imaginary units.
    """
    prod = _basis_products(table)
    y, zbar, v = _unit(b), _conj_vec(_unit(c)), _unit(d)
    t1 = _mul_vec(prod, y, _mul_vec(prod, zbar, v))
    t2 = _mul_vec(prod, v, _mul_vec(prod, zbar, y))
    return (t1[a] - t2[a]) / 2


def alternation(f, dim: int = 8, degree: int = 4) -> Form:
    """Form whose e_I coefficient is the alternating projection (1/k! weight) of f at e_I."""
    terms = {}
    for idx in itertools.combinations(range(dim), degree):
        total = Fraction(0)
        for p in itertools.permutations(range(degree)):
            total += perm_sign(p) * f(*(idx[i] for i in p))
        terms[idx] = total / math.factorial(degree)
    return Form(dim, degree, terms)


@lru_cache(maxsize=1)
def spin7_form_octonionic() -> Form:
    """Cayley 4-form from octonion multiplication, scaled to max |coef| = 1.

    Built as the alternation of ``cayley_triple``. This is the form fixed by
    right multiplication by unit imaginary octonions. (The bare alternation of
    ``cayley_raw`` is not Spin(7)-type: the raw map is not alternating in the
    e0 slot and the result has a 14-dimensional stabilizer.)
    """
    f = alternation(cayley_triple)
    return f / f.max_abs()


def _check(dim, degree, f, name):
    if f.dim != dim or f.degree != degree:
        raise ValueError(f"{name} must be a {degree}-form on R^{dim}, got degree {f.degree} on R^{f.dim}")


def lee_g2(omega3: Form, domega4: Form) -> Form:
    """theta = -1/3 *(*dw ^ w)."""
    _check(7, 3, omega3, "omega")
    _check(7, 4, domega4, "d omega")
    return Fraction(-1, 3) * hodge(wedge(hodge(domega4), omega3))


def lee_spin7(phi4: Form, dphi5: Form) -> Form:
    """Theta = -1/7 *(*dphi ^ phi)."""
    _check(8, 4, phi4, "phi")
    _check(8, 5, dphi5, "d phi")
    return Fraction(-1, 7) * hodge(wedge(hodge(dphi5), phi4))


def _agree(a: Form, b: Form, tol=1e-12) -> bool:
    if all(isinstance(c, Fraction) for c in list(a.terms.values()) + list(b.terms.values())):
        return a == b
    return (a - b).max_abs() <= tol * max(1.0, float(a.max_abs()), float(b.max_abs()))


def torsion_g2(theta: Form, omega: Form) -> Form:
    """T = 1/4 *(theta ^ w), cross-checked against -1/4 i_theta(*w)."""
    _check(7, 1, theta, "theta")
    _check(7, 3, omega, "omega")
    t = Fraction(1, 4) * hodge(wedge(theta, omega))
    other = Fraction(-1, 4) * interior(theta.components(), hodge(omega))
    if not _agree(t, other):
        raise ConventionError("*(theta^w) != -i_theta(*w)")
    return t


def torsion_spin7(Theta: Form, phi: Form) -> Form:
    """T = -1/6 *(Theta ^ phi), cross-checked against -1/6 i_Theta(*phi)."""
    _check(8, 1, Theta, "Theta")
    _check(8, 4, phi, "phi")
    t = Fraction(-1, 6) * hodge(wedge(Theta, phi))
    other = Fraction(-1, 6) * interior(Theta.components(), hodge(phi))
    if not _agree(t, other):
        raise ConventionError("*(Theta^phi) != i_Theta(*phi)")
    return t


def scalar_curvature_g2(theta_norm_sq) -> Fraction:
    theta_norm_sq = Fraction(theta_norm_sq)
    if theta_norm_sq < 0:
        raise ValueError("|theta|^2 must be non-negative")
    return Fraction(15, 8) * theta_norm_sq


def scalar_curvature_spin7(Theta_norm_sq) -> Fraction:
    Theta_norm_sq = Fraction(Theta_norm_sq)
    if Theta_norm_sq < 0:
        raise ValueError("|Theta|^2 must be non-negative")
    return Fraction(21, 36) * Theta_norm_sq


def _proportionality(result: Form, beta: Form):
    """c with result = c * beta, or None if not proportional."""
    (idx, b), = beta.terms.items()
    c = result.terms.get(idx, Fraction(0)) / b
    return c if result == c * beta else None


def lee_constant_g2(omega: Form | None = None) -> dict:
    """Recover c in lee_g2(w, 3/4 beta ^ w) = c beta for every basis beta."""
    omega = omega or g2_form()
    per_basis = []
    for i in range(7):
        beta = Form(7, 1, {(i,): 1})
        theta = lee_g2(omega, Fraction(3, 4) * wedge(beta, omega))
        per_basis.append(_proportionality(theta, beta))
    return _constant_report(per_basis)


def lee_constant_spin7(phi: Form | None = None) -> dict:
    """Recover c' in lee_spin7(phi, beta ^ phi) = c' beta for every basis beta."""
    phi = phi or spin7_form()
    per_basis = []
    for i in range(8):
        beta = Form(8, 1, {(i,): 1})
        Theta = lee_spin7(phi, wedge(beta, phi))
        per_basis.append(_proportionality(Theta, beta))
    return _constant_report(per_basis)


def _constant_report(values) -> dict:
    stable = None not in values and len(set(values)) == 1
    return {
        "constant": values[0] if stable else None,
        "stable": stable,
        "per_basis": values,
    }


def signed_permutation(perm, signs) -> OrthMap:
    """Matrix P with P e_j = signs[j] e_{perm[j]}."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for j, (p, s) in enumerate(zip(perm, signs)):
        rows[p][j] = s
    return OrthMap(tuple(map(tuple, rows)))


def find_signed_permutation(source: Form, target: Form):
    """Search for a signed permutation P and eps = +-1 with P^* source = eps * target.

    Returns ``(P, eps)`` for the first witness in lexicographic order of
    (permutation, sign vector), or ``None``.
    """
    if source.dim != target.dim or source.degree != target.degree:
        return None
    n = source.dim
    support = set(target.terms)
    src = list(source.terms.items())
    for tau in itertools.permutations(range(n)):
        # P^* e^I is supported on tau(I) when P e_{tau(i)} = +- e_i
        if {tuple(sorted(tau[i] for i in idx)) for idx, _ in src} != support:
            continue
        perm = [0] * n
        for i, t in enumerate(tau):
            perm[t] = i
        for signs in itertools.product((1, -1), repeat=n):
            P = signed_permutation(perm, signs)
            pulled = pullback(P, source)
            if pulled == target:
                return P, 1
            if pulled == -target:
                return P, -1
    return None


def spin7_witness() -> dict:
    """Signed permutation relating spin7_form() to spin7_form_octonionic()."""
    found = find_signed_permutation(spin7_form(), spin7_form_octonionic())
    if found is None:
        return {"found": False}
    P, eps = found
    perm = [next(i for i in range(8) if P.rows[i][j]) for j in range(8)]
    signs = [int(P.rows[perm[j]][j]) for j in range(8)]
    return {"found": True, "perm": perm, "signs": signs, "overall_sign": eps, "det": int(P.det())}

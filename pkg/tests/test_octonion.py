from fractions import Fraction

import pytest
from hypothesis import assume, given

from conftest import octonions
from lcpspin.exterior import Form, OrthMap
from lcpspin.octonion import (
    Octonion,
    build_table,
    conj,
    default_table,
    is_associative_triple,
    left_mult_matrix,
    mul,
    quaternion_frame,
    right_mult_matrix,
)
from lcpspin.structures import g2_form

E = Octonion.basis


def test_table_examples():
    assert E(1) * E(1) == -E(0)
    assert E(1) * E(2) == E(7)
    assert E(2) * E(3) == -E(6)


def test_table_matches_form_coefficients():
    w = g2_form()
    for i in range(1, 8):
        for j in range(1, 8):
            prod = E(i) * E(j)
            assert prod.real == (-1 if i == j else 0)
            for k in range(1, 8):
                assert prod[k] == w.coefficient(i, j, k)


def test_build_table_rejects_non_g2_form():
    bad = Form.from_labels(7, 3, {(1, 2, 3): 1})
    with pytest.raises(ValueError):
        build_table(bad)
    with pytest.raises(ValueError):
        build_table(Form.from_labels(7, 2, {(1, 2): 1}))


def test_dump_lists_all_products():
    lines = default_table().dump()
    assert len(lines) == 64
    assert "e1*e2 = e7" in lines


def test_unit_and_nonassociativity():
    x = Octonion(tuple(Fraction(n) for n in range(8)))
    assert E(0) * x == x == x * E(0)
    assert (E(1) * E(2)) * E(3) != E(1) * (E(2) * E(3))
    assert not is_associative_triple(1, 2, 3)
    assert is_associative_triple(1, 2, 7)


def test_conj_examples():
    assert conj(E(0)) == E(0)
    assert conj(E(5)) == -E(5)


def test_scalar_and_json():
    x = Octonion.imaginary([1, 0, Fraction(1, 2), 0, 0, 0, 0])
    assert x.is_imaginary() and x.norm_sq() == Fraction(5, 4)
    assert Octonion.from_json(x.to_json()) == x
    assert x.to_json()[3] == "1/2"
    assert 2 * x == x + x
    with pytest.raises(ValueError):
        Octonion((1, 2, 3))


@given(octonions(), octonions())
def test_composition(x, y):
    assert (x * y).norm_sq() == x.norm_sq() * y.norm_sq()


@given(octonions(), octonions())
def test_alternative(x, y):
    assert (x * x) * y == x * (x * y)
    assert (y * x) * x == y * (x * x)


@given(octonions(), octonions())
def test_conj_antihomomorphism(x, y):
    assert conj(x * y) == conj(y) * conj(x)
    assert x * conj(x) == x.norm_sq() * E(0)


@given(octonions(), octonions(), octonions())
def test_right_multiplication_scales_inner_product(x, y, z):
    assert (x * z).inner(y * z) == z.norm_sq() * x.inner(y)


@given(octonions(), octonions(), octonions())
def test_anticommutation_identity(o, x, y):
    x = Octonion.imaginary(x.imag)
    y = Octonion.imaginary(y.imag)
    assume(x.norm_sq() != 0)
    y = y - (y.inner(x) / x.norm_sq()) * x
    assert (o * conj(y)) * x == -((o * conj(x)) * y)


def test_mul_function_matches_operator():
    assert mul(E(3), E(4)) == E(3) * E(4)


def test_right_mult_matrix():
    assert right_mult_matrix(E(0)) == OrthMap.identity(8)
    R = right_mult_matrix(E(1))
    assert R @ R == -OrthMap.identity(8)
    x = Octonion(tuple(Fraction(n, 3) for n in range(8)))
    assert R.apply(x.components) == (x * E(1)).components
    assert left_mult_matrix(E(1)).apply(x.components) == (E(1) * x).components


@given(octonions())
def test_unit_right_mult_is_orthogonal(x):
    x = Octonion.imaginary(x.imag)
    assume(x.norm_sq() != 0)
    R = right_mult_matrix(x)
    if x.norm_sq() == 1:
        assert R.is_orthogonal()
    # in general R_x^T R_x = |x|^2 I
    assert R.T @ R == OrthMap.identity(8) * x.norm_sq()


def test_rational_unit_right_mult_orthogonal():
    u = Octonion.imaginary([Fraction(3, 5), 0, Fraction(4, 5), 0, 0, 0, 0])
    R = right_mult_matrix(u)
    assert R.is_orthogonal() and R @ R == -OrthMap.identity(8)


def test_quaternion_frame_designation():
    qf = quaternion_frame()
    # (e1, e2, e3) is not associative under this table, so the first associative triple is used
    assert (qf.i, qf.j, qf.k) == (E(1), E(2), E(7))
    assert qf.i * qf.j == qf.k
    assert qf.l.is_imaginary() and qf.l.norm_sq() == 1
    assert all(qf.l.inner(v) == 0 for v in (qf.i, qf.j, qf.k))
    assert "e7" in qf.note

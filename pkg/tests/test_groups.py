import json
import random
from fractions import Fraction

import pytest

from lcpspin.exterior import Form, OrthMap
from lcpspin.groups import (
    FiniteGroup,
    FrameError,
    GroupError,
    NotFiniteError,
    basis_frame,
    classify,
    closure,
    conjugate,
    fixed_space,
    frame_group,
    has_fixed_point,
    is_free_on_sphere,
    subset_product_list,
    parse_frame,
    preserves_form,
    quaternion_pair_matrix,
    random_frame,
    random_orthogonal,
    random_signed_permutation,
    sp2_example_group,
)
from lcpspin.octonion import Octonion, quaternion_frame, right_mult_matrix
from lcpspin.structures import g2_form, spin7_form, spin7_form_octonionic

I8 = OrthMap.identity(8)
E = Octonion.basis


def test_closure_small():
    assert closure([I8]).order == 1
    assert closure([-I8]).order == 2
    G = closure([right_mult_matrix(E(1))])
    R = right_mult_matrix(E(1))
    assert G.order == 4
    assert set(G.elements) == {I8, -I8, R, -R}
    assert G.elements[0] == I8 and G.labels[0] == "I"


def test_closure_errors():
    with pytest.raises(GroupError):
        closure([])
    with pytest.raises(GroupError):
        closure([OrthMap.identity(2) * 2])
    with pytest.raises(GroupError):
        closure([OrthMap.identity(2), I8])
    # rotation by an irrational-order angle (3/5, 4/5) generates an infinite group
    rot = OrthMap(((Fraction(3, 5), Fraction(-4, 5)), (Fraction(4, 5), Fraction(3, 5))))
    with pytest.raises(NotFiniteError):
        closure([rot], cap=200)


def test_closure_idempotent():
    G = frame_group(basis_frame([1, 2, 3]))
    H = closure(G.elements)
    assert set(H.elements) == set(G.elements)
    assert G.is_closed()


def test_closure_deterministic():
    a = frame_group(basis_frame([1, 2, 3]))
    b = frame_group(basis_frame([1, 2, 3]))
    assert a.elements == b.elements and a.labels == b.labels


@pytest.mark.parametrize("m", range(1, 7))
def test_basis_frame_orders(m):
    G = frame_group(basis_frame(range(1, m + 1)))
    assert G.order == 2 ** (m + 1)


def test_full_frame_collapses_to_128():
    # R_e1 ... R_e7 = -I, so the seventh generator adds nothing new beyond sign
    frame = basis_frame(range(1, 8))
    prod = I8
    for x in frame:
        prod = prod @ right_mult_matrix(x)
    assert prod == -I8
    G = frame_group(frame, check_order=False)
    assert G.order == 128
    with pytest.raises(GroupError):
        frame_group(frame)


@pytest.mark.parametrize("m", [2, 4, 6])
def test_random_frame_orders(m):
    rng = random.Random(m)
    frame = random_frame(m, rng)
    assert any(x[k].denominator > 1 for x in frame for k in range(8))
    assert frame_group(frame).order == 2 ** (m + 1)


def test_frame_validation():
    with pytest.raises(FrameError):
        frame_group([])
    with pytest.raises(FrameError):
        frame_group([E(0)])
    with pytest.raises(FrameError):
        frame_group([E(1) + E(2)])
    with pytest.raises(FrameError):
        frame_group([E(1), E(1)])
    with pytest.raises(FrameError):
        parse_frame("e1,x2")
    with pytest.raises(FrameError):
        parse_frame("e0")
    assert parse_frame("e1, e2") == [E(1), E(2)]


def test_sigma4_list_matches_group():
    frame = basis_frame([1, 2, 3, 4])
    G = frame_group(frame)
    listed = subset_product_list(frame)
    assert G.order == 32
    assert len(set(listed)) == 32 and set(listed) == set(G.elements)


def test_freeness_examples():
    assert is_free_on_sphere(closure([-I8]))[0]
    assert is_free_on_sphere(closure([right_mult_matrix(E(1))]))[0]
    free, witnesses = is_free_on_sphere(frame_group(basis_frame([1, 2, 3, 4])))
    assert not free and witnesses
    G = frame_group(basis_frame([1, 2, 3, 4]))
    for label, basis in witnesses:
        g = G.elements[G.labels.index(label)]
        assert basis and all(g.apply(v) == tuple(v) for v in basis)


def test_small_frame_groups_free():
    # m <= 2: every non-identity element is +-R_x or +-R_x R_y, all without eigenvalue 1
    assert is_free_on_sphere(frame_group(basis_frame([1, 2])))[0]


def test_fixed_space_reflection():
    refl = OrthMap(tuple(tuple((-1 if i == j == 0 else int(i == j)) for j in range(8)) for i in range(8)))
    assert has_fixed_point(refl)
    assert len(fixed_space(refl)) == 7
    assert not has_fixed_point(-I8)


def test_freeness_conjugation_invariant():
    rng = random.Random(5)
    for frame in (basis_frame([1, 2]), basis_frame([1, 2, 3, 4])):
        G = frame_group(frame)
        verdict = is_free_on_sphere(G)[0]
        for _ in range(3):
            P = random_signed_permutation(8, rng)
            assert P.is_orthogonal()
            assert is_free_on_sphere(conjugate(G, P))[0] == verdict


def test_preserves_form_examples():
    assert preserves_form(I8, spin7_form())
    assert preserves_form(right_mult_matrix(E(1)), spin7_form_octonionic())
    assert not preserves_form(-OrthMap.identity(7), g2_form())
    with pytest.raises(ValueError):
        preserves_form(I8, g2_form())


def test_frame_groups_preserve_octonionic_form():
    phi = spin7_form_octonionic()
    rng = random.Random(1)
    for frame in (basis_frame([1, 2, 3, 4]), random_frame(3, rng)):
        assert all(preserves_form(g, phi) for g in frame_group(frame).elements)


def test_classify_examples():
    phi = spin7_form_octonionic()
    trivial = classify(closure([I8]), spin7_form())
    assert trivial.order == 1 and trivial.is_free_on_sphere and trivial.preserves_spin7
    rep = classify(frame_group(basis_frame([1, 2, 3, 4])), phi)
    assert rep.order == 32 and rep.preserves_spin7 and not rep.violating_elements
    assert rep.is_free_on_sphere == (not rep.fixed_point_witnesses)
    sp2 = classify(sp2_example_group(), phi)
    assert (sp2.order, sp2.is_free_on_sphere, sp2.preserves_spin7) == (8, True, True)
    assert "order" in rep.table()
    with pytest.raises(ValueError):
        classify(closure([OrthMap.identity(7)]), phi)


def test_classify_reports_violations():
    refl = OrthMap(tuple(tuple((-1 if i == j == 0 else int(i == j)) for j in range(8)) for i in range(8)))
    rep = classify(closure([refl]), spin7_form_octonionic())
    assert not rep.preserves_spin7 and rep.violating_elements == ["g0"]


def test_sp2_group_structure():
    G = sp2_example_group()
    qf = quaternion_frame()
    Ti = quaternion_pair_matrix(qf.i)
    assert G.order == 8
    assert Ti @ Ti == -I8
    assert any(a @ b != b @ a for a in G.elements for b in G.elements)
    for g in G.elements:
        if g in (I8, -I8):
            continue
        assert g @ g == -I8  # order 4
    assert quaternion_pair_matrix(E(0)) == I8


def test_quaternion_pair_matrix_acts_blockwise():
    qf = quaternion_frame()
    Tj = quaternion_pair_matrix(qf.j)
    # q = 1 sits in the first block: 1 -> 1 * j
    assert Tj.apply(E(0).components) == qf.j.components
    # q' = 1 is the octonion l: l -> (1 * j) l
    assert Tj.apply(qf.l.components) == (qf.j * qf.l).components


def test_group_json_roundtrip(tmp_path):
    G = frame_group(basis_frame([1, 2]))
    path = tmp_path / "g.json"
    path.write_text(json.dumps(G.to_json()))
    H = FiniteGroup.from_json(path.read_text())
    assert H.elements == G.elements and H.labels == G.labels and H.order == 8


def test_random_orthogonal_exact(rng):
    Q = random_orthogonal(7, rng)
    assert Q.is_orthogonal() and Q.det() == 1

import random

import numpy as np
import pytest

from sympal import grouptool as gt
from sympal.errors import CapExceeded, CharTwo, MixedAmbient
from sympal.ffield import ff_make
from sympal.symplectic import Mat, multiplier

F3, F5, F9, F25 = ff_make(3), ff_make(5), ff_make(3, 2), ff_make(5, 2)
U = [[1, 1], [0, 1]]
LOW = [[1, 0], [1, 1]]


def sl2_f3_in(F):
    return gt.closure([Mat.from_rows(F, U), Mat.from_rows(F, LOW)])


def test_closure_examples():
    assert len(gt.closure([Mat.identity(F3, 2)])) == 1
    assert len(sl2_f3_in(F3)) == 24
    with pytest.raises(CapExceeded):
        gt.closure(gt.sp_generators(F9, 2), cap=100)
    with pytest.raises(MixedAmbient):
        gt.closure([Mat.identity(F3, 2), Mat.identity(F5, 2)])


def test_closure_is_a_group():
    G = sl2_f3_in(F5)
    for A in G.elements():
        assert A.inv() in G
    T = G.tables()
    from sympal import matbatch as mb
    for B in G.arr[:5]:
        assert G.contains_stack(mb.matmul(T, G.arr, B)).all()


@pytest.mark.parametrize("m,p,k", [(1, 2, 1), (1, 3, 1), (1, 5, 1), (2, 3, 1), (1, 3, 2)])
def test_order_formula_matches_enumeration(m, p, k):
    F = ff_make(p, k)
    assert len(gt.sp_group(F, 2 * m)) == gt.sp_order(m, F.q)


def test_gsp_order_matches_enumeration():
    assert len(gt.gsp_group(F3, 2)) == gt.gsp_order(1, 3) == 48
    assert len(gt.gsp_group(F3, 4)) == gt.gsp_order(2, 3)
    assert len(gt.general_linear_2(F5)) == 480


def test_transvection_subgroup_examples():
    T = gt.transvection_subgroup(gt.closure([Mat.identity(F3, 2)]))
    assert len(T) == 1 and len(T.transvections) == 0
    G = sl2_f3_in(F3)
    T = gt.transvection_subgroup(G)
    assert T.same_set(G) and len(T.transvections) == 8
    T = gt.transvection_subgroup(gt.diagonal_torus(F5, 2))
    assert len(T) == 1


def test_huge_examples():
    r = gt.huge_test(gt.sp_group(F9, 2, 1))
    assert r.is_huge and r.d == 1 and r.conjugator == Mat.identity(F9, 2)
    G = gt.product_set(gt.sp_group(F9, 2, 1), gt.scalar_group(F9, 2))
    r = gt.huge_test(G)
    assert r.is_huge and r.d == 1
    r = gt.huge_test(gt.diagonal_torus(F5, 2))
    assert not r.is_huge and r.transvection_count == 0
    with pytest.raises(CharTwo):
        gt.huge_test(gt.sp_group(ff_make(2, 2), 2))


def test_huge_full_field():
    r = gt.huge_test(gt.sp_group(F9, 2))
    assert r.is_huge and r.d == 2
    assert "3:2" in r.caveat


def _random_gsp(F, n, rng, steps=30):
    gens = gt.gsp_generators(F, n)
    A = Mat.identity(F, n)
    for _ in range(steps):
        A = A * rng.choice(gens)
    return A


@pytest.mark.parametrize("F,n,d", [(F9, 2, 1), (F25, 2, 1), (F9, 4, 1), (F9, 2, 2)])
def test_huge_conjugated_copies(F, n, d, rng):
    S = gt.sp_group(F, n, d)
    for _ in range(3):
        A = _random_gsp(F, n, rng)
        G = gt.MatGroup(F, n, gt.conjugate_stack(F.tables(), S.arr, A.array))
        r = gt.huge_test(G)
        assert r.is_huge and r.d == d
        back = gt.MatGroup(F, n, gt.conjugate_stack(F.tables(), gt.transvection_subgroup(G).arr,
                                                    r.conjugator.array))
        assert back.same_set(S)


def test_normalizer_examples():
    GL = gt.general_linear_2(F9)
    assert gt.normalizer_in(GL, GL).same_set(GL)
    triv = gt.closure([Mat.identity(F9, 2)])
    assert gt.normalizer_in(triv, GL).same_set(GL)
    N = gt.normalizer_in(gt.sp_group(F9, 2, 1), GL)
    assert len(N) == 192


def test_normalizer_threads_agree():
    GL = gt.general_linear_2(F9)
    H = gt.sp_group(F9, 2, 1)
    a = gt.normalizer_in(H, GL, threads=1)
    b = gt.normalizer_in(H, GL, threads=3)
    assert np.array_equal(a.arr, b.arr)


@pytest.mark.parametrize("p", [3, 5])
def test_normalizer_is_gsp_times_scalars(p):
    F = ff_make(p, 2)
    N = gt.normalizer_in(gt.sp_group(F, 2, 1), gt.gsp_group(F, 2))
    prod = gt.product_set(gt.gsp_group(F, 2, 1), gt.scalar_group(F, 2))
    assert N.same_set(prod)


@pytest.mark.parametrize("p", [3, 5])
def test_centralizer_is_scalars(p):
    F = ff_make(p, 2)
    C = gt.centralizer_in(gt.sp_group(F, 2, 1), gt.gsp_group(F, 2))
    assert C.same_set(gt.scalar_group(F, 2))


def test_centralizer_examples():
    GL5 = gt.general_linear_2(F5)
    triv = gt.closure([Mat.identity(F5, 2)])
    assert gt.centralizer_in(triv, GL5).same_set(GL5)
    torus = gt.diagonal_torus(F5, 2)
    assert gt.centralizer_in(torus, GL5).same_set(torus)
    assert len(gt.centralizer_in(gt.sp_group(F9, 2, 1), gt.general_linear_2(F9))) == 8


def test_classification_examples():
    c = gt.classify_projective_image(gt.general_linear_2(F9, 1))
    assert (c.label, c.image_order) == ("PGSp(1)", 24)
    G = gt.product_set(gt.sp_group(F9, 2, 1), gt.scalar_group(F9, 2))
    c = gt.classify_projective_image(G)
    assert (c.label, c.image_order) == ("PSp(1)", 12)
    assert gt.classify_projective_image(gt.diagonal_torus(F5, 2)).label == "Other"


def _enumerated_projective_order(G):
    """|G| divided by the number of scalar matrices in G."""
    scalars = sum(1 for A in G.elements() if A == Mat.identity(G.field, G.n).scale(A.entries[0]))
    return len(G) // scalars


@pytest.mark.parametrize("F,n", [(F3, 2), (F5, 2), (F3, 4), (F9, 2)])
def test_classification_orders_match_enumeration(F, n):
    for G in (gt.sp_group(F, n), gt.gsp_group(F, n)):
        c = gt.classify_projective_image(G)
        assert c.kind in ("PSp", "PGSp")
        assert c.image_order == _enumerated_projective_order(G)
    assert gt.classify_projective_image(gt.sp_group(F, n)).kind == "PSp"
    assert gt.classify_projective_image(gt.gsp_group(F, n)).kind == "PGSp"


def test_groups_containing_sl2_f3_lie_in_gl2_f3_times_scalars():
    """500 random generator sets over F_9 plus deterministic witnesses."""
    SL = gt.sp_group(F9, 2, 1)
    N = gt.product_set(gt.general_linear_2(F9, 1), gt.scalar_group(F9, 2))
    GL = gt.general_linear_2(F9)
    base = [Mat.from_rows(F9, U), Mat.from_rows(F9, LOW)]
    witnesses = [[], [Mat.scalar(F9, 2, F9.elem(3))], [Mat.from_rows(F9, [[1, 0], [0, 2]])],
                 [Mat.from_rows(F9, [[1, 0], [0, 2]]), Mat.scalar(F9, 2, F9.elem(4))]]
    rng = random.Random(51)
    n_el, gl_el = N.elements(), GL.elements()
    samples = witnesses + [
        [rng.choice(n_el) if rng.random() < 0.7 else rng.choice(gl_el) for _ in range(rng.randint(1, 2))]
        for _ in range(500)
    ]
    hits = 0
    normalizing = set()
    for extra in samples:
        G = gt.closure(base + extra)
        if gt.transvection_subgroup(G).same_set(SL):
            hits += 1
            assert G.issubset(N)
            # every element normalizes SL_2(F_3), checked once per distinct element
            for A in G.elements():
                if A not in normalizing:
                    conj = gt.conjugate_stack(F9.tables(), SL.arr, A.array)
                    assert SL.contains_stack(conj).all()
                    normalizing.add(A)
    assert hits >= len(witnesses)


def test_huge_report_json():
    r = gt.huge_test(gt.sp_group(F9, 2, 1)).to_json()
    assert r["is_huge"] is True and r["d"] == 1
    assert r["conjugator"]["rows"] == [["1,0", "0,0"], ["0,0", "1,0"]]


def test_generators_lie_in_gsp():
    for F, n in ((F5, 4), (F9, 2)):
        for g in gt.gsp_generators(F, n):
            multiplier(g)

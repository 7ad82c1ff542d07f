import itertools

import pytest
from hypothesis import given, strategies as st

from sympal.errors import (
    Degenerate,
    NotAlternating,
    NotGSp,
    Singular,
    ZeroDirection,
    ZeroMatrix,
    ZeroParameter,
)
from sympal.ffield import ff_make
from sympal.grouptool import gsp_generators, sp_group
from sympal.symplectic import (
    Mat,
    Transvection,
    canonical_transvection,
    detect_transvection,
    multiplier,
    proj_canonical,
    std_form,
    symplectic_basis,
    transvection_matrix,
)

F3, F5 = ff_make(3), ff_make(5)


def random_gsp(F, n, rng, steps=25):
    gens = gsp_generators(F, n)
    A = Mat.identity(F, n)
    for _ in range(steps):
        A = A * rng.choice(gens)
    return A


def random_vec(F, n, rng):
    while True:
        v = tuple(rng.randrange(F.q) for _ in range(n))
        if any(v):
            return v


def test_standard_form_shape():
    for n in (2, 4, 6):
        J = std_form(F5, n)
        assert J.T == -J
        assert J * J == -Mat.identity(F5, n)
        assert J.det().value == 1


def test_multiplier_examples():
    assert multiplier(Mat.identity(F5, 4)).value == 1
    for c in range(1, 5):
        assert multiplier(Mat.scalar(F5, 4, c)).value == (c * c) % 5
    assert multiplier(Mat.from_rows(F3, [[1, 0], [0, 2]])).value == 2


def test_multiplier_errors():
    with pytest.raises(Singular):
        multiplier(Mat.from_rows(F3, [[1, 1], [1, 1]]))
    A = Mat.from_rows(F5, [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(NotGSp):
        multiplier(A)


def test_multiplier_is_multiplicative(rng):
    for F, n in ((F3, 4), (F5, 2), (F5, 4)):
        for _ in range(20):
            A, B = random_gsp(F, n, rng), random_gsp(F, n, rng)
            assert multiplier(A * B) == multiplier(A) * multiplier(B)


def test_transvection_example():
    T = transvection_matrix(Transvection(F3, (0, 1), 1))
    assert T == Mat.from_rows(F3, [[1, 0], [1, 1]])
    assert detect_transvection(T) == Transvection(F3, (0, 1), 1)


def test_transvection_errors():
    with pytest.raises(ZeroParameter):
        transvection_matrix(Transvection(F3, (0, 1), 0))
    with pytest.raises(ZeroDirection):
        transvection_matrix(Transvection(F3, (0, 0), 1))


@given(st.data())
def test_transvection_additivity_and_round_trip(data):
    F = data.draw(st.sampled_from([F3, F5, ff_make(3, 2)]))
    n = data.draw(st.sampled_from([2, 4]))
    v = data.draw(st.tuples(*[st.integers(0, F.q - 1)] * n).filter(any))
    lam = data.draw(st.integers(1, F.q - 1))
    mu = data.draw(st.integers(1, F.q - 1))
    Tl = transvection_matrix(Transvection(F, v, lam))
    Tm = transvection_matrix(Transvection(F, v, mu))
    s = F.add(lam, mu)
    if s:
        assert Tl * Tm == transvection_matrix(Transvection(F, v, s))
    else:
        assert Tl * Tm == Mat.identity(F, n)
    assert Tl.det().value == 1 and multiplier(Tl).value == 1
    assert (Tl - Mat.identity(F, n)).rank() == 1
    assert detect_transvection(Tl) == canonical_transvection(F, v, lam)


def test_detect_rejects_non_transvections():
    assert detect_transvection(Mat.identity(F3, 2)) is None
    S = sp_group(F5, 2, 1)
    for A in S.elements():
        if (A - Mat.identity(F5, 2)).rank() == 2:
            assert detect_transvection(A) is None
    # rank one but not of transvection form
    assert detect_transvection(Mat.from_rows(F5, [[2, 0], [0, 1]])) is None


@pytest.mark.parametrize("F,n", [(F3, 2), (F5, 2), (F3, 4), (F5, 4)])
def test_conjugation_covariance(F, n, rng):
    for _ in range(100 // 4):
        A = random_gsp(F, n, rng)
        v = random_vec(F, n, rng)
        lam = rng.randrange(1, F.q)
        m = multiplier(A).value
        lhs = A * transvection_matrix(Transvection(F, v, lam)) * A.inv()
        Av = tuple(A.apply_vec(list(v)))
        rhs = transvection_matrix(Transvection(F, Av, F.mul(lam, F.inv(m))))
        assert lhs == rhs


def test_symplectic_basis_examples():
    J = std_form(F5, 2)
    N = symplectic_basis(J)
    assert N.T * J * N == J
    I = Mat.from_rows(F5, [[0, 2], [-2, 0]])
    assert symplectic_basis(I) == Mat.from_rows(F5, [[1, 0], [0, 3]])
    with pytest.raises(Degenerate):
        symplectic_basis(Mat.from_rows(F5, [[0, 0], [0, 0]]))
    with pytest.raises(NotAlternating):
        symplectic_basis(Mat.from_rows(F5, [[1, 2], [-2, 0]]))


@pytest.mark.parametrize("F", [F3, F5])
def test_symplectic_basis_exhaustive_n2(F):
    J = std_form(F, 2)
    for a in range(1, F.p):
        I = Mat.from_rows(F, [[0, a], [-a, 0]])
        N = symplectic_basis(I)
        assert N.T * I * N == J


def test_symplectic_basis_random_n4(rng):
    for F in (F3, F5):
        J = std_form(F, 4)
        done = 0
        while done < 30:
            B = Mat(F, 4, [rng.randrange(F.q) for _ in range(16)])
            if not B.det().value:
                continue
            I = B.T * J * B
            N = symplectic_basis(I)
            assert N.T * I * N == J
            done += 1


def test_proj_canonical():
    assert proj_canonical(Mat.identity(F3, 2)) == Mat.identity(F3, 2)
    assert proj_canonical(Mat.scalar(F3, 2, 2)) == Mat.identity(F3, 2)
    with pytest.raises(ZeroMatrix):
        proj_canonical(Mat.from_rows(F3, [[0, 0], [0, 0]]))


def test_proj_canonical_scale_invariance(rng):
    for _ in range(50):
        A = Mat(F5, 2, [rng.randrange(5) for _ in range(4)])
        if A.is_zero():
            continue
        assert proj_canonical(A) == proj_canonical(A * 4)
        L = ff_make(5, 2)
        B = Mat(L, 2, [rng.randrange(25) for _ in range(4)])
        if not B.is_zero():
            c = rng.randrange(1, 25)
            assert proj_canonical(B) == proj_canonical(B.scale(c))


def test_json_round_trip():
    L = ff_make(3, 2)
    A = Mat.from_rows(L, [["1,2", "0"], ["2", "0,1"]])
    obj = A.to_json()
    assert obj["form"].startswith("J=")
    assert Mat.from_json(obj) == A


def test_count_of_transvections_in_sp2():
    # Sp_2(F_q) has q^2 - 1 nontrivial transvections
    for F in (F3, F5):
        count = sum(detect_transvection(A) is not None for A in sp_group(F, 2, 1).elements())
        assert count == F.q**2 - 1


def test_canonical_transvection_rescaling():
    for c, lam in itertools.product(range(1, 5), range(1, 5)):
        t = canonical_transvection(F5, (0, c), lam)
        assert t.v == (0, 1)
        assert transvection_matrix(t) == transvection_matrix(Transvection(F5, (0, c), lam))

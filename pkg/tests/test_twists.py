import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympal import fixtures, grouptool
from sympal.errors import (
    CapExceeded,
    MissingFactorization,
    NotIrreducible,
    NotIrreducibleOnI,
    NormObstruction,
    TracesNotInSubfield,
)
from sympal.ffield import ff_make
from sympal.grouptool import gsp_generators
from sympal.symplectic import Mat, is_gsp, multiplier, proj_canonical
from sympal.twists import (
    Character,
    FiniteGroup,
    GroupRep,
    character_count_oracle,
    charpoly_twist_check,
    descend_projective,
    descend_to_subfield,
    enumerate_characters,
    epsilon_order_check,
    hilbert90,
    inner_twist_stabilizer,
    is_absolutely_irreducible,
    kernel_character_check,
    self_twist_vanishing_check,
    trace_field_degree,
    twist_is_isomorphism,
    _in_subfield,
)

F25 = ff_make(5, 2)


@pytest.fixture(scope="module")
def rho_star():
    return fixtures.rho_star()


@pytest.fixture(scope="module")
def rho_star_an(rho_star):
    return inner_twist_stabilizer(rho_star)


@pytest.fixture(scope="module")
def sym3():
    return fixtures.sym3_sl2(5, 2)


def random_gl(F, n, rng):
    while True:
        M = Mat(F, n, [rng.randrange(F.q) for _ in range(n * n)])
        if M.det().value:
            return M


def random_gsp(F, n, rng, steps=20):
    gens = gsp_generators(F, n)
    A = Mat.identity(F, n)
    for _ in range(steps):
        A = A * rng.choice(gens)
    return A


def twist_summary(an):
    return sorted((t.power, t.epsilon.order()) for t in an.stabilizer)


# groups and characters -----------------------------------------------------------

def test_cyclic_and_product_groups():
    C3 = FiniteGroup.cyclic(3)
    P = FiniteGroup.direct_product(C3, FiniteGroup.cyclic(2, name="z"))
    assert len(P) == 6
    assert sorted(P.element_order(g) for g in range(6)) == [1, 2, 3, 3, 6, 6]


def test_group_json_round_trip(rho_star):
    G = rho_star.group
    H = FiniteGroup.from_json(G.to_json())
    assert H.labels == G.labels
    assert (H.table == G.table).all()


def test_rep_json_round_trip(rho_star, sym3):
    for rep in (rho_star, sym3):
        back = GroupRep.from_json(rep.to_json())
        assert (back.arr == rep.arr).all()
        assert back.symplectic == rep.symplectic and back.d == rep.d


def test_rep_rejects_non_homomorphism(rho_star):
    arr = rho_star.arr.copy()
    arr[1] = arr[2]
    with pytest.raises(ValueError):
        GroupRep(rho_star.group, arr, rho_star.L, 1)


def test_characters_of_rho_star_match_count_oracle(rho_star):
    chars = enumerate_characters(rho_star)
    # SL_2(F_3)^ab = C_3 and the C_3 factor: 9 characters into F_25^x
    assert len(chars) == 9 == character_count_oracle(rho_star.group, F25)
    assert len({c.values for c in chars}) == 9


def test_perfect_group_has_only_trivial_character():
    rep = fixtures.sl2_natural(5, 1)
    chars = enumerate_characters(rep)
    assert len(chars) == 1 and chars[0].is_trivial()


@pytest.mark.parametrize("m, q", [(2, 5), (4, 5), (3, 25), (6, 7), (5, 11)])
def test_cyclic_group_character_count(m, q):
    p, k = {5: (5, 1), 25: (5, 2), 7: (7, 1), 11: (11, 1)}[q]
    L = ff_make(p, k)
    C = FiniteGroup.cyclic(m)
    chars = enumerate_characters(C, L)
    assert len(chars) == character_count_oracle(C, L) == np.gcd(m, q - 1)


def test_characters_are_homomorphisms(rho_star):
    G = rho_star.group
    T = F25.tables()
    for ch in enumerate_characters(rho_star):
        v = np.asarray(ch.values)
        assert (v[G.table] == T.mul[v[:, None], v[None, :]]).all()


def test_absolute_irreducibility():
    assert is_absolutely_irreducible(fixtures.sigma())
    assert is_absolutely_irreducible(fixtures.s3_standard())
    # a sum of two characters of C_4 is reducible
    C4 = FiniteGroup.cyclic(4)
    chars = enumerate_characters(C4, F25)
    a, b = chars[1].values, chars[2].values
    arr = [[[a[g], 0], [0, b[g]]] for g in range(4)]
    assert not is_absolutely_irreducible(GroupRep(C4, arr, F25))


def test_reducible_rep_is_rejected_by_stabilizer():
    C4 = FiniteGroup.cyclic(4)
    chars = enumerate_characters(C4, F25)
    arr = [[[chars[1].values[g], 0], [0, 1]] for g in range(4)]
    with pytest.raises(NotIrreducible):
        inner_twist_stabilizer(GroupRep(C4, arr, F25))


# stabilizer examples ----------------------------------------------------------------

def test_rho_star_analysis(rho_star, rho_star_an):
    an = rho_star_an
    assert len(an.stabilizer) == 2
    assert an.gamma_group == [0, 1] and an.delta_group == [0]
    assert an.K_degree == 1 and an.E_degree == 2 and not an.has_cm
    assert twist_summary(an) == [(0, 1), (1, 3)]


def test_sigma_over_f25_has_galois_self_twist():
    an = inner_twist_stabilizer(fixtures.sigma())
    assert twist_summary(an) == [(0, 1), (1, 1)]
    assert an.K_degree == an.E_degree == 1


def test_s3_standard_has_cm():
    an = inner_twist_stabilizer(fixtures.s3_standard())
    assert an.has_cm
    assert len(an.eps_group) == 2 and {e.order() for e in an.eps_group} == {1, 2}
    # H is the kernel of the sign character: A_3
    assert len(an.H_subgroup) == 3


def test_sym3_fixture_is_symplectic(sym3):
    assert sym3.symplectic and len(sym3.group) == 120
    assert all(is_gsp(m) for m in sym3.images())
    assert set(sym3.multipliers().tolist()) == {1}
    assert is_absolutely_irreducible(sym3)


def test_stabilizer_closed_under_product_and_inverse(rho_star, rho_star_an):
    keys = {t.key() for t in rho_star_an.stabilizer}
    for s, t in itertools.product(rho_star_an.stabilizer, repeat=2):
        assert (s * t).key() in keys
        assert s.inverse().key() in keys
        assert (s * s.inverse()).key() == (0, tuple([1] * len(rho_star.group)))


@pytest.mark.parametrize("name", ["rho_star", "sigma", "s3_standard", "rho_star_with_kernel"])
def test_stabilizer_equals_isomorphism_classes(name):
    rep = getattr(fixtures, name)()
    an = inner_twist_stabilizer(rep)
    keys = {t.key() for t in an.stabilizer}
    chars = enumerate_characters(rep)
    from sympal.ffield import GaloisAuto
    from sympal.twists import InnerTwist

    for power in range(rep.L.k):
        for ch in chars:
            tw = InnerTwist(GaloisAuto(rep.L, power), ch)
            assert twist_is_isomorphism(rep, tw) == (tw.key() in keys)


def test_charpoly_identity_and_negative_control(rho_star, rho_star_an):
    for t in rho_star_an.stabilizer:
        assert charpoly_twist_check(rho_star, t)
    t = next(t for t in rho_star_an.stabilizer if t.power == 1)
    bad = type(t)(t.gamma, t.epsilon * t.epsilon)
    assert not charpoly_twist_check(rho_star, bad)


def test_self_twist_vanishing_for_cm():
    rep = fixtures.s3_standard()
    an = inner_twist_stabilizer(rep)
    for e in an.eps_group:
        assert self_twist_vanishing_check(rep, e)
    # the sign character does not kill the trace of the identity
    assert not self_twist_vanishing_check(fixtures.sigma(), enumerate_characters(fixtures.sigma())[1])


def test_schur_centralizer_is_scalars():
    G = grouptool.closure(fixtures.sigma().images())
    C = grouptool.centralizer_in(G, grouptool.general_linear_2(F25))
    assert C.same_set(grouptool.scalar_group(F25, 2))


def test_e_degree_equals_trace_field_degree():
    for rep in (fixtures.rho_star(), fixtures.sigma(), fixtures.s3_standard(),
                fixtures.sl2_natural(3, 2, 1), fixtures.sym3_sl2(5, 2)):
        assert inner_twist_stabilizer(rep).E_degree == trace_field_degree(rep)


def test_k_is_minimal_for_natural_sl2_over_f9():
    rep = fixtures.sl2_natural(3, 2, 1)
    an = inner_twist_stabilizer(rep)
    # traces generate F_9, and no nontrivial Frobenius is an inner twist
    assert an.gamma_group == [0] and an.K_degree == 2 == an.E_degree


# epsilon orders and kernels ---------------------------------------------------------

def test_epsilon_order_check_basic(rho_star, rho_star_an):
    assert epsilon_order_check(rho_star, rho_star_an)
    an = inner_twist_stabilizer(fixtures.s3_standard())
    assert epsilon_order_check(fixtures.s3_standard(), an)


def test_symplectic_clause_needs_psi(rho_star, rho_star_an):
    with pytest.raises(MissingFactorization):
        epsilon_order_check(rho_star, rho_star_an, symplectic_clause=True)


def test_symplectic_clause_values(rho_star, rho_star_an, sym3):
    G = rho_star.group
    trivial = Character.trivial(G, F25)
    # the order-3 twist takes values outside F_5
    assert not epsilon_order_check(rho_star, rho_star_an, psi=trivial, symplectic_clause=True)
    mu = next(t.epsilon for t in rho_star_an.stabilizer if t.power == 1)
    assert epsilon_order_check(rho_star, rho_star_an, psi=mu, symplectic_clause=True)
    an = inner_twist_stabilizer(sym3)
    psi = Character.trivial(sym3.group, sym3.L)
    assert epsilon_order_check(sym3, an, psi=psi, symplectic_clause=True)


def test_self_twist_orders_divide_n_on_random_groups():
    rng = random.Random(7)
    checked = 0
    for F in (ff_make(5), ff_make(3, 2), ff_make(7)):
        for _ in range(8):
            gens = [random_gl(F, 2, rng) for _ in range(2)]
            try:
                G = grouptool.closure(gens, cap=800)
            except CapExceeded:
                continue
            rep = GroupRep.from_matgroup(G)
            if not is_absolutely_irreducible(rep):
                continue
            an = inner_twist_stabilizer(rep)
            assert all(2 % e.order() == 0 for e in an.eps_group)
            assert epsilon_order_check(rep, an)
            checked += 1
    assert checked >= 5


def test_kernel_character_check(rho_star, rho_star_an):
    assert kernel_character_check(rho_star, rho_star_an)
    rep = fixtures.rho_star_with_kernel()
    an = inner_twist_stabilizer(rep)
    assert len(rep.kernel()) == 2
    assert kernel_character_check(rep, an)
    # a character nontrivial on the kernel breaks it
    z = enumerate_characters(rep)
    bad = next(c for c in z if any(c.values[g] != 1 for g in rep.kernel()))
    t = an.stabilizer[0]
    an.stabilizer.append(type(t)(t.gamma, bad))
    try:
        assert not kernel_character_check(rep, an)
    finally:
        an.stabilizer.pop()


# descent ---------------------------------------------------------------------------

def test_descent_identity_when_already_defined():
    rep = fixtures.sigma()
    out, M = descend_to_subfield(rep, 1)
    assert M == Mat.identity(F25, 2)
    assert out is rep


@pytest.mark.parametrize("seed", range(4))
def test_descent_of_conjugated_sigma(seed):
    rng = random.Random(seed)
    rep = fixtures.sigma().conjugate(random_gl(F25, 2, rng))
    assert not _in_subfield(F25, rep.arr, 1)
    out, M = descend_to_subfield(rep, 1, seed=seed)
    assert _in_subfield(F25, out.arr, 1)
    assert (rep.conjugate(M).arr == out.arr).all()


def test_descent_needs_traces_in_subfield(rho_star):
    with pytest.raises(TracesNotInSubfield):
        descend_to_subfield(rho_star, 1)


@pytest.mark.parametrize("seed", range(3))
def test_symplectic_descent(sym3, seed):
    rng = random.Random(seed)
    rep = sym3.conjugate(random_gsp(F25, 4, rng))
    out, M = descend_to_subfield(rep, 1, seed=seed)
    assert _in_subfield(F25, out.arr, 1)
    assert all(is_gsp(m) for m in out.images())
    assert is_gsp(M)


@pytest.mark.parametrize("seed", range(4))
def test_projective_descent_of_rho_star(rho_star, rho_star_an, seed):
    rng = random.Random(100 + seed)
    rep = rho_star.conjugate(random_gl(F25, 2, rng)) if seed else rho_star
    pd = descend_projective(rep, seed=seed)
    P = np.array([m.array for m in pd.images])
    assert pd.K_degree == 1 and _in_subfield(F25, P, 1)
    # projectively conjugate to the input
    T = F25.tables()
    from sympal import matbatch as mb

    assert (mb.proj_canonical(T, rep.conjugate(pd.conjugator).arr) == P).all()
    # a projective homomorphism: P(g) P(h) ~ P(gh)
    G = rep.group
    for g, h in itertools.product(range(0, len(G), 7), repeat=2):
        prod = pd.images[g] * pd.images[h]
        assert proj_canonical(prod) == pd.images[G.mul(g, h)]


def test_projective_descent_is_trivial_over_k():
    rep = fixtures.sl2_natural(3, 2, 1)
    pd = descend_projective(rep)
    assert pd.K_degree == 2
    assert [m for m in pd.images] == [proj_canonical(m) for m in rep.images()]


def test_projective_descent_needs_irreducible_restriction():
    with pytest.raises(NotIrreducibleOnI):
        descend_projective(fixtures.s3_standard())


# Hilbert 90 ---------------------------------------------------------------------------

@given(st.integers(1, F25.q - 1))
def test_hilbert90_solution(x):
    # c = x / phi(x) always has norm 1
    c = F25.div(x, F25.frob(x, 1))
    a = hilbert90(F25, 1, c)
    assert a and F25.div(a, F25.frob(a, 1)) == c


def test_hilbert90_rejects_norm_not_one():
    c = next(x for x in range(1, F25.q) if F25.mul(x, F25.frob(x, 1)) != 1)
    with pytest.raises(NormObstruction):
        hilbert90(F25, 1, c)


# symplectic conjugation ------------------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(0, 10**6), st.booleans())
def test_conjugate_stays_symplectic_iff_gsp(sym3, seed, use_gsp):
    rng = random.Random(seed)
    M = random_gsp(F25, 4, rng) if use_gsp else random_gl(F25, 4, rng)
    conj = sym3.conjugate(M)
    gens = [conj.image(g) for g in sym3.group.generators]
    assert all(is_gsp(m) for m in gens) == is_gsp(M)


def test_gsp_conjugation_preserves_multipliers(sym3):
    rng = random.Random(3)
    M = random_gsp(F25, 4, rng)
    conj = sym3.conjugate(M)
    assert [multiplier(m).value for m in conj.images()[:10]] == [1] * 10

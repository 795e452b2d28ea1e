import numpy as np
import pytest

from helper.errors import BoundExceededError, DomainError
from helper.field_tower import (build_tower, field_ints, gamma_solutions, hermitian_conjugate,
                                primitive_mth_root, smallest_irreducible, solve_gamma, split_prime_power)


@pytest.mark.parametrize("q, expected", [(2, (2, 1)), (4, (2, 2)), (9, (3, 2)), (8, (2, 3)), (25, (5, 2))])
def test_split_prime_power(q, expected):
    assert split_prime_power(q) == expected


@pytest.mark.parametrize("q", [1, 6, 12, 0, -4])
def test_split_prime_power_rejects(q):
    with pytest.raises(DomainError):
        split_prime_power(q)


def test_smallest_irreducible_is_lexicographically_first():
    assert int(smallest_irreducible(2, 2)) == 7  # x^2 + x + 1
    assert int(smallest_irreducible(2, 4)) == 19  # x^4 + x + 1
    assert smallest_irreducible(3, 2).is_irreducible()


def test_tower_q4_m9(tower_4_9):
    assert (tower_4_9.p, tower_4_9.t, tower_4_9.lam) == (2, 2, 1)
    assert tower_4_9.F.order == 16
    assert tower_4_9.s == 3
    assert tower_4_9.K.order == 4096


def test_tower_q2_m7():
    tower = build_tower(2, 7)
    assert tower.F.order == 4
    assert tower.s == 3
    assert tower.K.order == 64


def test_trivial_exponent_keeps_k_equal_to_f():
    tower = build_tower(3, 1)
    assert tower.s == 1
    assert tower.K is tower.F


def test_tower_rejects_shared_factor():
    with pytest.raises(DomainError):
        build_tower(3, 9)


def test_tower_field_guard():
    # ord_47(4) = 23, so K would have 2^46 elements
    with pytest.raises(BoundExceededError):
        build_tower(2, 47)


def test_embed_is_ring_homomorphism(tower_4_9, rng):
    F = tower_4_9.F
    a = F.Random(200, seed=rng)
    b = F.Random(200, seed=rng)
    embed = tower_4_9.embed
    assert np.array_equal(embed(a + b), embed(a) + embed(b))
    assert np.array_equal(embed(a * b), embed(a) * embed(b))
    assert int(embed(F(1))) == 1
    assert np.all(tower_4_9.in_subfield(embed(a)))
    assert np.array_equal(tower_4_9.restrict(embed(a)), a)


def test_restrict_rejects_elements_outside_f():
    tower = build_tower(2, 7)
    zeta = primitive_mth_root(tower)
    assert not tower.in_subfield(zeta)
    with pytest.raises(DomainError):
        tower.restrict(zeta)


def test_decompose_reconstructs(tower_4_9, rng):
    K = tower_4_9.K
    values = K.Random(50, seed=rng)
    coords = tower_4_9.decompose(values)
    assert coords.shape == (50, tower_4_9.s)
    alpha = K(tower_4_9.p)
    rebuilt = K.Zeros(50)
    for j in range(tower_4_9.s):
        rebuilt += tower_4_9.embed(coords[:, j]) * alpha ** j
    assert np.array_equal(rebuilt, values)


def test_hermitian_conjugate_is_an_involution(tower_4_9):
    elements = tower_4_9.F.elements
    once = hermitian_conjugate(elements, tower_4_9)
    assert np.array_equal(once, elements ** 4)
    assert np.array_equal(hermitian_conjugate(once, tower_4_9), elements)


@pytest.mark.parametrize("q, m", [(2, 7), (4, 9), (2, 15), (3, 5), (4, 1)])
def test_primitive_root_has_exact_order(q, m):
    tower = build_tower(q, m)
    zeta = primitive_mth_root(tower)
    assert zeta ** m == 1
    for r in range(1, m):
        if m % r == 0:
            assert zeta ** r != 1
    assert primitive_mth_root(tower) == zeta


# m is the exponent of a group of order n; Z3xZ9 has exponent 9
@pytest.mark.parametrize("q, n, m", [(2, 7, 7), (4, 27, 9), (4, 27, 1), (3, 5, 5), (4, 15, 15), (2, 1, 1), (9, 7, 7)])
def test_gamma_solutions(q, n, m):
    tower = build_tower(q, m)
    solutions = gamma_solutions(n, tower)
    assert solutions.size == q + 1
    assert np.all(tower.inverse_of_n(n) + solutions ** (q + 1) == 0)
    assert list(field_ints(solutions)) == sorted(field_ints(solutions))
    assert solve_gamma(n, tower) == solutions[0]


def test_gamma_for_the_order_27_example(tower_4_9):
    assert int(solve_gamma(27, tower_4_9)) == 1


def test_gamma_rejects_even_n():
    with pytest.raises(DomainError):
        gamma_solutions(4, build_tower(3, 4))


def test_subfield_test_matches_embedding_image(tower_4_9, rng):
    K, F = tower_4_9.K, tower_4_9.F
    image = set(field_ints(tower_4_9.embed(F.elements)).tolist())
    samples = np.concatenate([field_ints(K.Random(1000, seed=rng)),
                              field_ints(tower_4_9.embed(F.Random(1000, seed=rng)))])
    verdicts = tower_4_9.in_subfield(K(samples))
    assert verdicts.tolist() == [int(v) in image for v in samples]
    assert verdicts[1000:].all()
    assert len(image) == F.order


def test_frobenius_is_a_field_automorphism(tower_4_9, rng):
    F = tower_4_9.F
    a, b = F.Random(500, seed=rng), F.Random(500, seed=rng)
    conj = lambda v: hermitian_conjugate(v, tower_4_9)
    assert np.array_equal(conj(a + b), conj(a) + conj(b))
    assert np.array_equal(conj(a * b), conj(a) * conj(b))

    K = tower_4_9.K
    x, y = K.Random(500, seed=rng), K.Random(500, seed=rng)
    p = tower_4_9.p
    assert np.array_equal((x + y) ** p, x ** p + y ** p)
    assert np.array_equal((x * y) ** p, x ** p * y ** p)


def test_conjugate_of_omega_in_f4():
    tower = build_tower(2, 1)
    omega = tower.F(2)
    assert omega ** 3 == 1 and omega != 1
    assert hermitian_conjugate(omega, tower) == omega ** 2
    assert int(hermitian_conjugate(omega, tower)) == 3

import random
from fractions import Fraction

import pytest

from siegelkit import exact
from siegelkit.symplectic import (
    CongruenceLevel,
    SymplecticForm,
    SymplecticMatrix,
    congruence_membership,
    gl_embedding,
    is_symplectic,
    j_matrix,
    pairing,
    random_congruence_element,
    random_symplectic,
    translation,
)


def basis_vector(i, n):
    return [1 if j == i else 0 for j in range(n)]


def test_pairing_on_symplectic_basis():
    form = SymplecticForm(2)
    e = lambda i: basis_vector(i, 4)
    assert form.pairing(e(0), e(2)) == -1          # psi(e_1, e_{g+1}) = -1
    assert form.pairing(e(1), e(3)) == -1
    assert form.pairing(e(0), e(1)) == 0           # |j - i| != g
    assert form.pairing(e(2), e(0)) == 1


def test_pairing_antisymmetric_on_random_vectors():
    rng = random.Random(1)
    for _ in range(20):
        u = [rng.randint(-5, 5) for _ in range(6)]
        v = [rng.randint(-5, 5) for _ in range(6)]
        assert pairing(u, u) == 0
        assert pairing(u, v) == -pairing(v, u)


def test_pairing_dimension_mismatch():
    with pytest.raises(ValueError):
        pairing([1, 0], [1, 0, 0, 0])
    with pytest.raises(ValueError):
        pairing([1, 0, 0], [1, 0, 0])


def test_is_symplectic_examples():
    assert is_symplectic(exact.identity(4))
    assert is_symplectic(SymplecticForm(2).matrix)
    corrupted = [list(row) for row in exact.identity(4)]
    corrupted[2][1] = Fraction(1)                  # C block entry (g+1, 2)
    assert not is_symplectic(corrupted)
    with pytest.raises(ValueError):
        is_symplectic(exact.identity(3))


def test_constructor_rejects_non_symplectic():
    bad = [list(row) for row in exact.identity(4)]
    bad[0][1] = Fraction(1)
    with pytest.raises(ValueError):
        SymplecticMatrix(2, bad)


def test_congruence_membership():
    ident = SymplecticMatrix(2, exact.identity(4))
    for n in (1, 2, 3, 5, 12):
        assert congruence_membership(ident, n)
    n = 3
    b = ((2, 1), (1, -1))
    t = translation(exact.scalar_mul(n, b))
    assert congruence_membership(t, n)
    assert not congruence_membership(j_matrix(2), 2)


def test_congruence_membership_needs_integral():
    half = translation(((Fraction(1, 2), 0), (0, 0)))
    with pytest.raises(ValueError):
        congruence_membership(half, 2)
    with pytest.raises(ValueError):
        CongruenceLevel(0)


def test_group_closure_and_determinant():
    rng = random.Random(7)
    for _ in range(50):
        m = random_symplectic(2, rng)
        n = random_symplectic(2, rng)
        assert is_symplectic((m @ n).entries)
        assert is_symplectic(m.inverse().entries)
        assert (m @ m.inverse()).entries == exact.identity(4)
        assert m.det() == 1


def test_pairing_invariance():
    rng = random.Random(11)
    for _ in range(20):
        m = random_symplectic(2, rng)
        u = [rng.randint(-4, 4) for _ in range(4)]
        v = [rng.randint(-4, 4) for _ in range(4)]
        mu = exact.mat_vec(m.entries, u)
        mv = exact.mat_vec(m.entries, v)
        assert pairing(mu, mv) == pairing(u, v)


def test_normality_of_congruence_subgroup():
    rng = random.Random(13)
    n = 4
    for _ in range(10):
        m = random_congruence_element(2, n, rng)
        assert congruence_membership(m, n)
        gamma = random_symplectic(2, rng)
        conj = gamma @ m @ gamma.inverse()
        assert congruence_membership(conj, n)


def test_generators_are_symplectic():
    assert is_symplectic(j_matrix(3).entries)
    assert is_symplectic(translation(((1, 2), (2, -3))).entries)
    assert is_symplectic(gl_embedding(((1, 5), (0, 1))).entries)
    with pytest.raises(ValueError):
        translation(((0, 1), (2, 0)))              # not symmetric


def test_json_round_trip_with_rationals():
    m = gl_embedding(((1, 1), (0, 1)))
    half = SymplecticMatrix(1, ((Fraction(1, 2), 0), (0, 2)))
    for mat in (m, half):
        again = SymplecticMatrix.from_json(mat.to_json())
        assert again.entries == mat.entries

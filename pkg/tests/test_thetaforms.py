import cmath
import math

import numpy as np
import pytest

from siegelkit.symplectic import gl_embedding, j_matrix, translation
from siegelkit.siegelspace import SiegelPoint, cocycle, moebius_act
from siegelkit.fourier import HalfIntegralMatrix
from siegelkit.thetaforms import (
    LatticeGram,
    ThetaCharacteristic,
    TruncationError,
    TruncationParams,
    chi10,
    chi10_normalization,
    chi18,
    even_characteristics,
    lattice_theta_coefficients,
    named_lattice,
    schottky_chi8_coefficients,
    short_vectors,
    theta_constant,
    theta_constant_with_tail,
    theta_tail_estimate,
    vanishing_order_fit,
)


def test_even_characteristic_counts():
    for g, count in ((1, 3), (2, 10), (3, 36)):
        chars = even_characteristics(g)
        assert len(chars) == count == 2 ** (g - 1) * (2 ** g + 1)
        assert all(c.is_even for c in chars)


def test_characteristic_validation():
    with pytest.raises(ValueError):
        ThetaCharacteristic(2, (0, 0.25), (0, 0))
    odd = ThetaCharacteristic.from_doubled((1,), (1,))
    assert odd.parity == -1 and not odd.is_even


def test_theta_value_at_i():
    tau = SiegelPoint(1, np.array([[1j]]))
    char = ThetaCharacteristic.from_doubled((0,), (0,))
    val = theta_constant(char, tau, TruncationParams(radius=20, target=1e-9))
    assert val.real == pytest.approx(1.0864348112133080, abs=1e-12)
    assert abs(val.imag) <= 1e-15


def test_odd_characteristics_vanish():
    tau = SiegelPoint(1, np.array([[0.3 + 0.8j]]))
    odd = ThetaCharacteristic.from_doubled((1,), (1,))
    assert abs(theta_constant(odd, tau, TruncationParams(radius=10, target=1e-4))) <= 1e-12
    tau2 = SiegelPoint(2, np.array([[1j, 0.2], [0.2, 1.5j]]))
    for bits1, bits2 in (((1, 0), (1, 0)), ((1, 1), (1, 0)), ((0, 1), (1, 1))):
        char = ThetaCharacteristic.from_doubled(bits1, bits2)
        if char.is_even:
            continue
        assert abs(theta_constant(char, tau2)) <= 1e-12


def test_theta_periodicity():
    trunc = TruncationParams(radius=14, target=1e-10)
    tau = SiegelPoint(1, np.array([[0.2 + 0.9j]]))
    plain = ThetaCharacteristic.from_doubled((0,), (1,))
    v1 = theta_constant(plain, tau, trunc)
    v2 = theta_constant(plain, SiegelPoint(1, tau.tau + 2), trunc)
    assert abs(v2 - v1) <= 1e-10 * abs(v1)

    # half-integral eps1 picks up the fourth root of unity i^(t(s) B s) with
    # s = 2 eps1 under tau -> tau + 2B; the unconditional period is tau + 8B
    half = ThetaCharacteristic.from_doubled((1,), (0,))
    w1 = theta_constant(half, tau, trunc)
    w2 = theta_constant(half, SiegelPoint(1, tau.tau + 2), trunc)
    assert abs(w2 - 1j * w1) <= 1e-10 * abs(w1)
    w8 = theta_constant(half, SiegelPoint(1, tau.tau + 8), trunc)
    assert abs(w8 - w1) <= 1e-10 * abs(w1)

    tau2 = SiegelPoint(2, np.array([[1j, 0.3], [0.3, 1.2j]]))
    b = np.array([[1, 1], [1, 2]])
    for char in even_characteristics(2):
        s = np.array(char.doubled()[0])
        phase = 1j ** int(s @ b @ s)
        a = theta_constant(char, tau2)
        moved = theta_constant(char, SiegelPoint(2, tau2.tau + 2 * b))
        assert abs(moved - phase * a) <= 1e-10 * max(1e-3, abs(a))


def test_truncation_certificate():
    tau = SiegelPoint(1, np.array([[0.6j]]))
    char = ThetaCharacteristic.from_doubled((0,), (0,))
    small, tail_small = theta_constant_with_tail(char, tau, TruncationParams(radius=6, target=1.0))
    large, _ = theta_constant_with_tail(char, tau, TruncationParams(radius=12, target=1.0))
    assert abs(large - small) < tail_small
    with pytest.raises(TruncationError):
        theta_constant(char, SiegelPoint(1, np.array([[0.5j]])),
                       TruncationParams(radius=3, target=1e-10))


def test_lattice_fixtures():
    e8 = named_lattice("e8")
    e8e8 = named_lattice("e8e8")
    e16 = named_lattice("e16")
    for lat in (e8, e8e8, e16):
        assert lat.is_even_unimodular()
    assert (e8.rank, e8e8.rank, e16.rank) == (8, 16, 16)
    # minimal vectors: 240 roots for E8; 480 for both rank-16 lattices
    assert len(short_vectors(e8, 2)) - 1 == 240
    assert len(short_vectors(e8e8, 2)) - 1 == 480
    assert len(short_vectors(e16, 2)) - 1 == 480
    with pytest.raises(ValueError):
        LatticeGram("odd", 2, ((1, 0), (0, 1)))
    with pytest.raises(ValueError):
        LatticeGram("indef", 2, ((2, 3), (3, 2)))


def test_lattice_theta_coefficients():
    e8 = named_lattice("e8")
    f = lattice_theta_coefficients(e8, 1, 3)
    assert f.weight == 4 and f.level == 1
    assert f.coefficient(HalfIntegralMatrix(1, ((0,),))) == 1
    assert f.coefficient(HalfIntegralMatrix(1, ((2,),))) == 240
    assert f.coefficient(HalfIntegralMatrix(1, ((4,),))) == 2160
    assert f.coefficient(HalfIntegralMatrix(1, ((6,),))) == 6720


def test_rank16_genus2_tables_agree():
    a = lattice_theta_coefficients(named_lattice("e8e8"), 2, 2)
    b = lattice_theta_coefficients(named_lattice("e16"), 2, 2)
    assert a.coeffs == b.coeffs
    assert a.coefficient(HalfIntegralMatrix(2, ((0, 0), (0, 0)))) == 1
    assert a.coefficient(HalfIntegralMatrix(2, ((2, 0), (0, 0)))) == 480


def test_genus3_small_bound():
    f = lattice_theta_coefficients(named_lattice("e8"), 3, 1)
    assert f.coefficient(HalfIntegralMatrix(3, ((0, 0, 0), (0, 0, 0), (0, 0, 0)))) == 1
    assert f.coefficient(HalfIntegralMatrix(3, ((2, 0, 0), (0, 0, 0), (0, 0, 0)))) == 240


def test_cost_guards():
    with pytest.raises(ValueError):
        lattice_theta_coefficients(named_lattice("e16"), 3, 1)
    with pytest.raises(ValueError):
        lattice_theta_coefficients(named_lattice("e8"), 4, 1)
    with pytest.raises(ValueError):
        lattice_theta_coefficients(named_lattice("e8"), 1, 9)
    with pytest.raises(NotImplementedError):
        schottky_chi8_coefficients(4, 1)


def test_schottky_truncations_vanish():
    assert schottky_chi8_coefficients(1, 3).is_zero()
    assert schottky_chi8_coefficients(2, 2).is_zero()


def test_chi10_normalization_confirms_classical_constant():
    c = chi10_normalization()
    assert c == -(2.0 ** -14)


def test_chi10_leading_development():
    # second difference in z against the displayed leading term (pi z)^2 q1 q2
    t1, t2 = 3.5, 3.8
    q1q2 = cmath.exp(2j * math.pi * 1j * t1) * cmath.exp(2j * math.pi * 1j * t2)
    h = 0.05

    def at(z):
        return chi10(SiegelPoint(2, np.array([[1j * t1, z], [z, 1j * t2]])),
                     TruncationParams(radius=8, target=1e-12))

    def coeff(step):
        return (at(step) + at(-step) - 2 * at(0.0)) / (step * step) / (2 * math.pi ** 2 * q1q2)

    refined = (4 * coeff(h / 2) - coeff(h)) / 3
    assert abs(refined - 1.0) <= 1e-3


def test_chi10_vanishes_on_diagonal_with_multiplicity_two():
    assert abs(chi10(SiegelPoint.diagonal(1j, 2j))) <= 1e-10
    order = vanishing_order_fit(chi10, 1j, 2j, (0.01, 0.02, 0.03, 0.05))
    assert abs(order - 2.0) <= 0.05


def test_chi10_slash_invariance():
    tau = SiegelPoint(2, np.array([[0.2 + 1.1j, 0.1 + 0.3j], [0.1 + 0.3j, -0.3 + 1.4j]]))
    trunc = TruncationParams(radius=12, target=1e-8)
    base = chi10(tau, trunc)
    gens = [j_matrix(2), translation(((1, 0), (0, -1))), translation(((2, 1), (1, 0))),
            gl_embedding(((1, 1), (0, 1))), gl_embedding(((0, 1), (1, 0)))]
    for m in gens:
        lhs = chi10(moebius_act(m, tau), trunc) * cocycle(m, tau) ** (-10)
        assert abs(lhs - base) <= 1e-7 * abs(base)
    word = gens[0] @ gens[2] @ gens[3]
    lhs = chi10(moebius_act(word, tau), trunc) * cocycle(word, tau) ** (-10)
    assert abs(lhs - base) <= 1e-7 * abs(base)


def test_chi10_wrong_genus():
    with pytest.raises(ValueError):
        chi10(SiegelPoint.scaled_identity(1))


def test_chi18_generic_point_and_invariance():
    off = np.array([[0, 0.31, 0.17], [0.31, 0, 0.23], [0.17, 0.23, 0]])
    tau = SiegelPoint(3, np.diag([1j, 1.1j, 1.3j]) + off)
    trunc = TruncationParams(radius=5, target=1e-8)
    value = chi18(tau, trunc)
    assert abs(value) > 1e3 * theta_tail_estimate(tau, trunc)
    b = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 2]])
    shifted = chi18(SiegelPoint(3, tau.tau + 2 * b), trunc)
    assert abs(shifted - value) <= 1e-8 * abs(value)


def test_chi18_decays_at_cusp():
    # the diagonal family lies on the zero divisor, so couple the last row
    trunc = TruncationParams(radius=5, target=1e-8)
    mags = []
    for t in (1.5, 2.5):
        tau = np.array([[1j, 0.3, 0.25], [0.3, 1.2j, 0.25], [0.25, 0.25, 1j * t]])
        mags.append(abs(chi18(SiegelPoint(3, tau), trunc)))
    assert mags[1] < mags[0] * math.exp(-math.pi / 2)


def test_chi18_guards():
    with pytest.raises(ValueError):
        chi18(SiegelPoint.scaled_identity(2))
    with pytest.raises(ValueError):
        chi18(SiegelPoint.scaled_identity(3), TruncationParams(radius=7))

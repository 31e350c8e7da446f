import numpy as np
import pytest

from siegelkit.symplectic import j_matrix
from siegelkit.siegelspace import (
    SiegelPoint,
    TangentDirection,
    bergman_metric,
    borel_embed,
    moebius_act,
    pushforward,
    random_siegel_point,
    random_tangent,
    tangent_basis,
)
from siegelkit.hodge import (
    HodgeStructureW1,
    higgs_curvature_identity_check,
    hodge_inner,
    hodge_metric_tangent,
    kahler_einstein_check,
    kodaira_spencer,
)


def test_hodge_inner_base_point():
    tau = SiegelPoint.scaled_identity(2)
    st = HodgeStructureW1.from_tau(tau)
    f = st.F1.basis
    for j in range(2):
        assert hodge_inner(st, f[:, j], f[:, j]) == pytest.approx(2.0)
    # H^{1,0} is orthogonal to H^{0,1}
    assert abs(hodge_inner(st, f[:, 0], f[:, 1].conj())) <= 1e-12


def test_hodge_inner_positive_definite():
    rng = np.random.default_rng(4)
    for _ in range(25):
        tau = random_siegel_point(2, rng)
        st = HodgeStructureW1.from_tau(tau)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        val = hodge_inner(st, v, v)
        assert abs(val.imag) <= 1e-10 * abs(val)
        assert val.real > 0


def test_kodaira_spencer_linear_injective():
    tau = SiegelPoint.scaled_identity(2)
    zero = kodaira_spencer(tau, TangentDirection(2, np.zeros((2, 2))))
    assert np.max(np.abs(zero.matrix)) <= 1e-12
    mats = [kodaira_spencer(tau, x).matrix for x in tangent_basis(2)]
    flat = np.array([m.ravel() for m in mats])
    gram = flat @ flat.conj().T
    assert np.min(np.linalg.svd(gram, compute_uv=False)) > 0.1
    # linearity
    rng = np.random.default_rng(8)
    x = random_tangent(2, rng)
    y = random_tangent(2, rng)
    lhs = kodaira_spencer(tau, TangentDirection(2, 2 * x.X + 3j * y.X)).matrix
    rhs = 2 * kodaira_spencer(tau, x).matrix + 3j * kodaira_spencer(tau, y).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_kodaira_spencer_symmetric_at_random_points():
    rng = np.random.default_rng(12)
    for _ in range(20):
        tau = random_siegel_point(2, rng)
        x = random_tangent(2, rng)
        assert kodaira_spencer(tau, x).symmetry_defect() <= 1e-9


def test_metric_ratio_constant():
    rng = np.random.default_rng(17)
    ratios = []
    for _ in range(25):
        tau = random_siegel_point(2, rng)
        x = random_tangent(2, rng)
        h = hodge_metric_tangent(tau, x, x).real
        b = bergman_metric(tau, x, x).real
        ratios.append(h / b)
    spread = (max(ratios) - min(ratios)) / abs(ratios[0])
    assert spread <= 1e-8


def test_metric_zero_direction_and_invariance():
    tau = SiegelPoint.scaled_identity(2)
    zero = TangentDirection(2, np.zeros((2, 2)))
    assert abs(hodge_metric_tangent(tau, zero, zero)) <= 1e-14
    j = j_matrix(2)
    x = TangentDirection(2, np.array([[0.0, 1.0], [1.0, 0.0]]))
    before = hodge_metric_tangent(tau, x, x)
    after = hodge_metric_tangent(moebius_act(j, tau), pushforward(j, tau, x), pushforward(j, tau, x))
    assert abs(after - before) <= 1e-8 * abs(before)


def test_kahler_einstein_g1_closed_form():
    report = kahler_einstein_check([SiegelPoint.scaled_identity(1),
                                    SiegelPoint.scaled_identity(1, 1.7)])
    for lam in report["lambda"]:
        assert lam == pytest.approx(2.0, abs=1e-4)
    assert report["dw_residual"] <= 1e-4


def test_kahler_einstein_g2_consistency():
    samples = [SiegelPoint.scaled_identity(2), SiegelPoint.diagonal(1j, 2j)]
    report = kahler_einstein_check(samples)
    lams = report["lambda"]
    assert abs(lams[0] - lams[1]) <= 1e-3 * abs(lams[0])
    assert report["dw_residual"] <= 1e-4
    assert report["einstein_residual"] <= 1e-3


def test_kahler_einstein_richardson_consistency():
    samples = [SiegelPoint.scaled_identity(2)]
    lam_h = kahler_einstein_check(samples, h=1e-3)["lambda"][0]
    lam_h2 = kahler_einstein_check(samples, h=5e-4)["lambda"][0]
    assert abs(lam_h - lam_h2) <= 1e-4


def test_kahler_einstein_step_guard():
    with pytest.raises(ValueError):
        kahler_einstein_check([SiegelPoint.scaled_identity(1)], h=1e-7)
    with pytest.raises(ValueError):
        kahler_einstein_check([SiegelPoint.scaled_identity(1)], h=0.5)


def test_curvature_identity():
    report = higgs_curvature_identity_check(SiegelPoint.scaled_identity(2))
    assert report["curvature_residual"] <= 1e-3
    assert report["wedge_residual"] <= 1e-10
    assert report["star_wedge_residual"] <= 1e-10
    assert report["sym_square_residual"] <= 1e-10


def test_curvature_cost_guard():
    with pytest.raises(ValueError):
        higgs_curvature_identity_check(SiegelPoint.scaled_identity(3))


def test_decomposition_condition_guard():
    tau = SiegelPoint.scaled_identity(2)
    st = HodgeStructureW1(2, borel_embed(tau))
    a, b = st.decompose(st.F1.basis[:, 0])
    assert np.allclose(a, [1, 0]) and np.allclose(b, [0, 0])

"""Weight-one Hodge structures, the Hodge metric, and curvature verifications.

The metric on tangent directions is obtained by pushing a direction through
the derivative of the Hodge filtration (the Higgs map) and taking the inner
product induced by the polarization and the Weil operator.  Everything that
involves derivatives of the metric is verified by central finite differences;
a Richardson step-halving comparison guards against roundoff-dominated steps.
"""

from dataclasses import dataclass

import numpy as np

from .siegelspace import (
    SiegelPoint,
    TangentDirection,
    PeriodPoint,
    borel_embed,
    j_matrix_float,
    tangent_basis,
)

DECOMPOSITION_COND_LIMIT = 1e8


class StepSizeError(ArithmeticError):
    """Raised when step halving shows a finite-difference step is unusable."""


@dataclass(frozen=True)
class HodgeStructureW1:
    """A weight-one polarized Hodge structure V_C = F^1 + conj(F^1)."""

    g: int
    F1: PeriodPoint

    def __post_init__(self):
        stacked = np.hstack([self.F1.basis, self.F1.basis.conj()])
        if np.linalg.cond(stacked) > DECOMPOSITION_COND_LIMIT:
            raise ValueError("F^1 and conj(F^1) do not split V_C (ill-conditioned)")

    @classmethod
    def from_tau(cls, tau: SiegelPoint):
        return cls(tau.g, borel_embed(tau))

    def decompose(self, v):
        """Coefficients (a, b) with v = F a + conj(F) b."""
        f = self.F1.basis
        stacked = np.hstack([f, f.conj()])
        ab = np.linalg.solve(stacked, np.asarray(v, dtype=complex))
        return ab[: self.g], ab[self.g:]

    def weil_operator(self, v):
        """C v: multiplication by i on the F^1 part, -i on the conjugate part."""
        a, b = self.decompose(v)
        f = self.F1.basis
        return 1j * (f @ a) - 1j * (f.conj() @ b)


def hodge_inner(structure: HodgeStructureW1, u, v) -> complex:
    """The polarization-induced metric psi(C u, conj(v))."""
    cu = structure.weil_operator(u)
    j = j_matrix_float(structure.g)
    return complex(cu @ j @ np.asarray(v, dtype=complex).conj())


@dataclass(frozen=True)
class HiggsElement:
    """Image of a tangent direction in Hom(H^{1,0}, H^{0,1}).

    ``matrix`` is expressed against the frame pair that pairs the codomain
    back through the polarization, which renders the Sym^2 symmetry of the
    tangent embedding as literal matrix symmetry.
    """

    g: int
    matrix: np.ndarray

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.T)))


def _higgs_coefficients(tau: SiegelPoint, x: TangentDirection):
    """Coefficients B of the filtration derivative in the conj(F) frame.

    d/dt F^1_{tau + tX} at t = 0 has column derivatives (X; 0); B holds their
    H^{0,1}-components, so the actual map sends F a to conj(F) (B a).
    """
    structure = HodgeStructureW1.from_tau(tau)
    w = np.vstack([x.X, np.zeros((tau.g, tau.g))])
    _, b = structure.decompose(w)
    return structure, b


def kodaira_spencer(tau: SiegelPoint, x: TangentDirection) -> HiggsElement:
    """Derivative of the Hodge filtration along X, as a Higgs element."""
    structure, b = _higgs_coefficients(tau, x)
    f = structure.F1.basis
    j = j_matrix_float(tau.g)
    image = f.conj() @ b                    # columns theta(X) f_j in V_C
    s = image.T @ j @ f                     # psi(theta(X) f_j, f_k)
    return HiggsElement(tau.g, s)


def _orthonormal_frame(structure: HodgeStructureW1):
    """Coefficient matrix S with columns giving an H-orthonormal basis F S."""
    f = structure.F1.basis
    g = structure.g
    gram = np.empty((g, g), dtype=complex)
    for jj in range(g):
        for kk in range(g):
            gram[jj, kk] = hodge_inner(structure, f[:, jj], f[:, kk])
    gram = (gram + gram.conj().T) / 2
    chol = np.linalg.cholesky(gram)
    return np.linalg.inv(chol).conj().T


def hodge_metric_tangent(tau: SiegelPoint, x: TangentDirection, y: TangentDirection) -> complex:
    """Inner product of Higgs images, in the metric induced on Hom(H^{1,0}, H^{0,1})."""
    structure, bx = _higgs_coefficients(tau, x)
    _, by = _higgs_coefficients(tau, y)
    fbar = structure.F1.basis.conj()
    s = _orthonormal_frame(structure)
    total = 0j
    for a in range(tau.g):
        u = s[:, a]
        total += hodge_inner(structure, fbar @ (bx @ u), fbar @ (by @ u))
    return complex(total)


def hodge_metric_matrix(tau: SiegelPoint):
    """Matrix of the induced metric against the coordinate tangent directions."""
    basis = tangent_basis(tau.g)
    m = len(basis)
    out = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            out[i, j] = hodge_metric_tangent(tau, basis[i], basis[j])
    return (out + out.conj().T) / 2


# --- finite-difference machinery ---------------------------------------------


def _shift(tau: SiegelPoint, direction: np.ndarray, delta: complex) -> SiegelPoint:
    return SiegelPoint(tau.g, tau.tau + delta * direction)


def _holomorphic_derivative(func, tau, direction, h):
    """d/dz along a coordinate direction: (d/dx - i d/dy) / 2, central."""
    fx = (func(_shift(tau, direction, h)) - func(_shift(tau, direction, -h))) / (2 * h)
    fy = (func(_shift(tau, direction, 1j * h)) - func(_shift(tau, direction, -1j * h))) / (2 * h)
    return (fx - 1j * fy) / 2


def _antiholomorphic_derivative(func, tau, direction, h):
    fx = (func(_shift(tau, direction, h)) - func(_shift(tau, direction, -h))) / (2 * h)
    fy = (func(_shift(tau, direction, 1j * h)) - func(_shift(tau, direction, -1j * h))) / (2 * h)
    return (fx + 1j * fy) / 2


def _mixed_second_derivative(func, tau, dir_a, dir_b, h):
    """d^2/(dz_a dzbar_b) by composing real-direction central differences."""
    def second(da, db):
        # 4-point stencil; collapses to a step-2h second difference when the
        # two real legs coincide, which is still second-order correct
        pp = func(_shift(_shift(tau, da[0], da[1] * h), db[0], db[1] * h))
        pm = func(_shift(_shift(tau, da[0], da[1] * h), db[0], -db[1] * h))
        mp = func(_shift(_shift(tau, da[0], -da[1] * h), db[0], db[1] * h))
        mm = func(_shift(_shift(tau, da[0], -da[1] * h), db[0], -db[1] * h))
        return (pp - pm - mp + mm) / (4 * h * h)

    xa, ya = (dir_a, 1.0), (dir_a, 1j)
    xb, yb = (dir_b, 1.0), (dir_b, 1j)
    return (second(xa, xb) + second(ya, yb) + 1j * (second(xa, yb) - second(ya, xb))) / 4


def kahler_einstein_check(tau_samples, h=1e-3):
    """Closedness of the Kaehler form and the Einstein constant, by differences.

    Returns a report with the worst d(omega) residual, the per-sample Einstein
    constants (from Ricci = -lambda * omega), and the worst Einstein residual.
    Raises StepSizeError when halving the step moves the constants by more
    than the expected truncation behaviour allows.
    """
    if not (1e-6 <= h <= 1e-2):
        raise ValueError("step must lie in [1e-6, 1e-2]")
    lambdas = []
    dw_residual = 0.0
    einstein_residual = 0.0
    for tau in tau_samples:
        basis = tangent_basis(tau.g)
        dirs = [x.X for x in basis]
        m = len(dirs)

        metric = hodge_metric_matrix

        # d(omega) = 0 reduces to the symmetry of holomorphic derivatives
        grads = [_holomorphic_derivative(metric, tau, d, h) for d in dirs]
        for gamma in range(m):
            for alpha in range(gamma):
                for beta in range(m):
                    dw_residual = max(
                        dw_residual, abs(grads[gamma][alpha, beta] - grads[alpha][gamma, beta])
                    )

        def log_det(point):
            return np.log(np.linalg.det(hodge_metric_matrix(point)).real)

        def einstein_constant(step):
            ric = np.empty((m, m), dtype=complex)
            for aa in range(m):
                for bb in range(m):
                    ric[aa, bb] = _mixed_second_derivative(log_det, tau, dirs[aa], dirs[bb], step)
            gmat = metric(tau)
            lam = float(np.trace(np.linalg.solve(gmat, ric)).real / m)
            resid = float(np.max(np.abs(ric - lam * gmat)))
            return lam, resid

        lam, resid = einstein_constant(h)
        lam_half, _ = einstein_constant(h / 2)
        if abs(lam - lam_half) > 0.05 * max(abs(lam), 1e-12):
            raise StepSizeError("Richardson disagreement: step too small or too large")
        lambdas.append(lam)
        einstein_residual = max(einstein_residual, resid)
    return {
        "lambda": lambdas,
        "dw_residual": dw_residual,
        "einstein_residual": einstein_residual,
    }


# --- curvature of the Hodge bundle -------------------------------------------


def _hodge_bundle_gram(tau: SiegelPoint):
    """Gram matrix of the holomorphic frame of E = E^{1,0} + E^{0,1} at tau.

    E^{1,0} carries the filtration frame f_j; E^{0,1} (the quotient V/F^1)
    carries the classes of the first g coordinate vectors, represented by
    their H^{0,1}-components.
    """
    structure = HodgeStructureW1.from_tau(tau)
    g = tau.g
    f = structure.F1.basis
    reps = []
    for jj in range(g):
        v = np.zeros(2 * g, dtype=complex)
        v[jj] = 1
        _, b = structure.decompose(v)
        reps.append(f.conj() @ b)
    vectors = [f[:, jj] for jj in range(g)] + reps
    gram = np.empty((2 * g, 2 * g), dtype=complex)
    for jj in range(2 * g):
        for kk in range(2 * g):
            gram[jj, kk] = hodge_inner(structure, vectors[jj], vectors[kk])
    return gram


def _adjoint_in_frame(p, gram):
    """Adjoint of an operator matrix under <u, v> = t(u) G conj(v)."""
    gbar = gram.conj()
    return np.linalg.solve(gbar, p.conj().T @ gbar)


def higgs_curvature_identity_check(tau: SiegelPoint, h=1e-3):
    """Check Theta(E, H) = -(theta theta* + theta* theta) at a point, g <= 2.

    The curvature is assembled from finite differences of the frame Gram
    matrix; the right-hand side is algebraic in the Higgs matrices.  Also
    checks that the wedge of the Higgs field with itself (and of its adjoint)
    vanishes at the level of composed maps, and that the Higgs matrices are
    symmetric (the Sym^2 embedding of the tangent bundle).
    """
    if tau.g > 2:
        raise ValueError("curvature check is guarded to g <= 2")
    g = tau.g
    basis = tangent_basis(g)
    m = len(basis)
    two_g = 2 * g

    def gram(point):
        return _hodge_bundle_gram(point)

    def connection(direction):
        def a_form(point):
            gm = gram(point)
            dg = _holomorphic_derivative(gram, point, direction, h)
            return np.linalg.solve(gm, dg)
        return a_form

    gram0 = gram(tau)
    theta_mats = []
    for x in basis:
        full = np.zeros((two_g, two_g), dtype=complex)
        full[g:, :g] = x.X        # quotient-frame matrix of theta(X) is X itself
        theta_mats.append(full)
    theta_star_mats = [_adjoint_in_frame(t, gram0) for t in theta_mats]

    curvature_residual = 0.0
    for gamma in range(m):
        a_gamma = connection(basis[gamma].X)
        for delta in range(m):
            curv = -_antiholomorphic_derivative(a_gamma, tau, basis[delta].X, h)
            rhs = -(theta_mats[gamma] @ theta_star_mats[delta]
                    - theta_star_mats[delta] @ theta_mats[gamma])
            curvature_residual = max(curvature_residual, float(np.max(np.abs(curv - rhs))))

    wedge_residual = 0.0
    for a in range(m):
        for b in range(m):
            wedge_residual = max(
                wedge_residual,
                float(np.max(np.abs(theta_mats[a] @ theta_mats[b] - theta_mats[b] @ theta_mats[a]))),
            )
    star_wedge_residual = 0.0
    for a in range(m):
        for b in range(m):
            star_wedge_residual = max(
                star_wedge_residual,
                float(np.max(np.abs(
                    theta_star_mats[a] @ theta_star_mats[b] - theta_star_mats[b] @ theta_star_mats[a]
                ))),
            )
    sym_residual = max(kodaira_spencer(tau, x).symmetry_defect() for x in basis)
    return {
        "curvature_residual": curvature_residual,
        "wedge_residual": wedge_residual,
        "star_wedge_residual": star_wedge_residual,
        "sym_square_residual": sym_residual,
    }

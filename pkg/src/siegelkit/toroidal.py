"""Cone and monoid combinatorics of toroidal charts at the standard cusp.

Everything here is exact integer/rational arithmetic; there are no floating
tolerances.  Only smooth (regular) simplicial cones are supported: general
Hilbert-basis computation is declined with an explicit error, mirroring the
standing regularity hypothesis on the polyhedral decompositions.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from . import exact


@dataclass(frozen=True)
class CuspLattice:
    """Scaled lattice at the standard minimal cusp: basis l * zeta_a, dual delta_a / l."""

    g: int
    level: int

    def __post_init__(self):
        if self.g < 1 or self.level < 1:
            raise ValueError("g and level must be positive")

    @property
    def dim(self):
        return self.g * (self.g + 1) // 2

    def basis(self):
        l = self.level
        return [tuple(Fraction(l) if i == j else Fraction(0) for j in range(self.dim))
                for i in range(self.dim)]

    def dual_basis(self):
        l = self.level
        return [tuple(Fraction(1, l) if i == j else Fraction(0) for j in range(self.dim))
                for i in range(self.dim)]

    def pairing_matrix(self):
        """<delta^l_a, zeta^l_b>; the identity, exactly."""
        basis = self.basis()
        dual = self.dual_basis()
        return tuple(tuple(sum(d * z for d, z in zip(dual[a], basis[b]))
                           for b in range(self.dim)) for a in range(self.dim))


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    return g == 1


@dataclass(frozen=True)
class ConeSigma:
    """A simplicial rational cone given by primitive integer rays."""

    rays: tuple
    dimension: int

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in ray) for ray in self.rays)
        object.__setattr__(self, "rays", rays)
        if any(len(r) != self.dimension for r in rays):
            raise ValueError("rays must live in the ambient dimension")
        if any(not _primitive(r) for r in rays):
            raise ValueError("rays must be primitive")
        if len(rays) > 1:
            mat = exact.to_exact(rays)
            sub = tuple(mat[i] for i in range(len(rays)))
            # linear independence of the rays <=> simplicial & strongly convex
            if len(rays) == self.dimension:
                if exact.det(sub) == 0:
                    raise ValueError("rays of a top cone must be linearly independent")
            else:
                rank = _rank(sub)
                if rank != len(rays):
                    raise ValueError("rays must be linearly independent (simplicial cones only)")

    def ray_set(self):
        return frozenset(self.rays)

    def is_top(self):
        return len(self.rays) == self.dimension

    def is_smooth(self):
        """Rays form a lattice basis (determinant +-1)."""
        if not self.is_top():
            return False
        return abs(exact.det(exact.to_exact(self.rays))) == 1

    def face_lattice(self):
        """Faces by dimension: subsets of rays (simplicial), plus the origin."""
        faces = {0: [tuple()]}
        for size in range(1, len(self.rays) + 1):
            faces[size] = [tuple(sub) for sub in combinations(self.rays, size)]
        return faces

    def contains(self, point, strict=False):
        """Exact membership via the ray coordinates of the point."""
        if not self.is_top():
            raise ValueError("membership test implemented for top cones")
        mat = exact.transpose(exact.to_exact(self.rays))
        coords = exact.mat_vec(exact.inverse(mat), tuple(Fraction(x) for x in point))
        if strict:
            return all(c > 0 for c in coords)
        return all(c >= 0 for c in coords)


def _rank(mat):
    rows = [list(r) for r in mat]
    rank = 0
    cols = len(rows[0])
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / p
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# --- the degree-2 principal cone fixture --------------------------------------


def _sym2_coords(s):
    """Quadratic form [[a, b], [b, c]] -> (a, b, c)."""
    return (s[0][0], s[0][1], s[1][1])


def _sym2_matrix(v):
    return ((v[0], v[1]), (v[1], v[2]))


def gl2_image(u, cone: ConeSigma) -> ConeSigma:
    """Image of a cone in Sym^2 coordinates under S -> U S t(U)."""
    u = exact.to_exact(u)
    rays = []
    for ray in cone.rays:
        s = exact.to_exact(_sym2_matrix(ray))
        img = exact.mat_mul(exact.mat_mul(u, s), exact.transpose(u))
        rays.append(tuple(int(x) for x in _sym2_coords(img)))
    return ConeSigma(tuple(rays), cone.dimension)


def principal_cone(g=2) -> ConeSigma:
    """The cone spanned by the rank-one forms x^2, y^2, (x - y)^2."""
    if g != 2:
        raise ValueError("the principal cone fixture is implemented for g = 2")
    return ConeSigma(((1, 0, 0), (0, 0, 1), (1, -1, 1)), 3)


@dataclass(frozen=True)
class PrincipalConeFixture:
    cone: ConeSigma
    face_counts: dict
    neighbors: tuple      # (U, image cone) pairs sharing exactly one facet
    locally_admissible: bool


def principal_cone_fixture(g=2) -> PrincipalConeFixture:
    """The degree-2 principal cone, its faces, and adjacent GL(2, Z) images.

    Searches short words in elementary GL(2, Z) generators for images sharing
    exactly one facet with the cone, then checks local admissibility: on
    sampled interior points, the full-dimensional images do not overlap.
    """
    sigma = principal_cone(g)
    gens = [((1, 1), (0, 1)), ((1, -1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (1, 1))]
    seen = {}
    for w1, w2 in product([None] + gens, gens):
        u = exact.to_exact(w2)
        if w1 is not None:
            u = exact.mat_mul(exact.to_exact(w1), u)
        image = gl2_image(u, sigma)
        shared = image.ray_set() & sigma.ray_set()
        if len(shared) == 2 and image.ray_set() != sigma.ray_set():
            seen.setdefault(frozenset(image.ray_set()), (tuple(tuple(int(x) for x in r) for r in u), image))
    neighbors = tuple(seen.values())

    cones = [sigma] + [img for _, img in neighbors]
    admissible = True
    for cone in cones:
        for weights in ((1, 1, 1), (3, 1, 1), (1, 3, 1), (1, 1, 3), (2, 5, 1)):
            point = tuple(sum(w * r[k] for w, r in zip(weights, cone.rays)) for k in range(3))
            hits = sum(1 for other in cones if other.contains(point, strict=True))
            if hits != 1:
                admissible = False
    faces = sigma.face_lattice()
    face_counts = {d: len(fs) for d, fs in faces.items()}
    return PrincipalConeFixture(sigma, face_counts, neighbors, admissible)


# --- dual monoids and level-change chart maps ---------------------------------


def dual_monoid_generators(cone: ConeSigma, level: int):
    """Free generators delta_a / level of the dual monoid of a smooth top cone."""
    if not cone.is_top() or not cone.is_smooth():
        raise NotImplementedError(
            "dual monoid generators need a smooth top cone; Hilbert bases are not implemented"
        )
    if level < 1:
        raise ValueError("level must be positive")
    rays_t = exact.transpose(exact.to_exact(cone.rays))
    dual_rows = exact.inverse(rays_t)      # row a pairs to 1 with ray a, 0 with others
    return [tuple(x / level for x in row) for row in dual_rows]


@dataclass(frozen=True)
class MonomialChartMap:
    """Inclusion of level-m chart coordinates into the level-n chart, m | n.

    Each target coordinate (the character of delta_a / m) pulls back to the
    (n/m)-th power of the matching source coordinate, so the exponent map is
    (n/m) times the identity on dual generators.
    """

    source_level: int
    target_level: int
    exponents: tuple

    def __post_init__(self):
        if self.target_level < 1 or self.source_level % self.target_level:
            raise ValueError("target level must divide the source level")

    @property
    def scaling(self):
        return self.source_level // self.target_level

    def compose(self, other):
        """self after other: pullback exponents multiply."""
        if self.target_level != other.source_level:
            raise ValueError("levels do not chain")
        exps = exact.mat_mul(exact.to_exact(self.exponents), exact.to_exact(other.exponents))
        return MonomialChartMap(
            self.source_level, other.target_level,
            tuple(tuple(int(x) for x in row) for row in exps),
        )


def monomial_map(n: int, m: int, cone: ConeSigma) -> MonomialChartMap:
    """The chart map of levels m | n over a smooth top cone."""
    if m < 1 or n % m:
        raise ValueError("m must divide n")
    gens = dual_monoid_generators(cone, 1)   # smoothness check; directions are shared
    k = len(gens)
    factor = n // m
    exps = tuple(tuple(factor if i == j else 0 for j in range(k)) for i in range(k))
    return MonomialChartMap(n, m, exps)


def verify_divisor_pullback(n: int, m: int, cone: ConeSigma):
    """Pullback multiplicity of each coordinate hyperplane divisor, per ray.

    For the level-change chart map each target coordinate divisor pulls back
    with the exponent of the corresponding monomial; the table must be
    constant n/m.
    """
    chart = monomial_map(n, m, cone)
    table = tuple(chart.exponents[i][i] for i in range(len(chart.exponents)))
    if any(chart.exponents[i][j] for i in range(len(table)) for j in range(len(table)) if i != j):
        raise AssertionError("chart exponent map must be diagonal over a smooth cone")
    if any(t != chart.scaling for t in table):
        raise AssertionError("pullback multiplicities must all equal n/m")
    return table

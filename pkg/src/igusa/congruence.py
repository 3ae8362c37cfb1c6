"""The bilinear model on P2 x P2: forms of bidegree (1,1) through four diagonal
base points, the induced degree-2 map to P4, its plane family, the space of
(2,2)-forms with double points at the base points, and the focal check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq

from .exact import (
    MultiPoly,
    PolyRing,
    QQ,
    det,
    kernel,
    poly_det,
    rank,
    rref,
    udeg,
    ugcd,
    umonic,
    usquarefree,
)
from .groebner import (
    DEFAULT_BUDGET,
    Budget,
    CountMismatch,
    Ideal,
    projective_count,
    random_hyperplane,
    rational_solutions,
)
from .projective import ProjPoint, ProjSubspace, SamplingExhausted, as_rng

XY = PolyRing(("x1", "x2", "x3", "y1", "y2", "y3"), grading=(0, 0, 0, 1, 1, 1))
X = PolyRing(("x1", "x2", "x3"))
DEFAULT_E = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


class DegenerateBasePoints(ValueError):
    pass


class Indeterminate(ValueError):
    """The point is in the base locus of the map."""


@dataclass(frozen=True)
class BasePoints:
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(QQ(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) != 4 or any(len(p) != 3 for p in pts):
            raise DegenerateBasePoints("need four points of P2")
        for tri in itertools.combinations(pts, 3):
            if det([list(r) for r in tri]) == 0:
                raise DegenerateBasePoints("three base points are collinear")

    @classmethod
    def random(cls, seed=0, bound: int = 5) -> BasePoints:
        rng = as_rng(seed)
        for _ in range(32):
            pts = [[rng.randint(-bound, bound) for _ in range(3)] for _ in range(4)]
            try:
                return cls(tuple(map(tuple, pts)))
            except DegenerateBasePoints:
                continue
        raise SamplingExhausted("no general base points drawn")

    def diagonal(self) -> list[tuple]:
        return [p + p for p in self.points]

    def to_json(self):
        return [[str(c) for c in p] for p in self.points]


def default_base_points() -> BasePoints:
    return BasePoints(DEFAULT_E)


# ---------------------------------------------------------------------------
# (1,1)-forms and the map to P4
# ---------------------------------------------------------------------------


def bidegree_monomials(p: int, q: int) -> list[tuple]:
    xs = X.monomials_of_degree(p)
    ys = X.monomials_of_degree(q)
    return [a + b for a in xs for b in ys]


def _forms_from_kernel(vectors, monos) -> list[MultiPoly]:
    return [MultiPoly(XY, {m: c for m, c in zip(monos, v) if c}) for v in vectors]


@dataclass(frozen=True)
class BilinearMapData:
    e: BasePoints
    forms: tuple
    matrix: tuple

    def M(self, x) -> list[list]:
        """M_x evaluated at a point x of P2 (5 x 3)."""
        x = list(x)
        return [[L.evaluate(x) for L in row] for row in self.matrix]

    def M_poly(self, images) -> list[list[MultiPoly]]:
        """M with x replaced by the given polynomials."""
        return [[L.subs(images) for L in row] for row in self.matrix]


def basis_I_e_11(e: BasePoints | None = None) -> BilinearMapData:
    e = e or default_base_points()
    monos = bidegree_monomials(1, 1)
    conds = []
    for pt in e.diagonal():
        conds.append([MultiPoly(XY, {m: 1}).evaluate(pt) for m in monos])
    ker = kernel(conds, len(monos))
    if len(ker) != 5:
        raise DegenerateBasePoints(f"(1,1)-forms through e form a space of dimension {len(ker)}")
    forms = _forms_from_kernel(ker, monos)
    mat = []
    for f in forms:
        row = []
        for j in range(3):
            col = f.diff(3 + j)
            row.append(col.rename(X))
        mat.append(tuple(row))
    return BilinearMapData(e, tuple(forms), tuple(mat))


def t_e_eval(data: BilinearMapData, x, y) -> ProjPoint:
    vals = [f.evaluate(list(x) + list(y)) for f in data.forms]
    if not any(vals):
        raise Indeterminate("(x, y) is in the base locus")
    return ProjPoint(vals)


@dataclass(frozen=True)
class CongruencePlane:
    x: ProjPoint
    plane: ProjSubspace

    @property
    def degenerate(self) -> bool:
        return self.plane.dim != 2


def plane_of(data: BilinearMapData, x) -> CongruencePlane:
    M = data.M(x)
    cols = [tuple(M[k][j] for k in range(5)) for j in range(3)]
    return CongruencePlane(ProjPoint(x), ProjSubspace(4, tuple(cols)))


def fiber_injective(data: BilinearMapData, x) -> bool:
    """M_x has trivial kernel, so y -> M_x y is injective on P2."""
    return rank(data.M(x)) == 3


def exceptional_hyperplanes(data: BilinearMapData) -> list[ProjSubspace]:
    """Images of the exceptional divisors over the base points (e_k, e_k).

    The differential of (f0..f4) at a base point has rank 4; points of P4
    on its image have a preimage infinitely near the base point.
    """
    out = []
    for pt in data.e.diagonal():
        J = [[f.diff(v).evaluate(pt) for f in data.forms] for v in range(6)]
        out.append(ProjSubspace(4, tuple(tuple(r) for r in J)))
    return out


def is_generic_image_point(data: BilinearMapData, p) -> bool:
    """p avoids the images of the base locus, where fibers lose points."""
    P = ProjPoint(p.coords if isinstance(p, ProjPoint) else p)
    return not any(H.contains(P) for H in exceptional_hyperplanes(data))


def random_preimage(data: BilinearMapData, rng, bound: int = 9) -> tuple:
    """A random rational (x, y) with rank M_x = 3 and generic image point."""
    for _ in range(32):
        x = [rng.randint(-bound, bound) for _ in range(3)]
        y = [rng.randint(-bound, bound) for _ in range(3)]
        if not any(x) or not any(y) or not fiber_injective(data, x):
            continue
        try:
            p = t_e_eval(data, x, y)
        except Indeterminate:
            continue
        if not is_generic_image_point(data, p):
            continue
        return x, y, p
    raise SamplingExhausted("no admissible (x, y) drawn")


def random_image_point(data: BilinearMapData, rng, bound: int = 9) -> list[int]:
    """A random rational point of P4 off the exceptional hyperplanes."""
    for _ in range(32):
        p = [rng.randint(-bound, bound) for _ in range(5)]
        if any(p) and is_generic_image_point(data, p):
            return p
    raise SamplingExhausted("no generic point of P4 drawn")


# ---------------------------------------------------------------------------
# Degree of t_e and order of the plane family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberCount:
    count: int
    chart_counts: tuple
    known_preimage_found: bool
    rational_preimages: tuple


def _fiber_ideal(data: BilinearMapData, p, chart, budget: Budget) -> Ideal:
    """{M_x' y' = p, chart(x') = 1} in the unknowns x'1..3, y'1..3."""
    xs = [XY.gen(i) for i in range(3)]
    eqs = []
    for k, f in enumerate(data.forms):
        eqs.append(f - p[k])
    eqs.append(sum((c * g for c, g in zip(chart, xs)), XY.zero()) - 1)
    return Ideal(eqs, XY, budget)


def fiber_count(data: BilinearMapData, p, seed=0, known=None,
                budget: Budget = DEFAULT_BUDGET) -> FiberCount:
    """Number of preimages of p under t_e (with multiplicity), in two random charts.

    The scale of y' is fixed by M_x' y' = p exactly and that of x' by an
    affine chart, so the base locus (where M_x' y' = 0) is never a solution.
    """
    rng = as_rng(seed)
    p = list(p.coords if isinstance(p, ProjPoint) else p)
    counts, found, sols = [], False, []
    # a chart only loses solutions, so keep drawing until the maximum repeats
    for _ in range(6):
        chart = random_hyperplane(3, rng)
        ideal = _fiber_ideal(data, p, chart, budget)
        n = ideal.quotient_dimension()
        counts.append(n)
        if n == max(counts):
            sols = rational_solutions(ideal)
        if counts.count(max(counts)) >= 2:
            break
    else:
        raise CountMismatch(f"fiber counts never stabilized: {counts}")
    if known is not None:
        x, y = known
        found = any(ProjPoint(s[:3]) == ProjPoint(x) and ProjPoint(s[3:]) == ProjPoint(y) for s in sols)
    return FiberCount(max(counts), tuple(counts), found,
                      tuple((ProjPoint(s[:3]), ProjPoint(s[3:])) for s in sols))


def conic_through(points, rng, bound: int = 7) -> MultiPoly:
    """A random conic of P2 through the given points."""
    monos = X.monomials_of_degree(2)
    conds = [[MultiPoly(X, {m: 1}).evaluate(list(pt)) for m in monos] for pt in points]
    ker = kernel(conds, len(monos))
    for _ in range(32):
        w = [rng.randint(-bound, bound) for _ in ker]
        v = [sum((wi * k[j] for wi, k in zip(w, ker)), mpq(0)) for j in range(len(monos))]
        if any(v):
            return MultiPoly(X, dict(zip(monos, v)))
    raise SamplingExhausted("no conic drawn")


def _count_off_base(eqs, data: BilinearMapData, rng, budget: Budget):
    """Projective count of V(eqs) away from the base points e.

    A single conic through e may pass through a genuine solution; two distinct
    conics of the pencil through e meet only in e, so the larger count is exact.
    """
    best = None
    for _ in range(2):
        h = conic_through(data.e.points, rng)
        pc = projective_count(eqs, rng, budget, saturate_by=h)
        if best is None or pc.count > best.count:
            best = pc
    return best


def minors(matrix, k: int) -> list:
    """All k x k minors of a matrix of polynomials or scalars."""
    n, m = len(matrix), len(matrix[0])
    out = []
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(m), k):
            sub = [[matrix[r][c] for c in cols] for r in rows]
            symbolic = any(isinstance(v, MultiPoly) for row in sub for v in row)
            out.append(poly_det(sub) if symbolic else det(sub))
    return out


@dataclass(frozen=True)
class OrderCount:
    count: int
    chart_counts: tuple


def order_check(data: BilinearMapData, p, seed=0, budget: Budget = DEFAULT_BUDGET) -> OrderCount:
    """Number of x' with p on the plane P_x' (projective count with multiplicity).

    The 4x4 minors of [M_x' | p] also vanish at the base points, where M_x'
    drops rank; they are removed by saturating with conics through them.
    """
    rng = as_rng(seed)
    p = list(p.coords if isinstance(p, ProjPoint) else p)
    xs = X.gens()
    M = data.M_poly(xs)
    aug = [row + [X.const(p[k])] for k, row in enumerate(M)]
    eqs = [g for g in minors(aug, 4) if not g.is_zero()]
    pc = _count_off_base(eqs, data, rng, budget)
    return OrderCount(pc.count, pc.counts)


@dataclass(frozen=True)
class ClassCount:
    count: int
    chart_counts: tuple


def class_check(data: BilinearMapData, seed=0, budget: Budget = DEFAULT_BUDGET) -> ClassCount:
    """Planes P_x' meeting a fixed random plane of P4 in a line (plane reading of class)."""
    rng = as_rng(seed)
    Pi = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(5)]
    M = data.M_poly(X.gens())
    aug = [row + [X.const(c) for c in Pi[k]] for k, row in enumerate(M)]
    eqs = [g for g in minors(aug, 5) if not g.is_zero()]
    pc = _count_off_base(eqs, data, rng, budget)
    return ClassCount(pc.count, pc.counts)


# ---------------------------------------------------------------------------
# (2,2)-forms with double points on the diagonal base points
# ---------------------------------------------------------------------------


def basis_I_e2_22(e: BasePoints | None = None) -> list[MultiPoly]:
    e = e or default_base_points()
    monos = bidegree_monomials(2, 2)
    basis_forms = [MultiPoly(XY, {m: 1}) for m in monos]
    conds = []
    for pt in e.diagonal():
        for v in range(6):
            conds.append([g.diff(v).evaluate(pt) for g in basis_forms])
    ker = kernel(conds, len(monos))
    return _forms_from_kernel(ker, monos)


def double_point_conditions_hold(f: MultiPoly, e: BasePoints) -> bool:
    return all(
        not f.evaluate(pt) and all(not g.evaluate(pt) for g in f.gradient())
        for pt in e.diagonal()
    )


SYM_ENTRIES = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def matrix_to_form(A) -> MultiPoly:
    """y^T A(x) y for a symmetric 3x3 matrix of quadrics in x1..x3."""
    ys = [XY.gen(3 + i) for i in range(3)]
    out = XY.zero()
    for j, k in SYM_ENTRIES:
        entry = A[j][k].rename(XY) if isinstance(A[j][k], MultiPoly) else XY.const(A[j][k])
        w = 1 if j == k else 2
        out = out + entry * ys[j] * ys[k] * w
    return out


def form_to_matrix(f: MultiPoly) -> tuple:
    """Inverse of matrix_to_form on (2,2)-forms: read off the y-coefficients."""
    entries = {}
    for j, k in SYM_ENTRIES:
        terms = {}
        for m, c in f.terms.items():
            yexp = [0, 0, 0]
            yexp[j] += 1
            yexp[k] += 1
            if tuple(m[3:]) == tuple(yexp):
                terms[m[:3]] = c if j == k else c / 2
        entries[(j, k)] = MultiPoly(X, terms)
    return tuple(tuple(entries[(min(j, k), max(j, k))] for k in range(3)) for j in range(3))


def matrix_conditions_hold(A, e: BasePoints) -> bool:
    """A(e_i) e_i = 0 and e_i^T (dA/dx_j)(e_i) e_i = 0 for all i, j."""
    for pt in e.points:
        pt = list(pt)
        Ae = [sum((A[r][c].evaluate(pt) * pt[c] for c in range(3)), mpq(0)) for r in range(3)]
        if any(Ae):
            return False
        for j in range(3):
            val = sum((A[r][c].diff(j).evaluate(pt) * pt[r] * pt[c]
                       for r in range(3) for c in range(3)), mpq(0))
            if val:
                return False
    return True


def matrix_space(e: BasePoints | None = None) -> list[tuple]:
    """Basis of symmetric quadric matrices satisfying the matrix-side conditions."""
    e = e or default_base_points()
    qmonos = X.monomials_of_degree(2)
    slots = [(jk, m) for jk in SYM_ENTRIES for m in qmonos]

    def mat_of(vec):
        ent = {jk: {} for jk in SYM_ENTRIES}
        for (jk, m), c in zip(slots, vec):
            if c:
                ent[jk][m] = c
        return tuple(tuple(MultiPoly(X, ent[(min(j, k), max(j, k))]) for k in range(3)) for j in range(3))

    conds = []
    for pt in e.points:
        pt = list(pt)
        for r in range(3):
            row = []
            for jk, m in slots:
                j, k = jk
                mono = MultiPoly(X, {m: 1}).evaluate(pt)
                c = mpq(0)
                if j == r:
                    c += mono * pt[k]
                if k == r and j != k:
                    c += mono * pt[j]
                row.append(c)
            conds.append(row)
        for v in range(3):
            row = []
            for jk, m in slots:
                j, k = jk
                dm = MultiPoly(X, {m: 1}).diff(v).evaluate(pt)
                w = 1 if j == k else 2
                row.append(dm * pt[j] * pt[k] * w)
            conds.append(row)
    return [mat_of(v) for v in kernel(conds, len(slots))]


@dataclass(frozen=True)
class MatrixCorrespondence:
    form_dim: int
    matrix_dim: int
    forms_to_matrices_ok: bool
    matrices_to_forms_ok: bool
    round_trip_forms: bool
    round_trip_matrices: bool

    @property
    def bijective(self) -> bool:
        return (self.form_dim == self.matrix_dim and self.forms_to_matrices_ok
                and self.matrices_to_forms_ok and self.round_trip_forms and self.round_trip_matrices)


def _in_span(f: MultiPoly, basis: list[MultiPoly]) -> bool:
    monos = sorted({m for g in basis + [f] for m in g.terms})
    rows = [[g.coeff(m) for m in monos] for g in basis]
    return rank(rows + [[f.coeff(m) for m in monos]]) == rank(rows)


def matrix_correspondence(e: BasePoints | None = None) -> MatrixCorrespondence:
    e = e or default_base_points()
    forms = basis_I_e2_22(e)
    mats = matrix_space(e)
    f2m = [form_to_matrix(f) for f in forms]
    m2f = [matrix_to_form(A) for A in mats]
    return MatrixCorrespondence(
        form_dim=len(forms),
        matrix_dim=len(mats),
        forms_to_matrices_ok=all(matrix_conditions_hold(A, e) for A in f2m),
        matrices_to_forms_ok=all(_in_span(f, forms) for f in m2f),
        round_trip_forms=all(matrix_to_form(A) == f for A, f in zip(f2m, forms)),
        round_trip_matrices=all(form_to_matrix(f) == A for f, A in zip(m2f, mats)),
    )


# ---------------------------------------------------------------------------
# Focal property along lines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FocalResult:
    passed: bool
    degree: int
    squarefree_degree: int
    discriminant: tuple
    chart_degrees: tuple
    known_root_vanishes: bool


def _random_invertible(rng, n: int = 3, bound: int = 5) -> list[list[int]]:
    while True:
        T = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if det(T) != 0:
            return T


def _line_discriminant(data: BilinearMapData, p0, p1, rng, budget: Budget, known_x=None):
    """Discriminant in tau of the elimination polynomial G(U1, tau) of the fiber
    over p0 + tau*p1, in a random coordinate system u on the x-plane."""
    ring = PolyRing(("w", "u2", "u1", "tau"))
    w, u2, u1, tau = ring.gens()
    T = _random_invertible(rng)
    u = [ring.one(), u1, u2]
    xs = [sum((u[j] * T[i][j] for j in range(3)), ring.zero()) for i in range(3)]
    M = [[L.subs(xs, ring) for L in row] for row in data.matrix]
    aug = [row + [tau * p1[k] + p0[k]] for k, row in enumerate(M)]
    eqs = [g for g in minors(aug, 4) if not g.is_zero()]
    h = conic_through(data.e.points, rng).subs(xs, ring)
    ideal = Ideal(eqs + [ring.one() - w * h], ring, budget)
    elim = ideal.eliminate(["w", "u2"])
    sub = elim.ring
    cands = [g for g in elim.gens if g.degree_in("u1") == 2]
    if not cands:
        raise SamplingExhausted("elimination polynomial is not quadratic in the fiber coordinate")
    G = min(cands, key=lambda g: (len(g.terms), g.total_degree()))
    g0, g1, g2 = (_coeff_in(G, "u1", k) for k in range(3))
    D = g1 * g1 - g2 * g0 * 4
    coeffs = D.univariate_coeffs("tau") if not D.is_zero() else []
    known = None
    if known_x is not None:
        Tinv = _inverse(T)
        uk = [sum((Tinv[i][j] * known_x[j] for j in range(3)), mpq(0)) for i in range(3)]
        if uk[0] != 0:
            val = G.subs([sub.const(uk[1] / uk[0]), sub.gen("tau")], sub) \
                if sub.names == ("u1", "tau") else None
            known = val is not None and val.is_zero()
    return coeffs, known


def _coeff_in(g: MultiPoly, var: str, k: int) -> MultiPoly:
    i = g.ring.index(var)
    terms = {}
    for m, c in g.terms.items():
        if m[i] == k:
            mm = list(m)
            mm[i] = 0
            terms[tuple(mm)] = c
    return MultiPoly(g.ring, terms)


def _inverse(T) -> list[list]:
    n = len(T)
    aug = [[QQ(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(T)]
    R, _ = rref(aug)
    return [r[n:] for r in R]


def focal_discriminant(data: BilinearMapData, p0, p1, seed=0, budget: Budget = DEFAULT_BUDGET,
                       known_x=None, charts: int = 2):
    """gcd over random coordinate systems of the fiber discriminants along a line of P4."""
    rng = as_rng(seed)
    g = None
    degs = []
    known_all = True
    for _ in range(charts):
        coeffs, known = _line_discriminant(data, p0, p1, rng, budget, known_x)
        degs.append(udeg(coeffs))
        if known is False:
            known_all = False
        g = coeffs if g is None else ugcd(g, coeffs)
    return umonic(g), tuple(degs), known_all


def focal_square_check(data: BilinearMapData, x, seed=0, budget: Budget = DEFAULT_BUDGET) -> FocalResult:
    """Along a random line of P_x the branch locus is a doubled binary quadric."""
    rng = as_rng(seed)
    if not fiber_injective(data, x):
        raise ValueError("M_x must have rank 3")
    for _ in range(8):
        y0 = [rng.randint(-9, 9) for _ in range(3)]
        y1 = [rng.randint(-9, 9) for _ in range(3)]
        if rank([y0, y1]) < 2:
            continue
        M = data.M(x)
        p0 = [sum((M[k][j] * y0[j] for j in range(3)), mpq(0)) for k in range(5)]
        p1 = [sum((M[k][j] * y1[j] for j in range(3)), mpq(0)) for k in range(5)]
        try:
            D, degs, known = focal_discriminant(data, p0, p1, rng, budget, known_x=list(x))
        except SamplingExhausted:
            continue
        if udeg(D) != 4:
            continue
        sf = udeg(usquarefree(D))
        return FocalResult(sf <= 2 and known is not False, udeg(D), sf, tuple(str(c) for c in D), degs, known)
    raise SamplingExhausted("no admissible line in P_x")


def generic_line_discriminant(data: BilinearMapData, seed=0, budget: Budget = DEFAULT_BUDGET) -> FocalResult:
    """Negative control: the same discriminant along a random line of P4."""
    rng = as_rng(seed)
    for _ in range(8):
        p0 = [QQ(rng.randint(-9, 9)) for _ in range(5)]
        p1 = [QQ(rng.randint(-9, 9)) for _ in range(5)]
        if rank([p0, p1]) < 2:
            continue
        try:
            D, degs, _ = focal_discriminant(data, p0, p1, rng, budget)
        except SamplingExhausted:
            continue
        sf = udeg(usquarefree(D))
        return FocalResult(sf <= 2, udeg(D), sf, tuple(str(c) for c in D), degs, False)
    raise SamplingExhausted("no admissible line in P4")

"""Symmetric 3x3 matrices of plane quadrics with double points at the base
points: their sextic discriminants, nodes, rank loci and Steiner points."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .congruence import X, BasePoints, default_base_points, matrix_space, minors
from .exact import MultiPoly, det, poly_det, quadratic_roots
from .groebner import DEFAULT_BUDGET, Budget, Ideal, projective_count
from .projective import ProjPoint, SamplingExhausted, as_rng, line_restriction, singularity_test


class RankTooLow(ValueError):
    pass


@dataclass(frozen=True)
class QuadricMatrix:
    entries: tuple
    coefficients: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(x if isinstance(x, MultiPoly) else X.const(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 matrix")
        for j in range(3):
            for k in range(3):
                if rows[j][k] != rows[k][j]:
                    raise ValueError("matrix is not symmetric")

    def __getitem__(self, j):
        return self.entries[j]

    def at(self, x) -> list[list]:
        x = list(x.coords if isinstance(x, ProjPoint) else x)
        return [[q.evaluate(x) for q in r] for r in self.entries]

    def scale(self, c) -> QuadricMatrix:
        return QuadricMatrix(tuple(tuple(q.scale(c) for q in r) for r in self.entries))

    def congruent(self, P) -> QuadricMatrix:
        """P^T A P for a constant 3x3 matrix P."""
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = X.zero()
                for k in range(3):
                    for l in range(3):
                        c = P[k][i] * P[l][j]
                        if c:
                            acc = acc + self.entries[k][l].scale(c)
                row.append(acc)
            out.append(tuple(row))
        return QuadricMatrix(tuple(out))

    def upper_triangle(self) -> list[str]:
        return [str(self.entries[j][k]) for j in range(3) for k in range(j, 3)]


@dataclass(frozen=True)
class DiscriminantSextic:
    poly: MultiPoly
    nodes: tuple

    @property
    def degree(self) -> int:
        return self.poly.total_degree()


def combine(basis, weights) -> QuadricMatrix:
    ent = [[X.zero() for _ in range(3)] for _ in range(3)]
    for A, w in zip(basis, weights):
        if w:
            for j in range(3):
                for k in range(3):
                    ent[j][k] = ent[j][k] + A[j][k].scale(w)
    return QuadricMatrix(tuple(tuple(r) for r in ent), tuple(weights))


def discriminant(A: QuadricMatrix, e: BasePoints | None = None) -> DiscriminantSextic:
    e = e or default_base_points()
    D = poly_det([list(r) for r in A.entries])
    if D.is_zero() or D.homogeneous_degree() != 6:
        raise ValueError("discriminant is not a sextic")
    return DiscriminantSextic(D, tuple(ProjPoint(p) for p in e.points))


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodalCertificate:
    base_points_singular: bool
    node_ranks: tuple
    jacobian_count: int
    chart_counts: tuple

    @property
    def passed(self) -> bool:
        return (self.base_points_singular and all(r == 2 for r in self.node_ranks)
                and self.jacobian_count == len(self.node_ranks))


def nodal_certificate(C: DiscriminantSextic, seed=0, budget: Budget = DEFAULT_BUDGET) -> NodalCertificate:
    """Each base point is an ordinary node, and the Jacobian scheme has length
    exactly the number of base points (so there are no other singularities)."""
    rng = as_rng(seed)
    reports = [singularity_test(C.poly, p) for p in C.nodes]
    pc = projective_count(C.poly.gradient(), rng, budget, avoid=[list(p) for p in C.nodes])
    return NodalCertificate(
        all(r.singular for r in reports),
        tuple(r.node_rank for r in reports),
        pc.count,
        pc.counts,
    )


def sample_matrix(e: BasePoints | None = None, seed=0, bound: int = 9,
                  max_attempts: int = 32, budget: Budget = DEFAULT_BUDGET) -> QuadricMatrix:
    """A random integer combination of the 16 basis matrices passing the genericity filters."""
    e = e or default_base_points()
    rng = as_rng(seed)
    basis = matrix_space(e)
    for _ in range(max_attempts):
        w = [rng.randint(-bound, bound) for _ in basis]
        if not any(w):
            continue
        A = combine(basis, w)
        if not accept(A, e, rng, budget):
            continue
        return A
    raise SamplingExhausted("no generic quadric matrix drawn")


def accept(A: QuadricMatrix, e: BasePoints, rng=None, budget: Budget = DEFAULT_BUDGET) -> bool:
    try:
        C = discriminant(A, e)
    except ValueError:
        return False
    return nodal_certificate(C, as_rng(rng if rng is not None else 0), budget).passed


# ---------------------------------------------------------------------------
# Rank stratification and Steiner points
# ---------------------------------------------------------------------------


def rank_floor_certificate(A: QuadricMatrix, budget: Budget = DEFAULT_BUDGET) -> bool:
    """The 2x2 minors of A have no common projective zero (affine cone dimension <= 0)."""
    gens = [g for g in minors([list(r) for r in A.entries], 2) if not g.is_zero()]
    if not gens:
        return False
    return Ideal(gens, X, budget).dimension() <= 0


def adjugate(M) -> list[list]:
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        v = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
        return v if (i + j) % 2 == 0 else -v
    return [[cof(j, i) for j in range(3)] for i in range(3)]


@dataclass(frozen=True)
class SteinerRecord:
    x: ProjPoint
    kernel: ProjPoint


def steiner_point(A: QuadricMatrix, x) -> SteinerRecord:
    M = A.at(x)
    adj = adjugate(M)
    for j in range(3):
        col = [adj[i][j] for i in range(3)]
        if any(col):
            v = ProjPoint(col)
            Av = [sum((M[i][k] * v.coords[k] for k in range(3)), mpq(0)) for i in range(3)]
            if any(Av):
                raise AssertionError("adjugate column is not in the kernel (x not on the discriminant)")
            return SteinerRecord(ProjPoint(x.coords if isinstance(x, ProjPoint) else x), v)
    raise RankTooLow("A(x) has rank below 2")


def points_on_discriminant(C: DiscriminantSextic) -> list[ProjPoint]:
    """Residual intersections of C' with the six lines through pairs of nodes."""
    out = []
    nodes = list(C.nodes)
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            a, b = nodes[i].coords, nodes[j].coords
            q = [bj - aj for aj, bj in zip(a, b)]
            coeffs = line_restriction(C.poly, a, q)
            # vanishes doubly at tau = 0 and tau = 1
            res = _deflate(coeffs, 0, 2)
            res = _deflate(res, 1, 2)
            while res and res[-1] == 0:
                res.pop()
            if len(res) != 3:
                continue
            for t in quadratic_roots(res):
                out.append(ProjPoint([ai + t * qi for ai, qi in zip(a, q)]))
    return out


def _deflate(coeffs, root, times: int) -> list:
    """Divide by (tau - root)^times (synthetic division, exact)."""
    p = list(coeffs)
    for _ in range(times):
        n = len(p) - 1
        out = [mpq(0)] * n
        acc = mpq(0)
        for k in range(n, 0, -1):
            acc = p[k] + acc * root
            out[k - 1] = acc
        if p[0] + acc * root != 0:
            raise ValueError("root does not divide")
        p = out
    return p


def rank_two_on_discriminant(A: QuadricMatrix, C: DiscriminantSextic) -> tuple[int, bool]:
    pts = points_on_discriminant(C)
    ok = all(not C.poly.evaluate(p.coords) for p in pts)
    for p in pts:
        try:
            steiner_point(A, p)
        except RankTooLow:
            ok = False
    return len(pts), ok


def steiner_injectivity(A: QuadricMatrix, C: DiscriminantSextic) -> bool:
    recs = [steiner_point(A, p) for p in points_on_discriminant(C)]
    return len({(r.x, r.kernel) for r in recs}) == len({r.x for r in recs}) == len(recs)


def genus_bookkeeping(degree: int, nodes: int) -> dict:
    pa = (degree - 1) * (degree - 2) // 2
    return {"p_a": pa, "g": pa - nodes}


def det_equivariance(A: QuadricMatrix, P) -> bool:
    lhs = poly_det([list(r) for r in A.congruent(P).entries])
    rhs = poly_det([list(r) for r in A.entries]).scale(det(P) ** 2)
    return lhs == rhs

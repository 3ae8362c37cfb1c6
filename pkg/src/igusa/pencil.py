"""Pencils lambda*a^2 + mu*b spanned by the quartic B and a double quadric:
their 30 nodes on the singular lines of B, quadrics through point sets, and
smoothness certificates along random lines."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .exact import MultiPoly, PolyRing, QQ, QuadExtScalar, kernel, quadratic_roots, ugcd, udeg, usquarefree
from .groebner import DEFAULT_BUDGET, Budget, Ideal
from .igusa_segre import Z5, Z6, build, hat, power_sum, singular_lines, to_chart
from .projective import ProjPoint, ProjSubspace, SamplingExhausted, as_rng, line_restriction, restrict, singularity_test


class NotApplicable(ValueError):
    """The pencil member is B itself or the double quadric."""


class ExcludedPoint(ValueError):
    pass


@dataclass(frozen=True)
class IgusaPencil:
    a: MultiPoly
    a_hat: MultiPoly

    @classmethod
    def from_quadric(cls, a: MultiPoly) -> IgusaPencil:
        if a.ring != Z6 or a.homogeneous_degree() != 2:
            raise ValueError("a must be a quadric in z1..z6")
        ah = hat(a)
        if ah.is_zero():
            raise ValueError("a vanishes identically on s1 = 0")
        return cls(a, ah)

    def member(self, lam, mu) -> MultiPoly:
        """lambda*a^2 + mu*b in the 5-variable chart."""
        return self.a_hat * self.a_hat * QQ(lam) + build()[0].b_hat * QQ(mu)

    def member6(self, lam, mu) -> MultiPoly:
        return self.a * self.a * QQ(lam) + build()[0].b * QQ(mu)


def random_quadric(rng, bound: int = 3) -> MultiPoly:
    monos = Z6.monomials_of_degree(2)
    return MultiPoly(Z6, {m: rng.randint(-bound, bound) for m in monos})


@dataclass(frozen=True)
class NodeRecord:
    line_index: int
    partition: tuple
    discriminant: mpq
    point: ProjPoint

    def to_json(self):
        return {
            "line": self.line_index,
            "d": str(self.point.field_discriminant() or 1),
            "coords": self.point.to_json(),
        }


class Degenerate(ValueError):
    """a restricted to a singular line is zero or has a double root."""


def sing_points(a: MultiPoly) -> list[NodeRecord]:
    """The two zeros of a on each of the 15 singular lines of B."""
    st = PolyRing(("s", "t"))
    out = []
    for idx, L in enumerate(singular_lines()):
        q = restrict(a, L.line, st)
        al, be, ga = q.coeff((2, 0)), q.coeff((1, 1)), q.coeff((0, 2))
        if q.is_zero():
            raise Degenerate(f"a vanishes on line {L.label}")
        disc = be * be - 4 * al * ga
        if disc == 0:
            raise Degenerate(f"a is tangent to line {L.label}")
        r0, r1 = L.line.basis
        if al == 0:
            params = [(mpq(1), mpq(0)), (-ga / be, mpq(1))]
        else:
            params = [(s, mpq(1)) for s in quadratic_roots([ga, be, al])]
        for s, t in params:
            pt = ProjPoint([s * x + t * y for x, y in zip(r0, r1)])
            out.append(NodeRecord(idx, L.partition, disc, pt))
    if len(set(r.point for r in out)) != len(out):
        raise Degenerate("nodes on different lines coincide")
    return out


def node_certificate(pencil: IgusaPencil, lam, mu, p) -> bool:
    """Gradient of the member vanishes at p and the Hessian has rank 4."""
    lam, mu = QQ(lam), QQ(mu)
    if mu == 0:
        raise NotApplicable("the member (1:0) is a double quadric")
    if lam == 0:
        raise NotApplicable("the member (0:1) is B, singular along lines")
    pt = p.point if isinstance(p, NodeRecord) else p
    r = singularity_test(pencil.member(lam, mu), to_chart(pt))
    return r.singular and r.node_rank == 4


# ---------------------------------------------------------------------------
# Quadrics through points and lines
# ---------------------------------------------------------------------------

QUADRIC_MONOS = Z5.monomials_of_degree(2)


def _split_rows(row) -> list[list]:
    """A condition with quadratic-extension entries as rational rows."""
    if not any(isinstance(x, QuadExtScalar) for x in row):
        return [[QQ(x) for x in row]]
    ra = [x.a if isinstance(x, QuadExtScalar) else QQ(x) for x in row]
    rb = [x.b if isinstance(x, QuadExtScalar) else mpq(0) for x in row]
    return [ra, rb]


def quadric_conditions(points=(), lines=()) -> list[list]:
    """Rows of the linear conditions on quadrics of P4 (chart z1..z5)."""
    rows = []
    monos = [MultiPoly(Z5, {m: 1}) for m in QUADRIC_MONOS]
    for p in points:
        c = to_chart(p.point if isinstance(p, NodeRecord) else p)
        rows.extend(_split_rows([m.evaluate(c) for m in monos]))
    st = PolyRing(("s", "t"))
    for L in lines:
        S = L.line if hasattr(L, "line") else L
        S5 = ProjSubspace(4, tuple(r[:5] for r in S.basis))
        restr = [restrict(m, S5, st) for m in monos]
        for e in ((2, 0), (1, 1), (0, 2)):
            rows.append([g.coeff(e) for g in restr])
    return rows


def quadrics_through(points=(), lines=()) -> list[MultiPoly]:
    """Basis of the quadrics of P4 containing the given points and lines."""
    rows = quadric_conditions(points, lines)
    if not rows:
        return [MultiPoly(Z5, {m: 1}) for m in QUADRIC_MONOS]
    ker = kernel(rows, len(QUADRIC_MONOS))
    return [MultiPoly(Z5, {m: c for m, c in zip(QUADRIC_MONOS, v) if c}) for v in ker]


def proportional(f: MultiPoly, g: MultiPoly) -> bool:
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    return f.monic() == g.monic()


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def sample_pencil(seed=0, bound: int = 3, max_attempts: int = 32) -> tuple[IgusaPencil, list[NodeRecord]]:
    """A quadric a passing the genericity filters, with its 30 nodes."""
    rng = as_rng(seed)
    for _ in range(max_attempts):
        a = random_quadric(rng, bound)
        try:
            P = IgusaPencil.from_quadric(a)
            nodes = sing_points(a)
        except (Degenerate, ValueError):
            continue
        Q = quadrics_through(nodes)
        if len(Q) == 1 and proportional(Q[0], P.a_hat):
            return P, nodes
    raise SamplingExhausted("no generic quadric drawn")


# ---------------------------------------------------------------------------
# Smoothness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothnessResult:
    points: int
    lines: int
    all_smooth: bool


def smooth_on_line(f: MultiPoly, base, direction) -> tuple[int, bool]:
    """Number of distinct points of f on the line and whether all are smooth.

    gcd(f|L, df/dz_1|L, ..., df/dz_5|L) = 1 excludes a common root, so no
    intersection point of the line with {f = 0} is singular.
    """
    g = line_restriction(f, base, direction)
    if udeg(g) != f.total_degree():
        return 0, False
    common = g
    for h in f.gradient():
        common = ugcd(common, line_restriction(h, base, direction))
        if udeg(common) == 0:
            break
    return udeg(usquarefree(g)), udeg(common) == 0


def smoothness_sample(pencil: IgusaPencil, lam, mu, seed=0, n: int = 25,
                      nodes=(), max_lines: int = 64) -> SmoothnessResult:
    """Certify smoothness of at least n points of the member on random lines."""
    lam, mu = QQ(lam), QQ(mu)
    if mu == 0:
        raise NotApplicable("the member (1:0) is singular along the whole quadric")
    rng = as_rng(seed)
    f = pencil.member(lam, mu)
    node_pts = [to_chart(r.point if isinstance(r, NodeRecord) else r) for r in nodes]
    total, lines, ok = 0, 0, True
    for _ in range(max_lines):
        if total >= n:
            break
        base = [rng.randint(-9, 9) for _ in range(5)]
        d = [rng.randint(-9, 9) for _ in range(5)]
        if any(ProjSubspace.span_of([base, d]).contains(ProjPoint(p)) for p in node_pts if any(p)):
            continue
        if not any(d) or udeg(line_restriction(f, base, d)) != 4:
            continue
        count, smooth = smooth_on_line(f, base, d)
        lines += 1
        total += count
        ok = ok and smooth
    if total < n:
        raise SamplingExhausted("not enough sample points certified")
    return SmoothnessResult(total, lines, ok)


def is_smooth_at(pencil: IgusaPencil, lam, mu, p, nodes=()) -> bool:
    """Explicit-point smoothness; nodes of the pencil are excluded."""
    pt = p if isinstance(p, ProjPoint) else ProjPoint(p)
    if any(pt == (r.point if isinstance(r, NodeRecord) else r) for r in nodes):
        raise ExcludedPoint("point is one of the 30 nodes")
    if QQ(mu) == 0:
        raise NotApplicable("the member (1:0) is singular along the whole quadric")
    r = singularity_test(pencil.member(lam, mu), to_chart(pt))
    if not r.on_variety:
        raise ValueError("point is not on the member")
    return not r.singular


# ---------------------------------------------------------------------------
# The S6-invariant pencil
# ---------------------------------------------------------------------------


def invariant_member(lam, mu) -> MultiPoly:
    return power_sum(2) ** 2 * QQ(lam) + power_sum(4) * QQ(mu)


def invariant_pencil_check(lam, mu, budget: Budget = DEFAULT_BUDGET) -> int:
    """Affine-cone dimension of the Jacobian ideal of lambda*s2^2 + mu*s4 on s1 = 0."""
    f = hat(invariant_member(lam, mu))
    return Ideal(f.gradient(), Z5, budget).dimension()

"""The S6-invariant quartic b = s4 - s2^2/4 and cubic c = s3 inside {s1 = 0},
with certificates for their singular configurations and the duality map."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq

from .exact import MultiPoly, PolyRing, kernel, rank, var_names
from .groebner import DEFAULT_BUDGET, Budget, Ideal, projective_count
from .projective import (
    ProjPoint,
    ProjSubspace,
    SamplingExhausted,
    as_rng,
    line_restriction,
    restrict,
    sample_point_on,
    singularity_test,
)

Z6 = PolyRing(var_names("z", 6))
Z5 = PolyRing(var_names("z", 5))


def power_sum(k: int, ring: PolyRing = Z6) -> MultiPoly:
    return sum((g ** k for g in ring.gens()), ring.zero())


def hat(f: MultiPoly) -> MultiPoly:
    """Restriction to {s1 = 0} in the chart z6 = -(z1 + ... + z5)."""
    if f.ring != Z6:
        raise ValueError("hat expects a form in z1..z6")
    z = Z5.gens()
    return f.subs(z + [-sum(z, Z5.zero())], Z5)


def to_chart(p) -> tuple:
    """Drop z6 from a point of {s1 = 0}."""
    coords = tuple(p.coords if isinstance(p, ProjPoint) else p)
    if len(coords) != 6 or sum(coords, mpq(0)) != 0:
        raise ValueError("point is not in the hyperplane s1 = 0")
    return coords[:5]


def from_chart(p) -> ProjPoint:
    coords = list(p.coords if isinstance(p, ProjPoint) else p)
    return ProjPoint(coords + [-sum(coords, mpq(0))])


def subspace_to_chart(S: ProjSubspace) -> ProjSubspace:
    return ProjSubspace(4, tuple(r[:5] for r in S.basis))


@dataclass(frozen=True)
class IgusaQuartic:
    b: MultiPoly
    b_hat: MultiPoly


@dataclass(frozen=True)
class SegreCubic:
    c: MultiPoly
    c_hat: MultiPoly


def build() -> tuple[IgusaQuartic, SegreCubic]:
    b = power_sum(4) - power_sum(2) ** 2 / 4
    c = power_sum(3)
    return IgusaQuartic(b, hat(b)), SegreCubic(c, hat(c))


# ---------------------------------------------------------------------------
# Symmetry
# ---------------------------------------------------------------------------

S6_GENERATORS = ((1, 0, 2, 3, 4, 5), (1, 2, 3, 4, 5, 0))


def permute(f: MultiPoly, sigma) -> MultiPoly:
    """f(z_sigma(1), ..., z_sigma(6)) with sigma given as 0-based images."""
    z = f.ring.gens()
    return f.subs([z[sigma[i]] for i in range(len(sigma))], f.ring)


def s6_invariance(f: MultiPoly) -> bool:
    if f.ring.nvars != 6:
        raise ValueError("s6_invariance expects a form in six variables")
    return all(permute(f, g) == f for g in S6_GENERATORS)


def permute_point(p, sigma) -> tuple:
    """Coordinates of p under the substitution z_i -> z_sigma(i) acting on points."""
    coords = p.coords if isinstance(p, ProjPoint) else p
    out = [None] * 6
    for i, s in enumerate(sigma):
        out[s] = coords[i]
    return tuple(out)


def permute_subspace(S: ProjSubspace, sigma) -> ProjSubspace:
    return ProjSubspace(S.ambient, tuple(permute_point(r, sigma) for r in S.basis))


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------


def pair_partitions(n: int = 6) -> list[tuple]:
    """All partitions of {0..n-1} into pairs, in lexicographic order."""
    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for k in range(1, len(rest)):
            pair = (a, rest[k])
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield (pair,) + tail
    return list(rec(tuple(range(n))))


def partition_label(part) -> str:
    return "".join("{" + f"{i + 1}{j + 1}" + "}" for i, j in part)


@dataclass(frozen=True)
class ConfigCertificate:
    """Named objects, an incidence matrix re-derived from coordinates, and counts."""

    kind: str
    rows: tuple
    cols: tuple
    incidence: tuple
    expected_row_sum: int
    expected_col_sum: int
    checks: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.incidence]

    @property
    def col_sums(self) -> list[int]:
        return [sum(r[j] for r in self.incidence) for j in range(len(self.cols))]

    @property
    def passed(self) -> bool:
        return (all(s == self.expected_row_sum for s in self.row_sums)
                and all(s == self.expected_col_sum for s in self.col_sums)
                and all(bool(v) for v in self.checks.values()))

    def to_json(self):
        return {
            "kind": self.kind,
            "rows": list(self.rows),
            "cols": list(self.cols),
            "row_sums": sorted(set(self.row_sums)),
            "col_sums": sorted(set(self.col_sums)),
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "witness": dict(self.witness),
        }


@dataclass(frozen=True)
class SingularLine:
    partition: tuple
    line: ProjSubspace

    @property
    def label(self) -> str:
        return partition_label(self.partition)


def line_of_partition(part) -> ProjSubspace:
    """{z_i = z_j for each pair} inside {s1 = 0}: points (u,u,v,v,w,w), u+v+w = 0."""
    rows = []
    for uvw in ((1, -1, 0), (0, 1, -1)):
        r = [0] * 6
        for (i, j), val in zip(part, uvw):
            r[i] = r[j] = val
        rows.append(tuple(r))
    return ProjSubspace(5, tuple(rows))


def line_is_singular(b_hat: MultiPoly, line: ProjSubspace) -> bool:
    """b_hat and all of its partials vanish identically along the line."""
    L = subspace_to_chart(line)
    st = PolyRing(("s", "t"))
    return all(restrict(g, L, st).is_zero() for g in [b_hat] + b_hat.gradient())


def singular_lines(b_hat: MultiPoly | None = None) -> list[SingularLine]:
    if b_hat is None:
        b_hat = build()[0].b_hat
    out = []
    for part in pair_partitions():
        L = line_of_partition(part)
        if not line_is_singular(b_hat, L):
            raise AssertionError(f"gradient does not vanish on line {partition_label(part)}")
        out.append(SingularLine(part, L))
    if len(set(l.line for l in out)) != len(out):
        raise AssertionError("singular lines are not distinct")
    return out


def triple_points() -> list[tuple]:
    """(pair, point) with -2 at the pair's positions and 1 elsewhere."""
    out = []
    for i, j in itertools.combinations(range(6), 2):
        v = [1] * 6
        v[i] = v[j] = -2
        out.append(((i, j), ProjPoint(v)))
    return out


def point_multiplicity(f: MultiPoly, p, max_order: int = 6) -> int:
    """Smallest k such that some k-th order partial of f is nonzero at p."""
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    layer = [f]
    for k in range(max_order + 1):
        if any(g.evaluate(coords) for g in layer):
            return k
        nxt = {}
        for g in layer:
            for h in g.gradient():
                if not h.is_zero():
                    nxt[h] = None
        layer = list(nxt)
        if not layer:
            break
    raise ValueError("form vanishes to order beyond its degree")


def triple_points_and_cremona_richmond(b_hat: MultiPoly | None = None) -> ConfigCertificate:
    if b_hat is None:
        b_hat = build()[0].b_hat
    lines = singular_lines(b_hat)
    pts = triple_points()
    inc = tuple(tuple(int(L.line.contains(p)) for L in lines) for _, p in pts)
    mult = [point_multiplicity(b_hat, to_chart(p)) for _, p in pts]
    hess = [singularity_test(b_hat, to_chart(p)).node_rank for _, p in pts]
    return ConfigCertificate(
        kind="cremona-richmond",
        rows=tuple(p.to_json().__str__() for _, p in pts),
        cols=tuple(L.label for L in lines),
        incidence=inc,
        expected_row_sum=3,
        expected_col_sum=3,
        checks={
            "15 points": len(set(p for _, p in pts)) == 15,
            "15 lines": len(lines) == 15,
            "all points on b": all(not b_hat.evaluate(to_chart(p)) for _, p in pts),
            "singular on b": all(m >= 2 for m in mult),
        },
        witness={"multiplicities": sorted(set(mult)), "hessian_ranks": sorted(set(hess))},
    )


def segre_nodes() -> list[ProjPoint]:
    out = []
    for neg in itertools.combinations(range(1, 6), 3):
        out.append(ProjPoint([-1 if i in neg else 1 for i in range(6)]))
    return out


def plane_of_partition(part) -> ProjSubspace:
    """{z_i + z_j = 0 for each pair}: spanned by e_i - e_j."""
    rows = []
    for i, j in part:
        r = [0] * 6
        r[i], r[j] = 1, -1
        rows.append(tuple(r))
    return ProjSubspace(5, tuple(rows))


def segre_planes() -> list[tuple]:
    return [(part, plane_of_partition(part)) for part in pair_partitions()]


def segre_configuration(c_hat: MultiPoly | None = None) -> ConfigCertificate:
    if c_hat is None:
        c_hat = build()[1].c_hat
    c = power_sum(3)
    nodes = segre_nodes()
    planes = segre_planes()
    node_ranks = [singularity_test(c_hat, to_chart(p)) for p in nodes]
    uvw = PolyRing(("u", "v", "w"))
    inc = tuple(tuple(int(P.contains(n)) for n in nodes) for _, P in planes)
    return ConfigCertificate(
        kind="segre-15-10",
        rows=tuple(partition_label(part) for part, _ in planes),
        cols=tuple(str(n.to_json()) for n in nodes),
        incidence=inc,
        expected_row_sum=4,
        expected_col_sum=6,
        checks={
            "10 nodes": len(set(nodes)) == 10,
            "15 planes": len(set(P for _, P in planes)) == 15,
            "ordinary nodes": all(r.singular and r.node_rank == 4 for r in node_ranks),
            "c vanishes on planes": all(restrict(c, P, uvw).is_zero() for _, P in planes),
        },
    )


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------


def dual_map(ring: PolyRing = Z6) -> list[MultiPoly]:
    """w_i = z_i^2 - s2/6: the gradient of c/3 reduced into {s1 = 0}."""
    s2 = power_sum(2, ring)
    return [g * g - s2 / 6 for g in ring.gens()]


def image_span(forms: list[MultiPoly]) -> ProjSubspace:
    """Linear span of the image of a polynomial map (span of coefficient vectors)."""
    monos = sorted({m for f in forms for m in f.terms})
    vecs = [tuple(f.coeff(m) for f in forms) for m in monos]
    return ProjSubspace(len(forms) - 1, tuple(vecs))


def dual_contraction(plane: ProjSubspace) -> ProjSubspace:
    """Image line of a Segre plane under z -> w(z)."""
    uvw = PolyRing(("u", "v", "w"))
    coords = plane.parametrize(uvw)
    w = [g.subs(coords, uvw) for g in dual_map()]
    S = image_span(w)
    if S.dim != 1:
        raise AssertionError(f"image of plane spans a P^{S.dim}, expected a line")
    return S


def dual_contraction_certificate() -> dict:
    lines = {L.line: L.partition for L in singular_lines()}
    matches = {}
    images = []
    for part, P in segre_planes():
        img = dual_contraction(P)
        images.append(img)
        matches[partition_label(part)] = lines.get(img) == part
    sigma = (2, 3, 0, 1, 4, 5)
    equivariant = all(
        dual_contraction(permute_subspace(P, sigma)) == permute_subspace(dual_contraction(P), sigma)
        for _, P in segre_planes()
    )
    return {
        "all planes map to lines": len(images) == 15,
        "images match singular lines": all(matches.values()),
        "image set equals line set": set(images) == set(lines),
        "equivariant under (13)(24)": equivariant,
    }


def dual_pullback_membership(budget: Budget = DEFAULT_BUDGET) -> bool:
    b = build()[0].b
    pulled = b.subs(dual_map(), Z6)
    return Ideal([power_sum(3), power_sum(1)], Z6, budget).contains(pulled)


def dual_pullback_samples(seed=0, n: int = 20) -> list[ProjPoint]:
    """Points of {c = s1 = 0} at which b(w) is checked pointwise."""
    rng = as_rng(seed)
    c_hat = build()[1].c_hat
    anchors = [to_chart(p) for p in segre_nodes()]
    return [from_chart(sample_point_on(c_hat, rng, anchors=anchors)) for _ in range(n)]


def dual_pullback_pointwise(seed=0, n: int = 20) -> bool:
    b = build()[0].b
    w = dual_map()
    for p in dual_pullback_samples(seed, n):
        if power_sum(3).evaluate(p.coords) or sum(p.coords, mpq(0)):
            return False
        if b.evaluate([g.evaluate(p.coords) for g in w]):
            return False
    return True


# ---------------------------------------------------------------------------
# Tangent hyperplane sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KummerCount:
    point: ProjPoint
    count: int
    line_hits: int
    p_singular_on_section: bool
    chart_counts: tuple


def smooth_point_of_b(seed=0, max_attempts: int = 32) -> ProjPoint:
    """A smooth rational point of B in the 5-variable chart.

    At a triple point the quadratic part of b is a double hyperplane
    (z_i - z_j)^2, so a line through it inside {z_i = z_j} meets B there to
    order at least 3 and its last intersection point is rational.
    """
    rng = as_rng(seed)
    b, b_hat = build()[0].b, build()[0].b_hat
    pts = triple_points()
    for _ in range(max_attempts):
        (i, j), base = pts[rng.randrange(len(pts))]
        q = [rng.randint(-9, 9) for _ in range(6)]
        q[j] = q[i]
        k = next(m for m in range(6) if m not in (i, j))
        q[k] -= sum(q)
        if rank([list(base.coords), q]) < 2:
            continue
        coeffs = line_restriction(b, base.coords, q)
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) != 2:
            continue
        t = -coeffs[0] / coeffs[1]
        p = ProjPoint(to_chart([a + t * v for a, v in zip(base.coords, q)]))
        if b_hat.evaluate(p.coords):
            raise AssertionError("sampled point is not on B")
        if not singularity_test(b_hat, p).singular:
            return p
    raise SamplingExhausted("no smooth rational point of B found")


def kummer_section_count(seed=0, budget: Budget = DEFAULT_BUDGET) -> KummerCount:
    """Singular points (with multiplicity) of the tangent hyperplane section at a smooth point."""
    rng = as_rng(seed)
    b_hat = build()[0].b_hat
    for _ in range(8):
        p = smooth_point_of_b(rng)
        normal = [g.evaluate(p.coords) for g in b_hat.gradient()]
        T = ProjSubspace.from_equations([normal], 4)
        hits = []
        for L in singular_lines(b_hat):
            m = subspace_to_chart(L.line).meet(T)
            if m.dim == 0:
                hits.append(ProjPoint(m.basis[0]))
        if len(set(hits)) != 15 or p in hits:
            continue
        ring = PolyRing(var_names("t", 4, 0))
        Y = restrict(b_hat, T, ring)
        # coordinates of p in the parametrization of T
        cols = [[r[i] for r in T.basis] + [-p.coords[i]] for i in range(5)]
        w = kernel(cols, len(T.basis) + 1)[0]
        tangent = singularity_test(Y, [c / w[-1] for c in w[:-1]]).singular
        jac = [g for g in Y.gradient() if not g.is_zero()]
        pc = projective_count(jac, rng, budget)
        return KummerCount(p, pc.count, len(set(hits)), tangent, pc.counts)
    raise SamplingExhausted("no tangent hyperplane meeting the 15 lines in distinct points")


def jacobian_dimension(f_hat: MultiPoly, budget: Budget = DEFAULT_BUDGET) -> int:
    """Affine-cone dimension of the singular locus of a form in the 5-variable chart."""
    return Ideal(f_hat.gradient(), f_hat.ring, budget).dimension()

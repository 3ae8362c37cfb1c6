"""Projective points and linear subspaces, restriction of forms, singularity
tests and seeded sampling of exact points on hypersurfaces."""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .exact import (
    MultiPoly,
    PolyRing,
    QQ,
    QuadExtScalar,
    hessian,
    kernel,
    quadratic_roots,
    rank,
    rational_roots,
    rref,
    scalar_to_json,
)


class AmbientMismatch(ValueError):
    pass


class SamplingExhausted(RuntimeError):
    """Resampling budget used up without a usable draw."""


MAX_ATTEMPTS = 32


def as_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


class ProjPoint:
    """A point of P^n with exact homogeneous coordinates, compared up to scale."""

    __slots__ = ("coords", "_norm")

    def __init__(self, coords):
        coords = tuple(c if isinstance(c, QuadExtScalar) else QQ(c) for c in coords)
        if not any(coords):
            raise ValueError("all homogeneous coordinates are zero")
        self.coords = coords
        self._norm = None

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> tuple:
        if self._norm is None:
            lead = next(c for c in self.coords if c)
            out = []
            for c in self.coords:
                v = c / lead
                if isinstance(v, QuadExtScalar) and v.b == 0:
                    v = v.a
                out.append(v)
            self._norm = tuple(out)
        return self._norm

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return len(self.coords) == len(other.coords) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def is_rational(self) -> bool:
        return all(not isinstance(c, QuadExtScalar) for c in self.normalized())

    def field_discriminant(self):
        for c in self.normalized():
            if isinstance(c, QuadExtScalar):
                return c.d
        return None

    def conjugate(self) -> ProjPoint:
        return ProjPoint(c.conjugate() if isinstance(c, QuadExtScalar) else c for c in self.coords)

    def to_json(self):
        return [scalar_to_json(c) for c in self.normalized()]

    def __repr__(self):
        return "ProjPoint(" + ":".join(str(c) for c in self.normalized()) + ")"


# ---------------------------------------------------------------------------
# Linear subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjSubspace:
    """Row span of a rational matrix inside P^ambient, kept in reduced row form."""

    ambient: int
    basis: tuple

    def __post_init__(self):
        rows = [[QQ(x) for x in r] for r in self.basis]
        for r in rows:
            if len(r) != self.ambient + 1:
                raise AmbientMismatch(f"row of length {len(r)} in P^{self.ambient}")
        R, _ = rref(rows) if rows else ([], [])
        object.__setattr__(self, "basis", tuple(tuple(r) for r in R))

    @classmethod
    def span_of(cls, vectors, ambient: int | None = None) -> ProjSubspace:
        vectors = [list(v.coords if isinstance(v, ProjPoint) else v) for v in vectors]
        if ambient is None:
            ambient = len(vectors[0]) - 1
        return cls(ambient, tuple(tuple(v) for v in vectors))

    @classmethod
    def from_equations(cls, equations, ambient: int) -> ProjSubspace:
        eqs = [list(e) for e in equations]
        if not eqs:
            return cls.whole(ambient)
        return cls(ambient, tuple(tuple(v) for v in kernel(eqs, ambient + 1)))

    @classmethod
    def whole(cls, ambient: int) -> ProjSubspace:
        return cls(ambient, tuple(tuple(int(i == j) for j in range(ambient + 1)) for i in range(ambient + 1)))

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def is_empty(self) -> bool:
        return not self.basis

    def equations(self) -> list[list]:
        if not self.basis:
            return [[mpq(int(i == j)) for j in range(self.ambient + 1)] for i in range(self.ambient + 1)]
        return kernel([list(r) for r in self.basis], self.ambient + 1)

    def _check(self, other):
        if other.ambient != self.ambient:
            raise AmbientMismatch(f"P^{self.ambient} vs P^{other.ambient}")

    def span(self, other: ProjSubspace | ProjPoint) -> ProjSubspace:
        if isinstance(other, ProjPoint):
            other = ProjSubspace.span_of([other])
        self._check(other)
        return ProjSubspace(self.ambient, self.basis + other.basis)

    def meet(self, other: ProjSubspace) -> ProjSubspace:
        self._check(other)
        return ProjSubspace.from_equations(self.equations() + other.equations(), self.ambient)

    def contains(self, other: ProjSubspace | ProjPoint) -> bool:
        if isinstance(other, ProjPoint):
            if len(other) != self.ambient + 1:
                raise AmbientMismatch("point has the wrong number of coordinates")
            return all(not sum((e * c for e, c in zip(eq, other.coords)), mpq(0)) for eq in self.equations())
        self._check(other)
        return rank([list(r) for r in self.basis + other.basis]) == len(self.basis)

    def parametrize(self, ring: PolyRing | None = None, prefix: str = "t") -> list[MultiPoly]:
        """Coordinates of the subspace as linear forms in dim+1 parameters."""
        if ring is None:
            ring = PolyRing(tuple(f"{prefix}{i}" for i in range(len(self.basis))))
        if ring.nvars != len(self.basis):
            raise ValueError(f"need {len(self.basis)} parameters")
        params = ring.gens()
        return [sum((params[k] * self.basis[k][i] for k in range(len(self.basis))), ring.zero())
                for i in range(self.ambient + 1)]

    def point(self, weights) -> ProjPoint:
        weights = list(weights)
        return ProjPoint(sum((w * r[i] for w, r in zip(weights, self.basis)), mpq(0)) for i in range(self.ambient + 1))

    def __repr__(self):
        return f"ProjSubspace(P^{self.dim} in P^{self.ambient}, basis={[list(map(str, r)) for r in self.basis]})"

    def to_json(self):
        return [[str(x) for x in r] for r in self.basis]


def restrict(f: MultiPoly, subspace: ProjSubspace, ring: PolyRing | None = None) -> MultiPoly:
    """Pull a form back along the parametrization of a subspace."""
    return substitute_linear(f, subspace.parametrize(ring))


def substitute_linear(p: MultiPoly, images) -> MultiPoly:
    """p after substituting linear (or affine) forms for its variables."""
    images = list(images)
    if len(images) != p.ring.nvars:
        raise ValueError(f"substitution needs {p.ring.nvars} images, got {len(images)}")
    for g in images:
        if isinstance(g, MultiPoly) and g.total_degree() > 1:
            raise ValueError("substitution images must be linear")
    return p.subs(images)


# ---------------------------------------------------------------------------
# Singularities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularityReport:
    on_variety: bool
    singular: bool
    node_rank: int | None


def singularity_test(f: MultiPoly, p: ProjPoint | tuple) -> SingularityReport:
    """Membership, singularity and Hessian rank of a form at a point.

    At a singular point the projective Hessian has the point in its kernel
    (Euler), so its rank equals the rank of the local quadratic part in any
    affine chart.  An ordinary double point of a hypersurface in P^n has rank n.
    """
    if f.homogeneous_degree() is None:
        raise ValueError("singularity_test needs a nonzero homogeneous form")
    coords = p.coords if isinstance(p, ProjPoint) else tuple(p)
    if len(coords) != f.ring.nvars:
        raise AmbientMismatch("point and form live in different projective spaces")
    if f.evaluate(coords):
        return SingularityReport(False, False, None)
    singular = all(not g.evaluate(coords) for g in f.gradient())
    if not singular:
        return SingularityReport(True, False, None)
    H = [[h.evaluate(coords) for h in row] for row in hessian(f)]
    return SingularityReport(True, True, rank(H))


def is_smooth_point(f: MultiPoly, p) -> bool:
    r = singularity_test(f, p)
    if not r.on_variety:
        raise ValueError("point is not on the hypersurface")
    return not r.singular


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


_TAU = PolyRing(("tau",))


def line_restriction(f: MultiPoly, base, direction) -> list:
    """Coefficients (low to high) of f(base + tau*direction)."""
    tau = _TAU.gen(0)
    imgs = [tau.scale(q) + a for a, q in zip(base, direction)]
    return f.subs(imgs, _TAU).univariate_coeffs(0)


def sample_point_on(f: MultiPoly, seed=0, anchors=(), bound: int = 9,
                    max_attempts: int = MAX_ATTEMPTS) -> ProjPoint:
    """A point of {f = 0} with rational or quadratic-extension coordinates.

    Random rational lines are intersected with f; a rational root (or both
    roots of a quadratic residual) gives the point.  ``anchors`` are known
    rational points of high multiplicity on f: lines through them have
    residual degree deg f - mult, which makes exact roots available.
    """
    if f.homogeneous_degree() is None or f.total_degree() < 1:
        raise ValueError("sample_point_on needs a nonconstant form")
    rng = as_rng(seed)
    n = f.ring.nvars
    anchors = [tuple(a.coords if isinstance(a, ProjPoint) else a) for a in anchors]
    for _ in range(max_attempts):
        q = [rng.randint(-bound, bound) for _ in range(n)]
        if anchors:
            base = anchors[rng.randrange(len(anchors))]
        else:
            base = [rng.randint(-bound, bound) for _ in range(n)]
        if not any(q) or rank([list(base), q]) < 2:
            continue
        coeffs = line_restriction(f, base, q)
        if not any(coeffs):
            t = QQ(rng.randint(1, bound))
            return ProjPoint(a + t * b for a, b in zip(base, q))
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            continue
        roots = [r for r in rational_roots_safe(coeffs) if r != 0]
        if not roots and len(coeffs) == 3:
            roots = quadratic_roots(coeffs)
        if not roots:
            continue
        t = roots[rng.randrange(len(roots))]
        pt = [a + t * b for a, b in zip(base, q)]
        if not any(pt):
            continue
        point = ProjPoint(pt)
        if f.evaluate(point.coords):
            raise AssertionError("sampled point is not on the hypersurface")
        return point
    raise SamplingExhausted(f"no exact point found on {max_attempts} random lines")


def rational_roots_safe(coeffs) -> list:
    try:
        return rational_roots(coeffs)
    except ValueError:
        return []

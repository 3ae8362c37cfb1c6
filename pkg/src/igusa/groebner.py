"""Buchberger's algorithm over Q with Gebauer-Moeller pair elimination.

Provides ideal membership, Krull dimension, zero-dimensional solution
counting (with multiplicity), elimination and saturation.  Every computation
runs under an explicit :class:`Budget`; exceeding it raises
:class:`BudgetExceeded` instead of returning anything partial.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from operator import add, sub

from .exact import MultiPoly, PolyRing, exact_quotient, rational_roots, ugcd


class BudgetExceeded(RuntimeError):
    """A Groebner computation hit its S-pair, degree or time cap."""


class NotZeroDimensional(ValueError):
    pass


class CountMismatch(RuntimeError):
    """Two dehomogenizations of a projective system disagree (points at infinity)."""


@dataclass(frozen=True)
class Budget:
    max_spairs: int = 50_000
    max_degree: int = 60
    max_seconds: float | None = None

    def deadline(self) -> float | None:
        return None if self.max_seconds is None else time.monotonic() + self.max_seconds


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------


def _grevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, or a block order eliminating ``block`` (variable indices).

    The block order compares the eliminated variables by grevlex first and
    breaks ties by grevlex on the remaining ones.
    """

    kind: str = "grevlex"
    block: tuple = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "block", tuple(self.block))
        if self.kind == "block" and not self.block:
            raise ValueError("block order needs at least one eliminated variable")

    @classmethod
    def elimination(cls, ring: PolyRing, variables) -> MonomialOrder:
        return cls("block", tuple(sorted(ring.index(v) for v in variables)))

    def key_function(self, nvars: int):
        if self.kind == "grevlex":
            return _grevlex
        if self.kind == "lex":
            return lambda e: e
        first = self.block
        rest = tuple(i for i in range(nvars) if i not in first)

        def key(e):
            a = [e[i] for i in first]
            b = [e[i] for i in rest]
            return (_grevlex(a), _grevlex(b))

        return key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# Core on raw dict polynomials
# ---------------------------------------------------------------------------


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(map(max, a, b))


class _Engine:
    def __init__(self, nvars: int, order: MonomialOrder, budget: Budget):
        self.n = nvars
        self.key = order.key_function(nvars)
        self.budget = budget
        self.deadline = budget.deadline()
        self.spairs = 0

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"time budget of {self.budget.max_seconds}s exceeded")

    def lead(self, p: dict):
        return max(p, key=self.key)

    def monic(self, p: dict):
        lm = self.lead(p)
        c = p[lm]
        if c == 1:
            return p
        inv = 1 / c
        return {m: v * inv for m, v in p.items()}

    def sorted_terms(self, p: dict):
        return sorted(p.items(), key=lambda t: self.key(t[0]), reverse=True)

    def reduce(self, p: dict, basis: list, full: bool = True) -> dict:
        """Normal form of p modulo basis (entries: (lm, tail terms) of monic polys)."""
        p = dict(p)
        rem = {}
        key = self.key
        steps = 0
        while p:
            m = max(p, key=key)
            c = p.pop(m)
            for gm, tail in basis:
                if _divides(gm, m):
                    q = tuple(map(sub, m, gm))
                    for mm, cc in tail:
                        k = tuple(map(add, mm, q))
                        v = p.get(k)
                        if v is None:
                            p[k] = -c * cc
                        else:
                            v = v - c * cc
                            if v:
                                p[k] = v
                            else:
                                del p[k]
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(p)
                    return rem
            steps += 1
            if steps % 2000 == 0:
                self.check_time()
        return rem

    def entry(self, p: dict):
        terms = self.sorted_terms(p)
        return terms[0][0], terms[1:]

    def spoly(self, f: dict, g: dict, mf, mg) -> dict:
        m = _lcm(mf, mg)
        qf = tuple(map(sub, m, mf))
        qg = tuple(map(sub, m, mg))
        out = {}
        for mm, c in f.items():
            if mm != mf:
                out[tuple(map(add, mm, qf))] = c
        for mm, c in g.items():
            if mm == mg:
                continue
            k = tuple(map(add, mm, qg))
            v = out.get(k, 0) - c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def groebner(self, polys: list[dict]) -> list[dict]:
        f = [self.monic(p) for p in polys if p]
        if not f:
            return []
        # inter-reduce the input first; it usually shrinks the pair set
        f.sort(key=lambda p: self.key(self.lead(p)))
        changed = True
        while changed:
            changed = False
            for i in range(len(f)):
                others = [self.entry(g) for j, g in enumerate(f) if j != i]
                r = self.reduce(f[i], others)
                if r != f[i]:
                    changed = True
                    if r:
                        f[i] = self.monic(r)
                    else:
                        f.pop(i)
                    break
        lms = [self.lead(p) for p in f]
        entries = [self.entry(p) for p in f]

        def update(G: set, B: set, ih: int):
            mh = lms[ih]
            C = set(G)
            D = set()
            while C:
                ig = C.pop()
                mg = lms[ig]
                lcm_hg = _lcm(mh, mg)

                def lcm_divides(ip):
                    return _divides(_lcm(mh, lms[ip]), lcm_hg)

                coprime = tuple(map(add, mh, mg)) == lcm_hg
                if coprime or (not any(lcm_divides(ipx) for ipx in C) and not any(lcm_divides(pr[1]) for pr in D)):
                    D.add((ih, ig))
            E = set()
            for ih_, ig in D:
                mg = lms[ig]
                if tuple(map(add, mh, mg)) != _lcm(mh, mg):
                    E.add((ih_, ig))
            B_new = set()
            for ig1, ig2 in B:
                mg1, mg2 = lms[ig1], lms[ig2]
                lcm12 = _lcm(mg1, mg2)
                if not _divides(mh, lcm12) or _lcm(mg1, mh) == lcm12 or _lcm(mg2, mh) == lcm12:
                    B_new.add((ig1, ig2))
            B_new |= E
            G_new = {ig for ig in G if not _divides(mh, lms[ig])}
            G_new.add(ih)
            return G_new, B_new

        G: set = set()
        B: set = set()
        for i in range(len(f)):
            G, B = update(G, B, i)
        key = self.key
        while B:
            # normal selection strategy: smallest lcm first
            pair = min(B, key=lambda pr: (key(_lcm(lms[pr[0]], lms[pr[1]])), pr))
            B.remove(pair)
            self.spairs += 1
            if self.spairs > self.budget.max_spairs:
                raise BudgetExceeded(f"more than {self.budget.max_spairs} S-pairs")
            self.check_time()
            i, j = pair
            h = self.spoly(f[i], f[j], lms[i], lms[j])
            h = self.reduce(h, [entries[k] for k in sorted(G)])
            if not h:
                continue
            h = self.monic(h)
            deg = max(sum(m) for m in h)
            if deg > self.budget.max_degree:
                raise BudgetExceeded(f"intermediate degree {deg} above cap {self.budget.max_degree}")
            f.append(h)
            lms.append(self.lead(h))
            entries.append(self.entry(h))
            G, B = update(G, B, len(f) - 1)
        # minimal then reduced basis
        basis = [f[i] for i in G]
        basis.sort(key=lambda p: key(self.lead(p)))
        minimal = []
        for p in basis:
            lm = self.lead(p)
            if not any(_divides(self.lead(q), lm) for q in minimal):
                minimal.append(p)
        reduced = []
        for i, p in enumerate(minimal):
            others = [self.entry(q) for j, q in enumerate(minimal) if j != i]
            lm = self.lead(p)
            tail = {m: c for m, c in p.items() if m != lm}
            r = self.reduce(tail, others)
            r[lm] = p[lm]
            reduced.append(self.monic(r))
        reduced.sort(key=lambda p: key(self.lead(p)), reverse=True)
        return reduced


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis; generators are monic and sorted by leading monomial (descending)."""

    ring: PolyRing
    order: MonomialOrder
    polys: tuple
    spairs: int = field(default=0, compare=False)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    @property
    def key(self):
        return self.order.key_function(self.ring.nvars)

    def leading_monomials(self) -> list[tuple]:
        key = self.key
        return [max(p.terms, key=key) for p in self.polys]

    def is_unit(self) -> bool:
        return any(p.is_constant() and not p.is_zero() for p in self.polys)

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        if p.ring != self.ring:
            raise ValueError("polynomial and basis live in different rings")
        eng = _Engine(self.ring.nvars, self.order, DEFAULT_BUDGET)
        basis = [eng.entry(g.terms) for g in self.polys]
        return MultiPoly(self.ring, eng.reduce(p.terms, basis), _clean=True)

    def contains(self, p: MultiPoly) -> bool:
        return self.normal_form(p).is_zero()

    def dimension(self) -> int:
        """Krull dimension of the affine zero set (-1 for the unit ideal)."""
        if self.is_unit():
            return -1
        n = self.ring.nvars
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in self.leading_monomials()]
        for size in range(n, -1, -1):
            for S in itertools.combinations(range(n), size):
                s = frozenset(S)
                if not any(sup <= s for sup in supports):
                    return size
        return 0

    def is_zero_dimensional(self) -> bool:
        n = self.ring.nvars
        pure = set()
        for m in self.leading_monomials():
            nz = [i for i, e in enumerate(m) if e]
            if len(nz) == 1:
                pure.add(nz[0])
        return len(pure) == n or self.is_unit()

    def standard_monomials(self) -> list[tuple]:
        if not self.is_zero_dimensional():
            raise NotZeroDimensional("ideal is not zero-dimensional")
        if self.is_unit():
            return []
        lms = self.leading_monomials()
        n = self.ring.nvars
        out = []

        def walk(i, e):
            if i == n:
                out.append(tuple(e))
                return
            k = 0
            while True:
                e[i] = k
                probe = e[: i + 1] + [0] * (n - i - 1)
                if any(_divides(lm, probe) for lm in lms):
                    break
                walk(i + 1, e)
                k += 1
            e[i] = 0

        walk(0, [0] * n)
        return out

    def quotient_dimension(self) -> int:
        """Number of solutions counted with multiplicity (zero-dimensional ideals only)."""
        return len(self.standard_monomials())


def buchberger(gens, order: MonomialOrder = GREVLEX, budget: Budget = DEFAULT_BUDGET) -> GroebnerBasis:
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    eng = _Engine(ring.nvars, order, budget)
    raw = eng.groebner([g.terms for g in gens if not g.is_zero()])
    polys = tuple(MultiPoly(ring, p, _clean=True) for p in raw)
    return GroebnerBasis(ring, order, polys, eng.spairs)


class Ideal:
    """Finitely generated ideal of Q[vars]; Groebner bases are cached per order."""

    def __init__(self, gens, ring: PolyRing | None = None, budget: Budget = DEFAULT_BUDGET):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise ValueError("ring required for the zero ideal")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring
        self.gens = tuple(g for g in gens if not g.is_zero())
        self.budget = budget
        self._gb: dict = {}

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"

    def is_zero(self) -> bool:
        return not self.gens

    def groebner(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        if order not in self._gb:
            if not self.gens:
                self._gb[order] = GroebnerBasis(self.ring, order, ())
            else:
                self._gb[order] = buchberger(self.gens, order, self.budget)
        return self._gb[order]

    def contains(self, p: MultiPoly) -> bool:
        if p.is_zero():
            return True
        if not self.gens:
            return False
        return self.groebner().contains(p)

    def dimension(self) -> int:
        if not self.gens:
            return self.ring.nvars
        return self.groebner().dimension()

    def quotient_dimension(self) -> int:
        return self.groebner().quotient_dimension()

    def eliminate(self, variables) -> Ideal:
        """Generators of the ideal intersected with the subring without ``variables``."""
        idx = sorted({self.ring.index(v) for v in variables})
        keep = [n for i, n in enumerate(self.ring.names) if i not in idx]
        sub = PolyRing(tuple(keep))
        if not idx:
            return Ideal(self.gens, self.ring, self.budget)
        if not self.gens:
            return Ideal([], sub, self.budget)
        gb = self.groebner(MonomialOrder("block", tuple(idx)))
        out = []
        for p in gb:
            if all(not any(m[i] for i in idx) for m in p.terms):
                out.append(p.rename(sub))
        return Ideal(out, sub, self.budget)

    def saturate(self, h: MultiPoly, var: str = "_sat") -> Ideal:
        """(I : h^infinity) via the Rabinowitsch trick."""
        big = PolyRing((var,) + self.ring.names)
        w = big.gen(0)
        gens = [g.rename(big) for g in self.gens] + [big.one() - w * h.rename(big)]
        return Ideal(gens, big, self.budget).eliminate([var]).with_ring(self.ring)

    def with_ring(self, ring: PolyRing) -> Ideal:
        return Ideal([g.rename(ring) for g in self.gens], ring, self.budget)

    def __add__(self, other) -> Ideal:
        extra = list(other.gens) if isinstance(other, Ideal) else list(other)
        return Ideal(list(self.gens) + extra, self.ring, self.budget)


def membership(p: MultiPoly, ideal: Ideal) -> bool:
    return ideal.contains(p)


def dimension(ideal: Ideal) -> int:
    return ideal.dimension()


def quotient_dimension(ideal: Ideal) -> int:
    return ideal.quotient_dimension()


def eliminate(ideal: Ideal, variables) -> Ideal:
    return ideal.eliminate(variables)


# ---------------------------------------------------------------------------
# Derived tools
# ---------------------------------------------------------------------------


def poly_gcd(f: MultiPoly, g: MultiPoly, budget: Budget = DEFAULT_BUDGET) -> MultiPoly:
    """Monic-up-to-content gcd of two polynomials via lcm = (f) cap (g)."""
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    used = set(f.variables()) | set(g.variables())
    if len(used) == 1:
        v = used.pop()
        c = ugcd(f.univariate_coeffs(v), g.univariate_coeffs(v))
        return MultiPoly.from_univariate(f.ring, c, v).primitive()
    big = PolyRing(("_t",) + f.ring.names)
    t = big.gen(0)
    F, G = f.rename(big), g.rename(big)
    inter = Ideal([t * F, (big.one() - t) * G], big, budget).eliminate(["_t"])
    lcm = min(inter.gens, key=lambda p: (p.total_degree(), len(p.terms))).rename(f.ring)
    return exact_quotient(f * g, lcm).primitive()


def dehomogenize(gens, hyperplane_coeffs) -> Ideal:
    """Affine chart {l = 1} of a projective system of forms (adds l - 1)."""
    gens = list(gens)
    ring = gens[0].ring
    ell = ring.linear_form(hyperplane_coeffs)
    return Ideal(gens + [ell - 1], ring)


def random_hyperplane(nvars: int, rng: random.Random, bound: int = 7) -> list[int]:
    while True:
        c = [rng.randint(-bound, bound) for _ in range(nvars)]
        if any(c):
            return c


@dataclass(frozen=True)
class ProjectiveCount:
    count: int
    hyperplanes: tuple
    counts: tuple


def projective_count(gens, rng: random.Random, budget: Budget = DEFAULT_BUDGET,
                     saturate_by: MultiPoly | None = None, charts: int = 2,
                     max_charts: int = 6, avoid=()) -> ProjectiveCount:
    """Projective solution count (with multiplicity) of homogeneous ``gens``.

    A chart {l = 1} loses exactly the solutions on {l = 0}, so chart counts
    never exceed the projective count.  Random charts are drawn until the
    largest count seen has been reached in ``charts`` of them.  Charts
    vanishing at a point of ``avoid`` (known solutions) are redrawn.
    """
    gens = list(gens)
    ring = gens[0].ring
    for g in gens:
        if not g.is_zero() and g.homogeneous_degree() is None:
            raise ValueError("projective_count needs homogeneous generators")
    counts = []
    hyps = []
    for _ in range(max_charts):
        h = random_hyperplane(ring.nvars, rng)
        while any(sum(c * x for c, x in zip(h, pt)) == 0 for pt in avoid):
            h = random_hyperplane(ring.nvars, rng)
        ideal = dehomogenize(gens, h)
        ideal.budget = budget
        if saturate_by is not None:
            ideal = ideal.saturate(saturate_by)
            ideal.budget = budget
        counts.append(ideal.quotient_dimension())
        hyps.append(tuple(h))
        if counts.count(max(counts)) >= charts:
            return ProjectiveCount(max(counts), tuple(hyps), tuple(counts))
    raise CountMismatch(f"chart counts never stabilized: {counts}")


def rational_solutions(ideal: Ideal) -> list[tuple]:
    """All rational points of a zero-dimensional ideal (lex elimination, back substitution)."""
    ring = ideal.ring
    gb = ideal.groebner(LEX)
    if gb.is_unit():
        return []
    if not gb.is_zero_dimensional():
        raise NotZeroDimensional("rational_solutions needs a zero-dimensional ideal")
    last = ring.nvars - 1
    uni = [p for p in gb if all(not any(m[:last]) for m in p.terms)]
    if ring.nvars == 1:
        return [(r,) for r in rational_roots(uni[0].univariate_coeffs(0))]
    sub = PolyRing(ring.names[:last])
    out = []
    for r in rational_roots(uni[0].univariate_coeffs(last)):
        imgs = list(sub.gens()) + [sub.const(r)]
        spec = [p.subs(imgs, sub) for p in gb]
        spec = [p for p in spec if not p.is_zero()]
        if any(p.is_constant() for p in spec):
            continue
        if not spec:
            raise NotZeroDimensional("positive-dimensional fiber after substitution")
        for sol in rational_solutions(Ideal(spec, sub, ideal.budget)):
            out.append(tuple(sol) + (r,))
    return out

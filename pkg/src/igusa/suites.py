"""The verification suites: each check returns (passed, witness)."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from . import congruence as cg
from . import conic_bundle as cb
from . import igusa_segre as ig
from . import pencil as pn
from .exact import QQ
from .groebner import Ideal
from .report import RunOptions, SuiteReport, run_check
from .schlaefli import SchlaefliConfig, degree_bookkeeping, theorem_d_lemmas


@dataclass(frozen=True)
class Check:
    id: str
    paper_ref: str
    fn: object
    slow: bool = False


# ---------------------------------------------------------------------------
# igusa
# ---------------------------------------------------------------------------


def _b_invariant(opts, rng):
    B, _ = ig.build()
    ok = ig.s6_invariance(B.b) and B.b.homogeneous_degree() == 4
    return ok, {"terms": len(B.b.terms), "degree": B.b.total_degree()}


def _singular_lines(opts, rng):
    lines = ig.singular_lines()
    return len(lines) == 15 and len(set(L.line for L in lines)) == 15, {
        "count": len(lines), "labels": [L.label for L in lines]}


def _cremona_richmond(opts, rng):
    cert = ig.triple_points_and_cremona_richmond()
    return cert.passed and len(cert.rows) == 15 and len(cert.cols) == 15, cert.to_json()


def _lines_s6_stable(opts, rng):
    lines = {L.line for L in ig.singular_lines()}
    ok = all(ig.permute_subspace(L, g) in lines for L in lines for g in ig.S6_GENERATORS)
    return ok, {"lines": len(lines)}


def _jacobian_b(opts, rng):
    B, _ = ig.build()
    d = ig.jacobian_dimension(B.b_hat, opts.budget)
    return d == 2, {"affine_cone_dimension": d}


# ---------------------------------------------------------------------------
# segre
# ---------------------------------------------------------------------------


def _c_invariant(opts, rng):
    _, C = ig.build()
    return ig.s6_invariance(C.c) and C.c.homogeneous_degree() == 3, {"degree": 3}


def _segre_config(opts, rng):
    cert = ig.segre_configuration()
    ok = cert.passed and len(cert.rows) == 15 and len(cert.cols) == 10
    return ok, cert.to_json()


def _dual_contraction(opts, rng):
    res = ig.dual_contraction_certificate()
    return all(res.values()), res


def _dual_membership(opts, rng):
    ok = ig.dual_pullback_membership(opts.budget)
    return ok, {"b(w) in (c, s1)": ok}


def _dual_pointwise(opts, rng):
    n = opts.count(20)
    ok = ig.dual_pullback_pointwise(rng, n)
    return ok, {"points": n}


# ---------------------------------------------------------------------------
# schlaefli
# ---------------------------------------------------------------------------


def _cfg():
    return SchlaefliConfig()


def _neighborhoods(opts, rng):
    cfg = _cfg()
    splits = {(len(cfg.neighborhood(l)["incident"]), len(cfg.neighborhood(l)["disjoint"])) for l in cfg.labels}
    sym = all(cfg.meets(l, m) == cfg.meets(m, l) for l in cfg.labels for m in cfg.labels)
    return len(cfg.labels) == 27 and splits == {(10, 16)} and sym, {
        "lines": len(cfg.labels), "splits": sorted(splits), "a1": cfg.neighborhood("a1")}


def _double_sixes(opts, rng):
    cfg = _cfg()
    per_line = {len(cfg.double_sixes_containing(l)) for l in cfg.labels}
    axioms = all(cfg.is_double_six(D) for D in cfg.double_sixes)
    ok = len(cfg.double_sixes) == 36 and per_line == {16} and axioms
    return ok, {"double_sixes": len(cfg.double_sixes), "per_line": sorted(per_line), "axioms": axioms}


def _trios(opts, rng):
    cfg = _cfg()
    per_line = {len(cfg.trios_through(l)) for l in cfg.labels}
    return len(cfg.trios) == 45 and per_line == {5}, {"trios": len(cfg.trios), "per_line": sorted(per_line)}


def _five_lines(opts, rng):
    cfg = _cfg()
    pairs = cfg.disjoint_pairs(ordered=True)
    ok = True
    for l, n in pairs:
        five = cfg.five_lines_lemma(l, n)
        six = [l] + five
        if len(five) != 5 or any(cfg.meets(x, y) for i, x in enumerate(six) for y in six[i + 1:]):
            ok = False
    return ok, {"ordered_pairs": len(pairs), "unordered_pairs": len(pairs) // 2,
                "a1,b1": cfg.five_lines_lemma("a1", "b1")}


def _unique_double_six(opts, rng):
    cfg = _cfg()
    ok = True
    for l, n in cfg.disjoint_pairs(ordered=True):
        D = cfg.unique_double_six(l, n)
        sep = cfg.separating_double_sixes(l, n)
        if len(sep) != 1 or sep[0].key() != D.key():
            ok = False
    return ok, {"a1,b1": cfg.unique_double_six("a1", "b1").to_json()}


def _theorem_d(opts, rng):
    res = theorem_d_lemmas(_cfg())
    ok = res["max_disjoint"] == 6 and res["five_five_five"] and res["unique_double_six"]
    return ok, res


def _automorphisms(opts, rng):
    cfg = _cfg()
    G = cfg.automorphism_group
    orbits = (len(G.line_orbit()), len(G.double_six_orbit()), len(G.trio_orbit()))
    ds_keys = {D.key() for D in cfg.double_sixes}
    trios = set(cfg.trios)
    spot = True
    for _ in range(opts.count(100)):
        g = G.random_element(rng)
        if not cfg.is_automorphism(g):
            spot = False
        if any(G.act_double_six(g, D) not in ds_keys for D in cfg.double_sixes):
            spot = False
        if any(G.act(g, t) not in trios for t in cfg.trios):
            spot = False
    stab = G.order // orbits[1]
    ok = G.order == 51840 and orbits == (27, 36, 45) and spot and stab == 1440
    return ok, {"order": G.order, "orbits": list(orbits), "stabilizer_of_double_six": stab,
                "chain_orbit_sizes": list(G.orbit_sizes), "random_elements_act": spot}


def _bookkeeping(opts, rng):
    d = degree_bookkeeping(_cfg())
    ok = (d["split_total"] == 27 and d["incidences_by_sixes"] == d["incidences_by_lines"] == 432
          and d["incidences_enumerated"] == 432 and d["two_torsion_times_trios"] == 80
          and d["double_sixes"] == 36 and d["double_sixes_per_line"] == 16)
    return ok, d


# ---------------------------------------------------------------------------
# congruence
# ---------------------------------------------------------------------------


def _basis11(opts, rng):
    dims = [len(cg.basis_I_e_11().forms)]
    for _ in range(5):
        dims.append(len(cg.basis_I_e_11(cg.BasePoints.random(rng)).forms))
    return set(dims) == {5}, {"dimensions": dims}


def _fibers(opts, rng):
    data = cg.basis_I_e_11()
    n = opts.count(20)
    counts, found = [], []
    for _ in range(n):
        x, y, p = cg.random_preimage(data, rng)
        fc = cg.fiber_count(data, p, rng, known=(x, y), budget=opts.budget)
        counts.append(fc.count)
        found.append(fc.known_preimage_found)
    return set(counts) == {2} and all(found), {"samples": n, "counts": sorted(set(counts)),
                                              "known_preimage_found": all(found)}


def _order(opts, rng):
    data = cg.basis_I_e_11()
    n = opts.count(20)
    counts = []
    for _ in range(n):
        p = cg.random_image_point(data, rng)
        counts.append(cg.order_check(data, p, rng, opts.budget).count)
    x, y, p = cg.random_preimage(data, rng)
    on_plane = cg.plane_of(data, x).plane.contains(p)
    return set(counts) == {2} and on_plane, {"samples": n, "counts": sorted(set(counts)),
                                            "known_plane_contains_point": on_plane}


def _basis22(opts, rng):
    dims, bij = [], []
    for e in [cg.default_base_points()] + [cg.BasePoints.random(rng) for _ in range(5)]:
        forms = cg.basis_I_e2_22(e)
        dims.append(len(forms))
        bij.append(cg.matrix_correspondence(e).bijective
                   and all(cg.double_point_conditions_hold(f, e) for f in forms))
    return set(dims) == {16} and all(bij), {"dimensions": dims, "bijection": all(bij)}


def _focal(opts, rng):
    data = cg.basis_I_e_11()
    n = opts.count(10)
    results = []
    for _ in range(n):
        x, _, _ = cg.random_preimage(data, rng)
        r1 = cg.focal_square_check(data, x, rng, opts.budget)
        r2 = cg.focal_square_check(data, x, rng, opts.budget)
        results.append((r1, r2))
    ok = all(r.passed and r.degree == 4 for pair in results for r in pair)
    control = cg.generic_line_discriminant(data, rng, opts.budget)
    ok = ok and control.degree == 4 and control.squarefree_degree == 4
    return ok, {
        "draws": n,
        "lines_per_plane": 2,
        "degrees": sorted({r.degree for pair in results for r in pair}),
        "squarefree_degrees": sorted({r.squarefree_degree for pair in results for r in pair}),
        "generic_line_control": {"degree": control.degree, "squarefree_degree": control.squarefree_degree},
    }


# ---------------------------------------------------------------------------
# conic bundles
# ---------------------------------------------------------------------------


def _conic_bundles(opts, rng):
    e = cg.default_base_points()
    n = opts.count(5)
    rows = []
    ok = True
    for _ in range(n):
        A = cb.sample_matrix(e, rng, budget=opts.budget)
        C = cb.discriminant(A, e)
        cert = cb.nodal_certificate(C, rng, opts.budget)
        floor = cb.rank_floor_certificate(A, opts.budget)
        npts, rank2 = cb.rank_two_on_discriminant(A, C)
        kernels = all(cb.steiner_point(A, p).kernel == p for p in C.nodes)
        inj = cb.steiner_injectivity(A, C)
        genus = cb.genus_bookkeeping(C.degree, len([r for r in cert.node_ranks if r == 2]))
        P = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        equi = cb.det_equivariance(A, P)
        row = {"degree": C.degree, "nodes_ordinary": cert.passed, "jacobian_count": cert.jacobian_count,
               "rank_le_1_empty": floor, "rank2_points": npts, "rank2_ok": rank2,
               "kernel_at_e": kernels, "steiner_injective": inj, "genus": genus, "equivariant": equi}
        rows.append(row)
        ok = ok and C.degree == 6 and cert.passed and floor and rank2 and npts >= 10 and kernels \
            and inj and genus == {"p_a": 10, "g": 6} and equi
    return ok, {"samples": rows}


def _conic_negative(opts, rng):
    """A matrix outside the 16-space: the discriminant no longer vanishes at e."""
    e = cg.default_base_points()
    A = cb.sample_matrix(e, rng, budget=opts.budget)
    bump = cg.X.gen(0) * cg.X.gen(1)
    ent = [list(r) for r in A.entries]
    ent[0][0] = ent[0][0] + bump
    B = cb.QuadricMatrix(tuple(tuple(r) for r in ent))
    D = cb.poly_det([list(r) for r in B.entries])
    moved = any(D.evaluate(list(p)) for p in e.points)
    const = [[1, 2, 3], [2, 4, 6], [3, 6, 9]]
    q = cg.X.gen(0) ** 2 + cg.X.gen(1) * cg.X.gen(2)
    R = cb.QuadricMatrix(tuple(tuple(q.scale(c) for c in r) for r in const))
    floor_fails = not cb.rank_floor_certificate(R, opts.budget)
    return moved and floor_fails, {"nodes_leave_e": moved, "rank_one_matrix_rejected": floor_fails}


# ---------------------------------------------------------------------------
# pencils
# ---------------------------------------------------------------------------


def _pencils(opts, rng):
    n = opts.count(5)
    lines = ig.singular_lines()
    sing_b = len(pn.quadrics_through(lines=lines))
    rows = []
    ok = sing_b == 0
    for _ in range(n):
        P, nodes = pn.sample_pencil(rng)
        lam, mu = QQ(rng.randint(1, 9)), QQ(rng.choice([-1, 1]) * rng.randint(1, 9))
        certs = [pn.node_certificate(P, lam, mu, r) for r in nodes]
        on_both = all(not ig.build()[0].b.evaluate(r.point.coords) and not P.a.evaluate(r.point.coords)
                      for r in nodes)
        Q = pn.quadrics_through(nodes)
        spanned = len(Q) == 1 and pn.proportional(Q[0], P.a_hat)
        sm = pn.smoothness_sample(P, lam, mu, rng, opts.count(25), nodes)
        irr = sum(1 for r in nodes if not r.point.is_rational())
        rows.append({"nodes": len(nodes), "irrational_nodes": irr, "ordinary": all(certs),
                     "on_a_and_b": on_both, "quadrics_through_nodes": len(Q), "spanned_by_a": spanned,
                     "smooth_points": sm.points, "smooth": sm.all_smooth, "member": [str(lam), str(mu)]})
        ok = ok and len(nodes) == 30 and all(certs) and on_both and spanned and sm.all_smooth and sm.points >= 25
    pts = [[QQ(rng.randint(-9, 9)) for _ in range(5)] for _ in range(30)]
    random_pts = [ig.from_chart(p) for p in pts if any(p)]
    control = len(pn.quadrics_through(random_pts))
    ok = ok and control == 0
    return ok, {"quadrics_through_sing_b": sing_b, "random_points_control": control, "samples": rows}


# ---------------------------------------------------------------------------
# slow
# ---------------------------------------------------------------------------


def _kummer(opts, rng):
    k = ig.kummer_section_count(rng, opts.budget)
    ok = k.count == 16 and k.line_hits == 15 and k.p_singular_on_section
    return ok, {"point": k.point.to_json(), "count": k.count, "line_hits": k.line_hits,
                "point_singular_on_section": k.p_singular_on_section, "chart_counts": list(k.chart_counts)}


def _invariant_pencil(opts, rng):
    d11 = pn.invariant_pencil_check(1, 1, opts.budget)
    dB = pn.invariant_pencil_check(-mpq(1, 4), 1, opts.budget)
    inv = ig.s6_invariance(pn.invariant_member(1, 1))
    return d11 <= 1 and dB == 2 and inv, {"(1:1)": d11, "(-1/4:1)": dB, "s6_invariant": inv}


def _class_three(opts, rng):
    c = cg.class_check(cg.basis_I_e_11(), rng, opts.budget)
    return c.count == 3, {"count": c.count, "chart_counts": list(c.chart_counts), "reading": "plane"}


def _pencil_jacobian(opts, rng):
    P, nodes = pn.sample_pencil(rng)
    f = P.member(1, 1)
    d = Ideal(f.gradient(), f.ring, opts.budget).dimension()
    return d <= 1, {"affine_cone_dimension": d}


SUITES: dict[str, list[Check]] = {
    "igusa": [
        Check("igusa.s6_invariant", "the quartic s4 - s2^2/4 is invariant under S6", _b_invariant),
        Check("igusa.singular_lines", "B is singular along 15 lines, one per pair partition", _singular_lines),
        Check("igusa.lines_s6_stable", "S6 permutes the 15 singular lines", _lines_s6_stable),
        Check("igusa.cremona_richmond", "15 lines and 15 triple points form a (15_3, 15_3) configuration",
              _cremona_richmond),
        Check("igusa.jacobian_dimension", "the singular locus of B is one-dimensional (15 lines)", _jacobian_b),
    ],
    "segre": [
        Check("segre.s6_invariant", "the cubic s3 is invariant under S6", _c_invariant),
        Check("segre.configuration", "10 nodes and 15 planes form a (15_4, 10_6) configuration", _segre_config),
        Check("segre.dual_contraction", "the gradient map contracts the 15 planes onto the 15 singular lines of B",
              _dual_contraction),
        Check("segre.dual_membership", "B is the dual hypersurface of the Segre cubic", _dual_membership),
        Check("segre.dual_pointwise", "B is the dual hypersurface of the Segre cubic (pointwise)", _dual_pointwise),
    ],
    "schlaefli": [
        Check("schlaefli.neighborhoods", "each line meets 10 and misses 16 of the others", _neighborhoods),
        Check("schlaefli.double_sixes", "36 double sixes, 16 through each line", _double_sixes),
        Check("schlaefli.trios", "45 tritangent trios, 5 through each line", _trios),
        Check("schlaefli.five_lines", "exactly five lines disjoint from l and meeting n", _five_lines),
        Check("schlaefli.unique_double_six", "a disjoint pair lies on opposite sides of a unique double six",
              _unique_double_six),
        Check("schlaefli.theorem_d", "no 12 disjoint lines; 5 lines meet l only, l' only, and both",
              _theorem_d),
        Check("schlaefli.automorphisms", "the incidence group is W(E6), transitive on lines, double sixes, trios",
              _automorphisms),
        Check("schlaefli.bookkeeping", "27 = 1+10+16, 36*12 = 27*16, 80 = 16*5", _bookkeeping),
    ],
    "congruence": [
        Check("congruence.sections_11", "(1,1)-forms through the four diagonal points: 5 sections", _basis11),
        Check("congruence.degree", "the map t_e has degree 2", _fibers),
        Check("congruence.order", "the plane family has order 2", _order),
        Check("congruence.sections_22", "(2,2)-forms double at the diagonal points: 16 sections, matching "
              "symmetric quadric matrices", _basis22),
        Check("congruence.focal", "each plane meets the branch quartic in a double conic", _focal),
    ],
    "conicbundle": [
        Check("conicbundle.samples", "discriminant is a 4-nodal sextic of genus 6; conics have rank >= 2",
              _conic_bundles),
        Check("conicbundle.controls", "negative controls for the node and rank certificates", _conic_negative),
    ],
    "pencil": [
        Check("pencil.nodes", "general members have 30 ordinary double points; one quadric through them",
              _pencils),
    ],
    "slow": [
        Check("slow.kummer", "a tangent hyperplane section of B has 16 nodes", _kummer, slow=True),
        Check("slow.invariant_pencil", "the invariant member s2^2 + s4 has isolated singularities",
              _invariant_pencil, slow=True),
        Check("slow.class", "the plane family has class 3 (plane reading)", _class_three, slow=True),
        Check("slow.pencil_jacobian", "a general pencil member has isolated singularities", _pencil_jacobian,
              slow=True),
    ],
}

FAST_SUITES = ("igusa", "segre", "schlaefli", "congruence", "conicbundle", "pencil")
SUITE_NAMES = FAST_SUITES + ("all", "slow")


def checks_for(suite: str, include_slow: bool = False) -> list[Check]:
    if suite == "all":
        names = list(FAST_SUITES) + (["slow"] if include_slow else [])
        return [c for n in names for c in SUITES[n]]
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    return list(SUITES[suite])


def run_suite(suite: str, opts: RunOptions) -> SuiteReport:
    records = [run_check(c.id, c.paper_ref, c.fn, opts) for c in checks_for(suite, opts.include_slow)]
    return SuiteReport(suite, opts.seed, tuple(records))

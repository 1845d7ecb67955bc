"""Planar geometry of projected faces: projects-well tests, the set of faces
near the contracting plane, the regularity checker, stepped surfaces,
periodic elements, and finiteness probes.

Everything here assumes the contracting plane is two-dimensional (d = 3);
the algebraic layers work for any d, but the pictures and the polygon
audits only exist for parallelograms in the plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
import shapely
from shapely.geometry import Point, Polygon
from shapely.ops import unary_union
from shapely.strtree import STRtree

from .algebra import PisotData, pisot_split
from .chains import Chain, boundary, wedge_complement, wedge_types
from .dualmaps import (
    E_geom,
    _positions,
    positivity_check_P,
)
from .projections import KernelLattice, Projections, kernel_lattice, projections
from .substitution import (
    Substitution,
    abelianize,
    incidence_matrix,
    integer_inverse,
)

OVERLAP_EPS = 1e-9

# Coordinates are snapped to this grid before any overlay operation: raw
# near-zero floats (e.g. 1e-17 from projection round-off) can trip GEOS
# overlay robustness and return grossly wrong intersection areas.
SNAP_GRID = 1e-12


def snap(geom):
    """Snap a shapely geometry to the fixed precision grid."""
    return shapely.set_precision(geom, SNAP_GRID)


@dataclass
class FacePolygon:
    """Projected parallelogram of a 2-face: origin pi_c(x), edges pi_c(e_a)."""

    origin: np.ndarray
    edges: np.ndarray  # (2, 2): rows pi_c(e_a1), pi_c(e_a2)
    wtype: tuple
    orientation: int

    def vertices(self) -> np.ndarray:
        o, (u, v) = self.origin, self.edges
        return np.array([o, o + u, o + u + v, o + v])

    def area(self) -> float:
        u, v = self.edges
        return abs(u[0] * v[1] - u[1] * v[0])

    def shapely(self) -> Polygon:
        return snap(Polygon(self.vertices()))


def project_face(proj: Projections, base, wtype, orientation=1) -> FacePolygon:
    if proj.dim_c != 2:
        raise ValueError("polygon geometry requires a 2-dimensional K_c")
    n = proj.n
    eye = np.eye(n)
    edges = np.array([proj.pi_c(eye[a - 1]) for a in wtype])
    return FacePolygon(proj.pi_c(base), edges, tuple(wtype), orientation)


def chain_polygons(proj: Projections, chain: Chain) -> list[FacePolygon]:
    return [
        project_face(proj, base, wtype, 1 if c > 0 else -1)
        for (base, wtype), c in chain.items()
    ]


def projects_well(proj: Projections, chain: Chain, eps: float = OVERLAP_EPS):
    """True iff the projected face interiors are pairwise disjoint.

    Overlap below eps * min(pair areas) counts as boundary contact only.
    Returns (verdict, witnesses) with one (face, face, overlap area) per
    offending pair.
    """
    if not chain.is_geometric():
        raise ValueError("projects_well is defined for geometric chains")
    keys = [key for key, _ in chain.items()]
    polys = [project_face(proj, b, t).shapely() for b, t in keys]
    witnesses = []
    tree = STRtree(polys)
    for i, p in enumerate(polys):
        for j in tree.query(p):
            j = int(j)
            if j <= i:
                continue
            inter = p.intersection(polys[j]).area
            if inter > eps * min(p.area, polys[j].area):
                witnesses.append((keys[i], keys[j], inter))
    return not witnesses, witnesses


# --- faces near the contracting plane ----------------------------------------


def near_dual_membership(proj: Projections, base, wtype) -> bool:
    """Window test for a dual face: -pi_e(l(a)) <= pi_e(x) < 0, decided
    exactly in Q(beta)."""
    x = proj.pairing_exact(np.array(base, dtype=np.int64))
    width = proj.pairing_exact(abelianize(tuple(wtype), proj.n))
    return (x + width).sign() >= 0 and x.sign() < 0


def near_membership(proj: Projections, base, wtype) -> bool:
    """A (d-1)-face (x, a) is near K_c iff its Poincare dual is; unfolding
    the duality map turns the window into 0 <= pi_e(x) < pi_e(l(comp a))."""
    comp = wedge_complement(proj.n, tuple(wtype))
    x = proj.pairing_exact(np.array(base, dtype=np.int64))
    width = proj.pairing_exact(abelianize(comp, proj.n))
    return x.sign() >= 0 and (x - width).sign() < 0


def _window_width(proj: Projections, wtype):
    comp = wedge_complement(proj.n, tuple(wtype))
    return proj.pairing_exact(abelianize(comp, proj.n))


# --- the regularity checker ---------------------------------------------------


def s2_radius(sub: Substitution, proj: Projections) -> float:
    """Pairs of near faces farther apart than this radius in K_c have
    disjoint images under the geometric dual; certified upper bounds only."""
    nbar = sub.n - proj.pisot.d + 1
    best = 0.0
    for btype in wedge_types(sub.n, nbar):
        for combo in product(*(_positions(sub, b) for b in btype)):
            letters = tuple(c for _, c, _ in combo)
            if len(set(letters)) != nbar:
                continue
            ls = np.sum([abelianize(s, sub.n) for _, _, s in combo], axis=0)
            best = max(best, float(np.linalg.norm(proj.pi_c(ls))))
    contraction = float(proj.contraction_norm_upper())
    return 2.0 * best * (1 + 1e-9) / (1.0 - contraction)


def _coset_candidates(proj: Projections, lattice: KernelLattice, radius, pe_bound):
    """All cosets delta of Z^n modulo the kernel of pi with
    |pi_e(delta)| <= pe_bound and |pi_c(delta)| <= radius (numeric filter
    with margin; callers re-verify windows exactly)."""
    d = proj.pisot.d
    h = np.array([[int(x) for x in row] for row in lattice.h], dtype=np.int64)
    # value map: c -> (pi_e, pi_c coords) of any delta with coords H c
    cols = []
    for j in range(d):
        a = h[:, j]
        vals = [sum(int(a[k]) * root**k for k in range(d)) for root in proj.roots]
        col = [vals[0].real]
        for i, val in enumerate(vals[1:], start=2):
            if i <= proj.pisot.r:
                col.append(val.real)
            else:
                col.extend((val.real, val.imag))
        cols.append(col)
    t = np.array(cols).T  # (d, d)
    tinv = np.linalg.inv(t)
    bound_vec = np.array([pe_bound] + [radius] * (d - 1))
    cmax = np.ceil(np.abs(tinv) @ (bound_vec * 1.01)).astype(int)
    out = []
    for c in product(*(range(-int(m), int(m) + 1) for m in cmax)):
        vals = t @ np.array(c, dtype=float)
        if abs(vals[0]) > pe_bound * 1.000001:
            continue
        if np.linalg.norm(vals[1:]) > radius * 1.000001:
            continue
        delta = lattice.section(np.array(c, dtype=np.int64))
        out.append(delta)
    return out


def check_s1(sub: Substitution, proj: Projections) -> dict:
    """Each basis-face image of the geometric dual must be geometric and
    project well; images of translates are translates, so types suffice."""
    d = proj.pisot.d
    witnesses = []
    for wtype in wedge_types(sub.n, d - 1):
        face = Chain.from_faces(sub.n, d - 1, [(1, (0,) * sub.n, wtype)])
        image = E_geom(sub, face)
        if not image.is_geometric():
            witnesses.append((wtype, "image not geometric", None))
            continue
        ok, overlaps = projects_well(proj, image)
        if not ok:
            witnesses.append((wtype, "image does not project well", overlaps))
    return {"passed": not witnesses, "witnesses": witnesses}


def check_s2(sub: Substitution, proj: Projections, radius=None) -> dict:
    """Pairs of near faces within the critical radius whose sum projects
    well must have disjoint images whose sum projects well.

    Pairs are enumerated modulo the integer kernel of pi: the polygons and
    the verdict only depend on the coset of the offset, and a coset is
    realizable by near faces iff the two exact pi_e windows intersect.
    """
    d = proj.pisot.d
    if radius is None:
        radius = s2_radius(sub, proj)
    lattice = kernel_lattice(proj)
    types = wedge_types(sub.n, d - 1)
    widths = {t: _window_width(proj, t) for t in types}
    pe_bound = max(w.to_float() for w in widths.values()) * 1.01
    zero = (0,) * sub.n
    base_faces = {
        t: Chain.from_faces(sub.n, d - 1, [(1, zero, t)]) for t in types
    }
    images = {t: E_geom(sub, base_faces[t]) for t in types}
    image_polys = {t: chain_polygons(proj, images[t]) for t in types}
    image_radius = max(
        (
            float(np.linalg.norm(v))
            for polys in image_polys.values()
            for p in polys
            for v in p.vertices()
        ),
        default=0.0,
    )
    minv = integer_inverse(incidence_matrix(sub))

    checked = 0
    witnesses = []
    field = proj.pisot.field
    for delta in _coset_candidates(proj, lattice, radius, pe_bound):
        w = proj.pairing_exact(delta)
        for i, atype in enumerate(types):
            for btype in types[i:]:
                if atype == btype and not any(delta):
                    continue
                # exact realizability: [0, B_a) meets [-w, B_b - w)
                lower = -w if (-w).sign() > 0 else field.zero()
                if (widths[atype] - lower).sign() <= 0:
                    continue
                if (widths[btype] - w - lower).sign() <= 0:
                    continue
                pair = base_faces[atype] + base_faces[btype].translate(delta)
                if not pair.is_geometric():
                    continue
                ok, _ = projects_well(proj, pair)
                if not ok:
                    continue
                checked += 1
                # images translate by M^-1 delta, which expands in K_c,
                # so far-apart images cannot interact
                minv_delta = minv @ delta
                if np.linalg.norm(proj.pi_c(minv_delta)) > 2 * image_radius + 1e-6:
                    continue
                img_b = images[btype].translate(minv_delta)
                if images[atype].face_set() & img_b.face_set():
                    witnesses.append((atype, btype, tuple(delta), "images share a face"))
                    continue
                both = images[atype] + img_b
                if not both.is_geometric():
                    witnesses.append((atype, btype, tuple(delta), "image sum cancels"))
                    continue
                ok, overlaps = projects_well(proj, both)
                if not ok:
                    witnesses.append(
                        (atype, btype, tuple(delta), f"image overlap {overlaps[0][2]:.2e}")
                    )
    return {
        "passed": not witnesses,
        "witnesses": witnesses,
        "pairs_checked": checked,
        "radius": radius,
    }


def check_nice(sub: Substitution, pd: PisotData | None = None) -> dict:
    """Full regularity report: geometric conditions S1/S2, positivity P,
    neutral condition N, and the overall verdict."""
    if pd is None:
        pd = pisot_split(sub)
    proj = projections(sub, pd)
    if proj.dim_c != 2:
        raise ValueError("regularity checks require a 2-dimensional K_c")
    s1 = check_s1(sub, proj)
    p = positivity_check_P(sub, pd.d)
    n_ok = pd.hypothesis_N
    s2 = (
        check_s2(sub, proj)
        if s1["passed"]
        else {"passed": False, "witnesses": [("skipped", "S1 failed")], "pairs_checked": 0}
    )
    return {
        "S1": s1,
        "S2": s2,
        "P": p,
        "N": {"passed": n_ok, "reason": pd.hypothesis_N_reason},
        "nice": s1["passed"] and s2["passed"] and p["passed"] and n_ok,
    }


# --- stepped surfaces ---------------------------------------------------------


@dataclass
class Patch:
    """A chain of plane faces with cached projected parallelograms."""

    chain: Chain
    polygons: list[FacePolygon]
    provenance: dict = field(default_factory=dict)

    def union(self) -> Polygon:
        return unary_union([p.shapely() for p in self.polygons])

    def total_area(self) -> float:
        return sum(p.area() for p in self.polygons)


def make_patch(proj: Projections, chain: Chain, **provenance) -> Patch:
    return Patch(chain, chain_polygons(proj, chain), dict(provenance))


def seed_contained(sub: Substitution, seed: Chain, exponent: int) -> bool:
    """{U} subset of {E^m(U)} with equal coefficients."""
    image = seed
    for _ in range(exponent):
        image = E_geom(sub, image)
    return all(
        image.terms.get(key) == coeff for key, coeff in seed.terms.items()
    )


def stepped_surface(
    sub: Substitution,
    proj: Projections,
    seed: Chain,
    exponent: int,
    iterations: int,
) -> Patch:
    """The union of {E^(m j)(U)} for j <= iterations, as a patch.

    The seed must be geometric, project well, be based at 0, and reappear in
    its own exponent-m image.
    """
    if not seed.is_geometric():
        raise ValueError("seed must be geometric")
    if any(any(b) for (b, _), _ in seed.items()):
        raise ValueError("seed faces must be based at 0")
    ok, _ = projects_well(proj, seed)
    if not ok:
        raise ValueError("seed does not project well")
    if not seed_contained(sub, seed, exponent):
        raise ValueError("seed is not contained in its own image")
    terms = dict(seed.terms)
    current = seed
    for _j in range(iterations):
        for _ in range(exponent):
            current = E_geom(sub, current)
        for key, coeff in current.terms.items():
            old = terms.setdefault(key, coeff)
            if old != coeff:
                raise ArithmeticError("conflicting orientations while growing patch")
    chain = Chain(sub.n, seed.k, terms)
    return make_patch(
        proj, chain, seed=sorted(seed.terms), exponent=exponent, iterations=iterations
    )


# --- periodic elements --------------------------------------------------------


@dataclass
class PeriodicElement:
    faces: Chain
    lattice_basis: np.ndarray  # columns span Lambda_P
    kind: str

    def lattice_rank_ok(self, proj: Projections) -> bool:
        img = np.array([proj.pi_c(col) for col in self.lattice_basis.T])
        return np.linalg.matrix_rank(img, tol=1e-9) == proj.dim_c


def periodic_candidates(sub: Substitution, proj: Projections) -> list[PeriodicElement]:
    """Single faces, touching pairs, and d-touching elements, restricted to
    the ones that project well."""
    d = proj.pisot.d
    n = sub.n
    zero = (0,) * n
    eye = np.eye(n, dtype=np.int64)
    out = []
    for wtype in wedge_types(n, d - 1):
        chain = Chain.from_faces(n, d - 1, [(1, zero, wtype)])
        basis = np.array([eye[a - 1] for a in wtype]).T
        out.append(PeriodicElement(chain, basis, "single"))
    for shared in combinations(range(1, n + 1), d - 2):
        rest = [a for a in range(1, n + 1) if a not in shared]
        for b, c in combinations(rest, 2):
            chain = Chain.from_faces(
                n,
                d - 1,
                [(1, zero, (b,) + shared), (1, zero, (c,) + shared)],
            )
            basis = np.array(
                [eye[b - 1] - eye[c - 1]] + [eye[a - 1] for a in shared]
            ).T
            out.append(PeriodicElement(chain, basis, "pair"))
    for letters in combinations(range(1, n + 1), d):
        faces = [
            (1, zero, tuple(a for a in letters if a != skip)) for skip in letters
        ]
        chain = Chain.from_faces(n, d - 1, faces)
        a1 = letters[0]
        basis = np.array([eye[a1 - 1] - eye[a - 1] for a in letters[1:]]).T
        out.append(PeriodicElement(chain, basis, "d-touching"))
    kept = []
    for cand in out:
        ok, _ = projects_well(proj, cand.faces)
        if ok and cand.lattice_rank_ok(proj):
            kept.append(cand)
    return kept


def three_touching_elements(sub: Substitution, proj: Projections) -> list[PeriodicElement]:
    return [p for p in periodic_candidates(sub, proj) if p.kind == "d-touching"]


# --- finiteness probes --------------------------------------------------------


def surround_check(sub: Substitution, proj: Projections, seed: Chain, exponent: int = 15):
    """Does E^(exponent)(U) surround U: faces of U reappear and the two
    boundary curves are disjoint with a positive gap."""
    image = seed
    for _ in range(exponent):
        image = E_geom(sub, image)
    contained = all(
        image.terms.get(key) == coeff for key, coeff in seed.terms.items()
    )
    inner = unary_union([p.shapely() for p in chain_polygons(proj, seed)])
    outer = unary_union([p.shapely() for p in chain_polygons(proj, image)])
    gap = inner.boundary.distance(outer.boundary)
    return {
        "contained": contained,
        "gap": gap,
        "surrounds": contained and gap > 0,
        "image_faces": len(image),
    }


def finiteness_probe(
    sub: Substitution,
    proj: Projections,
    seed: Chain,
    exponent: int,
    k_max: int,
    radius: float,
    eps: float = 1e-9,
) -> dict:
    """Evidence (never proof) that the patch grown from the seed covers K_c:
    per iterate, the uncovered fraction of the disk of the given radius;
    plus the surround relation for 3-touching seeds."""
    disk = Point(0.0, 0.0).buffer(radius, resolution=128)
    coverage = []
    current = seed
    terms = dict(seed.terms)
    for j in range(k_max + 1):
        if j > 0:
            for _ in range(exponent):
                current = E_geom(sub, current)
            for key, coeff in current.terms.items():
                terms.setdefault(key, coeff)
        chain = Chain(sub.n, seed.k, terms)
        covered = unary_union(
            [p.shapely() for p in chain_polygons(proj, chain)]
        )
        hole = disk.difference(covered).area
        coverage.append(hole / disk.area)
    is_3touch = len(seed) == proj.pisot.d and all(
        not any(b) for (b, _), _ in seed.items()
    )
    surround = (
        surround_check(sub, proj, seed) if is_3touch else None
    )
    return {
        "uncovered_fraction": coverage,
        "covers": coverage[-1] <= eps,
        "surround": surround,
    }

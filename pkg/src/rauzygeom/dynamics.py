"""Symbolic dynamics: letter and wedge numeration graphs, fractal point
clouds, the strong coincidence search, the modified stepped line, and
domain-exchange orbits with their codings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.spatial import cKDTree
from shapely.geometry import Point
from shapely.prepared import prep

from .chains import Chain, wedge_normalize, wedge_types
from .dualmaps import E_geom, _positions
from .projections import Projections
from .substitution import (
    Substitution,
    abelianize,
    fixed_point_prefix,
    incidence_matrix,
)

# --- numeration graphs --------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Graph edge source -> target carrying a word-abelianization weight."""

    source: tuple
    target: tuple
    weight: tuple  # letter counts of the prefix/suffix label


def prefix_graph(sub: Substitution) -> list[Edge]:
    """Edges a -> b labelled by the prefix p whenever sub(a) = p b s."""
    edges = []
    for a in sub.alphabet:
        w = sub.image(a)
        for i, b in enumerate(w):
            edges.append(Edge((a,), (b,), tuple(abelianize(w[:i], sub.n))))
    return edges


def suffix_graph(sub: Substitution) -> list[Edge]:
    """Edges a -> b labelled by the suffix s whenever sub(a) = p b s."""
    edges = []
    for a in sub.alphabet:
        w = sub.image(a)
        for i, b in enumerate(w):
            edges.append(Edge((a,), (b,), tuple(abelianize(w[i + 1:], sub.n))))
    return edges


def build_wedge_suffix_graph(sub: Substitution, nbar: int) -> list[Edge]:
    """Edges a -> b between wedge types of size nbar, labelled by the total
    suffix vector, whenever sub(a) componentwise contains b.

    Edge a -> b with weight l(s) exists iff (M^-1 l(s), a) occurs in the
    image of (0, b) under the geometric dual map; this cross-check is
    enforced against the actual dual-map table.
    """
    edges = []
    for atype in wedge_types(sub.n, nbar):
        for combo in product(*(_positions(sub, a) for a in atype)):
            letters = tuple(b for _, b, _ in combo)
            norm = wedge_normalize(letters)
            if norm is None:
                continue
            suffix = np.sum(
                [abelianize(s, sub.n) for _, _, s in combo], axis=0
            )
            edges.append(Edge(atype, norm[0], tuple(int(v) for v in suffix)))
    # every edge a -> b must match one term (M^-1 l(s), comp a) of the image
    # of the transverse face (0, comp b) under the geometric dual map
    from .chains import wedge_complement

    zero = (0,) * sub.n
    minv = _minv(sub)
    for btype in wedge_types(sub.n, nbar):
        image = E_geom(
            sub,
            Chain.from_faces(
                sub.n, sub.n - nbar, [(1, zero, wedge_complement(sub.n, btype))]
            ),
        )
        expected = sorted(
            (
                tuple(int(v) for v in minv @ np.array(e.weight)),
                wedge_complement(sub.n, e.source),
            )
            for e in edges
            if e.target == btype
        )
        got = sorted(
            key for key, c in image.terms.items() for _ in range(abs(c))
        )
        if expected != got:
            raise ArithmeticError(
                f"wedge suffix graph disagrees with dual map at {btype}"
            )
    return edges


@lru_cache(maxsize=None)
def _minv(sub: Substitution) -> np.ndarray:
    from .substitution import integer_inverse

    return integer_inverse(incidence_matrix(sub))


# --- Dumont-Thomas point clouds ----------------------------------------------


def dumont_thomas_cloud(
    sub: Substitution,
    proj: Projections,
    target: tuple,
    depth: int,
    graph: str = "prefix",
) -> np.ndarray:
    """Depth-k approximation of a fractal subtile as a point cloud.

    graph selects the recursion: "prefix" gives the classical subtile of the
    target letter, "suffix" its reflected companion, "wedge-suffix" the
    plane-face subtile of the target wedge type.  The recursion is
    cloud_k(b) = union over edges a -> b of C cloud_(k-1)(a) + pi_c(weight),
    where C is the contraction on K_c, started from {0}.
    """
    if graph == "prefix":
        edges = prefix_graph(sub)
        target = (int(target),) if isinstance(target, (int, np.integer)) else tuple(target)
    elif graph == "suffix":
        edges = suffix_graph(sub)
        target = (int(target),) if isinstance(target, (int, np.integer)) else tuple(target)
    elif graph == "wedge-suffix":
        from .chains import wedge_complement

        nbar = sub.n - proj.pisot.d + 1
        target = tuple(target)
        if len(target) == proj.pisot.d - 1:
            # a plane-face type names the subtile; the graph vertex is the
            # transverse type on the complementary letters
            target = wedge_complement(sub.n, target)
        elif len(target) != nbar:
            raise ValueError("target must be a face type or a transverse type")
        edges = build_wedge_suffix_graph(sub, nbar)
    else:
        raise ValueError(f"unknown graph {graph!r}")
    contraction = proj.contraction_matrix()
    vertices = sorted({e.source for e in edges} | {e.target for e in edges})
    clouds = {v: np.zeros((1, proj.dim_c)) for v in vertices}
    incoming = {v: [e for e in edges if e.target == v] for v in vertices}
    for _ in range(depth):
        new = {}
        for v in vertices:
            parts = [
                clouds[e.source] @ contraction.T
                + proj.pi_c(np.array(e.weight))
                for e in incoming[v]
            ]
            pts = np.vstack(parts) if parts else np.zeros((0, proj.dim_c))
            new[v] = np.unique(np.round(pts, 12), axis=0)
        clouds = new
    return clouds[target]


# --- strong coincidence -------------------------------------------------------


@dataclass
class CoincidenceTable:
    """Minimal coincidence depths per well-projecting transverse type pair."""

    pairs: dict  # (atype, btype) -> depth or None
    depth_cap: int

    @property
    def passed(self) -> bool:
        return all(k is not None for k in self.pairs.values())


def coincidence_pairs(sub: Substitution, proj: Projections, nbar: int):
    """Unordered transverse-type pairs whose two plane faces at 0 project
    well; only these are subject to the coincidence condition."""
    from .chains import wedge_complement
    from .geometry import projects_well

    zero = (0,) * sub.n
    types = wedge_types(sub.n, nbar)
    out = []
    for i, atype in enumerate(types):
        for btype in types[i + 1:]:
            pair = Chain.from_faces(
                sub.n,
                sub.n - nbar,
                [
                    (1, zero, wedge_complement(sub.n, atype)),
                    (1, zero, wedge_complement(sub.n, btype)),
                ],
            )
            if projects_well(proj, pair)[0]:
                out.append((atype, btype))
    return out


def strong_coincidence(
    sub: Substitution, proj: Projections, depth_cap: int = 20
) -> CoincidenceTable:
    """Breadth-first search for suffix coincidences.

    Two walks of equal length in the wedge suffix graph, one from each type
    of the pair, must reach a common vertex with equal accumulated suffix
    vectors T_k = M T_(k-1) + l(s).  States track the exact difference
    Delta; a state is pruned once |pi_e(Delta)| exceeds the certified
    threshold beyond which the expanding direction can never return to zero.
    """
    nbar = sub.n - proj.pisot.d + 1
    edges = build_wedge_suffix_graph(sub, nbar)
    out_edges = {}
    for e in edges:
        out_edges.setdefault(e.source, []).append(e)
    m = incidence_matrix(sub)
    beta = proj.pisot.beta_float()
    max_pe = max(
        abs(proj.pi_e(np.array(e.weight))) for e in edges
    )
    # |pi_e Delta'| >= beta |pi_e Delta| - 2 max_pe grows monotonically
    # beyond 2 max_pe / (beta - 1); a 1.5x margin absorbs the float error
    prune = 1.5 * 2.0 * max_pe * beta / (beta - 1.0)

    results = {}
    for atype, btype in coincidence_pairs(sub, proj, nbar):
        frontier = {(atype, btype, (0,) * sub.n)}
        seen = set(frontier)
        found = None
        for k in range(1, depth_cap + 1):
            nxt = set()
            for ca, cb, delta in frontier:
                dvec = np.array(delta)
                for ea in out_edges.get(ca, ()):
                    for eb in out_edges.get(cb, ()):
                        ndelta = m @ dvec + (
                            np.array(ea.weight) - np.array(eb.weight)
                        )
                        if abs(proj.pi_e(ndelta)) > prune:
                            continue
                        state = (
                            ea.target,
                            eb.target,
                            tuple(int(v) for v in ndelta),
                        )
                        if state in seen:
                            continue
                        seen.add(state)
                        nxt.add(state)
            if any(
                ca == cb and not any(d) for ca, cb, d in nxt
            ):
                found = k
                break
            frontier = nxt
            if not frontier:
                break
        results[(atype, btype)] = found
    return CoincidenceTable(results, depth_cap)


# --- the modified stepped line ------------------------------------------------

CHI_IMAGES = {1: (3, 4), 2: (2,), 3: (3,), 4: (4,), 5: (3, 2)}


def chi_apply(word) -> tuple:
    """The letter morphism 1 -> 34, 2 -> 2, 3 -> 3, 4 -> 4, 5 -> 32."""
    return tuple(b for a in word for b in CHI_IMAGES[a])


def modified_cloud(
    sub: Substitution, proj: Projections, a: int, count: int
) -> np.ndarray:
    """First ``count`` points pi_c(l(w_0..w_(N-1))) with w_N = a, where w is
    the image under chi of the one-sided fixed point of the substitution."""
    if a not in (2, 3, 4):
        raise ValueError("modified subtiles exist for letters 2, 3, 4 only")
    pts = []
    length = 4 * count + 16
    while True:
        w = chi_apply(fixed_point_prefix(sub, 1, length))
        pts.clear()
        pos = np.zeros(sub.n, dtype=np.int64)
        for i in range(len(w)):
            if w[i] == a:
                pts.append(proj.pi_c(pos))
            if len(pts) == count:
                return np.array(pts)
            pos = pos + _unit(sub.n, w[i])
        length *= 2


def _unit(n: int, a: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[a - 1] = 1
    return v


def stepped_line_points(
    sub: Substitution, proj: Projections, count: int, morphism=None
):
    """(points, letters): pi_c of the vertices l(w_0..w_(k-1)) of the stepped
    line of the fixed point (optionally transformed by a letter morphism),
    with letters[k] = w_k the letter read at each vertex."""
    length = count + 1
    w = fixed_point_prefix(sub, 1, length)
    if morphism is not None:
        while len(morphism(w)) < count + 1:
            length *= 2
            w = fixed_point_prefix(sub, 1, length)
        w = morphism(w)
    counts = np.zeros((count + 1, sub.n), dtype=np.int64)
    for k in range(count):
        counts[k + 1] = counts[k]
        counts[k + 1][w[k] - 1] += 1
    pts = np.array([proj.pi_c(c) for c in counts[: count + 1]])
    return pts, tuple(w[: count + 1])


# --- domain exchange orbits ---------------------------------------------------

AMBIGUITY_MARGIN = 1e-7


@dataclass
class PartitionPiece:
    label: object
    region: object  # shapely geometry
    translation: np.ndarray

    def __post_init__(self):
        self._prepared = prep(self.region)

    def covers(self, point: Point) -> bool:
        return self._prepared.contains(point) or self.region.distance(point) == 0

    def signed_depth(self, point: Point) -> float:
        """Positive inside (distance to the boundary), negative outside."""
        d = self.region.boundary.distance(point)
        return d if self.covers(point) else -d


@dataclass
class Coding:
    labels: tuple
    endpoint: np.ndarray
    ambiguous_steps: tuple


def exchange_orbit(
    start, steps: int, partition: list[PartitionPiece], margin: float = AMBIGUITY_MARGIN
) -> Coding:
    """Iterate the piecewise translation, coding each step by the label of
    the piece containing the point.

    At each step the point is assigned to the piece of greatest signed
    depth; steps where that depth is below the ambiguity margin are
    reported, since the polygonal partition only approximates the true one.
    """
    x = np.array(start, dtype=float)
    labels = []
    ambiguous = []
    for k in range(steps):
        p = Point(x)
        depths = [(piece.signed_depth(p), i) for i, piece in enumerate(partition)]
        depth, idx = max(depths)
        if depth < margin:
            ambiguous.append(k)
        piece = partition[idx]
        labels.append(piece.label)
        x = x + piece.translation
    return Coding(tuple(labels), x, tuple(ambiguous))


# --- first return of the modified exchange ------------------------------------


def first_return_check(
    sub: Substitution,
    proj: Projections,
    samples: int = 10_000,
    cloud_size: int = 200_000,
    seed: int = 0,
) -> dict:
    """Check that the classical exchange is the first return of the modified
    one on the classical fractal.

    The orbit of 0 under the modified exchange is the modified stepped line;
    the orbit under the classical exchange is the plain stepped line.  For
    each sampled classical step the return time must be 1 for letters 2, 3,
    4 and 2 for letters 1 and 5, the vertices must match exactly in Z^n,
    and for double steps the intermediate point must stay off the classical
    fractal (tested against a reference point cloud; points too close to
    the cloud resolution are reported as boundary-ambiguous).
    """
    rng = np.random.default_rng(seed)
    cloud_pts, _ = stepped_line_points(sub, proj, cloud_size)
    tree = cKDTree(cloud_pts)
    # resolution: how far a point of the limit set can be from the cloud
    probe = cloud_pts[rng.integers(0, len(cloud_pts), 512)]
    dd, _ = tree.query(probe, k=2)
    resolution = float(np.max(dd[:, 1]))

    from .projections import kernel_lattice

    lattice = kernel_lattice(proj)
    u = fixed_point_prefix(sub, 1, samples + 2)
    verified = 0
    ambiguous = []
    failures = []
    pos_u = np.zeros(sub.n, dtype=np.int64)  # classical line vertex
    pos_w = np.zeros(sub.n, dtype=np.int64)  # modified line vertex
    for j in range(samples):
        a = u[j]
        expect = 2 if a in (1, 5) else 1
        step = CHI_IMAGES[a]
        if len(step) != expect:
            failures.append((j, "return time"))
            continue
        if expect == 2:
            # the intermediate vertex must stay off the classical fractal
            mid = pos_w + _unit(sub.n, step[0])
            d = tree.query(proj.pi_c(mid))[0]
            if d > 2.0 * resolution:
                verified += 1
            else:
                ambiguous.append(j)
        else:
            verified += 1
        pos_u = pos_u + _unit(sub.n, a)
        pos_w = pos_w + abelianize(step, sub.n)
        # after the return both lines must project to the same point of
        # K_e x K_c: their difference must lie in the neutral lattice
        if np.any(lattice.coords(pos_w - pos_u)):
            failures.append((j, "vertex mismatch"))
    return {
        "samples": samples,
        "verified": verified,
        "ambiguous": ambiguous,
        "failures": failures,
        "resolution": resolution,
        "fraction_verified": verified / samples,
    }


def modified_partition(
    sub: Substitution, proj: Projections, level: int = 12
) -> list[PartitionPiece]:
    """Polygonal partition for the modified domain exchange on letters 2, 3,
    4: the subtile of letter a is the reflected plane-face tile of the
    complementary pair within {2, 3, 4}, shifted by -pi_c(e_a); the exchange
    translates it back by +pi_c(e_a)."""
    from shapely.geometry import Polygon
    from shapely.ops import unary_union

    from .fractal import rauzy_approx
    from .geometry import snap

    pieces = []
    for a in (2, 3, 4):
        b, c = sorted({2, 3, 4} - {a})
        ea = proj.pi_c(_unit(sub.n, a))
        tile = rauzy_approx(sub, proj, (b, c), level)
        region = unary_union(
            [snap(Polygon(-v - ea)) for v in tile.polygons]
        )
        pieces.append(PartitionPiece(a, region, ea))
    return pieces


def coding_cross_check(
    sub: Substitution,
    proj: Projections,
    partition: list[PartitionPiece],
    symbols: int = 10_000,
    margin: float = 0.02,
) -> dict:
    """Run the modified domain exchange from 0 against the polygonal
    partition and compare its coding with the image of the fixed point
    under the letter morphism.

    Steps whose point sits within ``margin`` of a piece boundary are flagged
    as ambiguous (the polygonal partition cannot be trusted there) and the
    orbit resynchronizes on the expected symbol, so one boundary hit cannot
    cascade into spurious mismatches downstream.
    """
    translations = {piece.label: piece.translation for piece in partition}
    required = len(chi_apply(range(1, sub.n + 1)))
    length = symbols
    u = fixed_point_prefix(sub, 1, symbols)
    while len(chi_apply(u)) < symbols + 1:
        length += max(symbols // 4, required)
        u = fixed_point_prefix(sub, 1, length)
    w = chi_apply(u)[:symbols]
    x = np.zeros(proj.dim_c)
    mismatches = []
    ambiguous = []
    labels = []
    for k in range(symbols):
        p = Point(x)
        depth, label = max(
            (piece.signed_depth(p), piece.label) for piece in partition
        )
        labels.append(label)
        if depth < margin:
            ambiguous.append(k)
            label = w[k]  # resynchronize on the expected symbol
        elif label != w[k]:
            mismatches.append(k)
            label = w[k]
        x = x + translations[label]
    return {
        "symbols": symbols,
        "mismatches": mismatches,
        "ambiguous_steps": tuple(ambiguous),
        "expected": w,
        "coding": tuple(labels),
        "margin": margin,
    }

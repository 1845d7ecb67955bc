"""The k-dimensional extension of a substitution, its dual, the geometric
dual obtained by Poincare conjugation, and their abelianization matrices.

Basis-image tables are built once per (substitution, k) and applied to
arbitrary chains by linearity; base points transform by M (extension) or
M^-1 (dual and geometric variants), exactly, using the unimodular integer
inverse.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
import sympy

from .chains import (
    Chain,
    poincare_phi,
    poincare_phi_inv,
    wedge_complement,
    wedge_normalize,
    wedge_types,
)
from .substitution import (
    Substitution,
    abelianize,
    incidence_matrix,
    integer_inverse,
)

EXTERIOR_DEGREE_CAP = 12


@lru_cache(maxsize=None)
def _matrices(sub: Substitution):
    m = incidence_matrix(sub)
    return m, integer_inverse(m)


@lru_cache(maxsize=None)
def _positions(sub: Substitution, a: int):
    """Decompositions sigma(a) = p c s as (l(p), c, suffix word), by position."""
    out = []
    w = sub.image(a)
    for i, c in enumerate(w):
        out.append((tuple(abelianize(w[:i], sub.n)), c, w[i + 1:]))
    return tuple(out)


@lru_cache(maxsize=None)
def _table_E_k(sub: Substitution, k: int):
    """Images of the basis faces (0, a) under the k-dimensional extension."""
    table = {}
    for wtype in wedge_types(sub.n, k):
        faces = []
        for combo in product(*(_positions(sub, a) for a in wtype)):
            base = np.sum(
                [np.array(lp, dtype=np.int64) for lp, _, _ in combo], axis=0
            ) if combo else np.zeros(sub.n, dtype=np.int64)
            letters = tuple(c for _, c, _ in combo)
            faces.append((1, tuple(int(b) for b in base), letters))
        table[wtype] = Chain.from_faces(sub.n, k, faces)
    return table


@lru_cache(maxsize=None)
def _table_E_k_star(sub: Substitution, k: int):
    """Images of the dual basis faces (0, a)* under the dual map."""
    _, minv = _matrices(sub)
    table = {}
    for wtype in wedge_types(sub.n, k):
        target = set(wtype)
        faces = []
        for btype in wedge_types(sub.n, k):
            for combo in product(*(_positions(sub, b) for b in btype)):
                letters = tuple(c for _, c, _ in combo)
                if set(letters) != target or len(set(letters)) != k:
                    continue
                norm = wedge_normalize(letters)
                sign = norm[1]  # sgn of the permutation aligning with wtype
                lp = np.sum(
                    [np.array(v, dtype=np.int64) for v, _, _ in combo], axis=0
                ) if combo else np.zeros(sub.n, dtype=np.int64)
                base = -(minv @ lp)
                faces.append((sign, tuple(int(b) for b in base), btype))
        table[wtype] = Chain.from_faces(sub.n, k, faces, dual=True)
    return table


def E_k(sub: Substitution, chain: Chain) -> Chain:
    """Linear extension of the k-dimensional extension of sigma."""
    if chain.dual:
        raise ValueError("E_k acts on non-dual chains")
    m, _ = _matrices(sub)
    table = _table_E_k(sub, chain.k)
    out = Chain.zero(sub.n, chain.k)
    for (base, wtype), coeff in chain.terms.items():
        shift = m @ np.array(base, dtype=np.int64)
        out = out + coeff * table[wtype].translate(shift)
    return out


def E_k_star(sub: Substitution, chain: Chain) -> Chain:
    """Linear extension of the dual map on dual chains."""
    if not chain.dual:
        raise ValueError("E_k_star acts on dual chains")
    _, minv = _matrices(sub)
    table = _table_E_k_star(sub, chain.k)
    out = Chain.zero(sub.n, chain.k, dual=True)
    for (base, wtype), coeff in chain.terms.items():
        shift = minv @ np.array(base, dtype=np.int64)
        out = out + coeff * table[wtype].translate(shift)
    return out


def E_geom(sub: Substitution, chain: Chain) -> Chain:
    """Geometric dual map on k-chains, defined by Poincare conjugation of the
    (n-k)-dual map."""
    if chain.dual:
        raise ValueError("E_geom acts on non-dual chains")
    return poincare_phi(E_k_star(sub, poincare_phi_inv(chain)))


def E_geom_closed_form(sub: Substitution, base, wtype_dualof) -> Chain:
    """Test oracle: the explicit formula for the geometric dual acting on the
    (d-1)-face transverse to a wedge of n-d+1 letters.

    `wtype_dualof` is the transverse wedge (in O_(n-k)); the input face is
    (base, complement) with positive orientation.  Must agree with E_geom.
    """
    n = sub.n
    _, minv = _matrices(sub)
    nk = len(wtype_dualof)
    target = set(wtype_dualof)
    faces = []
    for btype in wedge_types(n, nk):
        for combo in product(*(_positions(sub, b) for b in btype)):
            letters = tuple(c for _, c, _ in combo)
            if set(letters) != target or len(set(letters)) != nk:
                continue
            sign = wedge_normalize(letters)[1]
            ls = np.sum(
                [abelianize(s, n) for _, _, s in combo], axis=0
            ) if combo else np.zeros(n, dtype=np.int64)
            parity = (-1) ** (sum(wtype_dualof) + sum(btype))
            newbase = minv @ (np.array(base, dtype=np.int64) + ls)
            faces.append(
                (
                    sign * parity,
                    tuple(int(v) for v in newbase),
                    wedge_complement(n, btype),
                )
            )
    return Chain.from_faces(n, n - nk, faces)


# --- abelianization matrices --------------------------------------------------


def _minor(m: np.ndarray, rows, cols) -> int:
    sm = sympy.Matrix([[int(m[r - 1, c - 1]) for c in cols] for r in rows])
    return int(sm.det())


def exterior_matrices(sub: Substitution, k: int):
    """(B_k, M_k*, M_(n-k)) with rows/cols in lexicographic O_k order; the
    geometric matrix is indexed by the transverse duals in the same order.

    Verifies the sign relation between the dual and geometric matrices and
    searches for a diagonal +-1 conjugator N with M_(n-k) . N = N . M_k*.
    Returns (B_k, M_k_star, M_geom, N_or_None).
    """
    n = sub.n
    if n > EXTERIOR_DEGREE_CAP:
        raise ValueError(f"alphabet size {n} above cap {EXTERIOR_DEGREE_CAP}")
    m, _ = _matrices(sub)
    types = wedge_types(n, k)
    size = len(types)
    b_k = np.zeros((size, size), dtype=np.int64)
    for i, btype in enumerate(types):
        for j, atype in enumerate(types):
            b_k[i, j] = _minor(m, btype, atype)
    m_k_star = b_k.T.copy()

    # cross-check against the dual tables (counting signed type occurrences)
    star_table = _table_E_k_star(sub, k)
    for j, atype in enumerate(types):
        counts = dict.fromkeys(types, 0)
        for (_, btype), coeff in star_table[atype].terms.items():
            counts[btype] += coeff
        for i, btype in enumerate(types):
            if counts[btype] != m_k_star[i, j]:
                raise ArithmeticError("dual matrix disagrees with exterior power")

    m_geom = np.zeros((size, size), dtype=np.int64)
    for j, atype in enumerate(types):
        face = Chain.from_faces(
            n, n - k, [(1, (0,) * n, wedge_complement(n, atype))]
        )
        image = E_geom(sub, face)
        for (_, ctype), coeff in image.terms.items():
            i = types.index(wedge_complement(n, ctype))
            m_geom[i, j] += coeff

    for i, btype in enumerate(types):
        for j, atype in enumerate(types):
            expected = (-1) ** (sum(atype) + sum(btype)) * m_k_star[i, j]
            if m_geom[i, j] != expected:
                raise ArithmeticError("geometric matrix violates the sign relation")

    return b_k, m_k_star, m_geom, _diagonal_conjugator(m_geom, m_k_star)


def _diagonal_conjugator(m_big: np.ndarray, m_star: np.ndarray):
    """Diagonal N with entries +-1 and m_star = N^-1 m_big N, if one exists.

    N = diag(eps) forces eps_i * eps_j = m_star[i,j] / m_big[i,j] wherever
    either entry is nonzero; that is a 2-coloring constraint graph.
    """
    size = m_big.shape[0]
    eps = [0] * size
    constraints: dict[int, list[tuple[int, int]]] = {i: [] for i in range(size)}
    for i in range(size):
        for j in range(size):
            a, b = int(m_big[i, j]), int(m_star[i, j])
            if a == 0 and b == 0:
                continue
            if abs(a) != abs(b):
                return None
            ratio = 1 if a == b else -1
            constraints[i].append((j, ratio))
            constraints[j].append((i, ratio))
    for start in range(size):
        if eps[start]:
            continue
        eps[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for j, ratio in constraints[i]:
                want = eps[i] * ratio
                if eps[j] == 0:
                    eps[j] = want
                    stack.append(j)
                elif eps[j] != want:
                    return None
    return np.diag(eps).astype(np.int64)


def reorientation_search(sub: Substitution, k: int):
    """Signs eps(a) in {+-1} per wedge type making every dual image positive
    after re-orienting the basis, or None.

    Complete constraint propagation: each image term of type b in the image
    of a forces eps(b)*eps(a) = term sign; mixed signs within one (a, b)
    slot make positivity impossible for any orientation.
    """
    types = wedge_types(sub.n, k)
    table = _table_E_k_star(sub, k)
    required: dict[tuple, int] = {}
    for atype in types:
        slot_signs: dict[tuple, int] = {}
        for (_, btype), coeff in table[atype].terms.items():
            s = 1 if coeff > 0 else -1
            if slot_signs.setdefault(btype, s) != s:
                return None
        for btype, s in slot_signs.items():
            key = (atype, btype)
            required[key] = s
    eps: dict[tuple, int] = {}
    for start in types:
        if start in eps:
            continue
        eps[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for (x, y), s in required.items():
                for u, v in ((x, y), (y, x)):
                    if u == a:
                        want = eps[a] * s
                        if v not in eps:
                            eps[v] = want
                            stack.append(v)
                        elif eps[v] != want:
                            return None
    return eps


def is_primitive_matrix(mat: np.ndarray) -> bool:
    """Primitivity of a nonnegative matrix: some power is entrywise positive,
    with the Wielandt bound on the exponent.

    Once a power of the 0/1 pattern is all-positive it stays positive, so it
    suffices to look at the repeated boolean squares past the bound.
    """
    size = mat.shape[0]
    if (mat < 0).any():
        return False
    bound = size * size - 2 * size + 2
    b = mat > 0
    if b.diagonal().all() and b.all():
        return True
    exp = 1
    while exp < 2 * bound:
        b = (b.astype(np.int64) @ b.astype(np.int64)) > 0
        exp *= 2
        if b.all():
            return True
    return False


def positivity_check_P(sub: Substitution, d: int) -> dict:
    """Hypothesis (P): every dual image of a positive basis face of wedge
    degree n-d+1 is a sum of positive faces, and the dual matrix is primitive.
    """
    nbar = sub.n - d + 1
    table = _table_E_k_star(sub, nbar)
    offenders = []
    bad_cancellations = []
    for atype, image in table.items():
        negatives = [key for key, c in image.terms.items() if c < 0]
        if negatives:
            offenders.append((atype, negatives))
        by_type: dict[tuple, set] = {}
        for (base, btype), c in image.terms.items():
            by_type.setdefault(btype, set()).add(1 if c > 0 else -1)
        for btype, signs in by_type.items():
            if len(signs) > 1:
                bad_cancellations.append((atype, btype))
    _, m_star, _, _ = exterior_matrices(sub, nbar)
    primitive = is_primitive_matrix(m_star)
    return {
        "positive": not offenders,
        "primitive": primitive,
        "passed": not offenders and primitive,
        "offenders": offenders,
        "bad_cancellations": bad_cancellations,
    }


def commutation_check(sub: Substitution, chain: Chain) -> bool:
    """boundary . E_geom == E_geom . boundary on a (d-1)-chain (the geometric
    realizations one dimension apart)."""
    from .chains import boundary

    return boundary(E_geom(sub, chain)) == E_geom(sub, boundary(chain))

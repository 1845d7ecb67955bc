"""Projections onto the expanding line, the contracting plane, and the
neutral space of a unit Pisot incidence matrix.

The left eigenvector v_beta is computed exactly over Q(beta) and cleared to
Z[beta]^n; the dual bases u/v for beta and its conjugates are numeric with the
normalization u.v = 1.  Contracting-plane coordinates are real pairs (Re, Im)
per complex conjugate and one real coordinate per real conjugate, so the
incidence matrix acts on them as a block-diagonal rotation-scaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .algebra import AlgebraicNumber, PisotData, poly_eval
from .substitution import Substitution, abelianize, incidence_matrix

DUALITY_TOL = 1e-12
COMMUTE_TOL = 1e-10


def _numeric_roots(pd: PisotData) -> list[complex]:
    """Roots of f, beta first, then real conjugates, then one per complex
    pair (positive imaginary part), in the certified-box order."""
    out = []
    for lo, hi in pd.conjugate_boxes[: pd.r]:
        out.append(complex(np.real(_refined_real_root(pd.f, lo, hi))))
    for (re1, im1), (re2, im2) in pd.conjugate_boxes[pd.r :]:
        z = _refined_complex_root(pd.f, complex((re1 + re2) / 2, (im1 + im2) / 2))
        out.append(z)
    return out


def _refined_real_root(f, lo: Fraction, hi: Fraction) -> float:
    s_lo = poly_eval(f, lo)
    for _ in range(200):
        if hi - lo < Fraction(1, 10**17):
            break
        mid = (lo + hi) / 2
        s = poly_eval(f, mid)
        if s == 0:
            return float(mid)
        if (s > 0) == (s_lo > 0):
            lo, s_lo = mid, s
        else:
            hi = mid
    return float((lo + hi) / 2)


def _refined_complex_root(f, z0: complex) -> complex:
    deriv = [i * c for i, c in enumerate(f)][1:]
    z = z0
    for _ in range(100):
        fz = complex(poly_eval(f, z))
        if abs(fz) < 1e-16:
            break
        z = z - fz / complex(poly_eval(deriv, z))
    return z


def _exact_left_eigenvector(sub: Substitution, pd: PisotData):
    """Kernel vector of (tM - beta I) over Q(beta), cleared to Z[beta]^n and
    sign-normalized to strictly positive entries (Perron)."""
    field = pd.field
    n = sub.n
    m = incidence_matrix(sub)
    beta = field.beta()
    rows = [
        [field.from_rational(int(m[j, i])) - (beta if i == j else 0) for j in range(n)]
        for i in range(n)
    ]  # row i of (tM - beta I)

    # Gaussian elimination; the kernel is one-dimensional (beta simple).
    pivots = []
    pivot_cols = set()
    for row in rows:
        r = list(row)
        for pcol, prow in pivots:
            if not r[pcol].is_zero():
                factor = r[pcol]
                r = [a - factor * b for a, b in zip(r, prow)]
        lead = next((j for j in range(n) if not r[j].is_zero()), None)
        if lead is None:
            continue
        inv = r[lead].inverse()
        r = [a * inv for a in r]
        pivots.append((lead, r))
        pivot_cols.add(lead)
    free = [j for j in range(n) if j not in pivot_cols]
    if len(free) != 1:
        raise ValueError(f"eigenspace dimension {len(free)} != 1")
    v = [field.zero()] * n
    v[free[0]] = field.one()
    for pcol, prow in reversed(pivots):
        v[pcol] = -sum((prow[j] * v[j] for j in range(n) if j != pcol), field.zero())

    denoms = [c.denominator for entry in v for c in entry.coords]
    scale = lcm(*denoms) if denoms else 1
    v = [entry * scale for entry in v]
    signs = {entry.sign() for entry in v}
    if signs == {-1}:
        v = [-entry for entry in v]
    elif signs != {1}:
        raise ValueError("left Perron eigenvector is not strictly signed")
    return tuple(v)


@dataclass
class Projections:
    """Numeric and exact projection data for a unit Pisot substitution."""

    sub: Substitution
    pisot: PisotData
    v_exact: tuple[AlgebraicNumber, ...]  # left eigenvector in Z[beta]^n
    roots: list[complex]  # roots of f, beta first
    v_num: np.ndarray  # (r+s, n) complex, row i dual to u_num[i]
    u_num: np.ndarray  # (r+s, n) complex right eigenvectors, u.v = 1
    neutral_basis: np.ndarray  # (n, n-d) orthonormal basis of K_n

    @property
    def n(self) -> int:
        return self.sub.n

    @property
    def dim_c(self) -> int:
        return self.pisot.d - 1

    # --- exact layer ---

    def pairing_exact(self, x) -> AlgebraicNumber:
        """<x, v_beta> in Z[beta] for an integer vector x."""
        field = self.pisot.field
        return sum(
            (self.v_exact[j] * int(x[j]) for j in range(self.n)), field.zero()
        )

    def pi_e_word_exact(self, w) -> AlgebraicNumber:
        return self.pairing_exact(abelianize(w, self.n))

    # --- numeric layer ---

    def pi_e(self, x) -> float:
        return float(np.real(np.dot(self.v_num[0], np.asarray(x, dtype=float))))

    def pi_c_complex(self, x) -> np.ndarray:
        """One complex pairing <x, v_i> per conjugate, i = 2..r+s."""
        return self.v_num[1:] @ np.asarray(x, dtype=float)

    def pi_c(self, x) -> np.ndarray:
        """Real coordinates in K_c: one per real conjugate, (Re, Im) per
        complex pair."""
        z = self.pi_c_complex(x)
        out = []
        for i, val in enumerate(z, start=2):
            if i <= self.pisot.r:
                out.append(val.real)
            else:
                out.extend((val.real, val.imag))
        return np.array(out)

    def pi(self, x) -> np.ndarray:
        """Projection onto K_e + K_c along K_n, as a vector in R^n."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(self.n)
        for i in range(self.pisot.r + self.pisot.s):
            term = np.dot(self.v_num[i], x) * self.u_num[i]
            if i < self.pisot.r:
                out += np.real(term)
            else:
                out += 2 * np.real(term)
        return out

    def contraction_matrix(self) -> np.ndarray:
        """Matrix C with pi_c(M x) = C . pi_c(x); block diagonal, one 1x1
        block per real conjugate and one rotation-scaling per complex pair."""
        blocks = []
        for i, root in enumerate(self.roots[1:], start=2):
            if i <= self.pisot.r:
                blocks.append(np.array([[root.real]]))
            else:
                a, b = root.real, root.imag
                blocks.append(np.array([[a, -b], [b, a]]))
        dim = sum(b.shape[0] for b in blocks)
        c = np.zeros((dim, dim))
        pos = 0
        for b in blocks:
            k = b.shape[0]
            c[pos : pos + k, pos : pos + k] = b
            pos += k
        return c

    def contraction_norm_upper(self) -> Fraction:
        """Certified upper bound for the operator norm of the K_c action."""
        return self.pisot.conjugate_modulus_upper()

    def redundancy_witness(self) -> np.ndarray:
        """A nonzero integer vector c = f(M) e_i with pi(c) = 0."""
        m = incidence_matrix(self.sub)
        fm = np.zeros_like(m)
        power = np.eye(self.n, dtype=np.int64)
        for coeff in self.pisot.f:
            fm = fm + coeff * power
            power = power @ m
        for i in range(self.n):
            if fm[:, i].any():
                return fm[:, i].copy()
        raise ValueError("f(M) = 0: no redundancy (irreducible case)")


def projections(sub: Substitution, pd: PisotData) -> Projections:
    if not pd.is_unit:
        raise ValueError("projections require a unit Pisot substitution")
    n = sub.n
    m = incidence_matrix(sub).astype(float)
    v_exact = _exact_left_eigenvector(sub, pd)
    roots = _numeric_roots(pd)

    v_num = np.zeros((pd.r + pd.s, n), dtype=complex)
    for i, root in enumerate(roots):
        row = np.array(
            [complex(poly_eval(entry.coords, root)) for entry in v_exact]
        )
        row = row / np.linalg.norm(row)
        # deterministic phase: first entry positive real
        row = row * (abs(row[0]) / row[0])
        v_num[i] = row

    u_num = np.zeros((pd.r + pd.s, n), dtype=complex)
    for i, root in enumerate(roots):
        a = m - root * np.eye(n)
        _, sv, vh = np.linalg.svd(a)
        w = vh[-1].conj()
        u_num[i] = w / np.dot(w, v_num[i])

    for i in range(pd.r + pd.s):
        for j in range(pd.r + pd.s):
            expect = 1.0 if i == j else 0.0
            if abs(np.dot(u_num[i], v_num[j]) - expect) > DUALITY_TOL:
                raise ArithmeticError("numeric duality u.v = delta failed")

    # K_n = f(M) R^n
    fm = np.zeros((n, n))
    power = np.eye(n)
    for coeff in pd.f:
        fm += coeff * power
        power = power @ m
    if pd.d < n:
        q, _r = np.linalg.qr(fm)
        rank = n - pd.d
        u_svd, sv, _ = np.linalg.svd(fm)
        neutral = u_svd[:, :rank]
    else:
        neutral = np.zeros((n, 0))

    proj = Projections(
        sub=sub,
        pisot=pd,
        v_exact=v_exact,
        roots=roots,
        v_num=v_num,
        u_num=u_num,
        neutral_basis=neutral,
    )

    # pi_c must intertwine M with the block contraction
    c = proj.contraction_matrix()
    for j in range(n):
        e = np.eye(n)[j]
        lhs = proj.pi_c(m @ e)
        rhs = c @ proj.pi_c(e)
        if np.max(np.abs(lhs - rhs)) > COMMUTE_TOL:
            raise ArithmeticError("pi_c does not commute with M")
    return proj


# --- integer kernel lattice of pi ---------------------------------------------


def column_hnf_transform(a: np.ndarray):
    """Unimodular V with A.V = [H | 0], H lower-triangular with positive
    pivots, rank(A) pivot columns.  Returns (H, V, rank)."""
    a = [[int(x) for x in row] for row in np.asarray(a)]
    d = len(a)
    n = len(a[0]) if d else 0
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def colop_sub(j, k, q):  # col_j -= q * col_k
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def colswap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def colneg(j):
        for row in a:
            row[j] = -row[j]
        for row in v:
            row[j] = -row[j]

    col = 0
    for row_i in range(d):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if a[row_i][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(a[row_i][j]))
            if piv != col:
                colswap(col, piv)
            done = True
            for j in range(col + 1, n):
                if a[row_i][j] != 0:
                    colop_sub(j, col, a[row_i][j] // a[row_i][col])
                    if a[row_i][j] != 0:
                        done = False
            if done:
                break
        if a[row_i][col] != 0:
            if a[row_i][col] < 0:
                colneg(col)
            col += 1
    rank = col
    h = np.array([[a[i][j] for j in range(rank)] for i in range(d)], dtype=object)
    return h, np.array(v, dtype=object), rank


@dataclass
class KernelLattice:
    """Z^n modulo L, where L = Z^n intersect K_n is the integer kernel of pi.

    A delta in Z^n projects to coordinates c in Z^rank via the exact pairing
    matrix; section() lifts such coordinates back to a concrete delta.
    """

    a_matrix: np.ndarray  # (d, n) int: power-basis coords of <e_j, v_beta>
    h: np.ndarray  # (d, rank) lower triangular
    v_transform: np.ndarray  # (n, n) unimodular
    rank: int

    @property
    def kernel_basis(self) -> np.ndarray:
        """Integer basis of L as columns (n, n - rank)."""
        return np.array(
            [[int(x) for x in row[self.rank :]] for row in self.v_transform],
            dtype=np.int64,
        )

    def coords(self, delta) -> np.ndarray:
        """Image A.delta in Z^d (constant on cosets of L, injective on Z^n/L)."""
        return np.asarray(self.a_matrix, dtype=np.int64) @ np.asarray(
            delta, dtype=np.int64
        )

    def section(self, c) -> np.ndarray:
        """An integer delta with coords(delta) = H.c, for integer c."""
        c = np.asarray(c)
        lift = np.array(
            [[int(x) for x in row[: self.rank]] for row in self.v_transform],
            dtype=np.int64,
        )
        return lift @ np.asarray(c, dtype=np.int64)


def kernel_lattice(proj: Projections) -> KernelLattice:
    d = proj.pisot.d
    a = np.zeros((d, proj.n), dtype=np.int64)
    for j, entry in enumerate(proj.v_exact):
        for k, coeff in enumerate(entry.coords):
            assert coeff.denominator == 1
            a[k, j] = int(coeff)
    h, v, rank = column_hnf_transform(a)
    if rank != d:
        raise ValueError("pairing matrix rank deficient")
    return KernelLattice(a_matrix=a, h=h, v_transform=v, rank=rank)

"""Integer-weighted chains of k-dimensional faces of the Z^n grid.

A face is (base point in Z^n, strictly increasing wedge type); chains are
sparse maps from faces to nonzero integer coefficients, kept canonical by
absorbing the antisymmetry sign at insertion time.  Dual chains reuse the
same container with a flag.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

WedgeType = tuple[int, ...]
Base = tuple[int, ...]


def wedge_normalize(letters) -> tuple[WedgeType, int] | None:
    """Sort a wedge word; None if a letter repeats, else (sorted, signature)."""
    letters = tuple(letters)
    if len(set(letters)) != len(letters):
        return None
    inversions = sum(
        1
        for i in range(len(letters))
        for j in range(i + 1, len(letters))
        if letters[i] > letters[j]
    )
    return tuple(sorted(letters)), (-1) ** inversions


def wedge_types(n: int, k: int) -> list[WedgeType]:
    """O_k in lexicographic order."""
    return [tuple(c) for c in combinations(range(1, n + 1), k)]


def wedge_complement(n: int, letters: WedgeType) -> WedgeType:
    s = set(letters)
    return tuple(a for a in range(1, n + 1) if a not in s)


class Chain:
    """Canonical sparse chain; immutable by convention (do not mutate terms)."""

    __slots__ = ("n", "k", "dual", "terms")

    def __init__(self, n: int, k: int, terms=None, dual: bool = False):
        self.n = n
        self.k = k
        self.dual = dual
        self.terms: dict[tuple[Base, WedgeType], int] = dict(terms or {})

    @classmethod
    def zero(cls, n: int, k: int, dual: bool = False) -> "Chain":
        return cls(n, k, {}, dual)

    @classmethod
    def from_faces(cls, n, k, faces, dual=False) -> "Chain":
        """faces: iterable of (coeff, base, letters); letters in any order."""
        terms: dict[tuple[Base, WedgeType], int] = {}
        for coeff, base, letters in faces:
            norm = wedge_normalize(letters)
            if norm is None or coeff == 0:
                continue
            wtype, sign = norm
            if len(wtype) != k:
                raise ValueError(f"face dimension {len(wtype)} != {k}")
            key = (tuple(int(b) for b in base), wtype)
            new = terms.get(key, 0) + coeff * sign
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return cls(n, k, terms, dual)

    def single(self, base, letters, coeff=1) -> "Chain":
        return Chain.from_faces(self.n, self.k, [(coeff, base, letters)], self.dual)

    def items(self):
        """Terms in canonical (base, type) order."""
        return sorted(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_geometric(self) -> bool:
        return all(c in (1, -1) for c in self.terms.values())

    def __add__(self, other: "Chain") -> "Chain":
        if (self.n, self.k, self.dual) != (other.n, other.k, other.dual):
            raise ValueError("chain shape mismatch")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            new = terms.get(key, 0) + c
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return Chain(self.n, self.k, terms, self.dual)

    def __neg__(self) -> "Chain":
        return Chain(
            self.n, self.k, {k: -c for k, c in self.terms.items()}, self.dual
        )

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "Chain":
        if scalar == 0:
            return Chain.zero(self.n, self.k, self.dual)
        return Chain(
            self.n, self.k, {k: scalar * c for k, c in self.terms.items()}, self.dual
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Chain)
            and (self.n, self.k, self.dual) == (other.n, other.k, other.dual)
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.k, self.dual, frozenset(self.terms.items())))

    def translate(self, z) -> "Chain":
        z = tuple(int(t) for t in z)
        return Chain(
            self.n,
            self.k,
            {
                (tuple(b + t for b, t in zip(base, z)), wtype): c
                for (base, wtype), c in self.terms.items()
            },
            self.dual,
        )

    def face_set(self) -> set:
        return set(self.terms)

    def __repr__(self):
        star = "*" if self.dual else ""
        return f"Chain{star}[{format_chain(self).strip() or '0'}]"


def pairing(dual_chain: Chain, chain: Chain) -> int:
    """<X, Y> for a dual k-chain X and a k-chain Y (basis duality)."""
    if not dual_chain.dual or chain.dual:
        raise ValueError("pairing takes (dual chain, chain)")
    return sum(
        c * chain.terms.get(key, 0) for key, c in dual_chain.terms.items()
    )


def boundary(chain: Chain) -> Chain:
    """Alternating-sum boundary; k=1 faces map to signed point pairs."""
    if chain.k < 1:
        raise ValueError("boundary needs k >= 1")
    faces = []
    for (base, wtype), coeff in chain.terms.items():
        for i, a in enumerate(wtype, start=1):
            rest = wtype[: i - 1] + wtype[i:]
            sign = (-1) ** i
            faces.append((coeff * sign, base, rest))
            shifted = tuple(
                b + (1 if j == a - 1 else 0) for j, b in enumerate(base)
            )
            faces.append((-coeff * sign, shifted, rest))
    return Chain.from_faces(chain.n, chain.k - 1, faces, chain.dual)


def poincare_phi(dual_chain: Chain) -> Chain:
    """phi_k: (x, a1^...^ak)* -> (-1)^(a1+...+ak) (x + e_a1+...+e_ak, complement)."""
    if not dual_chain.dual:
        raise ValueError("poincare_phi takes a dual chain")
    n, k = dual_chain.n, dual_chain.k
    faces = []
    for (base, wtype), coeff in dual_chain.terms.items():
        sign = (-1) ** sum(wtype)
        shifted = list(base)
        for a in wtype:
            shifted[a - 1] += 1
        faces.append((coeff * sign, tuple(shifted), wedge_complement(n, wtype)))
    return Chain.from_faces(n, n - k, faces, dual=False)


def poincare_phi_inv(chain: Chain) -> Chain:
    """Inverse of phi_k: (y, c) -> (-1)^(sum of complement) (y - sum e_a, complement)*."""
    if chain.dual:
        raise ValueError("poincare_phi_inv takes a non-dual chain")
    n = chain.n
    k = n - chain.k
    faces = []
    for (base, wtype), coeff in chain.terms.items():
        comp = wedge_complement(n, wtype)
        sign = (-1) ** sum(comp)
        shifted = list(base)
        for a in comp:
            shifted[a - 1] -= 1
        faces.append((coeff * sign, tuple(shifted), comp))
    return Chain.from_faces(n, k, faces, dual=True)


def coboundary(dual_chain: Chain) -> Chain:
    """Dual boundary on C*_(k-1) -> C*_k, via phi-conjugation."""
    return poincare_phi_inv(boundary(poincare_phi(dual_chain)))


def support_vertices(base, letters) -> list[tuple[int, ...]]:
    """The 2^k corners x + sum_(i in S) e_(a_i) of a face's support."""
    base = tuple(int(b) for b in base)
    corners = []
    for r in range(len(letters) + 1):
        for subset in combinations(letters, r):
            c = list(base)
            for a in subset:
                c[a - 1] += 1
            corners.append(tuple(c))
    return corners


def format_chain(chain: Chain) -> str:
    """One term per line: `coeff (x1,...,xn) a1^a2^...` (type `.` for k=0)."""
    lines = []
    for (base, wtype), coeff in chain.items():
        tname = "^".join(map(str, wtype)) if wtype else "."
        lines.append(f"{coeff:+d} ({','.join(map(str, base))}) {tname}")
    return "\n".join(lines) + ("\n" if lines else "")


def random_chain(n, k, rng: np.random.Generator, dual=False, terms=3, span=4) -> Chain:
    faces = []
    for _ in range(terms):
        base = tuple(int(x) for x in rng.integers(-span, span + 1, n))
        letters = rng.permutation(n)[:k] + 1
        coeff = int(rng.integers(-3, 4))
        faces.append((coeff, base, tuple(int(a) for a in letters)))
    return Chain.from_faces(n, k, faces, dual)

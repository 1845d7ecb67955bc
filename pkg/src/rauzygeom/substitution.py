"""Substitutions on a finite alphabet {1, ..., n} and their incidence matrices.

Words are tuples of integer letters.  A substitution is stored as the tuple of
image words, indexed so that ``images[a - 1]`` is the image of letter ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

import numpy as np
import sympy

Word = tuple[int, ...]


@dataclass(frozen=True)
class Substitution:
    """A non-erasing substitution a -> images[a-1] on the alphabet {1..n}."""

    n: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if self.n < 1 or len(self.images) != self.n:
            raise ValueError("need one image word per letter")
        for w in self.images:
            if len(w) == 0:
                raise ValueError("substitution must be non-erasing")
            if any(not (1 <= a <= self.n) for a in w):
                raise ValueError(f"letter out of range in image {w!r}")

    def image(self, a: int) -> Word:
        return self.images[a - 1]

    def apply(self, word: Word, power: int = 1) -> Word:
        for _ in range(power):
            word = tuple(b for a in word for b in self.images[a - 1])
        return word

    @property
    def alphabet(self) -> range:
        return range(1, self.n + 1)


def abelianize(word: Word, n: int) -> np.ndarray:
    """Letter-count vector in Z^n of a word."""
    v = np.zeros(n, dtype=np.int64)
    for a in word:
        v[a - 1] += 1
    return v


def incidence_matrix(sub: Substitution) -> np.ndarray:
    """Integer matrix M with M[b-1, a-1] = number of b's in the image of a.

    Satisfies abelianize(sub.apply(w)) == M @ abelianize(w).
    """
    m = np.zeros((sub.n, sub.n), dtype=np.int64)
    for a in sub.alphabet:
        m[:, a - 1] = abelianize(sub.image(a), sub.n)
    return m


def integer_inverse(mat: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix, as an integer matrix."""
    m = sympy.Matrix(mat.tolist())
    det = m.det()
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {det})")
    inv = m.adjugate() * det  # det^-1 == det for det = +-1
    return np.array(inv.tolist(), dtype=np.int64)


def is_primitive(sub: Substitution) -> bool:
    """Primitivity of the incidence matrix.

    M is primitive iff M^(n^2 - 2n + 2) is entrywise positive; checking that
    single power is a complete test for nonnegative matrices.
    """
    m = incidence_matrix(sub)
    n = sub.n
    bound = n * n - 2 * n + 2
    b = m > 0
    exp = 1
    while exp < 2 * bound:  # squares clip to 0/1, so no overflow
        if b.all():
            return True
        b = (b.astype(np.int64) @ b.astype(np.int64)) > 0
        exp *= 2
    return bool(b.all())


def occurrences(sub: Substitution, b: int) -> list[tuple[int, Word, Word]]:
    """All decompositions sub(a) = p + (b,) + s, as triples (a, p, s).

    Ordered by the letter a, then by the position of b inside sub(a).
    """
    out = []
    for a in sub.alphabet:
        w = sub.image(a)
        for i, c in enumerate(w):
            if c == b:
                out.append((a, w[:i], w[i + 1:]))
    return out


def fixed_point_prefix(sub: Substitution, seed: int, length: int) -> Word:
    """First ``length`` letters of the one-sided fixed point starting from ``seed``.

    Requires sub(seed) to start with seed, so the iterates stabilize.
    """
    if sub.image(seed)[0] != seed:
        raise ValueError(f"image of {seed} does not start with {seed}")
    w: Word = (seed,)
    for _ in count():
        if len(w) >= length:
            return w[:length]
        nxt = sub.apply(w)
        if len(nxt) == len(w):
            raise ValueError("fixed point is eventually periodic and too short")
        w = nxt
    raise AssertionError


# --- plain-text exchange format: one line per letter, "a -> w1 w2 ..." ---


def parse_substitution(text: str) -> Substitution:
    """Parse the line format ``a -> w1 w2 ...``.

    Blank lines and ``#`` comments are ignored.  Every letter 1..n must get
    exactly one line; the lines may come in any order.
    """
    rules: dict[int, Word] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition("->")
        if not sep:
            raise ValueError(f"line {lineno}: missing '->'")
        try:
            a = int(head)
            w = tuple(int(tok) for tok in tail.split())
        except ValueError as exc:
            raise ValueError(f"line {lineno}: letters must be integers") from exc
        if a in rules:
            raise ValueError(f"line {lineno}: duplicate rule for {a}")
        rules[a] = w
    n = len(rules)
    if sorted(rules) != list(range(1, n + 1)):
        raise ValueError(f"rules do not cover an alphabet 1..n: {sorted(rules)}")
    return Substitution(n, tuple(rules[a] for a in range(1, n + 1)))


def format_substitution(sub: Substitution) -> str:
    """Canonical text form; parse(format(s)) round-trips bit-exactly."""
    return "".join(
        f"{a} -> {' '.join(map(str, sub.image(a)))}\n" for a in sub.alphabet
    )


# --- the standing examples ---


def tribonacci() -> Substitution:
    return Substitution(3, ((1, 2), (1, 3), (1,)))


def hokkaido_family(t: int) -> Substitution:
    """1 -> 1^(t+1) 2, 2 -> 3, 3 -> 4, 4 -> 1^t 5, 5 -> 1.  t = 0 is Hokkaido."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return Substitution(
        5, ((1,) * (t + 1) + (2,), (3,), (4,), (1,) * t + (5,), (1,))
    )


def nonprojecting_family(t: int) -> Substitution:
    """1 -> 1^(t-1) 2, 2 -> 1^(t-1) 3, 3 -> 4, 4 -> 1, for t >= 2."""
    if t < 2:
        raise ValueError("t must be >= 2")
    return Substitution(4, ((1,) * (t - 1) + (2,), (1,) * (t - 1) + (3,), (4,), (1,)))

"""Exact integer/rational polynomial algebra, Pisot classification, and
arithmetic in Q(beta) with certified sign decisions.

Polynomials are coefficient tuples, lowest degree first.  Elements of Q(beta)
carry exact rational coordinates in the power basis {1, beta, ..., beta^(d-1)};
signs are decided by interval refinement of beta's rational isolating interval,
never by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .substitution import Substitution, incidence_matrix

IntPoly = tuple[int, ...]

_x = sympy.Symbol("x")

DEGREE_CAP = 16


def poly_trim(coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(p) -> int:
    return len(p) - 1  # zero polynomial -> -1


def poly_eval(p, value):
    acc = 0 * value if p else 0
    for c in reversed(p):
        acc = acc * value + c
    return acc


def poly_mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_to_sympy(p) -> sympy.Poly:
    return sympy.Poly(list(reversed(p)) or [0], _x)


def poly_from_sympy(p: sympy.Poly) -> IntPoly:
    return poly_trim(reversed([int(c) for c in p.all_coeffs()]))


def poly_str(p) -> str:
    return str(poly_to_sympy(p).as_expr())


def char_poly(mat: np.ndarray) -> IntPoly:
    """Exact characteristic polynomial det(xI - M), monic, as an IntPoly."""
    m = sympy.Matrix(np.asarray(mat).tolist())
    return poly_from_sympy(m.charpoly(_x))


def factor_over_Q(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Exact irreducible factorization over Z of a monic integer polynomial.

    Returns (factor, multiplicity) pairs sorted by degree then coefficients.
    """
    if poly_degree(p) > DEGREE_CAP:
        raise ValueError(f"degree {poly_degree(p)} above cap {DEGREE_CAP}")
    if not p or p[-1] != 1:
        raise ValueError("expected a monic integer polynomial")
    _, factors = poly_to_sympy(p).factor_list()
    out = [(poly_from_sympy(f), int(m)) for f, m in factors]
    out.sort(key=lambda fm: (poly_degree(fm[0]), fm[0]))
    return out


@lru_cache(maxsize=None)
def _cyclotomic_orders(m: int) -> tuple[int, ...]:
    # phi(k) >= sqrt(k/2), so phi(k) = m forces k <= 2m^2 + 1
    return tuple(k for k in range(1, 2 * m * m + 2) if sympy.totient(k) == m)


def is_cyclotomic(h: IntPoly) -> bool:
    """Exact test: h irreducible monic is cyclotomic iff it divides x^k - 1
    for some k with phi(k) = deg h."""
    m = poly_degree(h)
    if m < 1:
        return False
    hp = poly_to_sympy(h)
    for k in _cyclotomic_orders(m):
        xk1 = sympy.Poly([1] + [0] * (k - 1) + [-1], _x)
        if sympy.rem(xk1, hp, _x) == 0:
            return True
    return False


def check_hypothesis_N(g: IntPoly) -> tuple[bool, str]:
    """Neutral polynomial test: squarefree, g(0) = 1, all factors cyclotomic."""
    if poly_degree(g) == 0:
        return True, "trivial neutral polynomial"
    gp = poly_to_sympy(g)
    if sympy.gcd(gp, gp.diff(_x)).degree() > 0:
        return False, "not squarefree"
    if poly_eval(g, 0) != 1:
        return False, f"g(0) = {poly_eval(g, 0)} != 1"
    for h, _mult in factor_over_Q(g):
        if not is_cyclotomic(h):
            return False, f"non-cyclotomic factor {poly_str(h)}"
    return True, "squarefree, g(0)=1, all factors cyclotomic"


# --- certified root isolation -------------------------------------------------


def isolate_roots(p: IntPoly, eps: Fraction):
    """Rational isolating boxes for all roots of a squarefree integer polynomial.

    Returns (real, complex) where real is a list of (lo, hi) Fractions and
    complex is a list of corner pairs ((re_lo, im_lo), (re_hi, im_hi)) for the
    roots with im > 0 (one per conjugate pair).
    """
    sp = poly_to_sympy(p)
    real_part, cplx_part = sp.intervals(all=True, eps=sympy.Rational(eps))
    reals = [(Fraction(a.p, a.q), Fraction(b.p, b.q)) for (a, b), _ in real_part]
    cplx = []
    for (c1, c2), _ in cplx_part:
        re1, im1 = sympy.re(c1), sympy.im(c1)
        re2, im2 = sympy.re(c2), sympy.im(c2)
        if im1 <= 0 and im2 <= 0:
            continue  # keep one box per conjugate pair
        cplx.append(
            (
                (Fraction(re1.p, re1.q), Fraction(im1.p, im1.q)),
                (Fraction(re2.p, re2.q), Fraction(im2.p, im2.q)),
            )
        )
    return reals, cplx


def _box_mod_bounds(box) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds on |z| over a rational rectangle."""
    (re1, im1), (re2, im2) = box
    res = sorted((re1, re2))
    ims = sorted((im1, im2))

    def axis_bounds(lo, hi):
        hi_abs = max(abs(lo), abs(hi))
        lo_abs = Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))
        return lo_abs, hi_abs

    rlo, rhi = axis_bounds(*res)
    ilo, ihi = axis_bounds(*ims)
    return _frac_sqrt_lower(rlo * rlo + ilo * ilo), _frac_sqrt_upper(rhi * rhi + ihi * ihi)


def _frac_sqrt_upper(q: Fraction) -> Fraction:
    # rational upper bound on sqrt(q) via integer sqrt at fixed precision
    scale = 10**12
    num = (q * scale * scale).numerator // (q * scale * scale).denominator
    return Fraction(sympy.integer_nthroot(num, 2)[0] + 1, scale)


def _frac_sqrt_lower(q: Fraction) -> Fraction:
    scale = 10**12
    num = (q * scale * scale).numerator // (q * scale * scale).denominator
    return Fraction(sympy.integer_nthroot(num, 2)[0], scale)


# --- the number field Q(beta) -------------------------------------------------


class NumberField:
    """Q(beta) for beta the unique real root > 1 of a monic irreducible f.

    Keeps a rational isolating interval for beta, refined on demand by
    bisection; f(lo) and f(hi) have opposite signs throughout.
    """

    def __init__(self, f: IntPoly, interval: tuple[Fraction, Fraction]):
        self.f = poly_trim(f)
        self.d = poly_degree(self.f)
        if self.d < 1 or self.f[-1] != 1:
            raise ValueError("f must be monic of degree >= 1")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        s_lo, s_hi = poly_eval(self.f, lo), poly_eval(self.f, hi)
        if s_lo == 0 or s_hi == 0 or (s_lo > 0) == (s_hi > 0):
            raise ValueError("interval does not isolate a simple real root")
        self._lo, self._hi = lo, hi
        self._sign_lo = 1 if s_lo > 0 else -1

    def interval(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def refine(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Shrink the isolating interval below the given width by bisection."""
        while self._hi - self._lo > width:
            mid = (self._lo + self._hi) / 2
            s = poly_eval(self.f, mid)
            # f irreducible of degree >= 2 has no rational root; degree 1
            # fields never reach here (beta would be rational).
            if s == 0:
                raise ArithmeticError("rational root of an irreducible f")
            if (s > 0) == (self._sign_lo > 0):
                self._lo = mid
            else:
                self._hi = mid
        return self._lo, self._hi

    def beta_float(self) -> float:
        lo, hi = self.refine(Fraction(1, 10**17))
        return float((lo + hi) / 2)

    # arithmetic on coordinate tuples (length d, Fractions)

    def zero(self):
        return AlgebraicNumber(self, (Fraction(0),) * self.d)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q):
        return AlgebraicNumber(
            self, (Fraction(q),) + (Fraction(0),) * (self.d - 1)
        )

    def beta(self):
        if self.d == 1:
            return self.from_rational(-self.f[0])
        return AlgebraicNumber(
            self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.d - 2)
        )

    def from_coords(self, coords):
        c = tuple(Fraction(q) for q in coords)
        if len(c) != self.d:
            raise ValueError("coordinate length mismatch")
        return AlgebraicNumber(self, c)

    def reduce(self, coeffs) -> tuple[Fraction, ...]:
        """Reduce a polynomial in beta (any length) to power-basis coords."""
        c = [Fraction(q) for q in coeffs]
        for i in range(len(c) - 1, self.d - 1, -1):
            lead = c[i]
            if lead:
                c[i] = Fraction(0)
                for j, fc in enumerate(self.f[:-1]):
                    c[i - self.d + j] -= lead * fc
        c = c[: self.d]
        c += [Fraction(0)] * (self.d - len(c))
        return tuple(c)


@dataclass(frozen=True)
class AlgebraicNumber:
    """Element of Q(beta) in the power basis; immutable, exact."""

    field: NumberField
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other) -> "AlgebraicNumber":
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        if other.field is not self.field:
            raise ValueError("mixed number fields")
        return other

    def __add__(self, other):
        o = self._check(other)
        return AlgebraicNumber(
            self.field, tuple(a + b for a, b in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return AlgebraicNumber(self.field, tuple(a * q for a in self.coords))
        o = self._check(other)
        prod = poly_mul(self.coords, o.coords)
        return AlgebraicNumber(self.field, self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        """Extended Euclid against f in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(beta)")
        f = tuple(Fraction(c) for c in self.field.f)
        r0, r1 = f, poly_trim(self.coords)
        t0, t1 = (), (Fraction(1),)
        while poly_degree(r1) > 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, poly_mul(q, t1))
        # r1 is a nonzero constant: gcd(self, f) = 1 since f is irreducible
        inv_const = 1 / r1[0]
        coords = self.field.reduce(tuple(c * inv_const for c in t1))
        return AlgebraicNumber(self.field, coords)

    def __truediv__(self, other):
        o = self._check(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return self.field is other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def sign(self) -> int:
        """Exact sign via adaptive refinement of beta's isolating interval."""
        if self.is_zero():
            return 0
        width = self.field._hi - self.field._lo
        while True:
            lo, hi = self.field.refine(width)
            vlo, vhi = _interval_horner(self.coords, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            width /= 4

    def to_float(self) -> float:
        lo, hi = self.field.refine(Fraction(1, 10**17))
        vlo, vhi = _interval_horner(self.coords, lo, hi)
        return float((vlo + vhi) / 2)

    def __repr__(self):
        return f"AlgebraicNumber{self.coords}"


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (Fraction(0),) * (n - len(a))
    b = tuple(b) + (Fraction(0),) * (n - len(b))
    return poly_trim(tuple(x - y for x, y in zip(a, b)))


def _poly_divmod(a, b):
    """Division with remainder in Q[x] on Fraction tuples."""
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    db, lead = poly_degree(b), b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j in range(len(b)):
                a[i - db + j] -= c * b[j]
    return poly_trim(q), poly_trim(a)


def _interval_horner(coeffs, lo: Fraction, hi: Fraction):
    """Evaluate a polynomial with rational coefficients over [lo, hi]."""
    vlo = vhi = Fraction(0)
    for c in reversed(coeffs):
        prods = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(prods) + c, max(prods) + c
    return vlo, vhi


# --- Pisot classification -----------------------------------------------------


@dataclass
class PisotData:
    """Certified Pisot split of the characteristic polynomial."""

    charpoly: IntPoly
    f: IntPoly  # Pisot polynomial, monic irreducible
    g: IntPoly  # neutral polynomial (product of the other factors)
    d: int  # degree of f
    field: NumberField  # Q(beta) with the isolating interval for beta
    r: int  # real conjugates of beta (including beta)
    s: int  # complex-conjugate pairs
    is_unit: bool
    is_reducible: bool
    conjugate_boxes: list  # certified boxes: [(lo,hi)] reals then complex boxes
    hypothesis_N: bool
    hypothesis_N_reason: str

    @property
    def beta_interval(self):
        return self.field.interval()

    def beta_float(self) -> float:
        return self.field.beta_float()

    def conjugate_modulus_upper(self) -> Fraction:
        """Certified upper bound for max |beta^(i)|, i >= 2 (the contraction
        rate on K_c)."""
        bounds = []
        for lo, hi in self.conjugate_boxes[1 : self.r]:
            bounds.append(max(abs(lo), abs(hi)))
        for box in self.conjugate_boxes[self.r :]:
            bounds.append(_box_mod_bounds(box)[1])
        return max(bounds) if bounds else Fraction(0)


def pisot_split(sub: Substitution) -> PisotData:
    """Factor the characteristic polynomial and certify the Pisot factor.

    The Pisot factor f is the unique irreducible factor owning a real root
    beta > 1 whose conjugates (and every root of every other factor) have
    modulus < beta, with all conjugates of beta of modulus < 1 -- every
    inequality certified on rational isolating boxes.
    """
    cp = char_poly(incidence_matrix(sub))
    factors = factor_over_Q(cp)

    candidates = []
    for h, _mult in factors:
        eps = Fraction(1, 10**6)
        while True:
            reals, cplx = isolate_roots(h, eps)
            big = [(lo, hi) for lo, hi in reals if lo > 1]
            amb = [
                (lo, hi) for lo, hi in reals if lo <= 1 < hi or (lo < 1 and hi >= 1)
            ]
            if not amb:
                break
            eps /= 10**3
        if len(big) == 1:
            candidates.append((h, big[0], reals, cplx))
    if not candidates:
        raise ValueError("no factor with a real root > 1: not Pisot")
    if len(candidates) > 1:
        raise ValueError("several factors own roots > 1: ambiguous dominant root")

    f, beta_iv, reals, cplx = candidates[0]

    # certify: all conjugates of beta have modulus < 1
    eps = Fraction(1, 10**6)
    while True:
        ok = True
        for lo, hi in reals:
            if (lo, hi) == beta_iv:
                continue
            if not (max(abs(lo), abs(hi)) < 1):
                ok = False
        for box in cplx:
            if not (_box_mod_bounds(box)[1] < 1):
                ok = False
        if ok:
            break
        eps /= 10**3
        if eps < Fraction(1, 10**60):
            raise ValueError("cannot certify Pisot conjugate bounds: not Pisot")
        reals, cplx = isolate_roots(f, eps)
        beta_iv = next((lo, hi) for lo, hi in reals if lo > 1)

    # the dominant root must not be shared: all roots of the other factors
    # stay strictly below beta's interval in modulus
    beta_lo = beta_iv[0]
    for h, _mult in factors:
        if h == f:
            continue
        eps_h = Fraction(1, 10**6)
        while True:
            h_sqfree = poly_from_sympy(
                sympy.Poly(
                    sympy.quo(
                        poly_to_sympy(h), sympy.gcd(poly_to_sympy(h), poly_to_sympy(h).diff(_x))
                    ),
                    _x,
                )
            )
            hre, hcx = isolate_roots(h_sqfree, eps_h)
            if all(max(abs(lo), abs(hi)) < beta_lo for lo, hi in hre) and all(
                _box_mod_bounds(box)[1] < beta_lo for box in hcx
            ):
                break
            eps_h /= 10**3
            if eps_h < Fraction(1, 10**60):
                raise ValueError("dominant root shared by several factors")

    g: IntPoly = (1,)
    for h, mult in factors:
        if h == f:
            for _ in range(mult - 1):
                g = poly_mul(g, h)
        else:
            for _ in range(mult):
                g = poly_mul(g, h)

    field = NumberField(f, beta_iv)
    d = poly_degree(f)
    r = len(reals)
    s = len(cplx)
    conj_boxes = [beta_iv] + [iv for iv in reals if iv != beta_iv] + list(cplx)
    hN, hN_reason = check_hypothesis_N(g)

    return PisotData(
        charpoly=cp,
        f=f,
        g=g,
        d=d,
        field=field,
        r=r,
        s=s,
        is_unit=abs(poly_eval(f, 0)) == 1,
        is_reducible=poly_degree(g) > 0,
        conjugate_boxes=conj_boxes,
        hypothesis_N=hN,
        hypothesis_N_reason=hN_reason,
    )

"""Truncated Laurent series, the product algebra V of a degree-p cover,
the order-p twist, trace, norm and the residue pairing.

A LaurentSeries carries an explicit validity window [lo, hi]; arithmetic
narrows windows pessimistically (a product of windows [a,b] and [c,d] is
valid on [a+c, min(a+d, b+c)]).  INF marks an exactly-known side, where
no dirt can enter.  Coefficients are duck-typed: Fraction, Cyclo,
complex, or WeightedPoly all work.

Elements of V are tuples of series: one component in the totally
ramified local model (z = z1^p, twist z1 -> w z1), p components in the
split model (z -> (z1, ..., zp), twist rotating the components).
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .partitions import WeightedPoly
from .scalars import Cyclo, root_of_unity

INF = 10**9


class WindowError(ValueError):
    """A computation needed coefficients outside the valid window."""


def _is_zero(c) -> bool:
    if isinstance(c, WeightedPoly):
        return c.is_zero()
    try:
        return not c
    except TypeError:
        return c == 0


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class LaurentSeries:
    __slots__ = ("lo", "hi", "coeffs")

    def __init__(self, lo: int, hi: int, coeffs: dict | None = None):
        if lo > hi:
            raise WindowError(f"empty window [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                if e < lo or e > hi:
                    continue
                if not _is_zero(c):
                    clean[e] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(lo: int = -INF, hi: int = INF) -> "LaurentSeries":
        return LaurentSeries(lo, hi, {})

    @staticmethod
    def monomial(e: int, c=Fraction(1), lo: int = -INF, hi: int = INF) -> "LaurentSeries":
        return LaurentSeries(lo, hi, {e: c})

    @staticmethod
    def one(lo: int = -INF, hi: int = INF) -> "LaurentSeries":
        return LaurentSeries.monomial(0, Fraction(1), lo, hi)

    @staticmethod
    def from_terms(terms: dict, lo: int = -INF, hi: int = INF) -> "LaurentSeries":
        return LaurentSeries(lo, hi, dict(terms))

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int):
        if e < self.lo or e > self.hi:
            raise WindowError(
                f"exponent {e} outside valid window [{self.lo}, {self.hi}]"
            )
        return self.coeffs.get(e, 0)

    def support(self):
        return sorted(self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            raise ValueError("valuation of (truncated) zero")
        return min(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        es = set(self.coeffs) | set(other.coeffs)
        return all(
            self.coeffs.get(e, 0) == other.coeffs.get(e, 0)
            for e in es
            if lo <= e <= hi
        )

    def __repr__(self):
        bits = [f"({c})z^{e}" for e, c in sorted(self.coeffs.items())]
        return (" + ".join(bits) or "0") + f" on [{self.lo},{self.hi}]"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        out = {}
        for e, c in self.coeffs.items():
            if lo <= e <= hi:
                out[e] = c
        for e, c in other.coeffs.items():
            if lo <= e <= hi:
                out[e] = out.get(e, 0) + c
        return LaurentSeries(lo, hi, out)

    def __neg__(self):
        return LaurentSeries(self.lo, self.hi, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(
                self.lo, self.hi, {e: c * other for e, c in self.coeffs.items()}
            )
        if self.lo == -INF or other.lo == -INF:
            lo = -INF
        else:
            lo = self.lo + other.lo
        dirt = []
        if self.hi < INF:
            dirt.append(self.hi + other.lo)  # our unknown tail times their lowest
        if other.hi < INF:
            dirt.append(other.hi + self.lo)
        hi = min(dirt) if dirt else INF
        hi = max(hi, lo) if hi < INF else hi
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if lo <= e <= hi:
                    out[e] = out.get(e, 0) + c1 * c2
        return LaurentSeries(lo, hi, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z^k (window shifts along)."""
        lo = self.lo + k if self.lo > -INF else -INF
        hi = self.hi + k if self.hi < INF else INF
        return LaurentSeries(lo, hi, {e + k: c for e, c in self.coeffs.items()})

    def truncate(self, lo: int, hi: int) -> "LaurentSeries":
        return LaurentSeries(max(lo, self.lo), min(hi, self.hi), self.coeffs)

    def map_coeffs(self, fn) -> "LaurentSeries":
        return LaurentSeries(self.lo, self.hi, {e: fn(c) for e, c in self.coeffs.items()})

    def inverse(self) -> "LaurentSeries":
        """Invert a unit: the lowest stored coefficient must be nonzero and
        sit at the window floor; the result window mirrors the input one."""
        if self.is_zero():
            raise ZeroDivisionError("inverting zero series")
        v = self.valuation()
        lead = self.coeffs[v]
        if isinstance(lead, WeightedPoly):
            inv_lead = poly_inverse(lead)
        elif isinstance(lead, Cyclo):
            inv_lead = lead.inverse()
        elif isinstance(lead, (int, Fraction)):
            inv_lead = Fraction(1) / Fraction(lead)
        else:
            inv_lead = 1.0 / lead
        u = {e - v: c * inv_lead for e, c in self.coeffs.items() if e != v}
        if self.hi == INF:
            if u:
                raise WindowError("truncate an exact unit before inverting it")
            width = 0
        else:
            width = self.hi - v
        acc = {0: inv_lead}
        term = {0: Fraction(1)}
        for _ in range(width):
            nxt = {}
            for e1, c1 in term.items():
                for e2, c2 in u.items():
                    e = e1 + e2
                    if e <= width:
                        nxt[e] = nxt.get(e, 0) - c1 * c2
            term = {e: c for e, c in nxt.items() if not _is_zero(c)}
            if not term:
                break
            for e, c in term.items():
                acc[e] = acc.get(e, 0) + c * inv_lead
        hi = INF if self.hi == INF else width - v
        return LaurentSeries(-v, hi, {e - v: c for e, c in acc.items()})

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        lo = min(self.coeffs, default=0)
        hi = max(self.coeffs, default=lo)
        return {
            "lo": lo,
            "coeffs": [_scalar_to_json(self.coeffs.get(e, 0)) for e in range(lo, hi + 1)],
        }

    @staticmethod
    def from_json(data: dict, lo_window: int = -INF, hi_window: int = INF) -> "LaurentSeries":
        lo = data["lo"]
        coeffs = {lo + k: _scalar_from_json(v) for k, v in enumerate(data["coeffs"])}
        return LaurentSeries(lo_window, hi_window, coeffs)


def _scalar_to_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return f"{c}/1"
    if isinstance(c, Cyclo):
        return c.to_json()
    if isinstance(c, complex):
        return [c.real, c.imag]
    raise TypeError(f"cannot serialize scalar {type(c).__name__}")


def _scalar_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, dict):
        return Cyclo.from_json(v)
    if isinstance(v, list):
        return complex(v[0], v[1])
    raise TypeError(f"cannot parse scalar {v!r}")


def poly_inverse(p: WeightedPoly) -> WeightedPoly:
    """Inverse of a WeightedPoly with nonzero constant term, to its cap."""
    c0 = p.constant_term()
    if _is_zero(c0):
        raise ZeroDivisionError("polynomial has no constant term")
    if isinstance(c0, (int, Fraction)):
        inv0 = Fraction(1) / Fraction(c0)
    elif isinstance(c0, Cyclo):
        inv0 = c0.inverse()
    else:
        inv0 = 1.0 / c0
    u = (p - c0) * inv0
    acc = WeightedPoly.const(inv0, p.r, p.cap)
    term = WeightedPoly.const(Fraction(1), p.r, p.cap)
    for _ in range(p.cap):
        term = term * u * Fraction(-1)
        if term.is_zero():
            break
        acc = acc + term * inv0
    return acc


class VElement:
    """Element of the cover algebra: 'ram' has one component, 'nr' has p."""

    __slots__ = ("case", "p", "components")

    def __init__(self, case: str, p: int, components):
        if case not in ("ram", "nr"):
            raise ValueError(f"unknown case {case!r}")
        components = tuple(components)
        want = 1 if case == "ram" else p
        if len(components) != want:
            raise ValueError(f"{case} case needs {want} components, got {len(components)}")
        self.case = case
        self.p = p
        self.components = components

    @property
    def r(self) -> int:
        return len(self.components)

    @staticmethod
    def monomial(case: str, p: int, comp: int, e: int, c=Fraction(1),
                 lo: int = -INF, hi: int = INF) -> "VElement":
        r = 1 if case == "ram" else p
        comps = [
            LaurentSeries.monomial(e, c, lo, hi) if j == comp else LaurentSeries.zero(lo, hi)
            for j in range(1, r + 1)
        ]
        return VElement(case, p, comps)

    @staticmethod
    def one(case: str, p: int, lo: int = -INF, hi: int = INF) -> "VElement":
        r = 1 if case == "ram" else p
        return VElement(case, p, [LaurentSeries.one(lo, hi) for _ in range(r)])

    def _check(self, other: "VElement"):
        if self.case != other.case or self.p != other.p:
            raise ValueError("mixed algebra cases")

    def __add__(self, other):
        self._check(other)
        return VElement(self.case, self.p,
                        [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return VElement(self.case, self.p,
                        [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VElement(self.case, self.p, [-a for a in self.components])

    def __mul__(self, other):
        if isinstance(other, VElement):
            self._check(other)
            return VElement(self.case, self.p,
                            [a * b for a, b in zip(self.components, other.components)])
        return VElement(self.case, self.p, [a * other for a in self.components])

    __rmul__ = __mul__

    def inverse(self) -> "VElement":
        return VElement(self.case, self.p, [a.inverse() for a in self.components])

    def __eq__(self, other):
        if not isinstance(other, VElement):
            return NotImplemented
        return (self.case == other.case and self.p == other.p
                and all(a == b for a, b in zip(self.components, other.components)))

    def __repr__(self):
        return f"VElement({self.case}, p={self.p}, {list(self.components)!r})"

    def map_coeffs(self, fn) -> "VElement":
        return VElement(self.case, self.p, [c.map_coeffs(fn) for c in self.components])

    def truncate(self, lo: int, hi: int) -> "VElement":
        return VElement(self.case, self.p, [c.truncate(lo, hi) for c in self.components])

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "p": self.p,
            "components": [c.to_json() for c in self.components],
        }

    @staticmethod
    def from_json(data: dict) -> "VElement":
        return VElement(
            data["case"], data["p"],
            [LaurentSeries.from_json(c) for c in data["components"]],
        )


def v_arith(a: VElement, b: VElement, op: str) -> VElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a * b.inverse()
    raise ValueError(f"unknown op {op!r}")


def _is_numeric(a: VElement) -> bool:
    for comp in a.components:
        for c in comp.coeffs.values():
            if isinstance(c, complex):
                return True
            if isinstance(c, WeightedPoly) and any(
                isinstance(v, complex) for v in c.terms.values()
            ):
                return True
    return False


def omega_for(a: VElement, k: int = 1):
    """zeta_p^k in whatever scalar world the element lives in."""
    if _is_numeric(a):
        return cmath.exp(2j * cmath.pi * k / a.p)
    if a.p == 2:
        return Fraction(-1) if k % 2 else Fraction(1)
    return root_of_unity(a.p, k)


def sigma_act(a: VElement, power: int = 1) -> VElement:
    """The order-p twist.  Ramified: f(z1) -> f(w z1), i.e. the z1^k
    coefficient picks up w^k.  Split: rotate the components one slot to
    the right per power, (f1, ..., fp) -> (fp, f1, ..., f_{p-1})."""
    power %= a.p
    if power == 0:
        return a
    if a.case == "ram":
        w = omega_for(a, power)
        comp = a.components[0]
        out = {}
        for e, c in comp.coeffs.items():
            k = e % a.p
            out[e] = c * (w**k) if k else c
        return VElement(a.case, a.p, [LaurentSeries(comp.lo, comp.hi, out)])
    comps = a.components
    rotated = tuple(comps[(j - power) % a.p] for j in range(a.p))
    return VElement(a.case, a.p, rotated)


def trace(a: VElement) -> LaurentSeries:
    """Trace down to the base: the sum of the p twists, written in z."""
    if a.case == "ram":
        comp = a.components[0]
        out = {}
        for e, c in comp.coeffs.items():
            if e % a.p == 0:
                out[e // a.p] = c * a.p
        lo = -INF if comp.lo == -INF else _ceil_div(comp.lo, a.p)
        hi = INF if comp.hi == INF else comp.hi // a.p
        return LaurentSeries(lo, hi, out)
    lo = max(c.lo for c in a.components)
    hi = min(c.hi for c in a.components)
    out = {}
    for comp in a.components:
        for e, c in comp.coeffs.items():
            if lo <= e <= hi:
                out[e] = out.get(e, 0) + c
    return LaurentSeries(lo, hi, out)


def norm(a: VElement) -> LaurentSeries:
    """Product of the p twists, written in z."""
    if a.case == "ram":
        prod = a
        for k in range(1, a.p):
            prod = prod * sigma_act(a, k)
        comp = prod.components[0]
        out = {}
        for e, c in comp.coeffs.items():
            if e % a.p != 0:
                raise ArithmeticError(
                    f"norm produced a non-invariant exponent {e}; window too narrow"
                )
            out[e // a.p] = c
        lo = -INF if comp.lo == -INF else _ceil_div(comp.lo, a.p)
        hi = INF if comp.hi == INF else comp.hi // a.p
        return LaurentSeries(lo, hi, out)
    prod = a.components[0]
    for comp in a.components[1:]:
        prod = prod * comp
    return prod


def residue_pairing(a: VElement, b: VElement):
    """res_{z=0} tr(a b) dz: the z^-1 coefficient of the trace of a*b.

    Raises WindowError when the windows cannot certify that coefficient;
    a silent zero is never returned.
    """
    t = trace(a * b)
    if t.lo > -1 or t.hi < -1:
        raise WindowError(
            f"residue needs exponent -1 of the trace; valid window is [{t.lo}, {t.hi}]"
        )
    return t.coeffs.get(-1, 0)


def v_exp(arg: VElement, lo: int, hi: int) -> VElement:
    """exp of an element with one-sided support per component (and no
    constant term), truncated to the window [lo, hi] componentwise."""
    comps = []
    for comp in arg.components:
        sup = comp.support()
        if 0 in sup:
            raise ValueError("exp needs a zero constant term")
        if sup and min(sup) < 0 < max(sup):
            raise ValueError("exp needs one-sided support for truncation")
        base = LaurentSeries(lo, hi, dict(comp.coeffs))
        acc = LaurentSeries.one(lo, hi)
        term = LaurentSeries.one(lo, hi)
        k = 1
        while True:
            nxt = {}
            for e1, c1 in term.coeffs.items():
                for e2, c2 in base.coeffs.items():
                    e = e1 + e2
                    if lo <= e <= hi:
                        nxt[e] = nxt.get(e, 0) + c1 * c2 * Fraction(1, k)
            term = LaurentSeries(lo, hi, nxt)
            if term.is_zero():
                break
            acc = acc + term
            k += 1
        comps.append(acc)
    return VElement(arg.case, arg.p, comps)

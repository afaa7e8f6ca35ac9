"""Exact arithmetic in the cyclotomic field Q(zeta_p), p prime.

Elements are stored on the power basis 1, z, ..., z^(p-2) of Q(zeta_p),
with z^(p-1) reduced through the minimal polynomial
Phi_p(x) = 1 + x + ... + x^(p-1).  Two elements with the same p and the
same coefficient vector are equal; reduction is canonical.
"""

from __future__ import annotations

import cmath
from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into a rational")


class Cyclo:
    """An element of Q(zeta_p) with exact rational coefficients.

    Immutable.  Mixed arithmetic with int and Fraction promotes the
    rational to the constant element of the same field.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if coeffs is None:
            coeffs = ()
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) > p - 1:
            raise ValueError("coefficient vector longer than p-1")
        coeffs = coeffs + (Fraction(0),) * (p - 1 - len(coeffs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("Cyclo values are immutable")

    # -- helpers -------------------------------------------------------

    @staticmethod
    def from_rational(p: int, x) -> "Cyclo":
        return Cyclo(p, (_as_fraction(x),))

    def _coerce(self, other) -> "Cyclo":
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise ValueError(f"mixed cyclotomic orders {self.p} and {other.p}")
            return other
        return Cyclo.from_rational(self.p, other)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    # -- ring structure ------------------------------------------------

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Cyclo(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Cyclo(self.p, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = self.p
        # convolve, then fold exponents >= p-1 through Phi_p
        raw = [Fraction(0)] * (2 * p - 3) if p > 2 else [Fraction(0)]
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b == 0:
                    continue
                raw[i + j] += a * b
        out = list(raw[: p - 1]) + [Fraction(0)] * max(0, (p - 1) - len(raw))
        for e in range(p - 1, len(raw)):
            c = raw[e]
            if c == 0:
                continue
            k = e % p
            if k == p - 1:
                # z^(p-1) = -(1 + z + ... + z^(p-2))
                for t in range(p - 1):
                    out[t] -= c
            else:
                out[k] += c
        return Cyclo(p, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_p)")
        p = self.p
        n = p - 1
        # solve (mult-by-self) x = 1 over Q on the power basis
        cols = []
        for j in range(n):
            basis = Cyclo(p, tuple(Fraction(int(i == j)) for i in range(n)))
            cols.append((self * basis).coeffs)
        mat = [[cols[j][i] for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        for c in range(n):
            piv = next(r for r in range(c, n) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            pv = mat[c][c]
            mat[c] = [x / pv for x in mat[c]]
            for r in range(n):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
        return Cyclo(p, tuple(mat[i][n] for i in range(n)))

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = Cyclo.from_rational(self.p, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"Cyclo({self.p}, {self.coeffs[0]})"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*z{self.p}^{k}" if k > 1 else f"{c}*z{self.p}")
        return " + ".join(terms) or "0"

    # -- numeric embedding ---------------------------------------------

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.p)
        acc = 0j
        for k, c in enumerate(self.coeffs):
            if c != 0:
                acc += complex(c) * z**k
        return acc

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @staticmethod
    def from_json(data: dict) -> "Cyclo":
        return Cyclo(data["p"], tuple(Fraction(s) for s in data["coeffs"]))


def root_of_unity(p: int, k: int) -> Cyclo:
    """zeta_p^k, reduced to canonical form."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    k %= p
    if k == p - 1:
        return Cyclo(p, tuple(Fraction(-1) for _ in range(p - 1)))
    return Cyclo(p, tuple(Fraction(int(i == k)) for i in range(p - 1)))


def cyclo_arith(a: Cyclo, b: Cyclo, op: str) -> Cyclo:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def embed(a) -> complex:
    """Numeric image of an exact scalar in double precision."""
    if isinstance(a, Cyclo):
        return a.to_complex()
    if isinstance(a, (int, Fraction)):
        return complex(a)
    if isinstance(a, complex):
        return a
    raise TypeError(f"cannot embed {type(a).__name__}")

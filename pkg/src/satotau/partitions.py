"""Young diagrams, Schur polynomials in weighted times, and the
formal differential operators built from them.

Polynomials live in variables t_i^(j) where j = 1..r indexes the time
family and the variable t_i carries weight i.  Everything is truncated
at a total weight cap; coefficients are exact (Fraction or Cyclo) or
complex, duck-typed.

A monomial is stored as a sorted tuple of triples (j, i, e) with e > 0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

# ---------------------------------------------------------------------------
# partitions


def check_partition(parts) -> tuple:
    lam = tuple(int(x) for x in parts)
    if any(x <= 0 for x in lam):
        raise ValueError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"parts must be weakly decreasing: {lam}")
    return lam


def partitions_of(n: int, max_part: int | None = None):
    """All partitions of n, parts bounded by max_part, lexicographic."""
    if n == 0:
        yield ()
        return
    if max_part is None or max_part > n:
        max_part = n
    for first in range(max_part, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def partitions_upto(total: int):
    """All partitions of size 0..total."""
    for n in range(total + 1):
        yield from partitions_of(n)


def conjugate(lam) -> tuple:
    lam = tuple(lam)
    if not lam:
        return ()
    out = []
    for i in range(1, lam[0] + 1):
        out.append(sum(1 for x in lam if x >= i))
    return tuple(out)


def row_strips(lam, alpha: int):
    """Partitions mu with lam - mu = (alpha): mu and lam agree except in
    a single row, shorter by alpha in mu (a row removed entirely counts).
    alpha = 0 gives mu = lam.  Returned as a deduplicated list."""
    lam = tuple(lam)
    if alpha == 0:
        return [lam]
    seen = set()
    out = []
    for i in range(len(lam)):
        new = lam[i] - alpha
        if new < 0:
            continue
        rest = lam[:i] + lam[i + 1 :]
        mu = tuple(sorted(rest + ((new,) if new > 0 else ()), reverse=True))
        # must still be a genuine subdiagram differing in exactly one row
        if mu not in seen:
            seen.add(mu)
            out.append(mu)
    return out


# ---------------------------------------------------------------------------
# monomial helpers

Mono = tuple  # tuple of (family, index, exponent)


def mono_weight(key: Mono) -> int:
    return sum(i * e for (_, i, e) in key)


def mono_degree(key: Mono) -> int:
    return sum(e for (_, _, e) in key)


def _mk(d: dict) -> Mono:
    return tuple(sorted((ji + (e,)) for ji, e in d.items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    d = {(j, i): e for (j, i, e) in a}
    for (j, i, e) in b:
        d[(j, i)] = d.get((j, i), 0) + e
    return _mk(d)


def _is_zero_scalar(c) -> bool:
    try:
        return not c
    except TypeError:
        return c == 0


class WeightedPoly:
    """Sparse polynomial in t_i^(j), truncated at total weight <= cap."""

    __slots__ = ("r", "cap", "terms")

    def __init__(self, r: int, cap: int, terms: dict | None = None):
        self.r = r
        self.cap = cap
        clean = {}
        if terms:
            for k, c in terms.items():
                if mono_weight(k) <= cap and not _is_zero_scalar(c):
                    clean[k] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def const(c, r: int, cap: int) -> "WeightedPoly":
        return WeightedPoly(r, cap, {(): c})

    @staticmethod
    def var(j: int, i: int, r: int, cap: int) -> "WeightedPoly":
        if not (1 <= j <= r):
            raise ValueError(f"family {j} out of range 1..{r}")
        return WeightedPoly(r, cap, {((j, i, 1),): Fraction(1)})

    @staticmethod
    def zero(r: int, cap: int) -> "WeightedPoly":
        return WeightedPoly(r, cap, {})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((), 0)

    def weight(self) -> int:
        return max((mono_weight(k) for k in self.terms), default=0)

    def coeff(self, key: Mono):
        return self.terms.get(tuple(sorted(key)), 0)

    def __eq__(self, other):
        if isinstance(other, WeightedPoly):
            return self.terms == other.terms
        # comparison against a scalar
        if not self.terms:
            return _is_zero_scalar(other)
        return set(self.terms) == {()} and self.terms[()] == other

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic --------------------------------------------------------

    def _merge(self, other, sign):
        if isinstance(other, WeightedPoly):
            if other.r != self.r:
                raise ValueError("mixed family counts")
            cap = min(self.cap, other.cap)
            out = dict(self.terms)
            for k, c in other.terms.items():
                out[k] = out.get(k, 0) + sign * c
            return WeightedPoly(self.r, cap, out)
        out = dict(self.terms)
        out[()] = out.get((), 0) + sign * other
        return WeightedPoly(self.r, self.cap, out)

    def __add__(self, other):
        return self._merge(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._merge(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return WeightedPoly(self.r, self.cap, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WeightedPoly):
            return WeightedPoly(
                self.r, self.cap, {k: c * other for k, c in self.terms.items()}
            )
        if other.r != self.r:
            raise ValueError("mixed family counts")
        cap = min(self.cap, other.cap)
        out = {}
        for ka, ca in self.terms.items():
            wa = mono_weight(ka)
            for kb, cb in other.terms.items():
                if wa + mono_weight(kb) > cap:
                    continue
                k = mono_mul(ka, kb)
                out[k] = out.get(k, 0) + ca * cb
        return WeightedPoly(self.r, cap, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        acc = WeightedPoly.const(Fraction(1), self.r, self.cap)
        for _ in range(e):
            acc = acc * self
        return acc

    def with_cap(self, cap: int) -> "WeightedPoly":
        return WeightedPoly(self.r, cap, self.terms)

    # -- substitutions -----------------------------------------------------

    def negate_times(self, families=None) -> "WeightedPoly":
        """t_i^(j) -> -t_i^(j) for j in families (all if None)."""
        out = {}
        for k, c in self.terms.items():
            deg = sum(e for (j, i, e) in k if families is None or j in families)
            out[k] = -c if deg % 2 else c
        return WeightedPoly(self.r, self.cap, out)

    def scale_times(self, c, family: int | None = None) -> "WeightedPoly":
        """t_i^(j) -> c^i t_i^(j); the monomial picks up c^(its weight)."""
        out = {}
        for k, coeff in self.terms.items():
            w = sum(i * e for (j, i, e) in k if family is None or j == family)
            out[k] = coeff * (c**w)
        return WeightedPoly(self.r, self.cap, out)

    def permute_families(self, perm: dict) -> "WeightedPoly":
        """Relabel family j as perm[j]."""
        out = {}
        for k, c in self.terms.items():
            nk = tuple(sorted((perm.get(j, j), i, e) for (j, i, e) in k))
            out[nk] = out.get(nk, 0) + c
        return WeightedPoly(self.r, self.cap, out)

    def map_coeffs(self, fn) -> "WeightedPoly":
        return WeightedPoly(self.r, self.cap, {k: fn(c) for k, c in self.terms.items()})

    def drop_families(self, families) -> "WeightedPoly":
        """Evaluate at t^(j) = 0 for j in families."""
        out = {k: c for k, c in self.terms.items() if all(j not in families for (j, _, _) in k)}
        return WeightedPoly(self.r, self.cap, out)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, Fraction):
                return f"{c.numerator}/{c.denominator}"
            if isinstance(c, complex):
                return [c.real, c.imag]
            if hasattr(c, "to_json"):
                return c.to_json()
            return c

        terms = [
            {"exps": [list(t) for t in k], "coeff": enc(c)}
            for k, c in sorted(self.terms.items())
        ]
        return {"r": self.r, "cap": self.cap, "terms": terms}

    @staticmethod
    def from_json(data: dict) -> "WeightedPoly":
        from .scalars import Cyclo

        def dec(c):
            if isinstance(c, str):
                return Fraction(c)
            if isinstance(c, list):
                return complex(c[0], c[1])
            if isinstance(c, dict):
                return Cyclo.from_json(c)
            return c

        terms = {
            tuple(tuple(t) for t in item["exps"]): dec(item["coeff"])
            for item in data["terms"]
        }
        return WeightedPoly(data["r"], data["cap"], terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k, c in sorted(self.terms.items(), key=lambda kv: (mono_weight(kv[0]), kv[0])):
            mono = "*".join(
                f"t{i}^{e}({j})" if e > 1 else f"t{i}({j})" for (j, i, e) in k
            )
            bits.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# determinants of polynomial matrices (shared with the tau computation)


def poly_det(mat):
    """Exact determinant via column-by-column Laplace DP over row subsets.

    Entries may be WeightedPoly or plain scalars; zero entries are pruned.
    """
    n = len(mat)
    if n == 0:
        return Fraction(1)
    states = {frozenset(): Fraction(1)}
    for col in range(n):
        new = {}
        for used, val in states.items():
            for row in range(n):
                if row in used:
                    continue
                entry = mat[row][col]
                if _is_zero_scalar(entry) or (
                    isinstance(entry, WeightedPoly) and entry.is_zero()
                ):
                    continue
                sign = -1 if sum(1 for u in used if u > row) % 2 else 1
                term = entry * val if sign == 1 else entry * (-val)
                key = used | {row}
                if key in new:
                    new[key] = new[key] + term
                else:
                    new[key] = term
        states = new
        if not states:
            return Fraction(0)
    return states[frozenset(range(n))]


# ---------------------------------------------------------------------------
# Schur polynomials and characters

_schur_cache: dict = {}


def schur_p(n: int, j: int = 1, r: int = 1, cap: int | None = None) -> WeightedPoly:
    """The weight-n polynomial p_n(t^(j)) with exp(sum t_i z^i) = sum p_n z^n.

    Computed through n*p_n = sum_{i=1..n} i*t_i*p_{n-i}.
    """
    if cap is None:
        cap = n
    if n < 0:
        return WeightedPoly.zero(r, cap)
    if n > cap:
        raise ValueError(f"schur_p degree {n} above cap {cap}")
    key = (n, j, r, cap)
    if key in _schur_cache:
        return _schur_cache[key]
    if n == 0:
        out = WeightedPoly.const(Fraction(1), r, cap)
    else:
        acc = WeightedPoly.zero(r, cap)
        for i in range(1, n + 1):
            ti = WeightedPoly.var(j, i, r, cap)
            acc = acc + ti * schur_p(n - i, j, r, cap) * Fraction(i)
        acc = acc * Fraction(1, n)
        out = acc
    _schur_cache[key] = out
    return out


_chi_cache: dict = {}


def chi_poly(lam, j: int = 1, r: int = 1, cap: int | None = None) -> WeightedPoly:
    """Character polynomial chi_lam = det(p_{lam_i - i + k}) (Jacobi-Trudi)."""
    lam = check_partition(lam)
    size = sum(lam)
    if cap is None:
        cap = size
    if size > cap:
        raise ValueError(f"|lam| = {size} above cap {cap}")
    key = (lam, j, r, cap)
    if key in _chi_cache:
        return _chi_cache[key]
    ell = len(lam)
    if ell == 0:
        out = WeightedPoly.const(Fraction(1), r, cap)
    else:
        mat = [
            [schur_p(lam[i] - (i + 1) + (k + 1), j, r, cap)
             if 0 <= lam[i] - (i + 1) + (k + 1) <= cap
             else WeightedPoly.zero(r, cap)
             for k in range(ell)]
            for i in range(ell)
        ]
        out = poly_det(mat)
        if not isinstance(out, WeightedPoly):
            out = WeightedPoly.const(out, r, cap)
    _chi_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# differential operators


class DiffOperator:
    """A polynomial in the scaled derivatives d_i^(j) = (1/i) d/dt_i^(j),
    together with an optional set of families evaluated at zero after
    application (used by the product operators over several families).
    """

    __slots__ = ("poly", "zero_families")

    def __init__(self, poly: WeightedPoly, zero_families=frozenset()):
        self.poly = poly
        self.zero_families = frozenset(zero_families)

    @staticmethod
    def identity(r: int = 1, cap: int = 64) -> "DiffOperator":
        return DiffOperator(WeightedPoly.const(Fraction(1), r, cap))

    @staticmethod
    def zero(r: int = 1, cap: int = 64) -> "DiffOperator":
        return DiffOperator(WeightedPoly.zero(r, cap))

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        if self.zero_families != other.zero_families:
            raise ValueError("cannot add operators with different zero sets")
        return DiffOperator(self.poly + other.poly, self.zero_families)

    def __mul__(self, other):
        if isinstance(other, DiffOperator):
            return DiffOperator(
                self.poly * other.poly, self.zero_families | other.zero_families
            )
        return DiffOperator(self.poly * other, self.zero_families)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __repr__(self):
        zf = f", zero@{sorted(self.zero_families)}" if self.zero_families else ""
        return f"DiffOperator({self.poly!r}{zf})"


def _apply_mono(dkey: Mono, fkey: Mono):
    """Apply the scaled-derivative monomial dkey to the t-monomial fkey.

    Returns (scalar factor, remaining monomial) or None if it kills it.
    """
    fd = {(j, i): e for (j, i, e) in fkey}
    factor = Fraction(1)
    for (j, i, e) in dkey:
        have = fd.get((j, i), 0)
        if have < e:
            return None
        fall = Fraction(1)
        for s in range(e):
            fall *= have - s
        factor *= fall * Fraction(1, i**e)
        fd[(j, i)] = have - e
    return factor, _mk(fd)


def apply_op(op: DiffOperator, f: WeightedPoly, at_zero: bool = False):
    """Apply a formal operator.  With at_zero the result is the scalar
    value at t = 0; otherwise a WeightedPoly (with the operator's zero
    families evaluated out)."""
    out = {}
    for dkey, dc in op.poly.terms.items():
        for fkey, fc in f.terms.items():
            hit = _apply_mono(dkey, fkey)
            if hit is None:
                continue
            factor, rem = hit
            if at_zero and rem:
                continue
            if not at_zero and any(j in op.zero_families for (j, _, _) in rem):
                continue
            c = dc * factor * fc
            out[rem] = out.get(rem, 0) + c
    if at_zero:
        return out.get((), 0)
    return WeightedPoly(f.r, f.cap, out)


def chi(lam, j: int = 1, r: int = 1, cap: int = 64) -> DiffOperator:
    """chi_lam as an operator in the scaled gradient of family j."""
    return DiffOperator(chi_poly(lam, j, r, max(cap, sum(lam))))


def d_op(lam, alpha: int, j: int = 1, r: int = 1, cap: int = 64) -> DiffOperator:
    """Sum of chi_mu over mu with lam - mu = (alpha); empty sum is zero.

    Application is meant at zero (the defining formula evaluates there).
    """
    lam = check_partition(lam)
    mus = row_strips(lam, alpha)
    acc = WeightedPoly.zero(r, cap)
    for mu in mus:
        acc = acc + chi_poly(mu, j, r, cap)
    return DiffOperator(acc, zero_families=frozenset(range(1, r + 1)))


def dcheck_op(mu_list, k: int, r: int, cap: int = 64) -> DiffOperator:
    """Product over families l != k of chi_{mu_l} in family l, each
    evaluated at t^(l) = 0."""
    if len(mu_list) != r:
        raise ValueError(f"need {r} diagrams, got {len(mu_list)}")
    if not (1 <= k <= r):
        raise ValueError(f"family index {k} out of range 1..{r}")
    poly = WeightedPoly.const(Fraction(1), r, cap)
    zf = set()
    for ell, mu in enumerate(mu_list, start=1):
        if ell == k:
            continue
        poly = poly * chi_poly(mu, ell, r, cap)
        zf.add(ell)
    return DiffOperator(poly, zero_families=frozenset(zf))


# ---------------------------------------------------------------------------
# time shifts


def time_shift(f: WeightedPoly, family: int, zmax: int):
    """Substitute t_i^(family) -> t_i^(family) + z^i / i and collect powers
    of z.  Returns a list of (k, WeightedPoly) for k = 0..zmax."""
    out = {k: {} for k in range(zmax + 1)}
    for key, c in f.terms.items():
        pieces = [(0, {}, Fraction(1))]  # (z power, partial monomial, factor)
        for (j, i, e) in key:
            nxt = []
            if j != family:
                for (zp, mono, fac) in pieces:
                    m = dict(mono)
                    m[(j, i)] = m.get((j, i), 0) + e
                    nxt.append((zp, m, fac))
            else:
                # (t + z^i/i)^e
                binom = [Fraction(1)]
                for b in range(1, e + 1):
                    binom.append(binom[-1] * (e - b + 1) / b)
                for (zp, mono, fac) in pieces:
                    for b in range(e + 1):
                        zp2 = zp + i * b
                        if zp2 > zmax:
                            continue
                        m = dict(mono)
                        if e - b:
                            m[(j, i)] = m.get((j, i), 0) + (e - b)
                        nxt.append((zp2, m, fac * binom[b] * Fraction(1, i**b)))
            pieces = nxt
        for (zp, mono, fac) in pieces:
            k = _mk(mono)
            out[zp][k] = out[zp].get(k, 0) + c * fac
    return [(k, WeightedPoly(f.r, f.cap, out[k])) for k in range(zmax + 1)]

"""Finite-truncation points of the infinite Grassmannian of (V, V+),
their index bookkeeping, the normalizing monomials v_m, the twist and
orthogonal-complement involutions, determinant tau functions, and the
wave functions built from them.

A point U is presented by a finite list of generators (exact Laurent
polynomials in V) together with, per component, an optional monomial
tail: all z_j^-k for k >= N_j lie in U.  Deep tail columns pair with
deep rows one-to-one and unitriangularly, so the projection determinant
computed on a finite window does not depend on the stabilization depth;
tests exercise that invariance directly.

The flow group acts by multiplication with exp(sum_i t_i^(j) z_j^-i).
tau is the determinant of the projection of the flowed, v_m-normalized
frame onto the standard codimension-zero frame; the wave-function
components are exp(-sum_i t_i^(j)/z_j^i) tau_uj(t+[z_j]) / tau(t).
"""

from __future__ import annotations

from fractions import Fraction

from .partitions import DiffOperator, WeightedPoly, apply_op, poly_det, schur_p
from .series import INF, LaurentSeries, VElement, WindowError, poly_inverse, sigma_act


class BigCellError(ValueError):
    """tau vanishes at t = 0 where a division by tau was required."""


def _zero(c) -> bool:
    if isinstance(c, WeightedPoly):
        return c.is_zero()
    try:
        return not c
    except TypeError:
        return c == 0


class GrassPoint:
    __slots__ = ("case", "p", "generators", "tails", "row_offsets",
                 "index_hint", "_tau_cache")

    def __init__(self, case: str, p: int, generators, tails,
                 row_offsets=None, index_hint: int | None = None):
        r = 1 if case == "ram" else p
        object.__setattr__(self, "case", case)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "generators", tuple(generators))
        tails = tuple(tails)
        if len(tails) != r:
            raise ValueError(f"need {r} tail entries, got {len(tails)}")
        object.__setattr__(self, "tails", tails)
        object.__setattr__(
            self, "row_offsets",
            tuple(row_offsets) if row_offsets is not None else None)
        object.__setattr__(self, "index_hint", index_hint)
        object.__setattr__(self, "_tau_cache", {})
        for g in self.generators:
            if g.case != case or g.p != p:
                raise ValueError("generator from the wrong algebra")

    def __setattr__(self, *a):
        raise AttributeError("GrassPoint values are immutable")

    @property
    def r(self) -> int:
        return 1 if self.case == "ram" else self.p

    # -- frames ------------------------------------------------------------

    def gen_depth(self, j: int) -> int:
        """Most negative exponent any generator touches in component j."""
        d = 0
        for g in self.generators:
            sup = g.components[j - 1].support()
            if sup:
                d = max(d, -min(sup))
        return d

    def gen_height(self, j: int) -> int:
        h = 0
        for g in self.generators:
            sup = g.components[j - 1].support()
            if sup:
                h = max(h, max(sup))
        return h

    def frame(self, depths):
        """Generators plus tail monomials down to depth per component,
        each a slot dictionary {(component, exponent): coeff}."""
        rows = []
        for g in self.generators:
            row = {}
            for j, comp in enumerate(g.components, start=1):
                for e, c in comp.coeffs.items():
                    row[(j, e)] = c
            rows.append(row)
        for j, n in enumerate(self.tails, start=1):
            if n is None:
                continue
            for k in range(n, depths[j - 1] + 1):
                rows.append({(j, -k): Fraction(1)})
        return rows

    def default_depths(self, extra: int = 0):
        out = []
        for j in range(1, self.r + 1):
            n = self.tails[j - 1]
            base = max(self.gen_depth(j) + 1, 2)
            if n is not None:
                base = max(base, n)
            out.append(base + extra)
        return tuple(out)

    @property
    def index(self) -> int:
        """Euler characteristic of U -> V/V+ (generators count against
        tail codimensions)."""
        if any(n is None for n in self.tails):
            if self.index_hint is None:
                raise ValueError("tail-less point needs an index hint")
            return self.index_hint
        return len(self.generators) - sum(n - 1 for n in self.tails)

    def key(self):
        gens = tuple(
            tuple(
                (j, e, c)
                for j, comp in enumerate(g.components, start=1)
                for e, c in sorted(comp.coeffs.items())
            )
            for g in self.generators
        )
        return (self.case, self.p, gens, self.tails, self.row_offsets)

    def scale_all(self, mults) -> "GrassPoint":
        """Multiply by the monomial tuple prod_j z_j^{mults[j-1]}."""
        gens = []
        for g in self.generators:
            comps = [comp.shift(mults[j - 1])
                     for j, comp in enumerate(g.components, start=1)]
            gens.append(VElement(g.case, g.p, comps))
        tails = tuple(None if n is None else n - mults[j - 1]
                      for j, n in enumerate(self.tails, start=1))
        offs = (None if self.row_offsets is None
                else tuple(off - c for off, c in zip(self.row_offsets, mults)))
        hint = None if self.index_hint is None else self.index_hint + sum(mults)
        return GrassPoint(self.case, self.p, gens, tails, offs, hint)

    def __repr__(self):
        try:
            m = self.index
        except ValueError:
            m = "?"
        return (f"GrassPoint({self.case}, p={self.p}, m={m}, "
                f"{len(self.generators)} generators, tails={self.tails})")

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "p": self.p,
            "tails": list(self.tails),
            "generators": [g.to_json() for g in self.generators],
            "row_offsets": list(self.row_offsets) if self.row_offsets else None,
            "index_hint": self.index_hint,
        }

    @staticmethod
    def from_json(data: dict) -> "GrassPoint":
        return GrassPoint(
            data["case"], data["p"],
            [VElement.from_json(g) for g in data["generators"]],
            data["tails"], data.get("row_offsets"), data.get("index_hint"),
        )


# ---------------------------------------------------------------------------
# standard normalizing monomials


def nr_vm_exponents(p: int, m: int):
    """Exponents (e_1..e_p) of the split-case normalizer: with -m = qp+f,
    0 <= f < p, component j carries q+1 for j <= f and q beyond."""
    q, f = divmod(-m, p)
    return tuple((q + 1) if j <= f else q for j in range(1, p + 1))


def standard_vm(case: str, p: int, m: int) -> VElement:
    """The reference monomial of the index-m component: z1^m when
    ramified, the tuple from -m = qp + f when split."""
    if case == "ram":
        return VElement.monomial("ram", p, 1, m)
    exps = nr_vm_exponents(p, m)
    return VElement("nr", p, [LaurentSeries.monomial(e) for e in exps])


def vm_normalizer_exponents(case: str, p: int, m: int):
    """Componentwise exponents of the multiplier carrying gr^m to gr^0."""
    if case == "ram":
        return (-m,)
    return nr_vm_exponents(p, m)


# ---------------------------------------------------------------------------
# point operations


def base_point(case: str, p: int) -> GrassPoint:
    """The index-0 vacuum: per component, all strictly negative powers."""
    r = 1 if case == "ram" else p
    return GrassPoint(case, p, [], (1,) * r)


def monomial_point(case: str, p: int, slots, tails) -> GrassPoint:
    """Point spanned by pure monomials (component, exponent) plus tails."""
    gens = [VElement.monomial(case, p, j, e) for (j, e) in slots]
    return GrassPoint(case, p, gens, tails)


def sigma_point(U: GrassPoint) -> GrassPoint:
    """The twist of a point: generators twisted, components rotated."""
    gens = [sigma_act(g) for g in U.generators]
    if U.case == "ram":
        return GrassPoint(U.case, U.p, gens, U.tails, U.row_offsets, U.index_hint)
    p = U.p
    rot = lambda t: tuple(t[(j - 2) % p] for j in range(1, p + 1))
    tails = rot(U.tails)
    offs = None if U.row_offsets is None else rot(U.row_offsets)
    return GrassPoint(U.case, U.p, gens, tails, offs, U.index_hint)


def twist_point(U: GrassPoint, u: int, v: int) -> GrassPoint:
    """Multiply by (1, ..., z_u, ..., z_v^-1, ..., 1); index preserved."""
    if u == v:
        return U
    if U.case == "ram":
        raise ValueError("twists with u != v need the split case")
    mults = [0] * U.p
    mults[u - 1] += 1
    mults[v - 1] -= 1
    return U.scale_all(mults)


# ---------------------------------------------------------------------------
# exact linear algebra over slot dictionaries


def _slot_order(slot):
    j, e = slot
    return (-e, j)


def _reduce_row(row: dict, pivots: dict) -> dict:
    row = {s: c for s, c in row.items() if not _zero(c)}
    changed = True
    while changed and row:
        changed = False
        for s in sorted(row, key=_slot_order):
            if s in pivots:
                prow = pivots[s]
                f = row[s] / prow[s]
                for s2, c2 in prow.items():
                    row[s2] = row.get(s2, 0) - f * c2
                row = {t: c for t, c in row.items() if not _zero(c)}
                changed = True
                break
    return row


def _pivots_of(rows) -> dict:
    pivots = {}
    for row in rows:
        red = _reduce_row(dict(row), pivots)
        if red:
            piv = min(red, key=_slot_order)
            pivots[piv] = red
    return pivots


def _solve_membership(rows, target) -> bool:
    pivots = _pivots_of(rows)
    red = _reduce_row(dict(target), pivots)
    return not red


def contains(U: GrassPoint, elt: VElement, extra_depth: int = 4) -> bool:
    """Frame membership of an exact Laurent polynomial."""
    depth = list(U.default_depths(extra_depth))
    for j, comp in enumerate(elt.components, start=1):
        sup = comp.support()
        if sup:
            depth[j - 1] = max(depth[j - 1], -min(sup) + 1)
    rows = U.frame(depth)
    target = {
        (j, e): c
        for j, comp in enumerate(elt.components, start=1)
        for e, c in comp.coeffs.items()
    }
    return _solve_membership(rows, target)


def _gen_as_exact(P: GrassPoint, g: VElement) -> VElement:
    return VElement(
        P.case, P.p,
        [LaurentSeries(-INF, INF, dict(c.coeffs)) for c in g.components])


def points_equal(U: GrassPoint, W: GrassPoint, extra_depth: int = 4) -> bool:
    """Same span: mutual containment of generators plus equal tails."""
    if (U.case, U.p) != (W.case, W.p):
        return False
    if U.tails != W.tails:
        return False
    return all(contains(W, _gen_as_exact(U, g), extra_depth) for g in U.generators) \
        and all(contains(U, _gen_as_exact(W, g), extra_depth) for g in W.generators)


# ---------------------------------------------------------------------------
# orthogonal complement


def orthogonal(U: GrassPoint) -> GrassPoint:
    """Annihilator of U under res tr(a b) dz.

    Exponent e in component j pairs with s - e where s = -p in the
    ramified case and s = -1 per component in the split one; the
    pairing constant drops out of the nullspace computation.
    """
    if any(n is None for n in U.tails):
        raise ValueError("orthogonal complement needs monomial tails")
    s = -U.p if U.case == "ram" else -1
    r = U.r
    heights = [U.gen_height(j) for j in range(1, r + 1)]

    # The infinite tail of U kills every slot e >= s + N_j; generators
    # see slots down to s - height_j.  Everything below is free tail.
    slots = []
    for j in range(1, r + 1):
        lo_e = s - heights[j - 1]
        hi_e = s + U.tails[j - 1] - 1
        slots.extend((j, e) for e in range(lo_e, hi_e + 1))

    conds = []
    for g in U.generators:
        cond = {}
        for j, comp in enumerate(g.components, start=1):
            for e, c in comp.coeffs.items():
                partner = (j, s - e)
                if partner in set(slots):
                    cond[partner] = cond.get(partner, 0) + c
        if cond:
            conds.append(cond)

    basis = _nullspace(conds, slots)
    gens = []
    for vec in basis:
        comps = []
        for j in range(1, r + 1):
            coeffs = {e: c for (jj, e), c in vec.items() if jj == j}
            comps.append(LaurentSeries(-INF, INF, coeffs))
        gens.append(VElement(U.case, U.p, comps))
    tails = tuple(heights[j - 1] - s + 1 for j in range(1, r + 1))
    return GrassPoint(U.case, U.p, gens, tails)


def _nullspace(conds, slots):
    """Nullspace basis of the constraint rows over the given slots."""
    cols = sorted(slots, key=_slot_order)
    pos = {c: i for i, c in enumerate(cols)}
    n = len(cols)
    piv_rows = []  # (vector, pivot column index)
    piv_cols = set()
    for cond in conds:
        cur = [Fraction(0)] * n
        for src, c in cond.items():
            cur[pos[src]] = cur[pos[src]] + c
        for (pr, pc) in piv_rows:
            if not _zero(cur[pc]):
                f = cur[pc] / pr[pc]
                cur = [a - f * b for a, b in zip(cur, pr)]
        lead = next((i for i, a in enumerate(cur) if not _zero(a)), None)
        if lead is not None:
            piv_rows.append((cur, lead))
            piv_cols.add(lead)
    basis = []
    for fc in range(n):
        if fc in piv_cols:
            continue
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for (pr, pc) in reversed(piv_rows):
            acc = sum((pr[i] * x[i] for i in range(n) if i != pc), Fraction(0))
            if not _zero(acc):
                x[pc] = -acc / pr[pc]
        basis.append({cols[i]: x[i] for i in range(n) if not _zero(x[i])})
    return basis


# ---------------------------------------------------------------------------
# tau


def tau(U: GrassPoint, cap: int, margin: int = 2) -> WeightedPoly:
    """Truncated tau function of U to total weight <= cap.

    The frame is normalized into the index-0 component, flowed by
    exp(sum t z^-i), and projected onto the standard frame; the result
    is exact in the chosen scalars and stable in the window depth.
    """
    key = (cap, margin)
    if key in U._tau_cache:
        return U._tau_cache[key]
    mults = vm_normalizer_exponents(U.case, U.p, U.index)
    Un = U.scale_all(mults) if any(mults) else U
    r = U.r

    if any(n is None for n in Un.tails):
        if Un.row_offsets is None:
            raise WindowError("tail-less point needs row offsets for tau")
        total = len(Un.generators)
        base = (total - sum(Un.row_offsets)) // r
        depths = tuple(base + off for off in Un.row_offsets)
    else:
        depths = Un.default_depths(margin)
    cols = Un.frame(depths)
    rows = [(j, -k) for j in range(1, r + 1) for k in range(1, depths[j - 1] + 1)]
    if len(cols) != len(rows):
        raise WindowError(
            f"projection frame has {len(cols)} columns against {len(rows)} rows; "
            "normalization or window is inconsistent")
    mat = []
    for (j, e_row) in rows:
        line = []
        for col in cols:
            entry = WeightedPoly.zero(r, cap)
            for (jj, e), c in col.items():
                if jj != j:
                    continue
                w = e - e_row
                if 0 <= w <= cap:
                    entry = entry + schur_p(w, j, r, cap) * c
            line.append(entry)
        mat.append(line)
    out = poly_det(mat)
    if not isinstance(out, WeightedPoly):
        out = WeightedPoly.const(out, r, cap)
    U._tau_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# wave functions


def tau_shift_series(taup: WeightedPoly, j: int, zmax: int, sign: int, cap: int):
    """tau(t +/- [z_j]) as a z-polynomial: entry k is p_k applied in the
    (sign-adjusted) scaled gradient of family j."""
    out = []
    for k in range(zmax + 1):
        opoly = schur_p(k, j, taup.r, max(cap + k, k))
        if sign < 0:
            opoly = opoly.negate_times()
        out.append(apply_op(DiffOperator(opoly), taup).with_cap(cap))
    return out


def ba_function(U: GrassPoint, u: int, cap: int, zlo: int, zhi: int,
                margin: int = 2, adjoint: bool = False) -> VElement:
    """Wave function (adjoint wave function) of U with twist index u.

    Components follow exp(-sum_i t_i^(j)/z_j^i) tau_uj(t+[z_j]) / tau(t);
    the adjoint flips both signs and twists the other way.  Series
    coefficients are weight-capped polynomials; needs tau(0) != 0.
    """
    r = U.r
    den = tau(U, cap, margin)
    if _zero(den.constant_term()):
        raise BigCellError("tau vanishes at t = 0; wave functions undefined")
    den_inv = poly_inverse(den)
    comps = []
    for j in range(1, r + 1):
        tw = twist_point(U, j, u) if adjoint else twist_point(U, u, j)
        num = tau(tw, cap + max(0, zhi), margin)
        shifted = tau_shift_series(num, j, max(0, zhi) + cap,
                                   -1 if adjoint else 1, cap)
        coeffs = {}
        for e in range(zlo, zhi + 1):
            acc = WeightedPoly.zero(r, cap)
            for b in range(0, cap + 1):
                a = e + b
                if a < 0 or a >= len(shifted):
                    continue
                pb = schur_p(b, j, r, cap)
                if not adjoint:
                    pb = pb.negate_times()
                acc = acc + pb * shifted[a]
            coeffs[e] = acc * den_inv
        comps.append(LaurentSeries(zlo, zhi, coeffs))
    return VElement(U.case, U.p, comps)


def adjoint_ba(U: GrassPoint, u: int, cap: int, zlo: int, zhi: int,
               margin: int = 2) -> VElement:
    return ba_function(U, u, cap, zlo, zhi, margin, adjoint=True)

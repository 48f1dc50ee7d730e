"""The five fixed-point-counting functions for z -> z^d + c.

One enumeration engine serves all of them: count the z in a finite
residue field with z^d - z + c = 0, where the field is F_p itself, an
inert-prime quotient F_{p^n}, or F_p[t]/(pi), and where d comes from
one of the families p^ell, (p-1)^ell, or an explicit integer.

A second, independent route to the same number is gcd_root_count: the
number of roots of f in F_q equals deg gcd(x^q - x, f).  The two are
held to exact agreement in the test suite (the audit module also
cross-books every record through both).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from . import ffield
from .errors import DegreeTooLarge, InvalidDegreeSpec, NotIrreducible, TooLarge
from .ffield import FieldCtx, FieldElem, MonicPoly, Plain, Tower

DEFAULT_EXPLICIT_DEGREE_CAP = 4096


# ----------------------------------------------------------------------
# Ring and degree specifications
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeField:
    """Z/pZ (equivalently the residue field of the p-adic integers)."""

    p: int


@dataclass(frozen=True)
class ExtField:
    """Quotient of a ring of integers at an inert prime: F_{p^n}, n >= 2."""

    p: int
    n: int


@dataclass(frozen=True)
class FuncField:
    """F_p[t]/(pi) for an irreducible monic pi."""

    p: int
    pi: MonicPoly


RingSpec = Union[PrimeField, ExtField, FuncField]


@dataclass(frozen=True)
class PPow:
    """Degree family d = p^ell."""

    ell: int


@dataclass(frozen=True)
class PMinusOnePow:
    """Degree family d = (p-1)^ell; needs p >= 5."""

    ell: int


@dataclass(frozen=True)
class Explicit:
    """A literal map degree d >= 2."""

    d: int


DegreeSpec = Union[PPow, PMinusOnePow, Explicit]


def ring_field(ring: RingSpec) -> FieldCtx:
    """Concrete field hosting the ring's arithmetic."""
    if isinstance(ring, PrimeField):
        return ffield.make_field(ring.p, 1)
    if isinstance(ring, ExtField):
        if ring.n < 2:
            raise ValueError("ExtField needs n >= 2; use PrimeField for n = 1")
        return ffield.make_field(ring.p, ring.n)
    if not ffield.is_irreducible(ring.pi):
        raise NotIrreducible(f"{ring.pi.serialize()} is reducible over F_{ring.pi.p}")
    return ffield.field_from_modulus(ring.pi)


def ring_param(ring: RingSpec) -> int:
    """n (extension degree) or m (deg pi); 1 for the prime field."""
    if isinstance(ring, PrimeField):
        return 1
    if isinstance(ring, ExtField):
        return ring.n
    return ring.pi.degree


def ring_kind(ring: RingSpec) -> str:
    return {PrimeField: "prime", ExtField: "ext", FuncField: "func"}[type(ring)]


def degree_exponent(ring: RingSpec, dspec: DegreeSpec) -> ffield.ExponentSpec:
    """Translate a degree family into an exponent for this ring."""
    p = ring.p
    if isinstance(dspec, PPow):
        if dspec.ell < 1:
            raise InvalidDegreeSpec("p^ell family needs ell >= 1")
        return Tower(p, dspec.ell)
    if isinstance(dspec, PMinusOnePow):
        if p < 5:
            raise InvalidDegreeSpec(f"(p-1)^ell family needs p >= 5, got p={p}")
        if dspec.ell < 1:
            raise InvalidDegreeSpec("(p-1)^ell family needs ell >= 1")
        return Tower(p - 1, dspec.ell)
    if dspec.d < 2:
        raise InvalidDegreeSpec(f"explicit degree {dspec.d} < 2")
    return Plain(dspec.d)


def degree_label(dspec: DegreeSpec) -> tuple[str, int]:
    """(family tag, ell-or-d) for reports."""
    if isinstance(dspec, PPow):
        return "ppow", dspec.ell
    if isinstance(dspec, PMinusOnePow):
        return "pminusonepow", dspec.ell
    return "explicit", dspec.d


def materialized_degree(ring: RingSpec, dspec: DegreeSpec, cap: int = 1 << 62) -> int | None:
    """The integer d, or None when base^ell would exceed cap."""
    if isinstance(dspec, Explicit):
        return dspec.d if dspec.d <= cap else None
    base = ring.p if isinstance(dspec, PPow) else ring.p - 1
    d = 1
    for _ in range(dspec.ell):
        d *= base
        if d > cap:
            return None
    return d


CoeffLike = Union[int, Sequence[int], FieldElem, MonicPoly]


def coerce_coefficient(ctx: FieldCtx, c: CoeffLike) -> FieldElem:
    """Reduce c into the residue field.

    Integers land in the prime subfield; coefficient sequences and
    polynomials over F_p are reduced by the field modulus (so c(t) is
    read mod pi in the function-field case).
    """
    if isinstance(c, MonicPoly):
        if c.p != ctx.p:
            raise ValueError(f"coefficient over F_{c.p} fed to a field of characteristic {ctx.p}")
        return ctx.elem(c.coeffs)
    return ctx.elem(c)


# ----------------------------------------------------------------------
# Counting
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CountResult:
    """A fixed-point count with its root witnesses."""

    count: int
    roots: tuple[FieldElem, ...]
    ring: RingSpec
    dspec: DegreeSpec
    c: FieldElem

    def csv_row(self) -> str:
        sym = "t" if isinstance(self.ring, FuncField) else "u"
        fam, param = degree_label(self.dspec)
        ell = param if fam != "explicit" else ""
        witnesses = ";".join(w.render(sym) for w in self.roots)
        return ",".join(
            str(v)
            for v in (
                ring_kind(self.ring),
                self.ring.p,
                ring_param(self.ring),
                fam,
                ell if ell != "" else param,
                self.c.render(sym),
                self.count,
                witnesses,
            )
        )

    def json_obj(self) -> dict:
        sym = "t" if isinstance(self.ring, FuncField) else "u"
        fam, param = degree_label(self.dspec)
        return {
            "ring": ring_kind(self.ring),
            "p": self.ring.p,
            "n_or_m": ring_param(self.ring),
            "dspec": fam,
            "ell": param,
            "c": self.c.render(sym),
            "count": self.count,
            "witnesses": [w.render(sym) for w in self.roots],
        }


def fixed_point_count(
    ring: RingSpec,
    dspec: DegreeSpec,
    c: CoeffLike,
    cap: int | None = None,
) -> CountResult:
    """#{z in the ring : z^d - z + c = 0} by full enumeration.

    Nonzero z are powered with the exponent reduced mod (q - 1); z = 0
    contributes exactly when c = 0 (0^d = 0 for d >= 1).  Witnesses
    come back sorted by coefficient encoding.
    """
    ctx = ring_field(ring)
    limit = ffield.enumeration_cap() if cap is None else cap
    if ctx.q > limit:
        raise TooLarge(f"q={ctx.q} exceeds enumeration cap {limit}")
    exp = degree_exponent(ring, dspec)
    ce = coerce_coefficient(ctx, c)
    r = ctx.reduce_exponent(exp)  # >= 1 for all degree families
    roots = []
    c_raw = ce.coeffs
    zero = (0,) * ctx.n
    for code in range(ctx.q):
        z = ctx.decode(code)
        zd = zero if z == zero else ctx.pow_raw(z, r)
        if ctx.add_raw(zd, c_raw) == z:
            roots.append(FieldElem(z, ctx))
    return CountResult(len(roots), tuple(roots), ring, dspec, ce)


def count_N(p: int, n: int, ell: int, c: CoeffLike, cap: int | None = None) -> CountResult:
    """Fixed points of z^(p^ell) + c in the inert-prime quotient F_{p^n}."""
    return fixed_point_count(ExtField(p, n), PPow(ell), c, cap=cap)


def count_X(p: int, ell: int, c: CoeffLike, cap: int | None = None) -> CountResult:
    """Fixed points of z^(p^ell) + c in Z/pZ."""
    return fixed_point_count(PrimeField(p), PPow(ell), c, cap=cap)


def count_Y(p: int, ell: int, c: CoeffLike, cap: int | None = None) -> CountResult:
    """Fixed points of z^((p-1)^ell) + c in Z/pZ, p >= 5."""
    return fixed_point_count(PrimeField(p), PMinusOnePow(ell), c, cap=cap)


def count_Nct(p: int, pi: MonicPoly, ell: int, c: CoeffLike, cap: int | None = None) -> CountResult:
    """Fixed points of z^(p^ell) + c(t) in F_p[t]/(pi)."""
    return fixed_point_count(FuncField(p, pi), PPow(ell), c, cap=cap)


def count_Mct(p: int, pi: MonicPoly, ell: int, c: CoeffLike, cap: int | None = None) -> CountResult:
    """Fixed points of z^((p-1)^ell) + c(t) in F_p[t]/(pi), p >= 5."""
    return fixed_point_count(FuncField(p, pi), PMinusOnePow(ell), c, cap=cap)


# ----------------------------------------------------------------------
# Independent oracle: root counting via gcd with x^q - x
# ----------------------------------------------------------------------

def _fq_trim(poly: list[tuple[int, ...]], zero: tuple[int, ...]) -> list[tuple[int, ...]]:
    while poly and poly[-1] == zero:
        poly.pop()
    return poly


def _fq_mod(
    ctx: FieldCtx,
    a: list[tuple[int, ...]],
    b: list[tuple[int, ...]],
) -> list[tuple[int, ...]]:
    """a mod b over F_q; b need not be monic."""
    zero = (0,) * ctx.n
    a = list(a)
    db = len(b) - 1
    inv_lead = ctx.inv_raw(b[-1])
    for i in range(len(a) - 1, db - 1, -1):
        v = a[i]
        if v == zero:
            continue
        factor = ctx.mul_raw(v, inv_lead)
        for j in range(db + 1):
            if b[j] != zero:
                a[i - db + j] = ctx.sub_raw(a[i - db + j], ctx.mul_raw(factor, b[j]))
    del a[db:]
    return _fq_trim(a, zero)


def _fq_gcd_degree(
    ctx: FieldCtx,
    a: list[tuple[int, ...]],
    b: list[tuple[int, ...]],
) -> int:
    zero = (0,) * ctx.n
    a = _fq_trim(list(a), zero)
    b = _fq_trim(list(b), zero)
    while b:
        a, b = b, _fq_mod(ctx, a, b)
    return len(a) - 1


def gcd_root_count(
    ctx: FieldCtx,
    d: int,
    c: CoeffLike,
    degree_cap: int = DEFAULT_EXPLICIT_DEGREE_CAP,
) -> int:
    """Roots of f = x^d - x + c in F_q, as deg gcd(x^q - x, f).

    The reduction of x^q modulo the trinomial f costs O(d) per folded
    coefficient because x^d = x - c mod f, so each square-and-multiply
    step stays quadratic in d at worst.
    """
    if d > degree_cap:
        raise DegreeTooLarge(f"explicit degree {d} exceeds cap {degree_cap}")
    if d < 2:
        raise InvalidDegreeSpec(f"explicit degree {d} < 2")
    ce = coerce_coefficient(ctx, c)
    zero = (0,) * ctx.n
    one = (1,) + (0,) * (ctx.n - 1)
    neg_one = ctx.sub_raw(zero, one)
    q = ctx.q

    # f = x^d - x + c, dense over F_q (d >= 2, so the slots are distinct)
    f: list[tuple[int, ...]] = [zero] * (d + 1)
    f[0] = ce.coeffs
    f[1] = neg_one
    f[d] = one

    if q <= d:
        # x^q - x already has degree <= deg f: hand it to the gcd as is
        g: list[tuple[int, ...]] = [zero] * (q + 1)
        g[1] = neg_one
        g[q] = ctx.add_raw(g[q], one)
    else:
        # x^q mod f by square-and-multiply with trinomial folding
        xq = _trinomial_powmod(ctx, q, d, ce.coeffs)
        xq[1] = ctx.sub_raw(xq[1], one)
        g = xq
    g = _fq_trim(g, zero)
    deg = _fq_gcd_degree(ctx, f, g)
    return max(deg, 0)


def _trinomial_powmod(
    ctx: FieldCtx,
    e: int,
    d: int,
    c: tuple[int, ...],
) -> list[tuple[int, ...]]:
    """x^e mod (x^d - x + c) as a dense coefficient list of length d."""
    zero = (0,) * ctx.n
    one = (1,) + (0,) * (ctx.n - 1)

    def fold(poly: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
        # replace x^i (i >= d) using x^d = x - c
        for i in range(len(poly) - 1, d - 1, -1):
            v = poly[i]
            if v == zero:
                continue
            poly[i] = zero
            poly[i - d + 1] = ctx.add_raw(poly[i - d + 1], v)
            poly[i - d] = ctx.sub_raw(poly[i - d], ctx.mul_raw(v, c))
        del poly[d:]
        while len(poly) < d:
            poly.append(zero)
        return poly

    def mul(a: list[tuple[int, ...]], b: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
        out = [zero] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == zero:
                continue
            for j, bj in enumerate(b):
                if bj != zero:
                    out[i + j] = ctx.add_raw(out[i + j], ctx.mul_raw(ai, bj))
        return fold(out)

    result = [one] + [zero] * (d - 1)
    acc = [zero, one] + [zero] * (d - 2)
    while e:
        if e & 1:
            result = mul(result, acc)
        acc = mul(acc, acc)
        e >>= 1
    return result

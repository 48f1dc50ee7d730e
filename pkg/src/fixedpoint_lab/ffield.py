"""Exact arithmetic in F_p and F_{p^n} for odd p.

Field elements are coefficient vectors over F_p: the element
a_0 + a_1*u + ... + a_{n-1}*u^{n-1} is the tuple (a_0, ..., a_{n-1}),
where u is a root of the defining monic irreducible modulus.  The
*encoding* of an element is the integer sum(a_i * p^i); enumeration
order, witness order and CSV output all follow this encoding.

The prime field is the degree-1 case with modulus x, so one code path
serves F_p, quotients of rings of integers at inert primes, and
F_p[t]/(pi) alike.

Exponents of the form base^ell are never materialized: powers of a
nonzero element reduce the exponent mod (q - 1) via modular
exponentiation of base^ell itself.

Serialization: comma-separated coefficient list, constant term first,
prefixed with the characteristic, e.g. "p=3:1,0,1" for x^2 + 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .errors import (
    CtxMismatch,
    DegreeOutOfRange,
    NotMonic,
    NotPrime,
    TooLarge,
    ZeroDegree,
    ZeroToZero,
)

DEFAULT_ENUM_CAP = 1 << 20
ENUM_CAP_ENV = "FIXEDPOINT_LAB_CAP"

# Witnesses making Miller-Rabin deterministic for all inputs < 3.3e24,
# which covers every 64-bit integer.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def enumeration_cap() -> int:
    """Active enumeration cap (env var FIXEDPOINT_LAB_CAP overrides)."""
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return DEFAULT_ENUM_CAP
    return int(raw)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin valid for 64-bit inputs."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == small:
            return True
        if n % small == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise NotPrime(f"p={p} is not an odd prime")


# ----------------------------------------------------------------------
# Dense polynomials over F_p (coefficient tuples, constant term first)
# ----------------------------------------------------------------------

def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    # mod must be monic
    out = list(a)
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        v = out[i]
        if v:
            out[i] = 0
            for j in range(dm):
                out[i - dm + j] = (out[i - dm + j] - v * mod[j]) % p
    return _trim(out)


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    return _poly_mod(_poly_mul(a, b, p), mod, p)


def _poly_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    acc = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, mod, p)
        acc = _poly_mulmod(acc, acc, mod, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        monic_b = tuple(c * inv_lead % p for c in b)
        a, b = b, _poly_mod(a, monic_b, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = tuple(c * inv_lead % p for c in a)
    return a


@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial over F_p; used for field moduli and for pi."""

    p: int
    coeffs: tuple[int, ...]  # constant term first, leading coefficient 1

    def __post_init__(self) -> None:
        _check_odd_prime(self.p)
        reduced = tuple(c % self.p for c in self.coeffs)
        object.__setattr__(self, "coeffs", reduced)
        if len(reduced) < 2:
            raise ZeroDegree("monic polynomial must have degree >= 1")
        if reduced[-1] != 1:
            raise NotMonic(f"leading coefficient {reduced[-1]} != 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def serialize(self) -> str:
        return f"p={self.p}:" + ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "MonicPoly":
        p, coeffs = parse_coeff_string(text)
        return cls(p, coeffs)

    def __str__(self) -> str:
        return render_poly(self.coeffs, "x")


def parse_coeff_string(text: str) -> tuple[int, tuple[int, ...]]:
    """Split "p=3:1,0,1" into (3, (1, 0, 1))."""
    head, _, body = text.partition(":")
    if not head.startswith("p=") or not body:
        raise ValueError(f"expected 'p=<p>:<c0>,<c1>,...', got {text!r}")
    p = int(head[2:])
    coeffs = tuple(int(c) for c in body.split(","))
    return p, coeffs


def render_poly(coeffs: Sequence[int], sym: str) -> str:
    """Comma-free human form, highest power first: "2u^2+u+1"."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}{sym}" if i == 1 else f"{head}{sym}^{i}")
    return "+".join(terms) if terms else "0"


def is_irreducible(f: MonicPoly) -> bool:
    """Frobenius-based irreducibility test over F_p.

    f of degree n is irreducible iff x^(p^n) == x mod f and, for every
    prime r dividing n, gcd(x^(p^(n/r)) - x, f) is constant.
    """
    p, n = f.p, f.degree
    if n == 1:
        return True
    mod = f.coeffs
    # frob_powers[k] = x^(p^k) mod f
    h: tuple[int, ...] = (0, 1)
    frob = {0: h}
    for k in range(1, n + 1):
        h = _poly_powmod(h, p, mod, p)
        frob[k] = h
    if frob[n] != (0, 1):
        return False
    for r in _prime_divisors(n):
        g = list(frob[n // r])
        while len(g) < 2:
            g.append(0)
        g[1] = (g[1] - 1) % p  # subtract x
        if len(_poly_gcd(g, mod, p)) > 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def canonical_irreducible(p: int, n: int) -> MonicPoly:
    """Monic irreducible of degree n over F_p with minimal encoding.

    The encoding of a candidate x^n + sum(c_i x^i) is sum(c_i p^i) over
    the non-leading coefficients; scanning encodings in ascending order
    makes the choice reproducible across runs and machines.
    """
    _check_odd_prime(p)
    if n < 1:
        raise DegreeOutOfRange(f"extension degree {n} < 1")
    if n == 1:
        return MonicPoly(p, (0, 1))
    for code in range(p**n):
        low = []
        e = code
        for _ in range(n):
            low.append(e % p)
            e //= p
        cand = MonicPoly(p, tuple(low) + (1,))
        if is_irreducible(cand):
            return cand
    raise AssertionError("no irreducible polynomial found (unreachable)")


# ----------------------------------------------------------------------
# Fields and elements
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """A concrete finite field F_{p^n} with its defining modulus."""

    p: int
    n: int
    modulus: MonicPoly
    q: int

    def zero(self) -> "FieldElem":
        return FieldElem((0,) * self.n, self)

    def one(self) -> "FieldElem":
        return FieldElem((1,) + (0,) * (self.n - 1), self)

    def elem(self, value: Union[int, Sequence[int], "FieldElem"]) -> "FieldElem":
        """Coerce an integer (via the prime subfield), a coefficient
        sequence, or an element of this field."""
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise CtxMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElem((value % self.p,) + (0,) * (self.n - 1), self)
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.n:
            # reduce higher-degree coefficient vectors by the modulus
            coeffs = list(_poly_mod(coeffs, self.modulus.coeffs, self.p))
        coeffs += [0] * (self.n - len(coeffs))
        return FieldElem(tuple(coeffs), self)

    # -- raw tuple kernels (hot paths bypass FieldElem wrappers) --------

    def add_raw(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub_raw(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul_raw(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, n = self.p, self.n
        if n == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        mod = self.modulus.coeffs
        for i in range(2 * n - 2, n - 1, -1):
            v = prod[i] % p
            if v:
                for j in range(n):
                    prod[i - n + j] -= v * mod[j]
        return tuple(prod[i] % p for i in range(n))

    def pow_raw(self, a: tuple[int, ...], e: int) -> tuple[int, ...]:
        """a^e with plain non-negative integer exponent (no reduction)."""
        if self.n == 1:
            return (pow(a[0], e, self.p),)
        result = (1,) + (0,) * (self.n - 1)
        acc = a
        while e:
            if e & 1:
                result = self.mul_raw(result, acc)
            acc = self.mul_raw(acc, acc)
            e >>= 1
        return result

    def inv_raw(self, a: tuple[int, ...]) -> tuple[int, ...]:
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return (pow(a[0], -1, self.p),)
        return self.pow_raw(a, self.q - 2)

    def reduce_exponent(self, e: "ExponentSpec") -> int:
        """Exponent mod (q - 1), lifted to q - 1 when the true exponent
        is positive but divisible by q - 1 (so z^e == 1 for units)."""
        m = self.q - 1
        if isinstance(e, Tower):
            if e.ell == 0:
                return 1
            r = pow(e.base, e.ell, m)
            return r if r else m
        if e.e == 0:
            return 0
        r = e.e % m
        return r if r else m

    def encode(self, coeffs: tuple[int, ...]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)


@dataclass(frozen=True)
class FieldElem:
    """Immutable element of a FieldCtx; arithmetic via operators."""

    coeffs: tuple[int, ...]
    ctx: FieldCtx

    def _peer(self, other: "FieldElem") -> None:
        if self.ctx != other.ctx:
            raise CtxMismatch("elements of different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._peer(other)
        return FieldElem(self.ctx.add_raw(self.coeffs, other.coeffs), self.ctx)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._peer(other)
        return FieldElem(self.ctx.sub_raw(self.coeffs, other.coeffs), self.ctx)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._peer(other)
        return FieldElem(self.ctx.mul_raw(self.coeffs, other.coeffs), self.ctx)

    def __neg__(self) -> "FieldElem":
        p = self.ctx.p
        return FieldElem(tuple(-c % p for c in self.coeffs), self.ctx)

    def __pow__(self, e: int) -> "FieldElem":
        return elem_pow(self.ctx, self, Plain(e))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def encoding(self) -> int:
        return self.ctx.encode(self.coeffs)

    def serialize(self) -> str:
        return f"p={self.ctx.p}:" + ",".join(str(c) for c in self.coeffs)

    def render(self, sym: str = "u") -> str:
        return render_poly(self.coeffs, sym)

    def __str__(self) -> str:
        return self.render()


# Exponent families: Tower(base, ell) denotes base^ell, Plain(e) the
# literal exponent e.
@dataclass(frozen=True)
class Tower:
    base: int
    ell: int

    def __post_init__(self) -> None:
        if self.base < 1 or self.ell < 0:
            raise ValueError(f"bad tower exponent {self.base}^{self.ell}")


@dataclass(frozen=True)
class Plain:
    e: int

    def __post_init__(self) -> None:
        if self.e < 0:
            raise ValueError(f"negative exponent {self.e}")


ExponentSpec = Union[Tower, Plain]


def reduce_tower_exponent(base: int, ell: int, modulus: int) -> int:
    """base^ell mod modulus by square-and-multiply.

    base^ell itself is never built, so ell may be arbitrarily large.
    """
    if modulus < 1 or ell < 0 or base < 1:
        raise ValueError("need modulus >= 1, ell >= 0, base >= 1")
    return pow(base, ell, modulus)


def exponent_is_positive(e: ExponentSpec) -> bool:
    if isinstance(e, Tower):
        return True  # base^ell >= 1 always
    return e.e > 0


def make_field(p: int, n: int) -> FieldCtx:
    """F_{p^n} defined by canonical_irreducible(p, n); deterministic."""
    _check_odd_prime(p)
    if n < 1:
        raise DegreeOutOfRange(f"extension degree {n} < 1")
    return FieldCtx(p=p, n=n, modulus=canonical_irreducible(p, n), q=p**n)


def field_from_modulus(modulus: MonicPoly) -> FieldCtx:
    """Field F_p[x]/(modulus) for a user-supplied irreducible modulus."""
    from .errors import NotIrreducible

    if not is_irreducible(modulus):
        raise NotIrreducible(f"{modulus.serialize()} is reducible over F_{modulus.p}")
    return FieldCtx(p=modulus.p, n=modulus.degree, modulus=modulus, q=modulus.p**modulus.degree)


def elem_pow(ctx: FieldCtx, z: FieldElem, e: ExponentSpec) -> FieldElem:
    """z^e; 0^e = 0 for e >= 1, and 0^0 raises ZeroToZero.

    For nonzero z the exponent is reduced mod (q - 1) first, so tower
    exponents of any height cost one modular exponentiation.
    """
    if z.ctx != ctx:
        raise CtxMismatch("element belongs to a different field")
    if z.is_zero():
        if not exponent_is_positive(e):
            raise ZeroToZero("0^0 is undefined")
        return ctx.zero()
    r = ctx.reduce_exponent(e)
    if r == 0:
        return ctx.one()
    return FieldElem(ctx.pow_raw(z.coeffs, r), ctx)


def frobenius(ctx: FieldCtx, z: FieldElem, times: int) -> FieldElem:
    """z^(p^times); the identity when times is a multiple of n."""
    if times < 0:
        raise ValueError(f"negative Frobenius iterate {times}")
    return elem_pow(ctx, z, Tower(ctx.p, times))


def trace(ctx: FieldCtx, z: FieldElem) -> int:
    """z + z^p + ... + z^(p^(n-1)), returned as a residue mod p."""
    if z.ctx != ctx:
        raise CtxMismatch("element belongs to a different field")
    acc = ctx.zero().coeffs
    cur = z.coeffs
    for _ in range(ctx.n):
        acc = ctx.add_raw(acc, cur)
        cur = ctx.pow_raw(cur, ctx.p)
    assert not any(acc[1:]), "trace left the prime subfield"
    return acc[0]


def enumerate_field(ctx: FieldCtx, cap: int | None = None) -> Iterator[FieldElem]:
    """All q elements once, in coefficient-encoding ascending order."""
    limit = enumeration_cap() if cap is None else cap
    if ctx.q > limit:
        raise TooLarge(f"q={ctx.q} exceeds enumeration cap {limit}")
    for code in range(ctx.q):
        yield FieldElem(ctx.decode(code), ctx)

"""Orbit-level view of z -> z^d + c: functional-graph census, lifting
of mod-p fixed points to higher p-power precision, and a finite
dichotomy probe on the truncations Z/p^k.

Exponentiation in Z/p^k never builds base^ell: units reduce the
exponent mod p^(k-1)(p-1) (the unit group of Z/p^k is cyclic for odd
p), and non-units saturate to 0 as soon as the exponent reaches k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Union

from . import counters, ffield
from .errors import NotARoot, PrecisionTooLarge, SingularRoot, TooLarge
from .counters import DegreeSpec, Explicit, PMinusOnePow, PPow, RingSpec


@dataclass(frozen=True)
class PadicRing:
    """The truncation Z/p^k of the p-adic integers."""

    p: int
    k: int


CensusRing = Union[RingSpec, PadicRing]


@dataclass(frozen=True)
class OrbitCensus:
    """Cycle-length multiset, fixed points, and tail size of one map."""

    cycle_lengths: tuple[int, ...]  # sorted, one entry per cycle
    fixed_count: int
    tail_count: int
    ring_size: int

    def cycles_csv(self) -> str:
        """Cycle multiset as "len^mult" items, semicolon-joined."""
        counts = Counter(self.cycle_lengths)
        return ";".join(f"{ln}^{counts[ln]}" for ln in sorted(counts))


@dataclass(frozen=True)
class PadicApprox:
    """A residue mod p^k standing in for a p-adic integer."""

    p: int
    k: int
    value: int


@dataclass(frozen=True)
class ProbeReport:
    """Census of z -> z^(p^ell) + c on Z/p^k plus the dichotomy flags."""

    p: int
    ell: int
    c: int
    k: int
    census: OrbitCensus
    fixed_points: tuple[int, ...]
    has_p_fixed_points: bool
    has_exact_period_p_cycle: bool

    @property
    def fixed_count(self) -> int:
        return self.census.fixed_count

    @property
    def dichotomy_holds(self) -> bool:
        return self.has_p_fixed_points or self.has_exact_period_p_cycle


def _census_of_map(images: list[int]) -> OrbitCensus:
    """Census of the functional graph given by images[i] = f(i)."""
    n = len(images)
    state = [0] * n  # 0 unexplored, 1 on current path, 2 resolved
    cycle_lengths: list[int] = []
    fixed = 0
    cyclic_nodes = 0
    for start in range(n):
        if state[start]:
            continue
        path = []
        z = start
        while state[z] == 0:
            state[z] = 1
            path.append(z)
            z = images[z]
        if state[z] == 1:
            # new cycle: everything in path from first occurrence of z
            at = path.index(z)
            length = len(path) - at
            cycle_lengths.append(length)
            cyclic_nodes += length
            if length == 1:
                fixed += 1
        for node in path:
            state[node] = 2
    return OrbitCensus(
        cycle_lengths=tuple(sorted(cycle_lengths)),
        fixed_count=fixed,
        tail_count=n - cyclic_nodes,
        ring_size=n,
    )


def _capped_tower(base: int, ell: int, cap: int) -> int:
    """min(base^ell, cap), computed without overflow games."""
    d = 1
    for _ in range(ell):
        d *= base
        if d >= cap:
            return cap
    return d


def _padic_power_fn(p: int, k: int, dspec: DegreeSpec):
    """Return z -> z^d mod p^k with the family-aware exponent handling."""
    modulus = p**k
    lam = p ** (k - 1) * (p - 1)  # order of the unit group, odd p
    if isinstance(dspec, Explicit):
        base, ell = dspec.d, 1
    elif isinstance(dspec, PPow):
        base, ell = p, dspec.ell
    else:
        if p < 5:
            from .errors import InvalidDegreeSpec

            raise InvalidDegreeSpec(f"(p-1)^ell family needs p >= 5, got p={p}")
        base, ell = p - 1, dspec.ell
    d_unit = pow(base, ell, lam)
    if d_unit == 0:
        d_unit = lam
    d_small = _capped_tower(base, ell, k)  # only its position vs k matters

    def power(z: int) -> int:
        if z % p:
            return pow(z, d_unit, modulus)
        if z == 0:
            return 0
        if d_small >= k:
            return 0  # valuation(z^d) >= d >= k
        return pow(z, d_small, modulus)

    return power


def functional_graph_census(
    ring: CensusRing,
    dspec: DegreeSpec,
    c: counters.CoeffLike,
    cap: int | None = None,
) -> OrbitCensus:
    """Census of z -> z^d + c over a residue field or a truncation Z/p^k."""
    limit = ffield.enumeration_cap() if cap is None else cap
    if isinstance(ring, PadicRing):
        n = ring.p**ring.k
        if n > limit:
            raise TooLarge(f"ring size {n} exceeds enumeration cap {limit}")
        power = _padic_power_fn(ring.p, ring.k, dspec)
        cc = int(c) % n
        images = [(power(z) + cc) % n for z in range(n)]
        return _census_of_map(images)
    ctx = counters.ring_field(ring)
    if ctx.q > limit:
        raise TooLarge(f"q={ctx.q} exceeds enumeration cap {limit}")
    exp = counters.degree_exponent(ring, dspec)
    r = ctx.reduce_exponent(exp)
    ce = counters.coerce_coefficient(ctx, c)
    zero = (0,) * ctx.n
    images = []
    for code in range(ctx.q):
        z = ctx.decode(code)
        zd = zero if z == zero else ctx.pow_raw(z, r)
        images.append(ctx.encode(ctx.add_raw(zd, ce.coeffs)))
    return _census_of_map(images)


def adam_fares_probe(p: int, ell: int, c: int, k: int, cap: int | None = None) -> ProbeReport:
    """Finite-precision probe: census of z -> z^(p^ell) + c on Z/p^k.

    Flags whether the census shows >= p fixed points or a cycle of
    exact length p.  This is a probe of the truncation only, not a
    statement about Q_p.
    """
    limit = ffield.enumeration_cap() if cap is None else cap
    n = p**k
    if n > limit:
        raise TooLarge(f"ring size {n} exceeds enumeration cap {limit}")
    power = _padic_power_fn(p, k, PPow(ell))
    cc = c % n
    images = [(power(z) + cc) % n for z in range(n)]
    census = _census_of_map(images)
    fixed_points = tuple(z for z in range(n) if images[z] == z)
    return ProbeReport(
        p=p,
        ell=ell,
        c=c,
        k=k,
        census=census,
        fixed_points=fixed_points,
        has_p_fixed_points=census.fixed_count >= p,
        has_exact_period_p_cycle=p in census.cycle_lengths,
    )


# ----------------------------------------------------------------------
# Newton lifting of simple roots
# ----------------------------------------------------------------------

def _eval_f(z: int, dspec_data: tuple[int, int], c: int, p: int, m: int) -> int:
    """z^d - z + c mod p^m with the unit/non-unit exponent handling."""
    base, ell = dspec_data
    modulus = p**m
    if z % p:
        lam = p ** (m - 1) * (p - 1)
        r = pow(base, ell, lam)
        if r == 0:
            r = lam
        zd = pow(z, r, modulus)
    elif z % modulus == 0:
        zd = 0
    else:
        d_small = _capped_tower(base, ell, m)
        zd = 0 if d_small >= m else pow(z, d_small, modulus)
    return (zd - z + c) % modulus


def _eval_fprime(z: int, dspec_data: tuple[int, int], p: int, m: int) -> int:
    """d*z^(d-1) - 1 mod p^m."""
    base, ell = dspec_data
    modulus = p**m
    d_mod = pow(base, ell, modulus)
    if z % p:
        lam = p ** (m - 1) * (p - 1)
        r = (pow(base, ell, lam) - 1) % lam
        if r == 0:
            r = lam
        zpow = pow(z, r, modulus)
    else:
        # d - 1 >= 1 since every family has d >= 2
        d_small = _capped_tower(base, ell, m + 1)
        zpow = pow(z, d_small - 1, modulus) if d_small - 1 < m else 0
        if z % modulus == 0:
            zpow = 0
    return (d_mod * zpow - 1) % modulus


def _dspec_data(p: int, dspec: DegreeSpec) -> tuple[int, int]:
    if isinstance(dspec, Explicit):
        return dspec.d, 1
    if isinstance(dspec, PPow):
        return p, dspec.ell
    if p < 5:
        from .errors import InvalidDegreeSpec

        raise InvalidDegreeSpec(f"(p-1)^ell family needs p >= 5, got p={p}")
    return p - 1, dspec.ell


def hensel_lift(
    p: int,
    dspec: DegreeSpec,
    c: int,
    root: int,
    k: int,
    allow_wide: bool = False,
) -> PadicApprox:
    """Unique z mod p^k with z = root mod p and z^d - z + c = 0 mod p^k.

    Newton iteration doubles the working precision each step.  Needs
    the root to be simple: d*root^(d-1) - 1 must be a unit mod p.
    """
    if k < 1:
        raise ValueError(f"precision k={k} < 1")
    if not allow_wide and p**k > 1 << 64:
        raise PrecisionTooLarge(f"p^k = {p}^{k} exceeds 2^64; pass allow_wide=True")
    data = _dspec_data(p, dspec)
    root = root % p
    if _eval_f(root, data, c, p, 1) != 0:
        raise NotARoot(f"z={root} does not solve z^d - z + c = 0 mod {p}")
    if _eval_fprime(root, data, p, 1) == 0:
        raise SingularRoot(f"derivative vanishes mod {p} at z={root}")
    x = root
    m = 1
    while m < k:
        m = min(2 * m, k)
        modulus = p**m
        fx = _eval_f(x, data, c, p, m)
        fpx = _eval_fprime(x, data, p, m)
        x = (x - fx * pow(fpx, -1, modulus)) % modulus
    return PadicApprox(p=p, k=k, value=x)

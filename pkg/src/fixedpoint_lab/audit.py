"""Claim registry and audit harness.

Each claim is one case of a counting-function case table: a ring
pattern, a degree family, a residue class of the coefficient, and the
predicted count (an exact value or an inclusive range).  Claims share
an id when they come from the same table; the (id, case) pair is
unique.  The audit instantiates every applicable claim over a
parameter grid, computes the count by enumeration, cross-books it
through the gcd oracle when the map degree is small enough to
materialize, and records match or mismatch with witnesses.

Mismatches are data, not failures: several case-table entries disagree
with enumeration outside the prime field, and the point of this module
is to show exactly where.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import counters, ffield
from .counters import (
    DegreeSpec,
    ExtField,
    FuncField,
    PMinusOnePow,
    PPow,
    PrimeField,
    RingSpec,
)
from .errors import EmptyInput
from .ffield import FieldCtx, FieldElem, MonicPoly

AUDIT_CSV_HEADER = (
    "claim_id,ring,p,param,ell,c,predicted_lo,predicted_hi,computed,verdict,witnesses"
)

# Case selectors partition the coefficient space per claim.
#   zero      : c = 0 in the residue field
#   one       : c = 1
#   minus_one : c = -1
#   nonzero   : c != 0 (the blanket zero-count case of the tower claims)

Predictor = Callable[[int, int], tuple[int, int]]


@dataclass(frozen=True)
class Claim:
    id: str
    case: str
    ring_kind: str  # "prime" | "ext" | "func"
    family: str  # "ppow" | "pminusonepow"
    p_fixed: int | None  # claim stated for one specific p, or None
    p_min: int
    ell_fixed: int | None  # claim stated at ell = 1, or None for any ell
    predicted: Predictor  # (p, ell) -> inclusive (lo, hi)
    statement: str  # the claim in words, for report metadata

    def predicted_range(self, p: int, ell: int) -> tuple[int, int]:
        lo, hi = self.predicted(p, ell)
        assert lo <= hi
        return lo, hi


def _const(v: int) -> Predictor:
    return lambda p, ell: (v, v)


def _count_p(p: int, ell: int) -> tuple[int, int]:
    return p, p


def _tower_cases(p: int, ell: int) -> tuple[int, int]:
    # p when ell is 1 or p itself, otherwise the range [2, ell]
    return (p, p) if ell in (1, p) else (2, ell)


def _claims() -> tuple[Claim, ...]:
    out = []

    def add(id, case, ring_kind, family, p_fixed, p_min, ell_fixed, predicted, statement):
        out.append(Claim(id, case, ring_kind, family, p_fixed, p_min, ell_fixed,
                         predicted, statement))

    # --- z^(p^l) + c on inert quotients F_{p^n}, n >= 2 ---
    add("T2.1", "zero", "ext", "ppow", 3, 3, 1, _const(3),
        "z^3 + c on F_{3^n}: 3 fixed points when c = 0")
    add("T2.1", "nonzero", "ext", "ppow", 3, 3, 1, _const(0),
        "z^3 + c on F_{3^n}: none when c != 0")
    add("T2.2", "zero", "ext", "ppow", None, 3, 1, _count_p,
        "z^p + c on F_{p^n}: p fixed points when c = 0")
    add("T2.2", "nonzero", "ext", "ppow", None, 3, 1, _const(0),
        "z^p + c on F_{p^n}: none when c != 0")
    add("T2.3", "zero", "ext", "ppow", None, 3, None, _tower_cases,
        "z^(p^l) + c on F_{p^n}, c = 0: p when l in {1,p}, else between 2 and l")
    add("T2.3", "nonzero", "ext", "ppow", None, 3, None, _const(0),
        "z^(p^l) + c on F_{p^n}: none when c != 0, any l")

    # --- same family on Z/pZ ---
    add("C2.4", "zero", "prime", "ppow", None, 3, None, _tower_cases,
        "z^(p^l) + c on Z/pZ, p | c: p when l in {1,p}, else between 2 and l")
    add("C2.4", "nonzero", "prime", "ppow", None, 3, None, _const(0),
        "z^(p^l) + c on Z/pZ: none when p does not divide c")
    add("T3.1", "zero", "prime", "ppow", 3, 3, 1, _const(3),
        "z^3 + c on Z/3Z: 3 fixed points when 3 | c")
    add("T3.1", "nonzero", "prime", "ppow", 3, 3, 1, _const(0),
        "z^3 + c on Z/3Z: none when 3 does not divide c")
    add("T3.2", "zero", "prime", "ppow", None, 3, 1, _count_p,
        "z^p + c on Z/pZ: p fixed points when p | c")
    add("T3.2", "nonzero", "prime", "ppow", None, 3, 1, _const(0),
        "z^p + c on Z/pZ: none when p does not divide c")
    add("T3.3", "zero", "prime", "ppow", None, 3, None, _tower_cases,
        "z^(p^l) + c on Z/pZ, p | c: p when l in {1,p}, else between 2 and l")
    add("T3.3", "nonzero", "prime", "ppow", None, 3, None, _const(0),
        "z^(p^l) + c on Z/pZ: none when p does not divide c, any l")

    # --- z^((p-1)^l) + c on Z/pZ, p >= 5 ---
    add("T4.1", "one", "prime", "pminusonepow", 5, 5, 1, _const(1),
        "z^4 + c on Z/5Z: one fixed point when c = 1")
    add("T4.1", "zero", "prime", "pminusonepow", 5, 5, 1, _const(2),
        "z^4 + c on Z/5Z: two fixed points when 5 | c")
    add("T4.1", "minus_one", "prime", "pminusonepow", 5, 5, 1, _const(0),
        "z^4 + c on Z/5Z: none when c = -1")
    add("T4.2", "one", "prime", "pminusonepow", None, 5, 1, _const(1),
        "z^(p-1) + c on Z/pZ: one fixed point when c = 1")
    add("T4.2", "zero", "prime", "pminusonepow", None, 5, 1, _const(2),
        "z^(p-1) + c on Z/pZ: two fixed points when p | c")
    add("T4.2", "minus_one", "prime", "pminusonepow", None, 5, 1, _const(0),
        "z^(p-1) + c on Z/pZ: none when c = -1")
    add("T4.3", "one", "prime", "pminusonepow", None, 5, None, _const(1),
        "z^((p-1)^l) + c on Z/pZ: one fixed point when c = 1, any l")
    add("T4.3", "zero", "prime", "pminusonepow", None, 5, None, _const(2),
        "z^((p-1)^l) + c on Z/pZ: two fixed points when p | c, any l")
    add("T4.3", "minus_one", "prime", "pminusonepow", None, 5, None, _const(0),
        "z^((p-1)^l) + c on Z/pZ: none when c = -1, any l")

    # --- z^(p^l) + c on F_p[t]/(pi) ---
    add("T5.1", "zero", "func", "ppow", 3, 3, 1, _const(3),
        "z^3 + c on F_3[t]/(pi): 3 fixed points when pi | c")
    add("T5.1", "nonzero", "func", "ppow", 3, 3, 1, _const(0),
        "z^3 + c on F_3[t]/(pi): none when pi does not divide c")
    add("T5.2", "zero", "func", "ppow", None, 3, 1, _count_p,
        "z^p + c on F_p[t]/(pi): p fixed points when pi | c")
    add("T5.2", "nonzero", "func", "ppow", None, 3, 1, _const(0),
        "z^p + c on F_p[t]/(pi): none when pi does not divide c")
    add("T5.3", "zero", "func", "ppow", None, 3, None, _tower_cases,
        "z^(p^l) + c on F_p[t]/(pi), pi | c: p when l in {1,p}, else 2..l")
    add("T5.3", "nonzero", "func", "ppow", None, 3, None, _const(0),
        "z^(p^l) + c on F_p[t]/(pi): none when pi does not divide c, any l")

    # --- z^((p-1)^l) + c on F_p[t]/(pi), p >= 5 ---
    add("T6.1", "one", "func", "pminusonepow", 5, 5, 1, _const(1),
        "z^4 + c on F_5[t]/(pi): one fixed point when c = 1 mod pi")
    add("T6.1", "zero", "func", "pminusonepow", 5, 5, 1, _const(2),
        "z^4 + c on F_5[t]/(pi): two fixed points when pi | c")
    add("T6.1", "minus_one", "func", "pminusonepow", 5, 5, 1, _const(0),
        "z^4 + c on F_5[t]/(pi): none when c = -1 mod pi")
    add("T6.2", "one", "func", "pminusonepow", None, 5, 1, _const(1),
        "z^(p-1) + c on F_p[t]/(pi): one fixed point when c = 1 mod pi")
    add("T6.2", "zero", "func", "pminusonepow", None, 5, 1, _const(2),
        "z^(p-1) + c on F_p[t]/(pi): two fixed points when pi | c")
    add("T6.2", "minus_one", "func", "pminusonepow", None, 5, 1, _const(0),
        "z^(p-1) + c on F_p[t]/(pi): none when c = -1 mod pi")
    add("T6.3", "one", "func", "pminusonepow", None, 5, None, _const(1),
        "z^((p-1)^l) + c on F_p[t]/(pi): one fixed point when c = 1 mod pi, any l")
    add("T6.3", "zero", "func", "pminusonepow", None, 5, None, _const(2),
        "z^((p-1)^l) + c on F_p[t]/(pi): two fixed points when pi | c, any l")
    add("T6.3", "minus_one", "func", "pminusonepow", None, 5, None, _const(0),
        "z^((p-1)^l) + c on F_p[t]/(pi): none when c = -1 mod pi, any l")
    return tuple(out)


_CASE_ORDER = {"zero": 0, "one": 1, "minus_one": 2, "nonzero": 3}
_CLAIM_TABLE = tuple(sorted(_claims(), key=lambda cl: (cl.id, _CASE_ORDER[cl.case])))


def claim_table() -> tuple[Claim, ...]:
    """The fixed claim list: one entry per case-table cell, ordered by
    (id, case)."""
    return _CLAIM_TABLE


def _case_matches(case: str, ctx: FieldCtx, c: FieldElem) -> bool:
    if case == "zero":
        return c.is_zero()
    if case == "nonzero":
        return not c.is_zero()
    if case == "one":
        return c == ctx.one()
    if case == "minus_one":
        return c == -ctx.one()
    raise ValueError(f"unknown case {case!r}")


# ----------------------------------------------------------------------
# Grid
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GridPoint:
    """One ring instantiation with the ell values and coefficients to probe.

    The two degree families carry separate ell sets because the p^l
    case tables are ell-sensitive while the (p-1)^l ones are not; the
    exact-match grid feeds the tower claims only l in {1, p}.
    """

    ring: RingSpec
    ppow_ells: tuple[int, ...]
    pmo_ells: tuple[int, ...]
    c_values: tuple[FieldElem, ...]


def _all_or_stratified(ctx: FieldCtx, full_limit: int = 343) -> tuple[FieldElem, ...]:
    """Every c when the field is small; otherwise the prime-subfield
    coefficients plus trace-zero representatives."""
    if ctx.q <= full_limit:
        return tuple(ffield.enumerate_field(ctx))
    chosen = [ctx.elem(v) for v in range(ctx.p)]
    seen = {c.coeffs for c in chosen}
    for z in ffield.enumerate_field(ctx):
        if ffield.trace(ctx, z) == 0 and z.coeffs not in seen:
            chosen.append(z)
            seen.add(z.coeffs)
            if len(chosen) >= ctx.p + 8:
                break
    return tuple(chosen)


def degree1_grid(primes: Sequence[int] = (3, 5, 7, 11, 13)) -> tuple[GridPoint, ...]:
    """Prime-field and degree-1 function-field points on which every
    applicable case-table cell is exact (closed forms hold)."""
    points = []
    for p in primes:
        ctx = ffield.make_field(p, 1)
        cs = tuple(ffield.enumerate_field(ctx))
        tower = (1, p)
        pmo = (1, 2, 3, p)
        points.append(GridPoint(PrimeField(p), tower, pmo, cs))
        points.append(GridPoint(FuncField(p, MonicPoly(p, (0, 1))), tower, pmo, cs))
    return tuple(points)


def extension_grid() -> tuple[GridPoint, ...]:
    """Extension fields, degree >= 2 function fields, and prime-field
    points with ell outside {1, p} (the range cases)."""
    points = []
    ells = (1, 2, 3)
    for p, n in ((3, 2), (3, 3), (5, 2)):
        ring = ExtField(p, n)
        ctx = counters.ring_field(ring)
        points.append(GridPoint(ring, ells + (p,), ells + (p,), _all_or_stratified(ctx)))
    for p in (3, 5):
        pi = ffield.canonical_irreducible(p, 2)
        ring = FuncField(p, pi)
        ctx = counters.ring_field(ring)
        points.append(GridPoint(ring, ells + (p,), ells + (p,), _all_or_stratified(ctx)))
    for p in (3, 5, 7):
        ctx = ffield.make_field(p, 1)
        cs = tuple(ffield.enumerate_field(ctx))
        points.append(GridPoint(PrimeField(p), (2, 3, 4), (2, 3, 4), cs))
    return tuple(points)


def build_grid(regime: str = "all", size: str = "small") -> tuple[GridPoint, ...]:
    primes = (3, 5, 7) if size == "small" else (3, 5, 7, 11, 13)
    if regime == "degree1":
        return degree1_grid(primes)
    if regime == "extension":
        return extension_grid()
    if regime == "all":
        return degree1_grid(primes) + extension_grid()
    raise ValueError(f"unknown regime {regime!r}")


# ----------------------------------------------------------------------
# Records
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AuditRecord:
    claim_id: str
    case: str
    ring: RingSpec
    ell: int
    c: FieldElem
    predicted: tuple[int, int]
    computed: int
    verdict: str  # "match" | "mismatch"
    witnesses: tuple[FieldElem, ...]

    @property
    def degree(self) -> int:
        return counters.ring_param(self.ring)

    def csv_row(self) -> str:
        sym = "t" if isinstance(self.ring, FuncField) else "u"
        return ",".join(
            str(v)
            for v in (
                self.claim_id,
                counters.ring_kind(self.ring),
                self.ring.p,
                self.degree,
                self.ell,
                self.c.render(sym),
                self.predicted[0],
                self.predicted[1],
                self.computed,
                self.verdict,
                ";".join(w.render(sym) for w in self.witnesses),
            )
        )


def _claim_applies(claim: Claim, ring: RingSpec, ell: int) -> bool:
    if claim.ring_kind != counters.ring_kind(ring):
        return False
    p = ring.p
    if p < claim.p_min:
        return False
    if claim.p_fixed is not None and p != claim.p_fixed:
        return False
    if claim.ell_fixed is not None and ell != claim.ell_fixed:
        return False
    return True


def audit_point(
    point: GridPoint,
    cross_check: bool = True,
    degree_cap: int = counters.DEFAULT_EXPLICIT_DEGREE_CAP,
) -> list[AuditRecord]:
    """Audit records for a single grid point (unsorted)."""
    records = []
    ctx = counters.ring_field(point.ring)
    for claim in claim_table():
        if claim.family == "pminusonepow" and point.ring.p < 5:
            continue
        dspec_of = PPow if claim.family == "ppow" else PMinusOnePow
        ells = point.ppow_ells if claim.family == "ppow" else point.pmo_ells
        for ell in ells:
            if not _claim_applies(claim, point.ring, ell):
                continue
            dspec: DegreeSpec = dspec_of(ell)
            for c in point.c_values:
                if not _case_matches(claim.case, ctx, c):
                    continue
                result = counters.fixed_point_count(point.ring, dspec, c)
                if cross_check:
                    d = counters.materialized_degree(point.ring, dspec, degree_cap)
                    if d is not None:
                        oracle = counters.gcd_root_count(ctx, d, c)
                        if oracle != result.count:
                            raise AssertionError(
                                f"oracle disagreement at {claim.id}/{claim.case} "
                                f"p={point.ring.p} ell={ell} c={c}"
                            )
                lo, hi = claim.predicted_range(point.ring.p, ell)
                verdict = "match" if lo <= result.count <= hi else "mismatch"
                records.append(
                    AuditRecord(
                        claim_id=claim.id,
                        case=claim.case,
                        ring=point.ring,
                        ell=ell,
                        c=c,
                        predicted=(lo, hi),
                        computed=result.count,
                        verdict=verdict,
                        witnesses=result.roots if verdict == "mismatch" else (),
                    )
                )
    return records


def run_audit(
    grid: Iterable[GridPoint],
    cross_check: bool = True,
    degree_cap: int = counters.DEFAULT_EXPLICIT_DEGREE_CAP,
    jobs: int = 1,
) -> list[AuditRecord]:
    """Instantiate every applicable (claim, parameters) pair and verdict it.

    Grid points are independent, so they may be audited in parallel;
    the final ordering is by (claim, parameters) either way.  With
    cross_check on, any record whose map degree materializes below the
    dense cap is re-counted through the gcd oracle; disagreement there
    is a bug in this package, not a mismatch, so it raises.
    """
    points = list(grid)
    if jobs > 1 and len(points) > 1:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        worker = partial(audit_point, cross_check=cross_check, degree_cap=degree_cap)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, points))
    else:
        chunks = [audit_point(pt, cross_check, degree_cap) for pt in points]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(
        key=lambda r: (
            r.claim_id,
            _CASE_ORDER[r.case],
            r.ring.p,
            r.degree,
            r.ell,
            r.c.encoding,
        )
    )
    return records


def summarize(records: Sequence[AuditRecord]) -> dict:
    """Per-claim match rates split by residue-field degree, with the
    smallest mismatch witnesses listed first."""
    if not records:
        raise EmptyInput("no audit records to summarize")
    statements = {(cl.id, cl.case): cl.statement for cl in claim_table()}
    by_claim: dict[str, dict] = {}
    for rec in records:
        key = f"{rec.claim_id}/{rec.case}"
        entry = by_claim.setdefault(
            key,
            {
                "statement": statements[(rec.claim_id, rec.case)],
                "degree1": {"total": 0, "matches": 0},
                "higher": {"total": 0, "matches": 0},
                "mismatches": [],
            },
        )
        bucket = entry["degree1"] if rec.degree == 1 else entry["higher"]
        bucket["total"] += 1
        if rec.verdict == "match":
            bucket["matches"] += 1
        elif len(entry["mismatches"]) < 5:
            sym = "t" if isinstance(rec.ring, FuncField) else "u"
            entry["mismatches"].append(
                {
                    "p": rec.ring.p,
                    "param": rec.degree,
                    "ell": rec.ell,
                    "c": rec.c.render(sym),
                    "predicted": list(rec.predicted),
                    "computed": rec.computed,
                    "witnesses": [w.render(sym) for w in rec.witnesses],
                }
            )
    total = len(records)
    matches = sum(1 for r in records if r.verdict == "match")
    return {
        "records": total,
        "matches": matches,
        "mismatches": total - matches,
        "claims": {k: by_claim[k] for k in sorted(by_claim)},
    }


def records_to_csv(records: Sequence[AuditRecord]) -> str:
    lines = [AUDIT_CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=False) + "\n"

"""Theorem checkers and the sweep engine.

Each checker takes a table (or a ``Profile`` wrapping one, so measures
are computed once per function) and returns a ``TheoremVerdict``, or
``None`` when the statement does not apply to that function.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from boolalt import comm, extremal, measures, spectra
from boolalt.core import MAX_ARITY, CapExceeded, TruthTable, format_table, is_monotone, parse, restrict

SCHEMA_VERSION = 1
EXHAUSTIVE_CAP = 4

# Each theorem names the cap that bounds the arity it is checked at.  Above
# the cap the verdict is skipped, like a non-applicable function.
HARD_CAPS = {
    **measures.DEFAULT_CAPS,
    "table": MAX_ARITY,
    "matrix": comm.MATRIX_CAP,
    "cover": comm.COVER_NUMBER_CAP,
}
DEFAULT_CAPS = {
    **HARD_CAPS,
    # exact cover search takes ~0.2 s per 16x16 matrix, too slow for 2^16 functions
    "cover": 3,
}


def bs_constant(t: int) -> int:
    """C_t = Σ_{i=1..t} (i + 2) = t(t + 5) / 2."""
    return t * (t + 5) // 2


class Profile:
    """Lazily computed measures of one table, shared by all checkers."""

    def __init__(self, t: TruthTable):
        self.t = t

    @cached_property
    def n(self) -> int:
        return self.t.n

    @cached_property
    def s(self) -> int:
        return measures.sensitivity(self.t).value

    @cached_property
    def bs(self) -> int:
        return measures.block_sensitivity(self.t).value

    @cached_property
    def cert_profile(self) -> np.ndarray:
        return measures.certificate_profile(self.t)

    @cached_property
    def c(self) -> int:
        return int(self.cert_profile.max())

    @cached_property
    def c_zero(self) -> int:
        return int(self.cert_profile[0])

    @cached_property
    def c_one(self) -> int:
        return int(self.cert_profile[-1])

    @cached_property
    def alt(self) -> int:
        return measures.alt(self.t).value

    @cached_property
    def anf(self) -> spectra.Spectrum:
        return spectra.anf(self.t)

    @cached_property
    def deg2(self) -> int:
        return self.anf.degree()

    @cached_property
    def fs(self) -> int:
        return spectra.fourier_sparsity(self.t)

    @cached_property
    def mono(self) -> int:
        return spectra.mono_sparsity(self.t)

    @cached_property
    def dt(self) -> int:
        return measures.dt_depth(self.t)

    @cached_property
    def closure(self) -> int:
        return measures.cmin_closure(self.t).value

    @cached_property
    def monotone(self) -> bool:
        return is_monotone(self.t)

    @cached_property
    def zero_function(self) -> bool:
        return self.t.bits == 0


@dataclass(frozen=True)
class TheoremVerdict:
    theorem: str
    lhs: int | float
    rhs: int | float
    slack: int | float
    holds: bool
    relation: str = "<="
    witness: dict = field(default_factory=dict)

    def ratio(self) -> Fraction | float | None:
        if self.relation != "<=" or self.rhs <= 0:
            return None
        if isinstance(self.lhs, int) and isinstance(self.rhs, int):
            return Fraction(self.lhs, self.rhs)
        return self.lhs / self.rhs

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "relation": self.relation,
            "witness": self.witness,
        }


def _le(theorem: str, lhs, rhs, holds: bool | None = None, **witness) -> TheoremVerdict:
    ok = lhs <= rhs if holds is None else holds
    return TheoremVerdict(theorem, lhs, rhs, rhs - lhs, bool(ok), "<=", witness)


def _eq(theorem: str, lhs, rhs, holds: bool | None = None, **witness) -> TheoremVerdict:
    ok = lhs == rhs if holds is None else holds
    return TheoremVerdict(theorem, lhs, rhs, rhs - lhs, bool(ok), "==", witness)


def _profile(t: TruthTable | Profile) -> Profile:
    return t if isinstance(t, Profile) else Profile(t)


# --- checkers ---------------------------------------------------------------------

def check_odd_support_degree(t) -> TheoremVerdict:
    """deg₂ = n exactly when the number of 1-inputs is odd."""
    p = _profile(t)
    full_degree = int(p.anf[p.t.size - 1] != 0)
    odd = p.t.popcount() % 2
    return _eq("odd_support_full_degree", full_degree, odd, deg2=p.deg2, ones=p.t.popcount())


def check_degree_log_sparsity(t) -> TheoremVerdict | None:
    p = _profile(t)
    if p.zero_function:
        return None
    # deg2 <= log2(fs)  <=>  2^deg2 <= fs
    return _le("degree_log_sparsity", p.deg2, math.log2(p.fs), holds=(1 << p.deg2) <= p.fs, fs=p.fs)


def check_monotone_s_bs_c(t) -> TheoremVerdict | None:
    p = _profile(t)
    if not p.monotone:
        return None
    return _eq("monotone_s_bs_c", p.s, p.c, holds=p.s == p.bs == p.c, bs=p.bs)


def check_monotone_s_degree(t) -> TheoremVerdict | None:
    p = _profile(t)
    if not p.monotone:
        return None
    return _le("monotone_s_degree", p.s, p.deg2)


def check_extreme_certificate_s(t) -> TheoremVerdict:
    p = _profile(t)
    return _le("extreme_cert_alt_s", max(p.c_zero, p.c_one), p.alt * p.s,
               c_zero=p.c_zero, c_one=p.c_one, alt=p.alt, s=p.s)


def check_extreme_certificate_degree(t) -> TheoremVerdict:
    p = _profile(t)
    return _le("extreme_cert_alt_degree", max(p.c_zero, p.c_one), p.alt * p.deg2,
               c_zero=p.c_zero, c_one=p.c_one, alt=p.alt, deg2=p.deg2)


def check_extreme_certificate_construction(t) -> TheoremVerdict:
    """Max-term certificates for both ends fix f and respect alt·min(s, deg₂)."""
    p = _profile(t)
    sizes = []
    valid = True
    for end, bit in (("zero", 0), ("one", 1)):
        cert = extremal.certificate_at_extreme(p.t, end, check=False)
        fixed = {c: bit for c in cert.coordinates}
        valid &= restrict(p.t, fixed).is_constant()
        sizes.append(len(cert))
    bound = p.alt * min(p.s, p.deg2)
    lhs = max(sizes)
    return _le("extreme_cert_construction", lhs, bound, holds=valid and lhs <= bound,
               zero_size=sizes[0], one_size=sizes[1], valid=bool(valid))


def check_bs_alt_explicit(t) -> TheoremVerdict:
    """bs ≤ C_t·s for alt = 2t, (C_t + 1)·s for alt = 2t + 1."""
    p = _profile(t)
    half = p.alt // 2
    factor = bs_constant(half) + (p.alt % 2)
    return _le("bs_alt_explicit", p.bs, factor * p.s, alt=p.alt, s=p.s, factor=factor)


def check_bs_alt_squared(t) -> TheoremVerdict:
    """bs ≤ (C_⌊alt/2⌋ + 1)·s, the explicit form of bs = O(alt²·s)."""
    p = _profile(t)
    factor = bs_constant(p.alt // 2) + 1
    return _le("bs_alt_squared", p.bs, factor * p.s, alt=p.alt, s=p.s, factor=factor)


def check_dt_cmin_closure_degree(t) -> TheoremVerdict:
    """Depth of the min-certificate tree against Cmin-closure · deg₂."""
    p = _profile(t)
    tree = extremal.build_dt_via_min_certificates(p.t)
    depth = tree.depth()
    correct = extremal.tree_computes(tree, p.t)
    bound = p.closure * p.deg2
    ok = (correct and p.dt <= depth <= bound
          and depth <= p.alt * p.deg2 ** 2 and depth <= p.alt * p.s * p.deg2)
    return _le("dt_cmin_closure_degree", depth, bound, holds=ok,
               correct=bool(correct), dt=p.dt, closure=p.closure, deg2=p.deg2)


def check_dt_alt_degree_squared(t) -> TheoremVerdict:
    p = _profile(t)
    return _le("dt_alt_degree_squared", p.dt, p.alt * p.deg2 ** 2, alt=p.alt, deg2=p.deg2)


def check_dt_alt_s_degree(t) -> TheoremVerdict:
    p = _profile(t)
    return _le("dt_alt_s_degree", p.dt, p.alt * p.s * p.deg2, alt=p.alt, s=p.s, deg2=p.deg2)


def check_xor_protocol_log_rank(t) -> TheoremVerdict | None:
    """2·dt ≤ 2·alt·deg₂² ≤ 2·alt·log₂²(fs)."""
    p = _profile(t)
    if p.zero_function:
        return None
    middle = 2 * p.alt * p.deg2 ** 2
    log_fs = math.log2(p.fs)
    rhs = 2 * p.alt * log_fs ** 2
    ok = 2 * p.dt <= middle and (1 << p.deg2) <= p.fs
    return _le("xor_protocol_log_rank", 2 * p.dt, rhs, holds=ok, middle=middle, fs=p.fs)


def check_xor_rank(t) -> TheoremVerdict:
    p = _profile(t)
    rank = comm.exact_rank(comm.build_comm_matrix(p.t, comm.XOR))
    return _eq("xor_rank_fourier_sparsity", rank, p.fs)


def check_and_rank(t) -> TheoremVerdict:
    p = _profile(t)
    rank = comm.exact_rank(comm.build_comm_matrix(p.t, comm.AND))
    return _eq("and_rank_mono_sparsity", rank, p.mono)


def check_tree_protocols(t) -> TheoremVerdict:
    """Optimal-tree protocols are correct for both compositions, cost ≤ 2·dt."""
    p = _profile(t)
    tree = extremal.build_optimal_tree(p.t)
    correct, worst = True, 0
    for composition in comm.COMPOSITIONS:
        ok, cost = comm.simulate_all_pairs(tree, composition, p.t)
        correct &= ok
        worst = max(worst, cost)
    return _le("tree_protocol_simulation", worst, 2 * p.dt, holds=correct and worst <= 2 * p.dt,
               correct=bool(correct))


def check_minterm_cover(t) -> TheoremVerdict | None:
    """Min-term cover is valid, counts min terms by mono, recursion depth ≤ alt."""
    p = _profile(t)
    if p.t(0) != 0:
        return None
    info = comm.check_minterm_cover(p.t)
    ok = info["valid"] and info["minterms_within_mono"] and info["size_inequality"] and info["depth_within_alt"]
    return _le("minterm_cover", info["depth"], p.alt, holds=ok,
               size=info["size"], valid=info["valid"])


def check_cover_number(t) -> TheoremVerdict | None:
    """The exact 1-cover number never exceeds the constructed min-term cover."""
    p = _profile(t)
    if p.t(0) != 0:
        return None
    exact = comm.exact_cover_number(comm.build_comm_matrix(p.t, comm.AND), 1)
    return _le("cover_number_lower_bound", exact, comm.minterm_cover(p.t).size)


def check_maxterm_cells(t) -> TheoremVerdict | None:
    p = _profile(t)
    if p.t(0) != 0 or p.alt % 2:
        return None
    dec = comm.maxterm_decomposition(p.t)
    ok = dec.covers_all_ones() and dec.alt_drops()
    return _eq("maxterm_cells", int(ok), 1, cells=len(dec.cells),
               max_terms=len(dec.max_terms), notes=dec.notes)


@dataclass(frozen=True)
class Theorem:
    id: str
    check: Callable
    cap: str
    summary: str


THEOREMS: dict[str, Theorem] = {th.id: th for th in [
    Theorem("odd_support_full_degree", check_odd_support_degree, "table",
            "deg2 = n iff |f^-1(1)| is odd"),
    Theorem("degree_log_sparsity", check_degree_log_sparsity, "table",
            "deg2 <= log2 Fourier sparsity (f not constant 0)"),
    Theorem("monotone_s_bs_c", check_monotone_s_bs_c, "bs",
            "monotone f: s = bs = C"),
    Theorem("monotone_s_degree", check_monotone_s_degree, "table",
            "monotone f: s <= deg2"),
    Theorem("extreme_cert_alt_s", check_extreme_certificate_s, "certificate",
            "max(C(f,0^n), C(f,1^n)) <= alt * s"),
    Theorem("extreme_cert_alt_degree", check_extreme_certificate_degree, "certificate",
            "max(C(f,0^n), C(f,1^n)) <= alt * deg2"),
    Theorem("extreme_cert_construction", check_extreme_certificate_construction, "certificate",
            "max-term certificates fix f with size <= alt * min(s, deg2)"),
    Theorem("bs_alt_explicit", check_bs_alt_explicit, "bs",
            "bs <= C_t s (alt = 2t) or (C_t + 1) s (alt = 2t + 1), C_t = t(t+5)/2"),
    Theorem("bs_alt_squared", check_bs_alt_squared, "bs",
            "bs <= (C_floor(alt/2) + 1) s"),
    Theorem("dt_cmin_closure_degree", check_dt_cmin_closure_degree, "closure",
            "min-certificate tree is correct with depth <= Cmin-closure * deg2"),
    Theorem("dt_alt_degree_squared", check_dt_alt_degree_squared, "dt",
            "dt <= alt * deg2^2"),
    Theorem("dt_alt_s_degree", check_dt_alt_s_degree, "dt",
            "dt <= alt * s * deg2"),
    Theorem("xor_protocol_log_rank", check_xor_protocol_log_rank, "dt",
            "2 dt <= 2 alt deg2^2 <= 2 alt log2^2 fs (f not constant 0)"),
    Theorem("xor_rank_fourier_sparsity", check_xor_rank, "matrix",
            "rank M_{f xor} = Fourier sparsity"),
    Theorem("and_rank_mono_sparsity", check_and_rank, "matrix",
            "rank M_{f and} = Mobius sparsity"),
    Theorem("tree_protocol_simulation", check_tree_protocols, "matrix",
            "tree protocols correct on all pairs with cost <= 2 dt"),
    Theorem("minterm_cover", check_minterm_cover, "matrix",
            "min-term 1-cover is valid, per-level counts within mono, depth <= alt"),
    Theorem("cover_number_lower_bound", check_cover_number, "cover",
            "exact 1-cover number <= constructed min-term cover"),
    Theorem("maxterm_cells", check_maxterm_cells, "matrix",
            "max-term cells cover all 1-entries and alt drops under each max term"),
]}

# ids accepted by --thm besides the full names
ALIASES = {
    "extreme": ["extreme_cert_alt_s", "extreme_cert_alt_degree", "extreme_cert_construction"],
    "monotone": ["monotone_s_bs_c", "monotone_s_degree"],
    "rank": ["xor_rank_fourier_sparsity", "and_rank_mono_sparsity"],
    "covers": ["minterm_cover", "cover_number_lower_bound", "maxterm_cells"],
}


def resolve_theorems(names: Iterable[str] | None) -> list[str]:
    if names is None:
        return list(THEOREMS)
    out: list[str] = []
    for name in names:
        if name == "all":
            ids = list(THEOREMS)
        elif name in ALIASES:
            ids = ALIASES[name]
        elif name in THEOREMS:
            ids = [name]
        else:
            raise KeyError(f"unknown theorem id {name!r}")
        out.extend(i for i in ids if i not in out)
    return [i for i in THEOREMS if i in out]


def resolve_caps(caps: dict[str, int] | None) -> dict[str, int]:
    merged = {**DEFAULT_CAPS, **(caps or {})}
    for key, value in merged.items():
        if key not in HARD_CAPS:
            raise KeyError(f"unknown cap {key!r}")
        if not 0 <= value <= HARD_CAPS[key]:
            raise CapExceeded(f"cap {key}={value} outside 0..{HARD_CAPS[key]}")
    return merged


def check_all(t: TruthTable, theorems: Sequence[str] | None = None,
              caps: dict[str, int] | None = None) -> dict[str, TheoremVerdict | None]:
    """Every requested checker on one function; ``None`` marks skipped."""
    caps = resolve_caps(caps)
    p = Profile(t)
    out = {}
    for tid in resolve_theorems(theorems):
        th = THEOREMS[tid]
        out[tid] = th.check(p) if t.n <= caps[th.cap] else None
    return out


# --- sweeps --------------------------------------------------------------------------

@dataclass(frozen=True)
class Space:
    """Either every table of arity ``n`` or an explicit list of function specs."""

    kind: str
    n: int = 0
    items: tuple[str, ...] = ()

    @classmethod
    def exhaustive(cls, n: int) -> Space:
        if not 0 <= n <= EXHAUSTIVE_CAP:
            raise CapExceeded(f"exhaustive sweeps are capped at n = {EXHAUSTIVE_CAP}")
        return cls("exhaustive", n)

    @classmethod
    def of(cls, specs: Iterable[str | TruthTable]) -> Space:
        return cls("list", 0, tuple(s if isinstance(s, str) else format_table(s) for s in specs))

    def __len__(self) -> int:
        return 1 << (1 << self.n) if self.kind == "exhaustive" else len(self.items)

    def table(self, i: int) -> TruthTable:
        if self.kind == "exhaustive":
            return TruthTable(self.n, i)
        return parse(self.items[i])

    def describe(self) -> dict:
        if self.kind == "exhaustive":
            return {"kind": "exhaustive", "n": self.n, "functions": len(self)}
        return {"kind": "list", "functions": len(self), "items": list(self.items)}


MAX_LISTED_VIOLATIONS = 20


@dataclass
class Tally:
    total: int = 0
    holds: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: list[dict] = field(default_factory=list)
    min_slack: int | float | None = None
    max_ratio: Fraction | float | None = None
    max_ratio_witness: str | None = None

    def add(self, index: int, t: TruthTable, v: TheoremVerdict | None) -> None:
        if v is None:
            self.skipped += 1
            return
        self.total += 1
        if v.holds:
            self.holds += 1
        else:
            self.violation_count += 1
            if len(self.violations) < MAX_LISTED_VIOLATIONS:
                self.violations.append({"function": format_table(t), "verdict": v.to_json()})
        if self.min_slack is None or v.slack < self.min_slack:
            self.min_slack = v.slack
        r = v.ratio()
        if r is not None and (self.max_ratio is None or r > self.max_ratio):
            self.max_ratio = r
            self.max_ratio_witness = format_table(t)

    def merge(self, later: Tally) -> None:
        # ``later`` covers higher indices; ties keep the earlier witness
        self.total += later.total
        self.holds += later.holds
        self.skipped += later.skipped
        self.violation_count += later.violation_count
        room = MAX_LISTED_VIOLATIONS - len(self.violations)
        self.violations.extend(later.violations[:max(room, 0)])
        if later.min_slack is not None and (self.min_slack is None or later.min_slack < self.min_slack):
            self.min_slack = later.min_slack
        if later.max_ratio is not None and (self.max_ratio is None or later.max_ratio > self.max_ratio):
            self.max_ratio = later.max_ratio
            self.max_ratio_witness = later.max_ratio_witness

    def to_json(self) -> dict:
        ratio = self.max_ratio
        exact = None
        if isinstance(ratio, Fraction):
            exact = f"{ratio.numerator}/{ratio.denominator}"
        slack = self.min_slack
        if isinstance(slack, float):
            slack = round(slack, 6)
        return {
            "checked": self.total,
            "holds": self.holds,
            "skipped": self.skipped,
            "violations": self.violation_count,
            "min_slack": slack,
            "max_ratio": None if ratio is None else round(float(ratio), 4),
            "max_ratio_exact": exact,
            "max_ratio_witness": self.max_ratio_witness,
            "violation_examples": self.violations,
        }


@dataclass
class SweepResult:
    space: Space
    theorems: list[str]
    tallies: dict[str, Tally]

    @property
    def functions(self) -> int:
        return len(self.space)

    @property
    def violations(self) -> int:
        return sum(t.violation_count for t in self.tallies.values())

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "space": self.space.describe(),
            "theorems": {tid: self.tallies[tid].to_json() for tid in self.theorems},
            "violations": self.violations,
        }

    def csv_rows(self) -> list[list]:
        rows = [["theorem", "checked", "holds", "skipped", "violations", "min_slack", "max_ratio", "max_ratio_witness"]]
        for tid in self.theorems:
            d = self.tallies[tid].to_json()
            rows.append([tid, d["checked"], d["holds"], d["skipped"], d["violations"],
                         d["min_slack"], d["max_ratio"], d["max_ratio_witness"]])
        return rows


def _run_chunk(space: Space, theorems: list[str], caps: dict[str, int],
               start: int, stop: int) -> dict[str, Tally]:
    tallies = {tid: Tally() for tid in theorems}
    for i in range(start, stop):
        t = space.table(i)
        for tid, verdict in check_all(t, theorems, caps).items():
            tallies[tid].add(i, t, verdict)
    return tallies


def sweep(space: Space, theorems: Sequence[str] | None = None, jobs: int | None = None,
          chunk_size: int | None = None, caps: dict[str, int] | None = None) -> SweepResult:
    """Run the checkers over every function of ``space``.

    Chunks are merged in index order, so the result does not depend on
    ``jobs`` or on scheduling.
    """
    ids = resolve_theorems(theorems)
    caps = resolve_caps(caps)
    total = len(space)
    jobs = jobs or os.cpu_count() or 1
    if chunk_size is None:
        chunk_size = max(1, min(4096, -(-total // (jobs * 4))))
    bounds = [(a, min(a + chunk_size, total)) for a in range(0, total, chunk_size)]
    if jobs == 1 or len(bounds) == 1:
        parts = [_run_chunk(space, ids, caps, a, b) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_chunk, space, ids, caps, a, b) for a, b in bounds]
            parts = [f.result() for f in futures]
    tallies = {tid: Tally() for tid in ids}
    for part in parts:
        for tid in ids:
            tallies[tid].merge(part[tid])
    return SweepResult(space, ids, tallies)

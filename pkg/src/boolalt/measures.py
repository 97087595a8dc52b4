"""Query-side complexity measures with witnesses.

Sensitivity, block sensitivity, certificate complexity (pointwise, max,
min and the closure of the min over subfunctions), decision tree depth
and the alternating number.  Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from boolalt.core import (
    Restriction,
    TruthTable,
    check_cap,
    coords,
    fix,
)

BS_CAP = 12
CERTIFICATE_CAP = 12
CLOSURE_CAP = 8
DT_CAP = 10

DEFAULT_CAPS = {
    "bs": BS_CAP,
    "certificate": CERTIFICATE_CAP,
    "closure": CLOSURE_CAP,
    "dt": DT_CAP,
}


class PointValue(NamedTuple):
    value: int
    point: int


class BlockWitness(NamedTuple):
    value: int
    point: int
    blocks: tuple[tuple[int, ...], ...]


class CertificateWitness(NamedTuple):
    value: int
    point: int
    coordinates: tuple[int, ...]


class ClosureWitness(NamedTuple):
    value: int
    restriction: Restriction


class AltWitness(NamedTuple):
    value: int
    chain: tuple[int, ...]


def _index(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _popcounts(n: int) -> np.ndarray:
    idx = _index(n)
    pc = np.zeros(idx.size, dtype=np.int64)
    for i in range(n):
        pc += (idx >> i) & 1
    return pc


# --- sensitivity --------------------------------------------------------------

def sensitivity_at(t: TruthTable, x: int) -> int:
    fx = t(x)
    return sum(1 for i in range(t.n) if t(x ^ (1 << i)) != fx)


def sensitivity_profile(t: TruthTable) -> np.ndarray:
    """s(f, x) for every x."""
    v = t.values
    idx = _index(t.n)
    counts = np.zeros(t.size, dtype=np.int64)
    for i in range(t.n):
        counts += v != v[idx ^ (1 << i)]
    return counts


def sensitivity(t: TruthTable) -> PointValue:
    prof = sensitivity_profile(t)
    x = int(np.argmax(prof))
    return PointValue(int(prof[x]), x)


# --- block sensitivity -----------------------------------------------------------

def minimal_sensitive_blocks(t: TruthTable, x: int) -> list[int]:
    """Masks of the minimal sensitive blocks at x, in lexicographic order."""
    v = t.values
    sens = v[_index(t.n) ^ x] != t(x)
    reach = sens.copy()
    proper = np.zeros_like(sens)
    for i in range(t.n):
        view = reach.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    for i in range(t.n):
        pv = proper.reshape(-1, 2, 1 << i)
        rv = reach.reshape(-1, 2, 1 << i)
        pv[:, 1, :] |= rv[:, 0, :]
    masks = [int(b) for b in np.flatnonzero(sens & ~proper)]
    masks.sort(key=coords)
    return masks


def _max_packing(blocks: list[int]) -> list[int]:
    # DFS in lexicographic order of index sequences; only strict
    # improvements replace the incumbent, so the first maximum found wins
    best: list[int] = []
    sizes = [b.bit_count() for b in blocks]
    chosen: list[int] = []

    def dfs(start: int, used: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = chosen[:]
        cands = [j for j in range(start, len(blocks)) if not blocks[j] & used]
        if not cands:
            return
        union = 0
        smallest = sizes[cands[0]]
        for j in cands:
            union |= blocks[j]
            smallest = min(smallest, sizes[j])
        bound = min(len(cands), union.bit_count() // smallest)
        if len(chosen) + bound <= len(best):
            return
        for k, j in enumerate(cands):
            if len(chosen) + len(cands) - k <= len(best):
                return
            chosen.append(blocks[j])
            dfs(j + 1, used | blocks[j])
            chosen.pop()

    dfs(0, 0)
    return best


def block_sensitivity_at(t: TruthTable, x: int, cap: int = BS_CAP) -> tuple[int, tuple[tuple[int, ...], ...]]:
    check_cap(t.n, cap, "block sensitivity")
    packing = _max_packing(minimal_sensitive_blocks(t, x))
    return len(packing), tuple(coords(b) for b in packing)


def block_sensitivity(t: TruthTable, cap: int = BS_CAP) -> BlockWitness:
    check_cap(t.n, cap, "block sensitivity")
    best = BlockWitness(0, 0, ())
    for x in range(t.size):
        value, blocks = block_sensitivity_at(t, x, cap)
        if value > best.value:
            best = BlockWitness(value, x, blocks)
            if value == t.n:
                break
    return best


# --- certificates ------------------------------------------------------------------

def _constancy(t: TruthTable) -> np.ndarray:
    """const[F, x]: f is constant on x + span(F), F a set of free coordinates."""
    v = t.values
    idx = _index(t.n)
    const = np.empty((t.size, t.size), dtype=bool)
    const[0] = True
    for free in range(1, t.size):
        low = free & -free
        rest = free ^ low
        partner = idx ^ low
        const[free] = const[rest] & const[rest][partner] & (v == v[partner])
    return const


def _certificate_data(t: TruthTable) -> tuple[np.ndarray, np.ndarray]:
    # the constancy matrix is 4^n bytes; only cache the small ones
    if t.n <= 8:
        return _cached_certificate_data(t)
    return _compute_certificate_data(t)


def _compute_certificate_data(t: TruthTable) -> tuple[np.ndarray, np.ndarray]:
    const = _constancy(t)
    pc = _popcounts(t.n).astype(np.uint8)
    widest = np.where(const, pc[:, None], np.uint8(0)).max(axis=0)
    sizes = t.n - widest.astype(np.int64)
    sizes.setflags(write=False)
    const.setflags(write=False)
    return const, sizes


_cached_certificate_data = lru_cache(maxsize=1024)(_compute_certificate_data)


def certificate_profile(t: TruthTable, cap: int = CERTIFICATE_CAP) -> np.ndarray:
    """C(f, x) for every x."""
    check_cap(t.n, cap, "certificate")
    return _certificate_data(t)[1]


def certificate_at(t: TruthTable, x: int, cap: int = CERTIFICATE_CAP) -> tuple[int, tuple[int, ...]]:
    """Size and lexicographically smallest minimum certificate at x."""
    check_cap(t.n, cap, "certificate")
    const, sizes = _certificate_data(t)
    size = int(sizes[x])
    full = t.size - 1
    for chosen in combinations(range(1, t.n + 1), size):
        fixed = 0
        for c in chosen:
            fixed |= 1 << (c - 1)
        if const[full ^ fixed, x]:
            return size, chosen
    raise AssertionError("certificate size without a witness")


def certificate(t: TruthTable, cap: int = CERTIFICATE_CAP) -> CertificateWitness:
    prof = certificate_profile(t, cap)
    x = int(np.argmax(prof))
    value, cs = certificate_at(t, x, cap)
    return CertificateWitness(value, x, cs)


def cmin(t: TruthTable, cap: int = CERTIFICATE_CAP) -> CertificateWitness:
    prof = certificate_profile(t, cap)
    x = int(np.argmin(prof))
    value, cs = certificate_at(t, x, cap)
    return CertificateWitness(value, x, cs)


@lru_cache(maxsize=1 << 16)
def _cmin_value(t: TruthTable) -> int:
    if t.is_constant():
        return 0
    return int(_certificate_data(t)[1].min())


@lru_cache(maxsize=1 << 16)
def _closure(t: TruthTable) -> tuple[int, tuple[tuple[int, int], ...]]:
    best_value, best_fixed = _cmin_value(t), ()
    for i in range(1, t.n + 1):
        for b in (0, 1):
            value, fixed = _closure(fix(t, i, b))
            if value > best_value:
                lifted = tuple((c if c < i else c + 1, bit) for c, bit in fixed)
                best_value, best_fixed = value, lifted + ((i, b),)
    return best_value, best_fixed


def cmin_closure(t: TruthTable, cap: int = CLOSURE_CAP) -> ClosureWitness:
    """Largest Cmin over all subfunctions, with a restriction attaining it."""
    check_cap(t.n, cap, "cmin closure")
    value, fixed = _closure(t)
    return ClosureWitness(value, Restriction(fixed))


# --- decision trees --------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _dt(t: TruthTable) -> int:
    if t.is_constant():
        return 0
    best = t.n
    for i in range(1, t.n + 1):
        lo = fix(t, i, 0)
        hi = fix(t, i, 1)
        if lo == hi:
            # irrelevant variable: querying it never helps
            return _dt(lo)
        d = _dt(lo)
        if d >= best:
            continue
        d = max(d, _dt(hi))
        best = min(best, d)
    return 1 + best


def dt_depth(t: TruthTable, cap: int = DT_CAP) -> int:
    check_cap(t.n, cap, "decision tree")
    return _dt(t)


# --- alternating number -------------------------------------------------------------

def alt_profile(t: TruthTable) -> np.ndarray:
    """alt(f, x) for every x, by DP over immediate predecessors."""
    n = t.n
    v = t.values.astype(np.int64)
    idx = _index(n)
    pc = _popcounts(n)
    alt = np.zeros(t.size, dtype=np.int64)
    for w in range(1, n + 1):
        level = idx[pc == w]
        best = np.zeros(level.size, dtype=np.int64)
        for i in range(n):
            has = ((level >> i) & 1).astype(bool)
            tops = level[has]
            src = tops ^ (1 << i)
            cand = alt[src] + (v[src] != v[tops])
            best[has] = np.maximum(best[has], cand)
        alt[level] = best
    return alt


def alt_at(t: TruthTable, x: int) -> int:
    return int(alt_profile(t)[x])


def alt(t: TruthTable) -> AltWitness:
    """Alternating number with a maximal chain 0^n -> 1^n realizing it."""
    prof = alt_profile(t)
    x = t.size - 1
    chain = [x]
    while x:
        for i in range(t.n):
            if (x >> i) & 1:
                y = x ^ (1 << i)
                if prof[y] + (t(y) != t(x)) == prof[x]:
                    break
        x = y
        chain.append(x)
    return AltWitness(int(prof[-1]), tuple(reversed(chain)))


def chain_alternations(t: TruthTable, chain: tuple[int, ...] | list[int]) -> int:
    return sum(1 for a, b in zip(chain, chain[1:]) if t(a) != t(b))


# --- report ------------------------------------------------------------------------

@dataclass
class MeasureReport:
    n: int
    sensitivity: PointValue
    block_sensitivity: BlockWitness
    certificate: CertificateWitness
    cmin: CertificateWitness
    cmin_closure: ClosureWitness | None
    dt_depth: int | None
    alt: AltWitness
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        closure = None
        if self.cmin_closure is not None:
            closure = {
                "value": self.cmin_closure.value,
                "restriction": self.cmin_closure.restriction.to_json(),
            }
        return {
            "sensitivity": {"value": self.sensitivity.value, "point": self.sensitivity.point},
            "block_sensitivity": {
                "value": self.block_sensitivity.value,
                "point": self.block_sensitivity.point,
                "blocks": [list(b) for b in self.block_sensitivity.blocks],
            },
            "certificate": {
                "value": self.certificate.value,
                "point": self.certificate.point,
                "coordinates": list(self.certificate.coordinates),
            },
            "cmin": {
                "value": self.cmin.value,
                "point": self.cmin.point,
                "coordinates": list(self.cmin.coordinates),
            },
            "cmin_closure": closure,
            "dt_depth": self.dt_depth,
            "alt": {"value": self.alt.value, "chain": list(self.alt.chain)},
            "notes": list(self.notes),
        }


def measure_report(t: TruthTable, caps: dict[str, int] | None = None) -> MeasureReport:
    """All measures of one table.  Closure and dt are skipped past their caps."""
    caps = {**DEFAULT_CAPS, **(caps or {})}
    notes = []
    closure = None
    if t.n <= caps["closure"]:
        closure = cmin_closure(t, caps["closure"])
    else:
        notes.append(f"cmin_closure skipped: arity above cap {caps['closure']}")
    depth = None
    if t.n <= caps["dt"]:
        depth = dt_depth(t, caps["dt"])
    else:
        notes.append(f"dt_depth skipped: arity above cap {caps['dt']}")
    return MeasureReport(
        n=t.n,
        sensitivity=sensitivity(t),
        block_sensitivity=block_sensitivity(t, caps["bs"]),
        certificate=certificate(t, caps["certificate"]),
        cmin=cmin(t, caps["certificate"]),
        cmin_closure=closure,
        dt_depth=depth,
        alt=alt(t),
        notes=notes,
    )

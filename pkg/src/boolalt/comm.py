"""Two-party AND / XOR compositions of an outer function.

Matrices are indexed [x, y] with x, y points of the outer arity.  Rank is
computed by fraction-free elimination over the integers, covers are
explicit lists of combinatorial rectangles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from boolalt.core import (
    CapExceeded,
    PreconditionError,
    Restriction,
    TruthTable,
    check_cap,
    coords,
    format_table,
    hex_digits,
    negate_output,
    restrict,
)
from boolalt import measures
from boolalt.extremal import (
    DecisionTree,
    Leaf,
    _down_constant,
    build_optimal_tree,
    find_terms,
    zero_set,
)
from boolalt.spectra import fourier_sparsity, mono_sparsity

AND = "and"
XOR = "xor"
COMPOSITIONS = (AND, XOR)

MATRIX_CAP = 6
COVER_NUMBER_CAP = 4
LOVASZ_CAP = 4


def _inner(composition: str, x: int, y: int) -> int:
    if composition == AND:
        return x & y
    if composition == XOR:
        return x ^ y
    raise ValueError(f"unknown composition {composition!r}")


@dataclass(frozen=True, eq=False)
class CommMatrix:
    composition: str
    outer: TruthTable
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def rows_hex(self) -> list[str]:
        width = hex_digits(self.outer.n)
        out = []
        for row in self.entries:
            bits = 0
            for y in np.flatnonzero(row):
                bits |= 1 << int(y)
            out.append(f"{bits:0{width}X}")
        return out

    def to_json(self) -> dict:
        return {
            "composition": self.composition,
            "outer": format_table(self.outer),
            "rows": self.rows_hex(),
        }


def build_comm_matrix(t: TruthTable, composition: str) -> CommMatrix:
    check_cap(t.n, MATRIX_CAP, "communication matrix")
    idx = np.arange(t.size)
    if composition == AND:
        inner = np.bitwise_and.outer(idx, idx)
    elif composition == XOR:
        inner = np.bitwise_xor.outer(idx, idx)
    else:
        raise ValueError(f"unknown composition {composition!r}")
    entries = t.values[inner]
    entries.setflags(write=False)
    return CommMatrix(composition, t, entries)


def integer_rank(rows: list[list[int]]) -> int:
    """Rank over the rationals by Bareiss fraction-free elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][c]
        top = m[rank]
        for r in range(rank + 1, nrows):
            row = m[r]
            a = row[c]
            for cc in range(c + 1, ncols):
                row[cc] = (row[cc] * p - a * top[cc]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_rank(m: CommMatrix) -> int:
    return integer_rank(m.entries.tolist())


class RankIdentityReport(NamedTuple):
    xor_rank: int
    fourier_sparsity: int
    and_rank: int
    mono_sparsity: int

    @property
    def holds(self) -> bool:
        return self.xor_rank == self.fourier_sparsity and self.and_rank == self.mono_sparsity

    def to_json(self) -> dict:
        return {
            "xor": [self.xor_rank, self.fourier_sparsity],
            "and": [self.and_rank, self.mono_sparsity],
            "holds": self.holds,
        }


def verify_rank_identities(t: TruthTable) -> RankIdentityReport:
    return RankIdentityReport(
        exact_rank(build_comm_matrix(t, XOR)),
        fourier_sparsity(t),
        exact_rank(build_comm_matrix(t, AND)),
        mono_sparsity(t),
    )


# --- protocols -------------------------------------------------------------------

@dataclass
class ProtocolTranscript:
    messages: list[tuple[str, int]] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return len(self.messages)

    def to_json(self) -> list[list]:
        return [[who, bit] for who, bit in self.messages]


def simulate_tree_protocol(tree: DecisionTree, composition: str, x: int, y: int) -> tuple[int, ProtocolTranscript]:
    """Run a decision tree for the outer function as a two-party protocol.

    A query of coordinate i costs two bits: Alice sends x_i, Bob sends y_i,
    and both combine them with the inner operation.
    """
    transcript = ProtocolTranscript()
    node = tree
    while not isinstance(node, Leaf):
        shift = node.coordinate - 1
        a = (x >> shift) & 1
        b = (y >> shift) & 1
        transcript.messages.append(("A", a))
        transcript.messages.append(("B", b))
        node = node.one if _inner(composition, a, b) else node.zero
    return node.value, transcript


def tree_protocol_correct(t: TruthTable, composition: str, tree: DecisionTree | None = None) -> tuple[bool, int]:
    """Check the tree protocol on every (x, y); returns (all correct, worst cost)."""
    tree = tree if tree is not None else build_optimal_tree(t)
    worst = 0
    for x in range(t.size):
        for y in range(t.size):
            out, tr = simulate_tree_protocol(tree, composition, x, y)
            if out != t(_inner(composition, x, y)):
                return False, tr.cost
            worst = max(worst, tr.cost)
    return True, worst


def simulate_all_pairs(tree: DecisionTree, composition: str, t: TruthTable) -> tuple[bool, int]:
    """Vectorised ``tree_protocol_correct``: every pair walks the tree at once.

    Each pair follows the branch picked by its own two bits, so this is the
    same protocol run 4^n times in parallel rather than a shortcut through f.
    """
    if composition not in COMPOSITIONS:
        raise ValueError(f"unknown composition {composition!r}")
    x, y = np.divmod(np.arange(t.size * t.size, dtype=np.int64), t.size)
    out = np.empty(x.size, dtype=np.int64)
    cost = np.zeros(x.size, dtype=np.int64)
    stack = [(tree, np.arange(x.size))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if isinstance(node, Leaf):
            out[idx] = node.value
            continue
        cost[idx] += 2
        shift = node.coordinate - 1
        a, b = (x[idx] >> shift) & 1, (y[idx] >> shift) & 1
        bit = (a & b) if composition == AND else (a ^ b)
        stack.append((node.zero, idx[bit == 0]))
        stack.append((node.one, idx[bit == 1]))
    inner = (x & y) if composition == AND else (x ^ y)
    ok = bool(np.array_equal(out, t.values[inner]))
    return ok, int(cost.max(initial=0))


# --- covers ----------------------------------------------------------------------

MINTERM = "minterm"
MAXTERM_CELL = "maxterm-cell"
RECURSIVE = "recursive"


@dataclass(frozen=True)
class Rectangle:
    """Rows agreeing with ``rows`` and columns agreeing with ``cols``."""

    rows: tuple[tuple[int, int], ...]
    cols: tuple[tuple[int, int], ...]
    provenance: str

    def row_mask(self, n: int) -> np.ndarray:
        return _agree_mask(self.rows, n)

    def col_mask(self, n: int) -> np.ndarray:
        return _agree_mask(self.cols, n)

    def to_json(self) -> dict:
        return {
            "rows": {str(c): v for c, v in self.rows},
            "cols": {str(c): v for c, v in self.cols},
            "provenance": self.provenance,
        }


def _agree_mask(fixed: tuple[tuple[int, int], ...], n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    ok = np.ones(idx.size, dtype=bool)
    for c, v in fixed:
        ok &= ((idx >> (c - 1)) & 1) == v
    return ok


@dataclass(frozen=True)
class CoverLevel:
    depth: int
    arity: int
    target: int
    mono: int
    min_terms: int
    size: int
    largest_branch: int
    bottom_cells: int
    constant: bool = False

    def inequality_holds(self) -> bool:
        if self.constant:
            return self.size <= 1
        # size <= (#min terms) * (largest branch cover) + cells of the bottom region
        return self.size <= self.min_terms * self.largest_branch + self.bottom_cells


@dataclass
class Cover:
    n: int
    target: int
    rectangles: list[Rectangle]
    levels: list[CoverLevel] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.rectangles)

    @property
    def depth(self) -> int:
        return max((lv.depth for lv in self.levels), default=0)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "target": self.target,
            "size": self.size,
            "rectangles": [r.to_json() for r in self.rectangles],
        }


def cover_is_valid(m: CommMatrix, cover: Cover) -> bool:
    """Every rectangle is monochromatic in the target and all target entries are covered."""
    n = m.outer.n
    target = m.entries == cover.target
    covered = np.zeros_like(target)
    for rect in cover.rectangles:
        block = np.outer(rect.row_mask(n), rect.col_mask(n))
        if not target[block].all():
            return False
        covered |= block
    return bool((covered >= target).all())


def _cells(zero_coords: tuple[int, ...]):
    """The 3^k ways of forcing x_i ∧ y_i = 0 on each listed coordinate."""
    for choice in itertools.product(((0, 0), (0, 1), (1, 0)), repeat=len(zero_coords)):
        yield (
            tuple((c, xy[0]) for c, xy in zip(zero_coords, choice)),
            tuple((c, xy[1]) for c, xy in zip(zero_coords, choice)),
        )


def _cover_recursive(g: TruthTable, target: int, free: list[int], rows: dict, cols: dict,
                     depth: int, out: list[Rectangle], levels: list[CoverLevel]) -> int:
    # normalise to g(0) = 0 by negating; the entries to cover stay the same
    if g(0):
        g = negate_output(g)
        target ^= 1
    start = len(out)
    if g.is_constant():
        if target == 0:
            tag = RECURSIVE if depth != 1 else MINTERM
            out.append(Rectangle(tuple(sorted(rows.items())), tuple(sorted(cols.items())), tag))
        levels.append(CoverLevel(depth, g.n, target, mono_sparsity(g), 0, len(out) - start, 0, 0, True))
        return len(out) - start

    min_terms = find_terms(g).min_terms
    largest = 0
    for d in min_terms:
        ones = coords(d)
        above = {free[j - 1]: 1 for j in ones}
        sub = restrict(g, Restriction.above(d, g.n))
        sub_free = [c for j, c in enumerate(free, start=1) if j not in ones]
        size = _cover_recursive(sub, target, sub_free, {**rows, **above}, {**cols, **above},
                                depth + 1, out, levels)
        largest = max(largest, size)

    bottom = 0
    if target == 0:
        # points whose whole down-set is 0; cover them by the cells under
        # each maximal such point
        ok = _down_constant(g.values, g.n, 0)
        for p in np.flatnonzero(ok):
            p = int(p)
            if any(ok[p | (1 << i)] for i in range(g.n) if not (p >> i) & 1):
                continue
            zeros = tuple(free[j - 1] for j in zero_set(p, g.n))
            for rx, cy in _cells(zeros):
                out.append(Rectangle(
                    tuple(sorted({**rows, **dict(rx)}.items())),
                    tuple(sorted({**cols, **dict(cy)}.items())),
                    MAXTERM_CELL,
                ))
                bottom += 1

    size = len(out) - start
    levels.append(CoverLevel(depth, g.n, target, mono_sparsity(g), len(min_terms), size, largest, bottom))
    return size


def minterm_cover(t: TruthTable) -> Cover:
    """1-cover of M_{f∘∧} built by descending into min terms.

    Above each min term d the rectangle x_D = y_D = 1 carries the
    subfunction f_d, whose value at its all-0 input is 1; its 1-entries are
    the 0-entries of ¬f_d, covered recursively.  When the target value
    agrees with the subfunction at 0, the points with a constant down-set
    are covered by the 3^k cells below each maximal such point.
    """
    check_cap(t.n, MATRIX_CAP, "minterm cover")
    if t(0) != 0:
        raise PreconditionError("minterm cover needs f(0^n) = 0; negate the output first")
    rects: list[Rectangle] = []
    levels: list[CoverLevel] = []
    _cover_recursive(t, 1, list(range(1, t.n + 1)), {}, {}, 0, rects, levels)
    levels.sort(key=lambda lv: lv.depth)
    return Cover(t.n, 1, rects, levels)


def check_minterm_cover(t: TruthTable, cover: Cover | None = None) -> dict:
    """Validity, per-level counts against mono, recursion depth against alt."""
    cover = cover if cover is not None else minterm_cover(t)
    m = build_comm_matrix(t, AND)
    a = measures.alt(t).value
    return {
        "valid": cover_is_valid(m, cover),
        "minterms_within_mono": all(lv.min_terms <= lv.mono for lv in cover.levels),
        "size_inequality": all(lv.inequality_holds() for lv in cover.levels),
        "depth_within_alt": cover.depth <= a,
        "size": cover.size,
        "depth": cover.depth,
        "alt": a,
    }


# --- max-term decomposition ----------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    max_term: int
    rows: tuple[tuple[int, int], ...]
    cols: tuple[tuple[int, int], ...]
    subfunction: TruthTable


@dataclass
class MaxtermDecomposition:
    outer: TruthTable
    cells: list[Cell]
    max_terms: tuple[int, ...]
    log_rank: float
    binomial_bound: float | None
    notes: list[str] = field(default_factory=list)

    def covers_all_ones(self) -> bool:
        n = self.outer.n
        m = build_comm_matrix(self.outer, AND)
        covered = np.zeros(m.entries.shape, dtype=bool)
        for cell in self.cells:
            covered |= np.outer(_agree_mask(cell.rows, n), _agree_mask(cell.cols, n))
        return bool((covered >= (m.entries == 1)).all())

    def alt_drops(self) -> bool:
        a = measures.alt(self.outer).value
        return all(measures.alt(c.subfunction).value <= a - 1 for c in self.cells)


def maxterm_decomposition(t: TruthTable) -> MaxtermDecomposition:
    """Cells x_i ∧ y_i = 0 on S₀(u) for every max term u, with f_u under u."""
    check_cap(t.n, MATRIX_CAP, "max-term decomposition")
    a = measures.alt(t).value
    if t(0) != 0 or a % 2:
        raise PreconditionError("max-term decomposition needs f(0^n) = 0 and even alt")
    terms = find_terms(t).max_terms
    cells = []
    for u in terms:
        zeros = zero_set(u, t.n)
        sub = restrict(t, Restriction.under(u, t.n))
        for rx, cy in _cells(zeros):
            cells.append(Cell(u, rx, cy, sub))
    r = mono_sparsity(t)
    log_rank = math.log2(r) if r else 0.0
    notes = []
    binom = None
    if terms:
        ell = math.floor(log_rank)
        binom = math.comb(t.n, ell) if ell <= t.n else None
        if binom is None or binom < len(terms):
            notes.append("binomial count of max terms not informative at this size")
        if any(len(zero_set(u, t.n)) > log_rank for u in terms):
            notes.append("some max term has more zeros than log2 rank")
    return MaxtermDecomposition(t, cells, terms, log_rank, binom, notes)


# --- exact cover number ----------------------------------------------------------------

def maximal_rectangles(entries: np.ndarray, b: int) -> list[tuple[int, int]]:
    """All maximal b-monochromatic rectangles as (row mask, column mask)."""
    nrows, ncols = entries.shape
    colsets = []
    for r in range(nrows):
        bits = 0
        for c in np.flatnonzero(entries[r] == b):
            bits |= 1 << int(c)
        colsets.append(bits)
    closed: set[int] = set()
    for cs in colsets:
        closed |= {cs & s for s in closed}
        closed.add(cs)
    closed.discard(0)
    rects = []
    for cols in sorted(closed):
        rows = 0
        for r, cs in enumerate(colsets):
            if cs & cols == cols:
                rows |= 1 << r
        rects.append((rows, cols))
    return rects


def exact_cover_number(m: CommMatrix, b: int) -> int:
    """Minimum number of b-monochromatic rectangles covering all b-entries."""
    if m.dim > 1 << COVER_NUMBER_CAP:
        raise CapExceeded(f"matrix dimension {m.dim} exceeds {1 << COVER_NUMBER_CAP}")
    ncols = m.dim
    rects = maximal_rectangles(m.entries, b)
    cell_sets = []
    for rows, cols in rects:
        mask = 0
        for r in range(m.dim):
            if (rows >> r) & 1:
                mask |= cols << (r * ncols)
        cell_sets.append(mask)
    universe = 0
    for r, c in zip(*np.nonzero(m.entries == b)):
        universe |= 1 << (int(r) * ncols + int(c))
    if not universe:
        return 0

    cells = [e for e in range(m.dim * ncols) if (universe >> e) & 1]
    covering = {e: [k for k, s in enumerate(cell_sets) if (s >> e) & 1] for e in cells}
    reach = {}
    for e in cells:
        acc = 0
        for k in covering[e]:
            acc |= cell_sets[k]
        reach[e] = acc

    def lower_bound(uncovered: int) -> int:
        # cells sharing no rectangle pairwise each need their own rectangle
        picked = 0
        count = 0
        rest = uncovered
        while rest:
            low = rest & -rest
            e = low.bit_length() - 1
            rest ^= low
            if not reach[e] & picked:
                picked |= low
                count += 1
        return count

    # greedy gives the first incumbent
    best = 0
    left = universe
    while left:
        k = max(range(len(cell_sets)), key=lambda k: (cell_sets[k] & left).bit_count())
        left &= ~cell_sets[k]
        best += 1

    def search(uncovered: int, used: int) -> None:
        nonlocal best
        if not uncovered:
            best = min(best, used)
            return
        if used + lower_bound(uncovered) >= best:
            return
        rest = uncovered
        pick, fewest = -1, None
        while rest:
            low = rest & -rest
            e = low.bit_length() - 1
            rest ^= low
            if fewest is None or len(covering[e]) < fewest:
                pick, fewest = e, len(covering[e])
        options = sorted(covering[pick], key=lambda k: -(cell_sets[k] & uncovered).bit_count())
        for k in options:
            search(uncovered & ~cell_sets[k], used + 1)

    search(universe, 0)
    return best


# --- bound report ----------------------------------------------------------------------

def lovasz_bound_report(t: TruthTable) -> dict:
    """Numeric sandwich for both compositions; no protocol is synthesised from covers."""
    check_cap(t.n, LOVASZ_CAP, "bound report")
    dt = measures.dt_depth(t)
    a = measures.alt(t).value
    report = {"outer": format_table(t), "dt": dt, "alt": a, "trivial": t.is_constant()}
    for comp in COMPOSITIONS:
        m = build_comm_matrix(t, comp)
        rank = exact_rank(m)
        c1 = exact_cover_number(m, 1)
        log_rank = math.log2(rank) if rank else 0.0
        log_c1 = math.log2(c1) if c1 else 0.0
        side = {
            "rank": rank,
            "cover_1": c1,
            "log_rank": round(log_rank, 6),
            "lovasz": round(log_c1 * log_rank, 6),
            "tree_protocol_cost": 2 * dt,
            "log_rank_within_protocol": log_rank <= 2 * dt,
        }
        if comp == XOR:
            side["alt_log_rank_bound"] = round(2 * a * log_rank ** 2, 6)
        else:
            if t(0) == 0:
                side["minterm_cover_size"] = minterm_cover(t).size
            else:
                side["minterm_cover_size_of_negation"] = minterm_cover(negate_output(t)).size
        report[comp] = side
    return report

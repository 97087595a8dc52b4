"""Bit-packed truth tables, restrictions and hypercube lattice helpers.

Points of {0,1}^n are integers 0 <= x < 2**n with coordinate x_{j+1}
stored in bit j (little-endian).  A table keeps f(x) in bit x of a
Python int, so small tables are cheap to hash, compare and copy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping

import numpy as np

MAX_ARITY = 24

# tables up to this arity use pure int bit twiddling; larger go through numpy
_INT_PATH_MAX = 12


class BoolAltError(Exception):
    """Base class for errors raised by this package."""


class ParseError(BoolAltError, ValueError):
    pass


class CapExceeded(BoolAltError, ValueError):
    pass


class PreconditionError(BoolAltError, ValueError):
    pass


def check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapExceeded(f"{what}: arity {n} exceeds cap {cap}")


def _bits_to_array(bits: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = bits.to_bytes(max(1, size // 8), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].copy()


def _array_to_bits(values: np.ndarray) -> int:
    packed = np.packbits(np.asarray(values, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _fix_coordinate(bits: int, n: int, i: int, b: int) -> int:
    """Bits of the table with 0-based coordinate ``i`` fixed to ``b``."""
    half = 1 << i
    if n > _INT_PATH_MAX:
        arr = _bits_to_array(bits, n).reshape(-1, 2, half)[:, b, :].ravel()
        return _array_to_bits(arr)
    block = half << 1
    mask = (1 << half) - 1
    shift = half if b else 0
    out = 0
    for j in range(1 << (n - i - 1)):
        out |= ((bits >> (j * block + shift)) & mask) << (j * half)
    return out


@dataclass(frozen=True)
class TruthTable:
    """Total Boolean function on n inputs, packed into an int."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_ARITY:
            raise CapExceeded(f"arity {self.n} outside 0..{MAX_ARITY}")
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValueError(f"bit vector does not fit 2^{self.n} entries")

    @classmethod
    def from_values(cls, values: Iterable[int]) -> TruthTable:
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values)
        size = arr.size
        n = size.bit_length() - 1
        if size == 0 or (1 << n) != size:
            raise ValueError(f"table length {size} is not a power of two")
        return cls(n, _array_to_bits(arr != 0))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], int]) -> TruthTable:
        bits = 0
        for x in range(1 << n):
            if fn(x):
                bits |= 1 << x
        return cls(n, bits)

    @classmethod
    def constant(cls, n: int, value: int) -> TruthTable:
        return cls(n, full_mask(n) if value else 0)

    @property
    def size(self) -> int:
        return 1 << self.n

    @cached_property
    def values(self) -> np.ndarray:
        """The table as a read-only uint8 array indexed by point."""
        arr = _bits_to_array(self.bits, self.n)
        arr.setflags(write=False)
        return arr

    def __call__(self, x: int) -> int:
        return (self.bits >> x) & 1

    def popcount(self) -> int:
        return self.bits.bit_count()

    def is_constant(self) -> bool:
        return self.bits == 0 or self.bits == full_mask(self.n)

    def __str__(self) -> str:
        return format_table(self)


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


def evaluate(t: TruthTable, x: int) -> int:
    if not 0 <= x < t.size:
        raise IndexError(f"point {x} out of range for arity {t.n}")
    return t(x)


# --- lattice ---------------------------------------------------------------

def precedes(x: int, y: int) -> bool:
    """x ⪯ y in the coordinate-wise order."""
    return (x | y) == y


def flip(x: int, i: int) -> int:
    """Flip 1-based coordinate ``i``."""
    return x ^ (1 << (i - 1))


def coords(mask: int) -> tuple[int, ...]:
    """1-based coordinates set in ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(cs: Iterable[int]) -> int:
    m = 0
    for c in cs:
        m |= 1 << (c - 1)
    return m


def point_str(x: int, n: int) -> str:
    """Binary string of a point, most significant coordinate first."""
    return format(x, f"0{n}b") if n else ""


# --- restrictions -----------------------------------------------------------

@dataclass(frozen=True)
class Restriction:
    """Partial assignment; coordinates not mentioned stay free.

    ``fixed`` holds sorted ``(coordinate, bit)`` pairs with 1-based
    coordinates.
    """

    fixed: tuple[tuple[int, int], ...] = ()

    def __init__(self, assignments: Mapping[int, int | None] | Iterable[tuple[int, int]] = ()):
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        pairs = {}
        for c, v in items:
            if v is None or v == "free":
                continue
            if v not in (0, 1):
                raise ValueError(f"coordinate {c}: value {v!r} is not 0, 1 or free")
            if c < 1:
                raise ValueError(f"coordinate {c} out of range")
            pairs[int(c)] = int(v)
        object.__setattr__(self, "fixed", tuple(sorted(pairs.items())))

    @classmethod
    def above(cls, d: int, n: int) -> Restriction:
        """Fix x_i = 1 wherever d_i = 1 (the subcube {x : x ⪰ d})."""
        return cls({i: 1 for i in coords(d) if i <= n})

    @classmethod
    def under(cls, u: int, n: int) -> Restriction:
        """Fix x_i = 0 wherever u_i = 0 (the subcube {x : x ⪯ u})."""
        return cls({i: 0 for i in range(1, n + 1) if not (u >> (i - 1)) & 1})

    def __len__(self) -> int:
        return len(self.fixed)

    def as_dict(self) -> dict[int, int]:
        return dict(self.fixed)

    def free_coordinates(self, n: int) -> list[int]:
        fixed = {c for c, _ in self.fixed}
        return [i for i in range(1, n + 1) if i not in fixed]

    def compose(self, other: Restriction, n: int) -> Restriction:
        """Merged assignment equal to applying ``self`` then ``other``.

        ``other`` addresses the coordinates of the restricted table, which
        are the free coordinates of ``self`` renumbered from 1.
        """
        free = self.free_coordinates(n)
        merged = self.as_dict()
        for c, v in other.fixed:
            if c > len(free):
                raise ValueError(f"coordinate {c} out of range for the restricted table")
            merged[free[c - 1]] = v
        return Restriction(merged)

    def to_json(self) -> dict[str, int]:
        return {str(c): v for c, v in self.fixed}


def restrict(t: TruthTable, r: Restriction | Mapping[int, int]) -> TruthTable:
    if not isinstance(r, Restriction):
        r = Restriction(r)
    bits, n = t.bits, t.n
    for c, v in reversed(r.fixed):
        if c > t.n:
            raise IndexError(f"coordinate {c} out of range for arity {t.n}")
        bits = _fix_coordinate(bits, n, c - 1, v)
        n -= 1
    return TruthTable(n, bits)


def fix(t: TruthTable, i: int, b: int) -> TruthTable:
    """Single-coordinate restriction, 1-based ``i``."""
    if not 1 <= i <= t.n:
        raise IndexError(f"coordinate {i} out of range for arity {t.n}")
    return TruthTable(t.n - 1, _fix_coordinate(t.bits, t.n, i - 1, b))


def negate_output(t: TruthTable) -> TruthTable:
    return TruthTable(t.n, t.bits ^ full_mask(t.n))


def flip_all_inputs(t: TruthTable) -> TruthTable:
    """g(x) = f(x̄): reverses the table."""
    if t.n <= _INT_PATH_MAX:
        return TruthTable(t.n, int(format(t.bits, f"0{t.size}b")[::-1], 2))
    return TruthTable(t.n, _array_to_bits(t.values[::-1]))


def is_monotone(t: TruthTable) -> bool:
    for i in range(t.n):
        lo = _fix_coordinate(t.bits, t.n, i, 0)
        hi = _fix_coordinate(t.bits, t.n, i, 1)
        if lo & ~hi:
            return False
    return True


# --- text format -------------------------------------------------------------

_TABLE_RE = re.compile(r"^\s*(\d+)\s*:\s*([0-9A-Fa-f]+)\s*$")


def hex_digits(n: int) -> int:
    return max(1, -(-(1 << n) // 4))


def format_table(t: TruthTable) -> str:
    return f"{t.n}:{t.bits:0{hex_digits(t.n)}X}"


def parse(text: str) -> TruthTable:
    """Read ``<n>:<hex>`` or a ``family:name(k=v,...)[#seed]`` spec."""
    text = text.strip()
    if text.startswith("family:"):
        from boolalt.families import parse_family_spec, generate

        return generate(parse_family_spec(text))
    m = _TABLE_RE.match(text)
    if not m:
        raise ParseError(f"not a truth table spec: {text!r}")
    n = int(m.group(1))
    digits = m.group(2)
    if n > MAX_ARITY:
        raise CapExceeded(f"arity {n} exceeds cap {MAX_ARITY}")
    if len(digits) != hex_digits(n):
        raise ParseError(f"arity {n} needs {hex_digits(n)} hex digits, got {len(digits)}")
    bits = int(digits, 16)
    if bits >> (1 << n):
        raise ParseError(f"hex value has bits beyond the 2^{n} table entries")
    return TruthTable(n, bits)

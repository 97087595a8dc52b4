"""Named generators of outer functions.

Seeded families draw from numpy's PCG64 generator (``PRNG`` below); the
same (name, params, seed) always gives the same table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from boolalt.core import MAX_ARITY, ParseError, TruthTable, _array_to_bits, full_mask

PRNG = "numpy.random.PCG64"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        text = f"family:{self.name}({args})"
        return f"{text}#{self.seed}" if self.seed else text


def _popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    pc = np.zeros(idx.size, dtype=np.int64)
    for i in range(n):
        pc += (idx >> i) & 1
    return pc


def _check_arity(n: int) -> None:
    if not 0 <= n <= MAX_ARITY:
        raise ValueError(f"arity {n} outside 0..{MAX_ARITY}")


def or_(n: int) -> TruthTable:
    _check_arity(n)
    return TruthTable(n, full_mask(n) & ~1)


def and_(n: int) -> TruthTable:
    _check_arity(n)
    return TruthTable(n, 1 << ((1 << n) - 1))


def parity(n: int) -> TruthTable:
    _check_arity(n)
    return TruthTable(n, _array_to_bits(_popcounts(n) & 1))


def majority(n: int) -> TruthTable:
    _check_arity(n)
    if n % 2 == 0:
        raise ValueError("majority needs an odd number of inputs")
    return TruthTable(n, _array_to_bits(_popcounts(n) > n // 2))


def symmetric_profile(profile: str) -> TruthTable:
    """f(x) = profile[|x|]; the profile has n + 1 characters."""
    if not profile or set(profile) - {"0", "1"}:
        raise ValueError(f"profile must be a non-empty 0/1 string, got {profile!r}")
    n = len(profile) - 1
    _check_arity(n)
    levels = np.array([int(c) for c in profile])
    return TruthTable(n, _array_to_bits(levels[_popcounts(n)]))


def tribes(w: int, s: int) -> TruthTable:
    """OR of ``s`` ANDs over consecutive blocks of ``w`` variables."""
    n = w * s
    _check_arity(n)
    if w < 1 or s < 1:
        raise ValueError("tribes needs w >= 1 and s >= 1")
    block = (1 << w) - 1
    idx = np.arange(1 << n)
    out = np.zeros(idx.size, dtype=bool)
    for j in range(s):
        out |= ((idx >> (j * w)) & block) == block
    return TruthTable(n, _array_to_bits(out))


def address(k: int) -> TruthTable:
    """Multiplexer: x_1..x_k select which of the next 2^k inputs is output."""
    n = k + (1 << k)
    _check_arity(n)
    idx = np.arange(1 << n)
    sel = idx & ((1 << k) - 1)
    return TruthTable(n, _array_to_bits((idx >> (k + sel)) & 1))


def and_or_tree(depth: int, fanin: int) -> TruthTable:
    """Read-once tree of alternating gates, AND at the root."""
    if depth < 0 or fanin < 1:
        raise ValueError("and_or_tree needs depth >= 0 and fanin >= 1")
    n = fanin ** depth
    _check_arity(n)
    idx = np.arange(1 << n)
    layer = [((idx >> i) & 1).astype(bool) for i in range(n)]
    gates_and = depth % 2 == 1
    for _ in range(depth):
        grouped = [layer[j:j + fanin] for j in range(0, len(layer), fanin)]
        if gates_and:
            layer = [np.logical_and.reduce(g) for g in grouped]
        else:
            layer = [np.logical_or.reduce(g) for g in grouped]
        gates_and = not gates_and
    return TruthTable(n, _array_to_bits(layer[0]))


def random_table(n: int, seed: int) -> TruthTable:
    _check_arity(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    return TruthTable(n, _array_to_bits(rng.integers(0, 2, size=1 << n)))


def upward_closure(t: TruthTable) -> TruthTable:
    v = t.values.astype(bool).copy()
    for i in range(t.n):
        view = v.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return TruthTable(t.n, _array_to_bits(v))


def random_monotone(n: int, seed: int) -> TruthTable:
    """Random table, then upward closure.

    Plain upward closure of a uniform table is almost always constant 1,
    so the seed points are drawn sparsely: each point is a generator with
    probability 2^-(n/2) (still seeded and deterministic).
    """
    _check_arity(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    p = 2.0 ** (-n / 2) if n else 0.5
    seeds = rng.random(1 << n) < p
    return upward_closure(TruthTable(n, _array_to_bits(seeds)))


def with_alt(n: int, a: int, seed: int = 0) -> TruthTable:
    """Symmetric function whose level profile alternates exactly ``a`` times.

    The profile starts at 0, so a = 1 gives a monotone threshold and a = n
    gives parity.  The seed picks which level boundaries alternate.
    """
    from boolalt.measures import alt

    if not 0 <= a <= n:
        raise ValueError(f"alternating number {a} infeasible for arity {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    gaps = sorted(int(g) for g in rng.choice(n, size=a, replace=False)) if a else []
    profile = []
    value = 0
    for level in range(n + 1):
        if level and level - 1 in gaps:
            value ^= 1
        profile.append(str(value))
    t = symmetric_profile("".join(profile))
    got = alt(t).value
    if got != a:
        raise AssertionError(f"with_alt produced alt {got}, wanted {a}")
    return t


def profile_alternations(profile: str) -> int:
    return sum(1 for a, b in zip(profile, profile[1:]) if a != b)


_REGISTRY: dict[str, tuple[Callable[..., TruthTable], tuple[str, ...], bool]] = {
    # name: (builder, required params, takes seed)
    "or": (or_, ("n",), False),
    "and": (and_, ("n",), False),
    "parity": (parity, ("n",), False),
    "majority": (majority, ("n",), False),
    "tribes": (tribes, ("w", "s"), False),
    "address": (address, ("k",), False),
    "and_or_tree": (and_or_tree, ("depth", "fanin"), False),
    "random": (random_table, ("n",), True),
    "random_monotone": (random_monotone, ("n",), True),
    "symmetric_profile": (symmetric_profile, ("profile",), False),
    "with_alt": (with_alt, ("n", "a"), True),
}

FAMILY_NAMES = tuple(_REGISTRY)


def generate(spec: FamilySpec) -> TruthTable:
    if spec.name not in _REGISTRY:
        raise ParseError(f"unknown family {spec.name!r}")
    builder, required, seeded = _REGISTRY[spec.name]
    missing = [p for p in required if p not in spec.params]
    extra = [p for p in spec.params if p not in required]
    if missing or extra:
        raise ParseError(f"family {spec.name} takes parameters {required}, got {tuple(spec.params)}")
    kwargs = {p: spec.params[p] for p in required}
    if seeded:
        kwargs["seed"] = spec.seed
    return builder(**kwargs)


_SPEC_RE = re.compile(r"^(?:family:)?([a-z_]+)\((.*)\)(?:#(\d+))?$")


def parse_family_spec(text: str) -> FamilySpec:
    """``family:name(k=v,...)[#seed]``; ``profile`` values stay strings."""
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a family spec: {text!r}")
    name, args, seed = m.group(1), m.group(2).strip(), m.group(3)
    params: dict = {}
    if args:
        for part in args.split(","):
            if "=" not in part:
                raise ParseError(f"family argument {part!r} is not key=value")
            key, value = (s.strip() for s in part.split("=", 1))
            if key == "profile":
                params[key] = value
            else:
                try:
                    params[key] = int(value)
                except ValueError:
                    raise ParseError(f"family argument {key}={value!r} is not an integer") from None
    return FamilySpec(name, params, int(seed) if seed else 0)

"""Max/min terms and the constructive procedures built on them.

* ``certificate_at_extreme`` peels off max terms to build a certificate
  for 0^n (or 1^n by complementing the inputs).
* ``build_dt_via_min_certificates`` queries a minimum certificate of the
  current subfunction, then recurses on every branch that is not fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from boolalt.core import (
    PreconditionError,
    Restriction,
    TruthTable,
    check_cap,
    coords,
    fix,
    flip_all_inputs,
    restrict,
)
from boolalt import measures
from boolalt.spectra import deg2


@dataclass(frozen=True)
class TermSet:
    max_terms: tuple[int, ...]
    min_terms: tuple[int, ...]


def _up_constant(v: np.ndarray, n: int, value: int) -> np.ndarray:
    """ok[x]: every y ⪰ x has f(y) == value."""
    ok = v == value
    for i in range(n):
        view = ok.reshape(-1, 2, 1 << i)
        view[:, 0, :] &= view[:, 1, :]
    return ok


def _down_constant(v: np.ndarray, n: int, value: int) -> np.ndarray:
    ok = v == value
    for i in range(n):
        view = ok.reshape(-1, 2, 1 << i)
        view[:, 1, :] &= view[:, 0, :]
    return ok


def find_terms(t: TruthTable) -> TermSet:
    n, v = t.n, t.values
    top, bottom = t.size - 1, 0
    up = _up_constant(v, n, t(top))
    strictly_above = np.ones(t.size, dtype=bool)
    down = _down_constant(v, n, t(bottom))
    strictly_below = np.ones(t.size, dtype=bool)
    for i in range(n):
        sa = strictly_above.reshape(-1, 2, 1 << i)
        sa[:, 0, :] &= up.reshape(-1, 2, 1 << i)[:, 1, :]
        sb = strictly_below.reshape(-1, 2, 1 << i)
        sb[:, 1, :] &= down.reshape(-1, 2, 1 << i)[:, 0, :]
    is_max = strictly_above & (v != t(top))
    is_min = strictly_below & (v != t(bottom))
    is_max[top] = False
    is_min[bottom] = False
    return TermSet(
        tuple(int(x) for x in np.flatnonzero(is_max)),
        tuple(int(x) for x in np.flatnonzero(is_min)),
    )


def zero_set(u: int, n: int) -> tuple[int, ...]:
    """S₀(u): 1-based coordinates where u is 0."""
    return tuple(i for i in range(1, n + 1) if not (u >> (i - 1)) & 1)


def max_term_choice(t: TruthTable) -> int:
    """Smallest max term (integer order of the point encoding)."""
    if t.is_constant():
        raise PreconditionError("constant function has no max term")
    terms = find_terms(t).max_terms
    u = terms[0]
    k = len(zero_set(u, t.n))
    s_u = measures.sensitivity_at(t, u)
    if not k <= s_u:
        raise AssertionError(f"|S0(u)| = {k} exceeds s(f, u) = {s_u}")
    above = restrict(t, Restriction.above(u, t.n))
    if deg2(above) != k:
        raise AssertionError(f"deg2 above max term {u} is {deg2(above)}, expected {k}")
    return u


@dataclass(frozen=True)
class ExtremeCertificate:
    end: str
    coordinates: tuple[int, ...]
    # (max term in the coordinates of the subfunction it was picked from,
    #  the original coordinates of its zero set)
    steps: tuple[tuple[int, tuple[int, ...]], ...]

    def __len__(self) -> int:
        return len(self.coordinates)

    def to_json(self) -> dict:
        return {
            "end": self.end,
            "coordinates": list(self.coordinates),
            "steps": [{"max_term": u, "zero_set": list(s)} for u, s in self.steps],
        }


def certificate_at_extreme(t: TruthTable, end: str = "zero", cap: int = measures.CERTIFICATE_CAP,
                           check: bool = True) -> ExtremeCertificate:
    """Certificate for 0^n (``end="zero"``) or 1^n built from max terms.

    Each round picks a max term u of the current subfunction, adds its
    zero set to the certificate and fixes those coordinates to 0.  The
    1^n side runs the same loop on g(x) = f(x̄).
    """
    check_cap(t.n, cap, "extreme certificate")
    if end not in ("zero", "one"):
        raise ValueError(f"end must be 'zero' or 'one', got {end!r}")
    g = flip_all_inputs(t) if end == "one" else t
    free = list(range(1, t.n + 1))
    chosen: list[int] = []
    steps = []
    while not g.is_constant():
        u = max_term_choice(g)
        zeros = zero_set(u, g.n)
        picked = tuple(free[j - 1] for j in zeros)
        steps.append((u, picked))
        chosen.extend(picked)
        g = restrict(g, {j: 0 for j in zeros})
        free = [c for c in free if c not in picked]
    cert = ExtremeCertificate(end, tuple(sorted(chosen)), tuple(steps))
    if check:
        verify_extreme_certificate(t, cert)
    return cert


def verify_extreme_certificate(t: TruthTable, cert: ExtremeCertificate) -> None:
    bit = 0 if cert.end == "zero" else 1
    sub = restrict(t, {c: bit for c in cert.coordinates})
    if not sub.is_constant():
        raise AssertionError(f"coordinates {cert.coordinates} do not certify the {cert.end} end")
    a = measures.alt(t).value
    s = measures.sensitivity(t).value
    d = deg2(t)
    if len(cert) > a * min(s, d):
        raise AssertionError(f"certificate of size {len(cert)} exceeds alt*min(s, deg2) = {a * min(s, d)}")


# --- decision trees ------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    value: int

    def evaluate(self, x: int) -> int:
        return self.value

    def depth(self) -> int:
        return 0

    def path(self, x: int) -> list[int]:
        return []

    def to_json(self) -> dict:
        return {"leaf": self.value}


@dataclass(frozen=True)
class Node:
    coordinate: int
    zero: "DecisionTree"
    one: "DecisionTree"

    def evaluate(self, x: int) -> int:
        node: DecisionTree = self
        while isinstance(node, Node):
            node = node.one if (x >> (node.coordinate - 1)) & 1 else node.zero
        return node.value

    def depth(self) -> int:
        return 1 + max(self.zero.depth(), self.one.depth())

    def path(self, x: int) -> list[int]:
        """Coordinates queried on input x, in order."""
        out = []
        node: DecisionTree = self
        while isinstance(node, Node):
            out.append(node.coordinate)
            node = node.one if (x >> (node.coordinate - 1)) & 1 else node.zero
        return out

    def to_json(self) -> dict:
        return {"query": self.coordinate, "0": self.zero.to_json(), "1": self.one.to_json()}


DecisionTree = Union[Leaf, Node]


def tree_from_json(data: dict) -> DecisionTree:
    if "leaf" in data:
        return Leaf(int(data["leaf"]))
    return Node(int(data["query"]), tree_from_json(data["0"]), tree_from_json(data["1"]))


def tree_computes(tree: DecisionTree, t: TruthTable) -> bool:
    """Correct on every input and never repeats a coordinate on a path."""

    def walk(node: DecisionTree, seen: frozenset[int]) -> bool:
        if isinstance(node, Leaf):
            return True
        if node.coordinate in seen or not 1 <= node.coordinate <= t.n:
            return False
        seen = seen | {node.coordinate}
        return walk(node.zero, seen) and walk(node.one, seen)

    if not walk(tree, frozenset()):
        return False
    return all(tree.evaluate(x) == t(x) for x in range(t.size))


def build_optimal_tree(t: TruthTable, cap: int = measures.DT_CAP) -> DecisionTree:
    """A tree of depth exactly dt(t), first optimal coordinate at each node."""
    check_cap(t.n, cap, "decision tree")

    def go(sub: TruthTable, free: list[int]) -> DecisionTree:
        if sub.is_constant():
            return Leaf(sub(0))
        d = measures.dt_depth(sub, cap)
        for i in range(1, sub.n + 1):
            lo, hi = fix(sub, i, 0), fix(sub, i, 1)
            if 1 + max(measures.dt_depth(lo, cap), measures.dt_depth(hi, cap)) == d:
                rest = free[: i - 1] + free[i:]
                return Node(free[i - 1], go(lo, rest), go(hi, rest))
        raise AssertionError("no coordinate attains the optimal depth")

    return go(t, list(range(1, t.n + 1)))


def build_dt_via_min_certificates(t: TruthTable, cap: int = measures.DT_CAP) -> DecisionTree:
    check_cap(t.n, cap, "certificate tree")

    def build(r: Restriction) -> DecisionTree:
        sub = restrict(t, r)
        if sub.is_constant():
            return Leaf(sub(0))
        free = r.free_coordinates(t.n)
        w = measures.cmin(sub)
        cert = [free[c - 1] for c in w.coordinates]
        at_z = {free[c - 1]: (w.point >> (c - 1)) & 1 for c in w.coordinates}
        base = r.as_dict()

        def query(k: int, assign: dict[int, int]) -> DecisionTree:
            if k == len(cert):
                nxt = Restriction({**base, **assign})
                if assign == at_z:
                    fixed = restrict(t, nxt)
                    if not fixed.is_constant():
                        raise AssertionError("minimum certificate does not fix the subfunction")
                    return Leaf(fixed(0))
                return build(nxt)
            c = cert[k]
            return Node(c, query(k + 1, {**assign, c: 0}), query(k + 1, {**assign, c: 1}))

        return query(0, {})

    return build(Restriction())

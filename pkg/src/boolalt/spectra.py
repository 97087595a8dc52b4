"""Exact polynomial representations of a truth table.

All transforms are in-place butterflies over int64 arrays indexed by
subset masks (same encoding as points).  Fourier coefficients are kept
scaled by 2**n so they stay integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from boolalt.core import TruthTable, check_cap, MAX_ARITY

MOBIUS = "mobius"
FOURIER = "fourier_scaled"
ANF = "anf"


@dataclass(frozen=True, eq=False)
class Spectrum:
    kind: str
    n: int
    coeffs: np.ndarray

    def sparsity(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def support(self) -> list[int]:
        return [int(s) for s in np.flatnonzero(self.coeffs)]

    def __getitem__(self, subset: int) -> int:
        return int(self.coeffs[subset])

    def degree(self) -> int:
        supp = np.flatnonzero(self.coeffs)
        if supp.size == 0:
            return 0
        return int(max(int(s).bit_count() for s in supp))

    def reconstruct(self) -> np.ndarray:
        """Values of the represented function at every point."""
        a = self.coeffs.copy()
        if self.kind == MOBIUS:
            _zeta_up(a)
        elif self.kind == ANF:
            _xor_up(a)
        elif self.kind == FOURIER:
            _walsh(a)
            a //= 1 << self.n
        else:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        return a

    def to_json(self) -> dict[str, int]:
        return {str(s): int(self.coeffs[s]) for s in np.flatnonzero(self.coeffs)}


def _butterflies(a: np.ndarray):
    n = a.size.bit_length() - 1
    for i in range(n):
        half = 1 << i
        view = a.reshape(-1, 2, half)
        yield view[:, 0, :], view[:, 1, :]


def _zeta_up(a: np.ndarray) -> None:
    # a[S] <- sum over T ⊆ S of a[T]
    for lo, hi in _butterflies(a):
        hi += lo


def _mobius_down(a: np.ndarray) -> None:
    for lo, hi in _butterflies(a):
        hi -= lo


def _xor_up(a: np.ndarray) -> None:
    for lo, hi in _butterflies(a):
        hi ^= lo


def _walsh(a: np.ndarray) -> None:
    for lo, hi in _butterflies(a):
        s = lo + hi
        hi[...] = lo - hi
        lo[...] = s


def _as_int64(t: TruthTable) -> np.ndarray:
    check_cap(t.n, MAX_ARITY, "spectra")
    return t.values.astype(np.int64)


def mobius_transform(t: TruthTable) -> Spectrum:
    """Coefficients α(S) of f(x) = Σ_S α(S) Π_{i∈S} x_i over {0,1}."""
    a = _as_int64(t)
    _mobius_down(a)
    return Spectrum(MOBIUS, t.n, a)


def fourier_transform(t: TruthTable) -> Spectrum:
    """2^n · f̂(S), with input bit b read as (-1)^b and f kept 0/1-valued."""
    a = _as_int64(t)
    _walsh(a)
    return Spectrum(FOURIER, t.n, a)


def anf(t: TruthTable) -> Spectrum:
    a = _as_int64(t)
    _xor_up(a)
    return Spectrum(ANF, t.n, a)


def mono_sparsity(t: TruthTable) -> int:
    return mobius_transform(t).sparsity()


def fourier_sparsity(t: TruthTable) -> int:
    return fourier_transform(t).sparsity()


def deg2(t: TruthTable) -> int:
    return anf(t).degree()

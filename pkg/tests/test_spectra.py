import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from boolalt import families, spectra
from boolalt.core import TruthTable, flip_all_inputs

MAJ3 = families.majority(3)


def test_mobius_examples():
    assert spectra.mono_sparsity(TruthTable.constant(3, 0)) == 0
    m = spectra.mobius_transform(MAJ3)
    assert m.to_json() == {"3": 1, "5": 1, "6": 1, "7": -2}


def test_fourier_examples():
    assert spectra.fourier_sparsity(families.parity(2)) == 2
    assert spectra.fourier_sparsity(TruthTable.constant(3, 1)) == 1
    f = spectra.fourier_transform(MAJ3)
    assert spectra.fourier_sparsity(MAJ3) == 5
    assert f.support() == [0, 1, 2, 4, 7]


def test_degree_examples():
    for n in range(1, 6):
        assert spectra.deg2(families.parity(n)) == 1
        assert spectra.deg2(families.and_(n)) == n
    assert spectra.deg2(MAJ3) == 2
    assert spectra.anf(MAJ3).support() == [3, 5, 6]


def test_named_mono_or():
    for n in range(1, 5):
        assert spectra.mono_sparsity(families.or_(n)) == 2 ** n - 1


@pytest.mark.parametrize("n", range(4))
def test_transforms_against_definitions(n):
    for bits in range(1 << (1 << n)):
        t = TruthTable(n, bits)
        f = oracles.table_values(n, bits)
        assert spectra.mobius_transform(t).coeffs.tolist() == oracles.mobius(f, n)
        assert spectra.fourier_transform(t).coeffs.tolist() == oracles.fourier_scaled(f, n)
        assert spectra.anf(t).coeffs.tolist() == oracles.anf(f, n)


@given(st.integers(0, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_reconstruction_is_exact(nb):
    t = TruthTable(*nb)
    for spec in (spectra.mobius_transform(t), spectra.fourier_transform(t), spectra.anf(t)):
        assert spec.reconstruct().tolist() == t.values.tolist()


@given(st.integers(0, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1))))
def test_fourier_sparsity_invariant_under_input_flip(nb):
    t = TruthTable(*nb)
    a = spectra.fourier_transform(t).coeffs
    b = spectra.fourier_transform(flip_all_inputs(t)).coeffs
    assert np.array_equal(np.abs(a), np.abs(b))


@pytest.mark.parametrize("n", range(5))
def test_odd_support_iff_full_degree(n):
    for bits in range(1 << (1 << n)):
        t = TruthTable(n, bits)
        full = spectra.anf(t)[t.size - 1] == 1
        assert full == (t.popcount() % 2 == 1)
        if bits:
            assert (spectra.deg2(t) == n) == full


def test_large_table_uses_int64_safely():
    t = families.random_table(16, 1)
    f = spectra.fourier_transform(t)
    assert f.coeffs[0] == t.popcount()
    assert spectra.mobius_transform(t).reconstruct().tolist() == t.values.tolist()

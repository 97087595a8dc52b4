import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolalt.core import (
    CapExceeded,
    ParseError,
    Restriction,
    TruthTable,
    evaluate,
    fix,
    flip_all_inputs,
    format_table,
    is_monotone,
    negate_output,
    parse,
    precedes,
    restrict,
)

MAJ3 = TruthTable.from_function(3, lambda x: bin(x).count("1") >= 2)
XOR2 = TruthTable.from_function(2, lambda x: bin(x).count("1") % 2)
OR2 = TruthTable.from_function(2, lambda x: x != 0)


@st.composite
def tables(draw, max_n=5):
    n = draw(st.integers(0, max_n))
    return TruthTable(n, draw(st.integers(0, (1 << (1 << n)) - 1)))


def test_parse_examples():
    assert parse("3:E8") == MAJ3
    assert parse("0:1") == TruthTable.constant(0, 1)
    assert parse("2:6") == XOR2
    assert parse(" 2:e ") == OR2


@pytest.mark.parametrize("text", ["3:E", "3:1E8", "2:16", "x:1", "2:G", "", "2:"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse(text)


def test_format_is_uppercase_and_padded():
    assert format_table(TruthTable(3, 0x0A)) == "3:0A"
    assert format_table(TruthTable(1, 2)) == "1:2"
    assert format_table(TruthTable(0, 0)) == "0:0"


def test_arity_cap():
    with pytest.raises(CapExceeded):
        TruthTable(25, 0)


def test_evaluate():
    assert evaluate(MAJ3, 0b011) == 1
    assert evaluate(MAJ3, 0b000) == 0
    assert evaluate(XOR2, 0b11) == 0
    with pytest.raises(IndexError):
        evaluate(XOR2, 4)


def test_restrict_examples():
    assert restrict(MAJ3, {3: 1}) == OR2
    assert restrict(MAJ3, Restriction()) == MAJ3
    assert restrict(XOR2, {2: 1}) == TruthTable(1, 0b01)
    with pytest.raises(IndexError):
        restrict(XOR2, {3: 0})


def test_restriction_accepts_free_markers():
    r = Restriction({1: 0, 2: None, 3: "free", 4: 1})
    assert r.as_dict() == {1: 0, 4: 1}
    assert r.free_coordinates(5) == [2, 3, 5]
    with pytest.raises(ValueError):
        Restriction({1: 2})


def test_negate_and_flip():
    assert negate_output(TruthTable.constant(2, 0)) == TruthTable.constant(2, 1)
    assert flip_all_inputs(OR2) == TruthTable(2, 0b0111)
    assert flip_all_inputs(XOR2) == XOR2


def test_is_monotone_examples():
    assert is_monotone(MAJ3)
    assert not is_monotone(XOR2)
    assert is_monotone(TruthTable.constant(3, 0))


@pytest.mark.parametrize("n", range(5))
def test_is_monotone_matches_all_comparable_pairs(n):
    pairs = [(x, y) for x in range(1 << n) for y in range(1 << n) if x != y and precedes(x, y)]
    for bits in range(1 << (1 << n)):
        t = TruthTable(n, bits)
        brute = all(t(x) <= t(y) for x, y in pairs)
        assert is_monotone(t) == brute


@given(tables(8))
def test_format_round_trip(t):
    assert parse(format_table(t)) == t


@given(tables(6))
def test_involutions(t):
    assert flip_all_inputs(flip_all_inputs(t)) == t
    assert negate_output(negate_output(t)) == t


@given(tables(6), st.data())
def test_restrict_composes(t, data):
    first = {c: data.draw(st.sampled_from([0, 1, None])) for c in range(1, t.n + 1)}
    r1 = Restriction(first)
    sub = restrict(t, r1)
    second = {c: data.draw(st.sampled_from([0, 1, None])) for c in range(1, sub.n + 1)}
    r2 = Restriction(second)
    assert restrict(sub, r2) == restrict(t, r1.compose(r2, t.n))


@settings(max_examples=50)
@given(tables(5), st.data())
def test_restrict_matches_pointwise_definition(t, data):
    if t.n == 0:
        return
    fixed = {c: data.draw(st.sampled_from([0, 1])) for c in range(1, t.n + 1) if data.draw(st.booleans())}
    sub = restrict(t, fixed)
    free = [c for c in range(1, t.n + 1) if c not in fixed]
    for y in range(sub.size):
        x = sum(v << (c - 1) for c, v in fixed.items())
        x |= sum(((y >> j) & 1) << (c - 1) for j, c in enumerate(free))
        assert sub(y) == t(x)


def test_fix_agrees_with_restrict():
    for bits, i, b in itertools.product(range(256), range(1, 4), (0, 1)):
        t = TruthTable(3, bits)
        assert fix(t, i, b) == restrict(t, {i: b})


def test_large_arity_paths_agree():
    # above n = 12 the numpy paths take over
    import numpy as np

    rng = np.random.default_rng(7)
    t = TruthTable.from_values(rng.integers(0, 2, size=1 << 13))
    for i in (1, 7, 13):
        sub = fix(t, i, 1)
        idx = [x for x in range(t.size) if (x >> (i - 1)) & 1]
        assert list(sub.values) == [t(x) for x in idx]
    assert flip_all_inputs(t).values.tolist() == t.values[::-1].tolist()

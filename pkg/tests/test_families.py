import itertools

import pytest

from boolalt import families, measures
from boolalt.core import ParseError, format_table, is_monotone, parse
from boolalt.families import FamilySpec, generate, parse_family_spec


def test_generate_examples():
    assert format_table(generate(FamilySpec("or", {"n": 3}))) == "3:FE"
    assert format_table(generate(FamilySpec("parity", {"n": 2}))) == "2:6"
    t = generate(FamilySpec("symmetric_profile", {"profile": "0101"}))
    assert t.n == 3
    assert all(t(x) == int("0101"[bin(x).count("1")]) for x in range(8))
    assert measures.alt(t).value == 3


def test_named_tables():
    assert format_table(families.majority(3)) == "3:E8"
    assert format_table(families.and_(3)) == "3:80"
    assert format_table(families.tribes(2, 2)) == "4:F888"
    assert format_table(families.address(1)) == "3:E4"
    assert format_table(families.and_or_tree(2, 2)) == "4:EEE0"
    with pytest.raises(ValueError):
        families.majority(4)


def test_with_alt_examples():
    assert families.with_alt(4, 0).is_constant()
    t = families.with_alt(4, 1, seed=3)
    assert is_monotone(t) and not t.is_constant() and measures.alt(t).value == 1
    assert families.with_alt(4, 4) == families.parity(4)
    with pytest.raises(ValueError):
        families.with_alt(3, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_with_alt_every_value(n):
    for a in range(n + 1):
        for seed in range(3):
            assert measures.alt(families.with_alt(n, a, seed)).value == a


@pytest.mark.parametrize("n", range(0, 7))
def test_symmetric_profiles_alt_equals_profile_alternations(n):
    for bits in itertools.product("01", repeat=n + 1):
        profile = "".join(bits)
        t = families.symmetric_profile(profile)
        assert measures.alt(t).value == families.profile_alternations(profile)


def test_random_families_are_seeded():
    assert families.random_table(6, 5) == families.random_table(6, 5)
    assert families.random_table(6, 5) != families.random_table(6, 6)
    for seed in range(20):
        t = families.random_monotone(5, seed)
        assert is_monotone(t)
    assert len({families.random_monotone(5, s) for s in range(20)}) > 5


def test_family_spec_parsing():
    spec = parse_family_spec("family:with_alt(n=5,a=3)#42")
    assert spec == FamilySpec("with_alt", {"n": 5, "a": 3}, 42)
    assert str(spec) == "family:with_alt(n=5,a=3)#42"
    assert parse(str(spec)) == families.with_alt(5, 3, 42)
    assert parse("family:symmetric_profile(profile=0110)") == families.symmetric_profile("0110")
    for bad in ["family:nope(n=1)", "family:or(k=2)", "family:or(n=x)", "family:or n=2", "family:or(n)"]:
        with pytest.raises(ParseError):
            parse(bad)


@pytest.mark.parametrize("text", [
    "family:or(n=4)", "family:and(n=2)", "family:parity(n=5)", "family:majority(n=5)",
    "family:tribes(w=2,s=3)", "family:address(k=2)", "family:and_or_tree(depth=2,fanin=3)",
    "family:random(n=6)#1", "family:random_monotone(n=6)#2", "family:with_alt(n=6,a=2)#3",
])
def test_every_family_round_trips(text):
    t = parse(text)
    assert parse(format_table(t)) == t

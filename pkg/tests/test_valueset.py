import itertools
import random

import numpy as np
import pytest

from compact64 import valueset as vs
from compact64.errors import PatternError
from compact64.floatbits import NA_BITS, SIGN_BIT
from oracles import bits, decimal_text_to_bits


def texts_by_product(pattern: str):
    slots = [i for i, ch in enumerate(pattern) if ch == "d"]
    for digits in itertools.product("0123456789", repeat=len(slots)):
        chars = list(pattern)
        for pos, dig in zip(slots, digits):
            chars[pos] = dig
        yield "".join(chars)


@pytest.mark.parametrize("pattern", ["d.", "dd.dd", ".0000ddd", "dd0000000.", "1dd.d", "d0d.", ".d"])
def test_values_match_bigint_oracle(pattern):
    got = vs.DigitPattern(pattern).values().view(np.uint64).tolist()
    want = [decimal_text_to_bits(t) for t in texts_by_product(pattern)]
    assert got == want


def test_ddd_ddd_matches_host_parser_and_sampled_bigint():
    got = vs.DigitPattern("ddd.ddd").values().view(np.uint64)
    texts = list(texts_by_product("ddd.ddd"))
    want = np.array([float(t) for t in texts]).view(np.uint64)
    assert np.array_equal(got, want)
    for k in random.Random(5).sample(range(len(texts)), 2000):
        assert int(got[k]) == decimal_text_to_bits(texts[k])


def test_slow_path_used_beyond_exact_range():
    # A scale beyond 10**22 forces the per-text float() route.
    p = vs.DigitPattern("." + "0" * 22 + "d")
    got = p.values().view(np.uint64).tolist()
    assert got == [decimal_text_to_bits(t) for t in texts_by_product(p.text)]


def test_d_dot_with_negations_and_na():
    s = vs.expand_pattern("d.")
    members = set(s.bits.tolist())
    expected = {bits(float(k)) for k in range(10)} | {bits(-float(k)) for k in range(10)} | {NA_BITS}
    assert members == expected
    # 0..9, -0..-9 (-0.0 is its own pattern), NA
    assert len(s) == 21


def test_ddd_ddd_distinct_count():
    s = vs.expand_pattern("ddd.ddd", include_na=False, include_negations=False)
    assert len(s) == 10**6
    full = vs.expand_pattern("ddd.ddd")
    assert len(full) == 2 * 10**6 + 1


def test_literal_prefix_pattern():
    p = vs.DigitPattern("1ddd.ddd")
    texts = list(p.texts())
    assert texts[0] == "1000.000" and texts[-1] == "1999.999"
    assert len(texts) == 10**6
    vals = p.values()
    assert vals[0] == 1000.0 and bits(vals[-1]) == bits(1999.999)


def test_texts_match_product_order():
    assert list(vs.DigitPattern("d.d").texts()) == list(texts_by_product("d.d"))


def test_overlapping_forms_deduplicate():
    a = vs.expand_patterns(["0100."], include_na=False, include_negations=False)
    b = vs.expand_patterns(["0100.", "100.000"], include_na=False, include_negations=False)
    assert len(a) == len(b) == 1


@pytest.mark.parametrize("name,forms", [
    ("C", ["dddd.", "ddd.ddd"]),
    ("A", ["ddddd.d"]),
])
def test_builtin_set_is_union_of_rows(name, forms):
    assert np.array_equal(vs.builtin_set(name).bits, vs.expand_patterns(forms).bits)


def test_builtin_forms_rows():
    assert len(vs.BUILTIN_FORMS["Z"]) == 16
    assert vs.BUILTIN_FORMS["Z"][0] == "dd0000000." and vs.BUILTIN_FORMS["Z"][-1] == ".000000000ddd"
    assert len(vs.BUILTIN_FORMS["X"]) == 15
    assert len(vs.BUILTIN_FORMS["Y"]) == 15


def test_builtin_set_unknown():
    with pytest.raises(KeyError):
        vs.builtin_set("Q")


def test_builtin_sets_include_na_and_are_sign_closed():
    for name in ("A", "F", "W"):
        s = vs.builtin_set(name)
        assert NA_BITS in s.bits
        b = s.bits[s.bits != np.uint64(NA_BITS)]
        assert np.array_equal(np.sort(b ^ np.uint64(SIGN_BIT)), b)


@pytest.mark.parametrize("text,pos", [
    ("", 0), ("dd..d", 3), ("d.x", 2), ("...", 1), (".", 0), ("d-d", 1), ("ddddddddd", 0),
])
def test_pattern_errors_report_position(text, pos):
    with pytest.raises(PatternError) as err:
        vs.DigitPattern(text)
    assert err.value.position == pos
    assert repr(text) in str(err.value)


def test_pattern_properties():
    p = vs.DigitPattern("dd0000000.")
    assert p.free_digits == 2 and p.scale == 0 and len(p) == 100
    assert vs.DigitPattern(".000000000ddd").scale == 12
    assert vs.DigitPattern("dddd").scale == 0


def test_rational_examples():
    zero = vs.expand_rationals(vs.RationalGrid(0, 0, 100))
    assert sorted(zero.bits.tolist()) == sorted([bits(0.0), NA_BITS])
    small = vs.expand_rationals(vs.RationalGrid(-2, 2, 2))
    # n/q for |n| <= 2, q <= 2; 1.5 would need n = 3
    want = {bits(x) for x in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)} | {NA_BITS}
    assert set(small.bits.tolist()) == want
    wider = vs.expand_rationals(vs.RationalGrid(-3, 3, 2))
    assert 1.5 in wider and -1.5 in wider


def test_rationals_are_correctly_rounded():
    from oracles import rational_to_bits

    grid = vs.RationalGrid(-50, 50, 30)
    got = set(vs.expand_rationals(grid, include_na=False).bits.tolist())
    want = {rational_to_bits(n, q) for n in range(-50, 51) for q in range(1, 31)}
    assert got == want


def test_rational_grid_validation():
    with pytest.raises(ValueError):
        vs.RationalGrid(0, 1, 0)
    with pytest.raises(ValueError):
        vs.RationalGrid(2, 1, 3)


def test_value_set_sorted_and_deterministic():
    a = vs.builtin_set("B")
    b = vs.builtin_set("B")
    assert np.array_equal(a.bits, b.bits)
    assert np.all(a.bits[:-1] < a.bits[1:])
    assert not a.bits.flags.writeable


def test_members_survive_repr_round_trip():
    s = vs.builtin_set("E")
    sample = s.floats()[:: max(1, len(s) // 5000)]
    for v in sample.tolist():
        assert bits(float(repr(v))) == bits(v)


def test_contains_and_union():
    s = vs.expand_pattern("d.")
    assert 3.0 in s and -3.0 in s and 3.5 not in s
    u = s.union(vs.expand_pattern("d.d"))
    assert 3.5 in u and -0.5 in u


def test_explicit_set_negation_skips_na():
    from compact64.floatbits import NA

    s = vs.explicit_set([1.0, NA])
    assert set(s.bits.tolist()) == {bits(1.0), bits(-1.0), NA_BITS}


def test_parse_pattern_spec():
    spec = vs.parse_pattern_spec("# C\n\ndddd.\nddd.ddd\nm=7\ne=0\nnegations=1\nna=0\n")
    assert [p.text for p in spec.patterns] == ["dddd.", "ddd.ddd"]
    assert (spec.m, spec.e, spec.f, spec.negations, spec.na) == (7, 0, None, True, False)
    assert NA_BITS not in spec.value_set().bits


@pytest.mark.parametrize("text", ["", "m=7\n", "bogus=1\nd.\n", "na=2\nd.\n", "m=x\nd.\n", "d.x\n"])
def test_parse_pattern_spec_errors(text):
    with pytest.raises(ValueError):
        vs.parse_pattern_spec(text)


def test_read_pattern_file(tmp_path):
    path = tmp_path / "c.pat"
    path.write_text("dddd.\nddd.ddd\n")
    assert len(vs.read_pattern_file(path).patterns) == 2

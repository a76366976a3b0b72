import pytest

from compact64 import codec
from compact64.adaptive import AdaptiveVector
from compact64.bench import gen_data
from compact64.floatbits import NA, NA_BITS, to_bits


def names(av):
    return {s.name for s in av.candidates}


def representing(v, schemes):
    return {n for n, s in schemes.items() if codec.is_representable(v, s)}


def test_fresh_vector(schemes):
    av = AdaptiveVector()
    assert names(av) == set(schemes)
    assert av.is_compressed and len(av) == 0 and av.nbytes == 0
    assert av.active.name == "A"


def test_push_examples(schemes):
    av = AdaptiveVector([123.456])
    want = representing(123.456, schemes)
    assert names(av) == want and "C" in want
    assert av.is_compressed

    av = AdaptiveVector([0.1234567])
    assert av.mode == "plain" and av.candidates == () and av.active is None
    assert av[0] == 0.1234567


def test_get_examples():
    av = AdaptiveVector([1.5, NA])
    assert av[0] == 1.5
    assert to_bits(av[1]) == NA_BITS
    assert to_bits(av[-1]) == NA_BITS
    with pytest.raises(IndexError):
        av[2]
    with pytest.raises(IndexError):
        av[2] = 1.0


def test_fallback_preserves_bits():
    data = gen_data(1, 200, 4).tolist() + [NA, -0.0]
    av = AdaptiveVector(data, debug=True)
    before = [to_bits(x) for x in av]
    av.push(0.12345678901)
    assert av.mode == "plain"
    assert [to_bits(x) for x in av][:-1] == before


def test_set_examples(schemes):
    av = AdaptiveVector(gen_data(1, 50, 8))
    start = set(names(av))
    av[3] = 1.5
    assert names(av) == start & representing(1.5, schemes)
    # 12345.6 happens to decode exactly under C too, so it only drops F.
    av[0] = 12345.6
    assert names(av) == start & representing(1.5, schemes) & representing(12345.6, schemes)
    assert "C" in names(av) and "F" not in names(av)
    av[2] = 98765.4
    assert names(av) == start & {"W", "X", "Y", "Z"}
    assert av.is_compressed
    assert av[0] == 12345.6 and av[2] == 98765.4
    av[1] = 0.12345678901
    assert av.mode == "plain" and av[1] == 0.12345678901 and av[0] == 12345.6


def test_memory():
    assert AdaptiveVector([1.0] * 1000).nbytes == 4000
    assert AdaptiveVector([0.1234567] + [1.0] * 999).nbytes == 8000
    assert AdaptiveVector().nbytes == 0


def test_active_is_smallest_table():
    av = AdaptiveVector([12345.6])
    assert av.active.direct_bytes == min(s.direct_bytes for s in av.candidates)


def test_custom_schemes(schemes):
    av = AdaptiveVector([0.5], schemes=[schemes["C"]])
    assert av.active is schemes["C"]
    av.push(98765.4)
    assert av.mode == "plain"
    with pytest.raises(ValueError):
        AdaptiveVector(schemes=[])


def test_no_recompression():
    av = AdaptiveVector([0.1234567])
    av[0] = 1.0
    av.push(2.0)
    assert av.mode == "plain" and list(av) == [1.0, 2.0]

import pytest

from hqft.registers import (
    DigitString,
    QuditDims,
    all_digit_strings,
    decode_index,
    encode_digits,
    mixed_radix_decode,
    mixed_radix_encode,
)


def test_dims_validation():
    with pytest.raises(ValueError):
        QuditDims(())
    with pytest.raises(ValueError):
        QuditDims((2, 1, 3))
    assert QuditDims((2, 2, 3)).total_dim == 12


def test_digit_validation_names_position():
    dims = QuditDims((2, 2, 3))
    with pytest.raises(ValueError, match="position 2"):
        DigitString((0, 0, 3), dims)
    with pytest.raises(ValueError):
        DigitString((0, 0), dims)


def test_encode_examples():
    dims = QuditDims((2, 2, 3))
    assert mixed_radix_encode(DigitString((0, 0, 0), dims)) == 0
    assert mixed_radix_encode(DigitString((0, 1, 2), dims)) == 5
    assert mixed_radix_encode(DigitString((1, 1, 2), dims)) == 11


def test_decode_examples():
    assert decode_index(5, (2, 2, 3)) == (0, 1, 2)
    assert decode_index(0, (3,)) == (0,)
    with pytest.raises(ValueError):
        mixed_radix_decode(12, (2, 2, 3))


def test_round_trip_full_basis():
    dims = QuditDims((2, 2, 3))
    for i in range(dims.total_dim):
        assert mixed_radix_encode(mixed_radix_decode(i, dims)) == i


def test_round_trip_randomized_dims():
    import random

    rng = random.Random(20240817)
    for _ in range(25):
        dims = QuditDims(tuple(rng.randint(2, 5) for _ in range(rng.randint(1, 4))))
        for i in range(dims.total_dim):
            assert encode_digits(decode_index(i, dims), dims) == i


def test_weights_are_most_significant_first():
    assert QuditDims((2, 2, 3)).weights() == (6, 3, 1)
    assert QuditDims((5,)).weights() == (1,)


def test_all_digit_strings_order():
    digs = [d.digits for d in all_digit_strings((2, 3))]
    assert digs == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]

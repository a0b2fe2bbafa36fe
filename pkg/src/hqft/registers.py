"""Mixed-radix registers: qudit dimension lists, digit strings, and integer encoding.

A register is an ordered list of qudit dimensions ``(d_0, ..., d_{N-1})``.
Basis states are labeled by digit strings ``(x_0, ..., x_{N-1})`` with
``0 <= x_j < d_j``.  The first digit is the most significant one, so the
integer index of a basis state is ``sum_j x_j * prod_{p>j} d_p``.  This is
the ordering produced by chaining Kronecker products left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Tuple


@dataclass(frozen=True)
class QuditDims:
    """Ordered qudit dimensions of a mixed-radix register."""

    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 0:
            raise ValueError("register needs at least one qudit")
        for p, d in enumerate(dims):
            if d < 2:
                raise ValueError(f"qudit {p} has dimension {d}; every dimension must be >= 2")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, p: int) -> int:
        return self.dims[p]

    def reversed(self) -> "QuditDims":
        return QuditDims(tuple(reversed(self.dims)))

    def weights(self) -> Tuple[int, ...]:
        """Most-significant-first place values: weight of digit j is prod of later dims."""
        w = []
        acc = 1
        for d in reversed(self.dims):
            w.append(acc)
            acc *= d
        return tuple(reversed(w))


def as_dims(dims) -> QuditDims:
    """Coerce a QuditDims, tuple, or list into a QuditDims."""
    if isinstance(dims, QuditDims):
        return dims
    return QuditDims(tuple(dims))


@dataclass(frozen=True)
class DigitString:
    """Digits of one basis state of a mixed-radix register."""

    digits: Tuple[int, ...]
    dims: QuditDims

    def __post_init__(self):
        digits = tuple(int(x) for x in self.digits)
        object.__setattr__(self, "digits", digits)
        if len(digits) != len(self.dims):
            raise ValueError(
                f"got {len(digits)} digits for a register of {len(self.dims)} qudits"
            )
        for j, (x, d) in enumerate(zip(digits, self.dims)):
            if not 0 <= x < d:
                raise ValueError(f"digit {x} at position {j} out of range for dimension {d}")

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, j: int) -> int:
        return self.digits[j]


def mixed_radix_encode(digits: DigitString) -> int:
    """Index of a basis state, first digit most significant."""
    idx = 0
    for x, d in zip(digits.digits, digits.dims):
        idx = idx * d + x
    return idx


def mixed_radix_decode(index: int, dims) -> DigitString:
    """Inverse of :func:`mixed_radix_encode`."""
    dims = as_dims(dims)
    index = int(index)
    if not 0 <= index < dims.total_dim:
        raise ValueError(f"index {index} out of range for total dimension {dims.total_dim}")
    out = []
    rem = index
    for d in reversed(dims.dims):
        out.append(rem % d)
        rem //= d
    return DigitString(tuple(reversed(out)), dims)


def encode_digits(digits: Iterable[int], dims) -> int:
    """Encode a raw digit tuple without constructing a DigitString."""
    return mixed_radix_encode(DigitString(tuple(digits), as_dims(dims)))


def decode_index(index: int, dims) -> Tuple[int, ...]:
    """Decode to a raw digit tuple."""
    return mixed_radix_decode(index, dims).digits


def all_digit_strings(dims):
    """Iterate the full basis in index order."""
    dims = as_dims(dims)
    for i in range(dims.total_dim):
        yield mixed_radix_decode(i, dims)

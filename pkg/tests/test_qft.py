import cmath
import itertools
import math

import numpy as np
import pytest

from hqft.qft import (
    QFT_PHASE_SIGN,
    Circuit,
    GateDescriptor,
    circuit_from_text,
    circuit_to_text,
    circuit_unitary,
    digit_reversal_permutation,
    direct_qft_matrix,
    synthesize_qft,
    verify_qft_equivalence,
)
from hqft.operators import fourier_gate
from hqft.registers import QuditDims, decode_index, encode_digits

TOL = 1e-12


def dft_oracle(D):
    out = np.zeros((D, D), dtype=complex)
    for y in range(D):
        for x in range(D):
            out[y, x] = cmath.exp(2j * math.pi * x * y / D) / math.sqrt(D)
    return out


def test_phase_sign_constant_frozen():
    # pinned by the oracle; a change here must be deliberate
    assert QFT_PHASE_SIGN == +1


def test_synthesize_single_qubit():
    c = synthesize_qft((2,))
    assert [g.kind for g in c.gates] == ["F"]
    u = circuit_unitary(c).entries
    assert np.abs(u - fourier_gate(2).entries).max() <= TOL


def test_synthesize_gate_order_for_223():
    c = synthesize_qft((2, 2, 3))
    got = [(g.kind, g.qudits) for g in c.gates]
    assert got == [
        ("F", (0,)),
        ("R", (0, 1)),
        ("R", (0, 2)),
        ("F", (1,)),
        ("R", (1, 2)),
        ("F", (2,)),
    ]


def test_gate_count_formula_randomized():
    import random

    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 5)
        dims = tuple(rng.randint(2, 4) for _ in range(n))
        c = synthesize_qft(dims)
        assert len(c.gates) == n + n * (n - 1) // 2


def test_two_qubit_circuit_matches_textbook_qft():
    u = circuit_unitary(synthesize_qft((2, 2))).entries
    p = digit_reversal_permutation((2, 2)).entries
    assert np.abs(p @ u - dft_oracle(4)).max() <= TOL


def test_circuit_unitary_empty_and_single_gate():
    ident = circuit_unitary(Circuit(QuditDims((2, 3)), ())).entries
    assert np.abs(ident - np.eye(6)).max() == 0
    c = Circuit(QuditDims((3,)), (GateDescriptor("F", (0,)),))
    w = cmath.exp(2j * math.pi / 3)
    want = np.array([[1, 1, 1], [1, w, w**2], [1, w**2, w]]) / np.sqrt(3)
    assert np.abs(circuit_unitary(c).entries - want).max() <= 1e-15


def test_circuit_unitary_is_unitary_for_223():
    u = circuit_unitary(synthesize_qft((2, 2, 3))).entries
    assert np.abs(u @ u.conj().T - np.eye(12)).max() <= TOL


def test_direct_qft_examples():
    m = direct_qft_matrix((2,)).entries
    assert np.abs(m - np.array([[1, 1], [1, -1]]) / np.sqrt(2)).max() <= 1e-15
    m = direct_qft_matrix((2, 2, 3)).entries
    assert abs(m[1, 1] - cmath.exp(2j * math.pi / 12) / math.sqrt(12)) <= 1e-9
    assert np.abs(m[0, :] - 1 / math.sqrt(12)).max() <= TOL
    assert np.abs(m[:, 0] - 1 / math.sqrt(12)).max() <= TOL


def test_direct_qft_unitary_and_symmetric():
    m = direct_qft_matrix((2, 2, 3)).entries
    assert np.abs(m @ m.conj().T - np.eye(12)).max() <= TOL
    assert np.abs(m - m.T).max() <= TOL


def test_digit_reversal_two_qubits_is_bit_reversal():
    p = digit_reversal_permutation((2, 2)).entries
    want = np.eye(4)[[0, 2, 1, 3]]
    assert np.array_equal(p, want)


def test_digit_reversal_hand_example():
    # digits (0,1,2) of (2,2,3) at index 5 map to digits (2,1,0) over
    # (3,2,2), which is index 2*4 + 1*2 + 0 = 10
    p = digit_reversal_permutation((2, 2, 3)).entries
    assert p[10, 5] == 1.0
    # independent mixed-radix check for every index
    for i in range(12):
        digs = decode_index(i, (2, 2, 3))
        j = encode_digits(tuple(reversed(digs)), (3, 2, 2))
        assert p[j, i] == 1.0


def test_digit_reversal_inverse_pair():
    p = digit_reversal_permutation((2, 2, 3)).entries
    q = digit_reversal_permutation((3, 2, 2)).entries
    assert np.array_equal(q @ p, np.eye(12))
    # not an involution for asymmetric dims
    assert not np.array_equal(p @ p, np.eye(12))


@pytest.mark.parametrize("dims", [(2, 2), (2, 2, 3), (3, 3)])
def test_equivalence_examples(dims):
    rep = verify_qft_equivalence(dims, tol=1e-12)
    assert rep.passed
    assert rep.sign_used == +1
    assert rep.max_error <= 1e-12


def test_equivalence_all_small_registers():
    for n in (1, 2, 3):
        for dims in itertools.product((2, 3, 4), repeat=n):
            if math.prod(dims) > 36:
                continue
            rep = verify_qft_equivalence(dims, tol=1e-12)
            assert rep.passed, dims


def test_uniform_state_maps_to_ground():
    # periodicity extraction sanity check
    m = direct_qft_matrix((2, 2, 3)).entries
    v = np.full(12, 1 / math.sqrt(12))
    out = m @ v
    want = np.zeros(12)
    want[0] = 1.0
    assert np.abs(out - want).max() <= TOL


def test_circuit_text_round_trip():
    c = synthesize_qft((2, 2, 3))
    text = circuit_to_text(c)
    assert text.splitlines()[0] == "DIMS 2 2 3"
    assert "F 1" in text and "R 1 3 +1" in text
    back = circuit_from_text(text)
    assert back == c

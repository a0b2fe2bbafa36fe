import cmath
import math

import numpy as np
import pytest

from hqft.operators import (
    DensityMatrix,
    Unitary,
    apply,
    embed_gate,
    fourier_gate,
    hybrid_controlled_phase,
    rotation_gate,
    spin_generators,
)
from hqft.registers import QuditDims, decode_index

EXACT = 1e-15
TOL = 1e-12


def dft_oracle(d):
    """Brute-force DFT by explicit summation, independent of the vectorized path."""
    out = np.zeros((d, d), dtype=complex)
    for y in range(d):
        for x in range(d):
            out[y, x] = cmath.exp(2j * math.pi * x * y / d) / math.sqrt(d)
    return out


def test_fourier_gate_is_hadamard_for_d2():
    h = fourier_gate(2).entries
    want = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.abs(h - want).max() <= EXACT


def test_fourier_gate_is_chrestenson_for_d3():
    c = fourier_gate(3).entries
    w = cmath.exp(2j * math.pi / 3)
    want = np.array([[1, 1, 1], [1, w, w**2], [1, w**2, w]]) / np.sqrt(3)
    assert np.abs(c - want).max() <= EXACT


def test_fourier_gate_matches_dft_oracle_for_d4():
    assert np.abs(fourier_gate(4).entries - dft_oracle(4)).max() <= 1e-9


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_fourier_gate_unitary_and_flat(d):
    f = fourier_gate(d).entries
    assert np.abs(f @ f.conj().T - np.eye(d)).max() <= TOL
    assert np.abs(np.abs(f) - 1 / np.sqrt(d)).max() <= TOL


def test_fourier_gate_rejects_small_dims():
    with pytest.raises(ValueError):
        fourier_gate(1)


def test_hybrid_phase_zero_control_digit():
    g = hybrid_controlled_phase((2, 2, 3), 0, 2).entries
    for i in range(12):
        x = decode_index(i, (2, 2, 3))
        if x[0] == 0:
            assert g[i, i] == pytest.approx(1.0)


def test_hybrid_phase_value_from_formula():
    # direct evaluation: x0=1, x2=2, denominator 2*2*3
    g = hybrid_controlled_phase((2, 2, 3), 0, 2, sign=+1).entries
    i = 1 * 6 + 0 * 3 + 2
    want = cmath.exp(2j * math.pi * 1 * 2 / 12)
    assert abs(g[i, i] - want) <= 1e-9
    assert abs(want - cmath.exp(1j * math.pi / 3)) <= 1e-15


def test_hybrid_phase_reduces_to_controlled_s_on_qubits():
    g = hybrid_controlled_phase((2, 2), 0, 1, sign=+1).entries
    assert np.abs(g - np.diag([1, 1, 1, 1j])).max() <= 1e-12


def test_hybrid_phase_symmetric_in_control_and_target():
    a = hybrid_controlled_phase((2, 3, 4), 0, 2).entries
    b = hybrid_controlled_phase((2, 3, 4), 2, 0).entries
    assert np.array_equal(a, b)


def test_hybrid_phase_rejects_bad_indices():
    with pytest.raises(ValueError):
        hybrid_controlled_phase((2, 2, 3), 1, 1)
    with pytest.raises(ValueError):
        hybrid_controlled_phase((2, 2, 3), 0, 3)


def test_embed_fourier_on_last_qudit_is_block_structure():
    g = embed_gate(fourier_gate(3), (2, 2, 3), (2,)).entries
    want = np.kron(np.eye(4), fourier_gate(3).entries)
    assert np.abs(g - want).max() <= EXACT


def test_embed_identity_is_identity():
    ident = Unitary(np.eye(6), QuditDims((2, 3)))
    g = embed_gate(ident, (2, 2, 3), (1, 2)).entries
    assert np.abs(g - np.eye(12)).max() == 0


def test_embed_subregister_phase_gate_keeps_its_own_denominator():
    # the two-qudit gate built on (2, 3) has denominator 6; embedding it at
    # positions (0, 2) of (2, 2, 3) is NOT the full-register gate, whose
    # denominator includes the middle dimension (12)
    sub = hybrid_controlled_phase((2, 3), 0, 1, sign=+1)
    emb = embed_gate(sub, (2, 2, 3), (0, 2)).entries
    full = hybrid_controlled_phase((2, 2, 3), 0, 2, sign=+1).entries
    assert np.abs(emb - full).max() > 0.1
    for i in range(12):
        x = decode_index(i, (2, 2, 3))
        assert emb[i, i] == pytest.approx(cmath.exp(2j * math.pi * x[0] * x[2] / 6))


def test_embed_dimension_mismatch():
    with pytest.raises(ValueError):
        embed_gate(fourier_gate(2), (2, 2, 3), (2,))


def test_apply_identity_and_hadamard():
    rho = DensityMatrix(np.diag([1.0, 0.0]), QuditDims((2,)))
    ident = Unitary(np.eye(2), QuditDims((2,)))
    assert np.abs(apply(ident, rho).entries - rho.entries).max() == 0
    h = fourier_gate(2)
    out = apply(h, rho).entries
    assert np.abs(out - np.full((2, 2), 0.5)).max() <= TOL


def test_apply_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(42)
    dims = QuditDims((2, 3))
    for _ in range(10):
        g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        q, _ = np.linalg.qr(g)
        u = Unitary(q, dims)
        w = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        m = w @ w.conj().T
        rho = DensityMatrix(m / m.trace(), dims)
        out = apply(u, rho).entries
        assert abs(out.trace() - 1.0) <= TOL
        assert np.abs(out - out.conj().T).max() <= TOL


def test_unitary_constructor_rejects_nonunitary():
    with pytest.raises(ValueError):
        Unitary(np.ones((2, 2)), QuditDims((2,)))


def test_density_matrix_invariants():
    dims = QuditDims((2,))
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 1e-6j], [0.0, 0.5]]), dims)  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.7, 0.7]), dims)  # trace != 1
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]), dims)  # negative eigenvalue
    # deviation kind skips trace and positivity
    DensityMatrix(np.diag([1.5, -0.5]), dims, kind="deviation")


def test_spin_generators_match_pauli_for_qubits():
    jx, jy, jz = spin_generators(2)
    assert np.abs(jx - np.array([[0, 0.5], [0.5, 0]])).max() == 0
    assert np.abs(jz - np.diag([0.5, -0.5])).max() == 0
    assert np.abs(jy - np.array([[0, -0.5j], [0.5j, 0]])).max() == 0


def test_spin_generators_commutator():
    # [Jx, Jy] = i Jz for every dimension
    for d in (2, 3, 4):
        jx, jy, jz = spin_generators(d)
        assert np.abs(jx @ jy - jy @ jx - 1j * jz).max() <= TOL


def test_rotation_gate_spinor_sign():
    # two pi rotations compose to minus identity on a qubit
    u = rotation_gate(2, np.pi, 0.0).entries
    assert np.abs(u @ u + np.eye(2)).max() <= TOL

"""Hybrid-qudit QFT circuit synthesis and its brute-force matrix oracle.

The synthesized circuit interleaves single-qudit Fourier gates with
two-qudit controlled-phase gates: for each qudit p (most significant
first), a Fourier gate on p followed by controlled phases between p and
every later qudit.  Applied left to right, the circuit equals the D-point
DFT matrix up to the mixed-radix digit-reversal permutation.  The phase
sign (+1) and the left-to-right application order are pinned by
:func:`verify_qft_equivalence` and frozen here as constants.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .operators import Unitary, embed_gate, fourier_gate, hybrid_controlled_phase
from .registers import QuditDims, as_dims, decode_index, encode_digits

# Phase sign of the controlled-rotation gates that makes the decomposition
# reproduce the direct QFT matrix.  Pinned by the oracle; regression-tested.
QFT_PHASE_SIGN = +1


@dataclass(frozen=True)
class GateDescriptor:
    """One circuit gate: Fourier("F") on one qudit or ControlledPhase("R") on two."""

    kind: str  # "F" | "R"
    qudits: Tuple[int, ...]
    sign: int = +1

    def __post_init__(self):
        if self.kind == "F":
            if len(self.qudits) != 1:
                raise ValueError("Fourier gate acts on exactly one qudit")
        elif self.kind == "R":
            if len(self.qudits) != 2 or self.qudits[0] == self.qudits[1]:
                raise ValueError("controlled phase acts on two distinct qudits")
            if self.sign not in (+1, -1):
                raise ValueError("sign must be +1 or -1")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class Circuit:
    """Gate list over a register, applied left to right (first gate acts first)."""

    dims: QuditDims
    gates: Tuple[GateDescriptor, ...]

    def __post_init__(self):
        n = len(self.dims)
        for g in self.gates:
            for q in g.qudits:
                if not 0 <= q < n:
                    raise ValueError(f"gate {g} references qudit {q} of a {n}-qudit register")


def synthesize_qft(dims, sign: int = QFT_PHASE_SIGN) -> Circuit:
    """Hybrid-qudit QFT circuit: F_p then R(p,q) for q > p, for p = 0..N-1.

    Gate count is N + N(N-1)/2.
    """
    dims = as_dims(dims)
    n = len(dims)
    gates: List[GateDescriptor] = []
    for p in range(n):
        gates.append(GateDescriptor("F", (p,)))
        for q in range(p + 1, n):
            gates.append(GateDescriptor("R", (p, q), sign))
    return Circuit(dims, tuple(gates))


def gate_unitary(g: GateDescriptor, dims) -> Unitary:
    """Full-register matrix of one gate descriptor."""
    dims = as_dims(dims)
    if g.kind == "F":
        p = g.qudits[0]
        return embed_gate(fourier_gate(dims[p]), dims, (p,))
    return hybrid_controlled_phase(dims, g.qudits[0], g.qudits[1], g.sign)


def circuit_unitary(c: Circuit) -> Unitary:
    """Ordered product of the circuit's gates; the first-listed gate acts first."""
    D = c.dims.total_dim
    U = np.eye(D, dtype=complex)
    for g in c.gates:
        U = gate_unitary(g, c.dims).entries @ U
    return Unitary(U, c.dims)


def direct_qft_matrix(dims) -> Unitary:
    """The D-point DFT matrix: entry (y, x) = exp(2*pi*i*x*y/D)/sqrt(D)."""
    dims = as_dims(dims)
    D = dims.total_dim
    y, x = np.mgrid[0:D, 0:D]
    return Unitary(np.exp(2j * np.pi * x * y / D) / np.sqrt(D), dims)


def digit_reversal_permutation(dims) -> Unitary:
    """Permutation sending digits (x_0..x_{N-1}) over dims to the reversed
    digits (x_{N-1}..x_0) read against the reversed dims.

    Output rows are indexed over the reversed register; composing the
    permutation for dims with the one for reversed dims gives the identity.
    """
    dims = as_dims(dims)
    rdims = dims.reversed()
    D = dims.total_dim
    P = np.zeros((D, D))
    for i in range(D):
        x = decode_index(i, dims)
        P[encode_digits(tuple(reversed(x)), rdims), i] = 1.0
    return Unitary(P, rdims)


@dataclass(frozen=True)
class QftEquivalenceReport:
    dims: Tuple[int, ...]
    passed: bool
    sign_used: int
    max_error: float
    errors_by_sign: Tuple[Tuple[int, float], ...]


def verify_qft_equivalence(dims, tol: float = 1e-12) -> QftEquivalenceReport:
    """Check ||P @ U_circuit - U_direct||_max <= tol for each phase sign.

    Exactly one sign must pass whenever the circuit contains controlled
    phases (for a single qudit both signs give the same circuit).  Raises
    if neither sign passes.
    """
    dims = as_dims(dims)
    P = digit_reversal_permutation(dims).entries
    target = direct_qft_matrix(dims).entries
    errs = []
    for s in (+1, -1):
        U = circuit_unitary(synthesize_qft(dims, sign=s)).entries
        errs.append((s, float(np.abs(P @ U - target).max())))
    passing = [(s, e) for s, e in errs if e <= tol]
    if not passing:
        raise ValueError(f"QFT equivalence failed for both signs: {errs}")
    has_phases = len(dims) > 1
    if has_phases and len(passing) != 1:
        raise ValueError(f"expected exactly one passing sign, got {passing}")
    s, e = passing[0]
    return QftEquivalenceReport(dims.dims, True, s, e, tuple(errs))


# Line-oriented circuit serialization: a DIMS header, then one gate per line
# with 1-based qudit indices, e.g. "F 1" or "R 1 3 +1" (sign last).


def circuit_to_text(c: Circuit) -> str:
    out = io.StringIO()
    out.write("DIMS " + " ".join(str(d) for d in c.dims) + "\n")
    for g in c.gates:
        if g.kind == "F":
            out.write(f"F {g.qudits[0] + 1}\n")
        else:
            out.write(f"R {g.qudits[0] + 1} {g.qudits[1] + 1} {'+1' if g.sign > 0 else '-1'}\n")
    return out.getvalue()


def circuit_from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("DIMS"):
        raise ValueError("circuit text must start with a DIMS line")
    dims = QuditDims(tuple(int(t) for t in lines[0].split()[1:]))
    gates = []
    for ln in lines[1:]:
        tok = ln.split()
        if tok[0] == "F" and len(tok) == 2:
            gates.append(GateDescriptor("F", (int(tok[1]) - 1,)))
        elif tok[0] == "R" and len(tok) == 4:
            gates.append(GateDescriptor("R", (int(tok[1]) - 1, int(tok[2]) - 1), int(tok[3])))
        else:
            raise ValueError(f"bad circuit line: {ln!r}")
    return Circuit(dims, tuple(gates))

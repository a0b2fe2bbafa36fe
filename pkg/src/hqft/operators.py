"""Dense operators over a mixed-radix register and the elementary gate set.

Gates are plain dense complex matrices wrapped with their register dims.
The two constructors here are the generalized Fourier gate (the equal-weight
superposition gate of one qudit) and the hybrid two-qudit controlled-phase
gate, whose phase denominator is the product of all dimensions from the
control position through the target position inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .registers import QuditDims, as_dims, decode_index, encode_digits

UNITARITY_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10


@dataclass(frozen=True)
class Unitary:
    """A unitary matrix over a register; unitarity is checked at construction."""

    entries: np.ndarray
    dims: QuditDims

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        D = self.dims.total_dim
        if entries.shape != (D, D):
            raise ValueError(f"matrix shape {entries.shape} does not match register dimension {D}")
        dev = np.abs(entries @ entries.conj().T - np.eye(D)).max()
        if dev > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: max |U U† - I| = {dev:.3e}")

    @property
    def total_dim(self) -> int:
        return self.dims.total_dim

    def dagger(self) -> "Unitary":
        return Unitary(self.entries.conj().T, self.dims)

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if self.dims != other.dims:
            raise ValueError("register mismatch in unitary product")
        return Unitary(self.entries @ other.entries, self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian operator over a register.

    ``kind="state"`` enforces unit trace and positivity (to tolerance);
    ``kind="deviation"`` only enforces Hermiticity, for traceless or
    otherwise non-physical operator-valued data.
    """

    entries: np.ndarray
    dims: QuditDims
    kind: str = field(default="state")

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        D = self.dims.total_dim
        if entries.shape != (D, D):
            raise ValueError(f"matrix shape {entries.shape} does not match register dimension {D}")
        if self.kind not in ("state", "deviation"):
            raise ValueError(f"unknown kind {self.kind!r}")
        herm = np.abs(entries - entries.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian: max |rho - rho†| = {herm:.3e}")
        if self.kind == "state":
            tr = entries.trace()
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"state trace is {tr}; expected 1")
            evmin = np.linalg.eigvalsh(entries).min()
            if evmin < -POSITIVITY_TOL:
                raise ValueError(f"state has eigenvalue {evmin:.3e} below 0")

    @property
    def total_dim(self) -> int:
        return self.dims.total_dim


def fourier_gate(d: int) -> Unitary:
    """d-dimensional Fourier gate: entry (y, x) = exp(2*pi*i*x*y/d)/sqrt(d).

    For d=2 this is the Hadamard gate; for d=3 the Chrestenson gate.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"Fourier gate needs dimension >= 2, got {d}")
    y, x = np.mgrid[0:d, 0:d]
    return Unitary(np.exp(2j * np.pi * x * y / d) / np.sqrt(d), QuditDims((d,)))


def hybrid_controlled_phase(dims, j: int, k: int, sign: int = +1) -> Unitary:
    """Two-qudit controlled-phase gate on qudits j and k of a register.

    Diagonal gate: basis state with digits x picks up
    ``exp(sign * 2*pi*i * x_j * x_k / Q)`` where Q is the product of all
    dimensions from min(j,k) through max(j,k) inclusive.  Symmetric in
    (j, k).
    """
    dims = as_dims(dims)
    j, k = int(j), int(k)
    n = len(dims)
    for p in (j, k):
        if not 0 <= p < n:
            raise ValueError(f"qudit index {p} out of range for {n} qudits")
    if j == k:
        raise ValueError("control and target must be distinct qudits")
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    lo, hi = min(j, k), max(j, k)
    denom = 1
    for p in range(lo, hi + 1):
        denom *= dims[p]
    D = dims.total_dim
    phases = np.empty(D, dtype=complex)
    for i in range(D):
        x = decode_index(i, dims)
        phases[i] = np.exp(sign * 2j * np.pi * x[j] * x[k] / denom)
    return Unitary(np.diag(phases), dims)


def embed_gate(gate: Unitary, dims, positions: Tuple[int, ...]) -> Unitary:
    """Tensor-extend a gate on a sub-register into the full register.

    ``positions`` lists the full-register qudit indices, in the order the
    gate's own register is laid out.  Qudits not listed act as identity.
    """
    dims = as_dims(dims)
    positions = tuple(int(p) for p in positions)
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct")
    for p in positions:
        if not 0 <= p < len(dims):
            raise ValueError(f"position {p} out of range for {len(dims)} qudits")
    sub = tuple(dims[p] for p in positions)
    if gate.dims.dims != sub:
        raise ValueError(
            f"gate register {gate.dims.dims} does not match dims {sub} at positions {positions}"
        )
    D = dims.total_dim
    rest = [p for p in range(len(dims)) if p not in positions]
    out = np.zeros((D, D), dtype=complex)
    for I in range(D):
        di = decode_index(I, dims)
        for J in range(D):
            dj = decode_index(J, dims)
            if any(di[p] != dj[p] for p in rest):
                continue
            r = encode_digits([di[p] for p in positions], sub)
            c = encode_digits([dj[p] for p in positions], sub)
            out[I, J] = gate.entries[r, c]
    return Unitary(out, dims)


def apply(U: Unitary, rho: DensityMatrix) -> DensityMatrix:
    """Conjugate a density matrix by a unitary: rho -> U rho U†."""
    if U.dims != rho.dims:
        raise ValueError("register mismatch between unitary and state")
    return DensityMatrix(U.entries @ rho.entries @ U.entries.conj().T, rho.dims, kind=rho.kind)


def spin_generators(d: int):
    """Angular-momentum generators (Jx, Jy, Jz) for a d-level system.

    The spin is j = (d-1)/2 and digit v maps to projection m = j - v, so
    digit 0 is the highest-projection level.
    """
    d = int(d)
    if d < 2:
        raise ValueError(f"need dimension >= 2, got {d}")
    j = (d - 1) / 2
    m = j - np.arange(d)
    jp = np.zeros((d, d))
    for v in range(1, d):
        jp[v - 1, v] = np.sqrt(j * (j + 1) - m[v] * (m[v] + 1))
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    return jx, jy, np.diag(m)


def rotation_gate(d: int, angle: float, axis_angle: float) -> Unitary:
    """Spin rotation exp(-i*angle*(cos(a) Jx + sin(a) Jy)) for a d-level system."""
    jx, jy, _ = spin_generators(d)
    G = np.cos(axis_angle) * jx + np.sin(axis_angle) * jy
    w, V = np.linalg.eigh(G)
    return Unitary((V * np.exp(-1j * angle * w)) @ V.conj().T, QuditDims((d,)))

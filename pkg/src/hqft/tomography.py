"""Partial state tomography from simulated single-quantum readouts.

Nineteen experiments determine the off-diagonal elements: eighteen are
spin-selective (pi/2) pulse patterns named by one letter per spin (I, X
or Y; the qutrit letter acts on the whole three-level system or, on the
four-qubit emulator, simultaneously on both emulating spins), and the
nineteenth sandwiches a z gradient between qutrit y rotations of flip
angles -pi/2 and pi/4.  Populations come from a diagonal protocol: a
gradient followed by one readout rotation per spin, plus a quarter-angle
qutrit readout that resolves the population pattern a single (pi/2)
readout is blind to (its spin-1 rotation matrix has a zero middle row).
The resulting measurement map is full rank on the 12-level system; the
16-level emulator map has two undetermined directions, which pair the
embedded double-quantum coherences with their zero-quantum mirrors, so
reconstruction there can either report them or solve directly in the
embedded parametrization.

Detection is idealized: after an experiment's events, every allowed
single-quantum coherence matrix element is read out directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .operators import DensityMatrix
from .pulses import PulseEvent, PulseSequence, grad, rot
from .registers import QuditDims, as_dims, decode_index
from .spins import QQQQ_DIMS, QQT_DIMS, SpinSystemParams, embedding_isometry

PULSE_LABELS = (
    "III", "YII", "XII", "IYI", "IXI", "IIY", "IYY", "IXY", "YIY",
    "XIX", "XXI", "YYI", "XYI", "YXI", "XYY", "XXY", "YXX", "YYX",
)
SANDWICH_LABEL = "IIL-GRAD-IIU"
DIAGONAL_LABELS_QQT = ("DIAG-1", "DIAG-2", "DIAG-3", "DIAG-3Q")


@dataclass(frozen=True)
class TomographyExperiment:
    label: str
    events: Tuple[PulseEvent, ...]


def _spin_groups(system: str) -> List[List[int]]:
    """Targets addressed by each label letter: the qutrit letter drives the
    whole third qudit (QQT) or spins 3 and 4 together (QQQQ)."""
    return [[0], [1], [2]] if system == "QQT" else [[0], [1], [2, 3]]


def _axis(ch: str) -> float:
    return 0.0 if ch == "X" else np.pi / 2


def _label_events(label: str, system: str) -> Tuple[PulseEvent, ...]:
    events = []
    for ch, targets in zip(label, _spin_groups(system)):
        if ch == "I":
            continue
        events.append(rot(targets, np.pi / 2, _axis(ch)))
    return tuple(events)


def _experiment_set(system: str) -> List[TomographyExperiment]:
    exps = []
    for lab in PULSE_LABELS:
        shown = lab if system == "QQT" else lab[:2] + lab[2] * 2
        exps.append(TomographyExperiment(shown, _label_events(lab, system)))
    qutrit = _spin_groups(system)[2]
    exps.append(
        TomographyExperiment(
            SANDWICH_LABEL,
            (rot(qutrit, -np.pi / 2, np.pi / 2), grad(), rot(qutrit, np.pi / 4, np.pi / 2)),
        )
    )
    return exps


def _diagonal_protocol(system: str) -> List[TomographyExperiment]:
    groups = _spin_groups(system)
    exps = [
        TomographyExperiment(f"DIAG-{i + 1}", (grad(), rot(g, np.pi / 2, np.pi / 2)))
        for i, g in enumerate(groups)
    ]
    # quarter-angle qutrit readout: completes the population rank
    exps.append(
        TomographyExperiment("DIAG-3Q", (grad(), rot(groups[2], np.pi / 4, np.pi / 2)))
    )
    return exps


def qqt_experiment_set() -> List[TomographyExperiment]:
    """The 19 off-diagonal experiments plus the diagonal protocol (QQT)."""
    return _experiment_set("QQT") + _diagonal_protocol("QQT")


def qqqq_experiment_set() -> List[TomographyExperiment]:
    """The emulator analog: primed operations act on spins 3 and 4 together."""
    return _experiment_set("QQQQ") + _diagonal_protocol("QQQQ")


def experiment_set(system: str) -> List[TomographyExperiment]:
    if system == "QQT":
        return qqt_experiment_set()
    if system == "QQQQ":
        return qqqq_experiment_set()
    raise ValueError(f"unknown system {system!r}")


def single_quantum_pairs(dims) -> List[Tuple[int, int]]:
    """Ordered (upper, lower) level pairs differing by one unit in one digit.

    "Upper" here is the lexicographically smaller index (the higher-energy
    level for positive shift parameters)."""
    dims = as_dims(dims)
    pairs = []
    D = dims.total_dim
    for i in range(D):
        xi = decode_index(i, dims)
        for k in range(i + 1, D):
            xk = decode_index(k, dims)
            diff = [q for q in range(len(dims)) if xi[q] != xk[q]]
            if len(diff) == 1 and abs(xi[diff[0]] - xk[diff[0]]) == 1:
                pairs.append((i, k))
    return pairs


@dataclass(frozen=True)
class Readout:
    """Complex single-quantum amplitudes <lower| rho' |upper>, one per pair."""

    label: str
    pairs: Tuple[Tuple[int, int], ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (len(self.pairs),):
            raise ValueError("one amplitude per transition pair required")


def _dims_for(system: str) -> QuditDims:
    return QQT_DIMS if system == "QQT" else QQQQ_DIMS


def _apply_events(rho: np.ndarray, events: Sequence[PulseEvent], dims: QuditDims) -> np.ndarray:
    from .pulses import _rotation_matrix

    out = rho
    for ev in events:
        if ev.kind == "grad":
            out = np.diag(np.diag(out))
        elif ev.kind == "rot":
            U = _rotation_matrix(ev, dims)
            out = U @ out @ U.conj().T
        else:
            raise ValueError("tomography experiments contain rotations and gradients only")
    return out


def simulate_readout(rho: DensityMatrix, e: TomographyExperiment, system: str) -> Readout:
    """Apply an experiment's events and read all single-quantum coherences."""
    dims = _dims_for(system)
    if rho.dims != dims:
        raise ValueError(f"state dims {rho.dims.dims} do not match system {system}")
    pairs = tuple(single_quantum_pairs(dims))
    out = _apply_events(rho.entries, e.events, dims)
    amps = np.array([out[lo, up] for up, lo in pairs])
    return Readout(e.label, pairs, amps)


def run_experiments(rho: DensityMatrix, system: str) -> List[Tuple[TomographyExperiment, Readout]]:
    return [(e, simulate_readout(rho, e, system)) for e in experiment_set(system)]


def hermitian_basis(D: int) -> List[np.ndarray]:
    """Orthonormal Hermitian basis: diagonals first, then real and imaginary
    off-diagonal pairs in row-major order."""
    basis = []
    for i in range(D):
        B = np.zeros((D, D), dtype=complex)
        B[i, i] = 1.0
        basis.append(B)
    for i in range(D):
        for k in range(i + 1, D):
            B = np.zeros((D, D), dtype=complex)
            B[i, k] = B[k, i] = 1 / np.sqrt(2)
            basis.append(B)
            B = np.zeros((D, D), dtype=complex)
            B[i, k] = -1j / np.sqrt(2)
            B[k, i] = 1j / np.sqrt(2)
            basis.append(B)
    return basis


def _pullback_operators(e: TomographyExperiment, dims: QuditDims) -> List[np.ndarray]:
    """Operators K with amplitude = Tr(K rho) for each transition pair."""
    from .pulses import _rotation_matrix

    ops = []
    for up, lo in single_quantum_pairs(dims):
        K = np.zeros((dims.total_dim,) * 2, dtype=complex)
        K[up, lo] = 1.0  # Tr(K rho') = rho'[lo, up]
        for ev in reversed(e.events):
            if ev.kind == "grad":
                K = np.diag(np.diag(K))
            else:
                U = _rotation_matrix(ev, dims)
                K = U.conj().T @ K @ U
        ops.append(K)
    return ops


def measurement_matrix(system: str, embedded: bool = False) -> np.ndarray:
    """Real matrix mapping Hermitian-basis coordinates to stacked readouts.

    Rows: two per amplitude (real, imaginary) over all experiments, plus a
    final unit-trace row.  With ``embedded`` (QQQQ only) the parameter
    space is the embedded 12-level Hermitian space.
    """
    dims = _dims_for(system)
    D = dims.total_dim
    if embedded:
        if system != "QQQQ":
            raise ValueError("embedded parametrization applies to the QQQQ system")
        E = embedding_isometry()
        basis = [E @ B @ E.T for B in hermitian_basis(12)]
        nparam = 144
    else:
        basis = hermitian_basis(D)
        nparam = D * D
    rows = []
    for e in experiment_set(system):
        rows.extend(_pullback_operators(e, dims))
    A = np.zeros((2 * len(rows) + 1, nparam))
    for r, K in enumerate(rows):
        for c, B in enumerate(basis):
            v = np.trace(K @ B)
            A[2 * r, c] = v.real
            A[2 * r + 1, c] = v.imag
    # unit trace: sum of diagonal coordinates
    ndiag = 12 if embedded else D
    A[-1, :ndiag] = 1.0
    return A


def stack_readouts(readouts: Sequence[Tuple[TomographyExperiment, Readout]]) -> np.ndarray:
    vals = []
    for _, r in readouts:
        for a in r.amplitudes:
            vals.extend((a.real, a.imag))
    vals.append(1.0)  # unit trace
    return np.array(vals)


@dataclass(frozen=True)
class ReconstructionReport:
    rank: int                # rank including the unit-trace completion row
    rank_measured: int       # rank of the measurement rows alone
    n_parameters: int
    undetermined: int
    residual: float


def reconstruct(
    readouts: Sequence[Tuple[TomographyExperiment, Readout]],
    system: str,
    assume_embedded: bool = False,
    rank_tol: float = 1e-9,
) -> Tuple[DensityMatrix, ReconstructionReport]:
    """Least-squares reconstruction from a full experiment set.

    Solves the linear measurement map over Hermitian-basis coordinates,
    then symmetrizes and normalizes the trace.  ``assume_embedded``
    reconstructs a QQQQ readout set directly in the embedded 12-level
    parametrization (zero outside the embedded subspace), which is full
    rank; the unconstrained 16-level map is rank deficient and the report
    counts its undetermined directions.
    """
    dims = _dims_for(system)
    expected = [e.label for e in experiment_set(system)]
    got = [e.label for e, _ in readouts]
    if got != expected:
        raise ValueError(f"readouts must come from the declared experiment set; got {got}")
    A = measurement_matrix(system, embedded=assume_embedded)
    y = stack_readouts(readouts)
    sol, _, rank, _ = np.linalg.lstsq(A, y, rcond=rank_tol)
    residual = float(np.linalg.norm(A @ sol - y))
    rank_measured = int(np.linalg.matrix_rank(A[:-1], tol=rank_tol))
    nparam = A.shape[1]
    if assume_embedded:
        basis = hermitian_basis(12)
        small = sum(c * B for c, B in zip(sol, basis))
        E = embedding_isometry()
        out = E @ small @ E.T
    else:
        basis = hermitian_basis(dims.total_dim)
        out = sum(c * B for c, B in zip(sol, basis))
    out = (out + out.conj().T) / 2
    tr = out.trace().real
    if abs(tr) > 1e-9:
        out = out / tr
    rho = DensityMatrix(out, dims, kind="deviation")
    report = ReconstructionReport(int(rank), rank_measured, nparam, nparam - int(rank), residual)
    return rho, report


def fidelity(rho_a: DensityMatrix, rho_b: DensityMatrix) -> float:
    """Normalized overlap Tr(a† b) / sqrt(Tr(a† a) Tr(b† b))."""
    if rho_a.dims != rho_b.dims:
        raise ValueError("states live on different registers")
    a, b = rho_a.entries, rho_b.entries
    na = np.trace(a.conj().T @ a).real
    nb = np.trace(b.conj().T @ b).real
    if na <= 0 or nb <= 0:
        raise ValueError("fidelity of a zero-norm operator is undefined")
    val = np.trace(a.conj().T @ b) / np.sqrt(na * nb)
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity has imaginary residue {val.imag:.3e}")
    return float(val.real)


def _basis_labels(dims: QuditDims) -> List[str]:
    labels = []
    for i in range(dims.total_dim):
        digs = decode_index(i, dims)
        parts = [str(v) for v in digs[:-1]]
        last = str(digs[-1]) + ("'" if dims[-1] == 3 else "")
        labels.append("|" + " ".join(parts + [last]) + ">")
    return labels


def density_matrix_to_text(rho: DensityMatrix) -> str:
    """Row-major real/imaginary entry pairs with a dims and basis-order header."""
    dims = rho.dims
    labels = _basis_labels(dims)
    lines = [
        "# dims: " + ",".join(str(d) for d in dims),
        f"# basis order: {labels[0]} ... {labels[-1]}",
    ]
    for row in rho.entries:
        lines.append(" ".join(f"{v.real:+.12e} {v.imag:+.12e}" for v in row))
    return "\n".join(lines) + "\n"


def readout_to_text(r: Readout) -> str:
    lines = [f"# experiment: {r.label}", "# columns: upper lower re im"]
    for (up, lo), a in zip(r.pairs, r.amplitudes):
        lines.append(f"{up + 1} {lo + 1} {a.real:+.12e} {a.imag:+.12e}")
    return "\n".join(lines) + "\n"


def random_state(D: int, seed: int) -> np.ndarray:
    """Random physical state: G G† / Tr(G G†) with G complex standard normal."""
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    W = G @ G.conj().T
    return W / W.trace()


def random_hermitian_unit_trace(D: int, seed: int, spread: float = 0.5) -> np.ndarray:
    """Random Hermitian unit-trace (not necessarily positive) matrix."""
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    H = (G + G.conj().T) / 2
    H = H - np.eye(D) * (H.trace().real / D)
    return np.eye(D) / D + spread * H / np.linalg.norm(H)

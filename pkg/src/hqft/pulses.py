"""Lower the QQT QFT circuit to a pulse schedule on the four-qubit emulator.

The schedule follows the hardware realization: a tilted-axis (pi/2) pulse
on spin 1, a first free-evolution block acquiring the controlled phases
between spin 1 and spins 2, 3, 4, a tilted (pi/2) pulse on spin 2, a
second block acquiring the spin-2 phases, and a final collective (pi/2)_y
pulse on spins 3 and 4 standing in for the three-level Fourier gate.

Free evolution under a scalar coupling for a net time S contributes the
diagonal phase ``exp(-i * 4*pi*J*S * m_i * m_j)``, i.e. a controlled
phase of ``-4*pi*J*S`` plus single-spin z-phases.  Echo blocks place pi
pulses so that each coupling accumulates exactly its target controlled
phase while the chemical shifts of spins 3 and 4 (and every unwanted
coupling) cancel.  All z-rotations are absorbed: the two (pi/2) pulse
axes are tilted so each pulse realizes an exact two-level Fourier gate
given the z-phases accumulated at that point, the axes of the first
block's pair pulses are offset to cancel the spins-3/4 z-ledger, and the
z-phases left on spins 1 and 2 commute to the end of the sequence, where
verification removes them with a frozen diagonal correction.

The collective final pulse cannot reproduce the three-level Fourier gate
exactly: with no coupling between spins 3 and 4, every reachable
operation on the pair factorizes, while the Fourier gate entangles the
pair's computational embedding.  ``verify_pulse_qft`` therefore reports
an honest process fidelity (about 0.2546 for the ideal schedule) and a
subspace leakage of 0.5; every stage before the final pulse is exact, as
the prefix checks in the test suite pin down.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .operators import DensityMatrix, Unitary, spin_generators
from .qft import QFT_PHASE_SIGN, digit_reversal_permutation, direct_qft_matrix, synthesize_qft
from .registers import QuditDims, decode_index
from .spins import QQT_DIMS, SpinSystemParams, embedding_isometry

# Frozen schedule constants, pinned by the propagator oracle and covered by
# regression tests.
#
# Axis of the first (pi/2) pulse: with no prior z-phase on spin 1, the pulse
# equals the two-level Fourier gate up to a trailing z-phase of pi exactly
# when tilted a half-turn past the y axis.
PULSE1_AXIS = 3 * np.pi / 2
# Axis of the spin-2 pulse: the first block leaves z-phase -pi/4 on spin 2,
# shifting the absorption axis to 3*pi/2 - pi/4.
PULSE2_AXIS = 5 * np.pi / 4
# Axis offset between the first block's two collective pair pulses; cancels
# the common z-phase the two blocks leave on spins 3 and 4 (3*pi/4 total).
BLOCK1_PAIR_ECHO_AXIS = -3 * np.pi / 8
# Trailing z-phases on (spin 1, spin 2, qutrit digit) left by the schedule;
# the verification removes them as the frozen diagonal correction.
RESIDUAL_Z_PHASES = (7 * np.pi / 12, 5 * np.pi / 12, 0.0)

# Controlled-phase targets of the synthesized QFT on dims (2,2,3), expressed
# per emulator coupling: exp(+2*pi*i * x_j * x_k / Q) with Q the inclusive
# dimension product, the qutrit digit split as x3 = q3 + q4.
THETA_12 = 2 * np.pi / 4
THETA_1P = 2 * np.pi / 12  # spin 1 with each of spins 3, 4
THETA_2P = 2 * np.pi / 6   # spin 2 with each of spins 3, 4


@dataclass(frozen=True)
class PulseEvent:
    """One schedule event: a rotation, a free-evolution delay, or a gradient.

    Rotations carry target spins (0-based), a flip angle, and an axis angle
    from +x in the transverse plane.  Delays carry a duration and an
    active-coupling mask (None means all couplings evolve; masks exist for
    synthetic sequences in tests).  Gradients zero all coherences and only
    appear in tomography protocols.
    """

    kind: str  # "rot" | "delay" | "grad"
    targets: FrozenSet[int] = frozenset()
    flip: float = 0.0
    axis: float = 0.0
    duration: float = 0.0
    coupling_mask: Optional[FrozenSet[Tuple[int, int]]] = None

    def __post_init__(self):
        if self.kind == "rot":
            if not self.targets:
                raise ValueError("rotation needs at least one target spin")
            if not -2 * np.pi < self.flip <= 2 * np.pi:
                raise ValueError(f"flip angle {self.flip} outside (-2*pi, 2*pi]")
        elif self.kind == "delay":
            if self.duration < 0:
                raise ValueError("delay duration must be nonnegative")
        elif self.kind != "grad":
            raise ValueError(f"unknown event kind {self.kind!r}")


def rot(targets: Sequence[int], flip: float, axis: float) -> PulseEvent:
    return PulseEvent("rot", targets=frozenset(int(t) for t in targets), flip=flip, axis=axis)


def delay(duration: float, mask: Optional[Sequence[Tuple[int, int]]] = None) -> PulseEvent:
    cm = None if mask is None else frozenset((min(a, b), max(a, b)) for a, b in mask)
    return PulseEvent("delay", duration=float(duration), coupling_mask=cm)


def grad() -> PulseEvent:
    return PulseEvent("grad")


@dataclass(frozen=True)
class PulseSequence:
    events: Tuple[PulseEvent, ...]
    params: SpinSystemParams

    def __post_init__(self):
        n = len(self.params.dims)
        for ev in self.events:
            for t in ev.targets:
                if not 0 <= t < n:
                    raise ValueError(f"event targets spin {t} of a {n}-spin system")

    def duration(self) -> float:
        return sum(ev.duration for ev in self.events)


def delay_for_angle(theta: float, j_hz: float) -> float:
    """Evolution time theta / (pi * J) realizing rotation angle theta under J."""
    if j_hz == 0:
        raise ValueError("uncoupled spins cannot acquire a controlled phase (J = 0)")
    if theta < 0:
        raise ValueError("rotation angle must be nonnegative")
    return theta / (np.pi * j_hz)


def _frame_offsets(p: SpinSystemParams) -> np.ndarray:
    """Rotating-frame offsets: spins 1 and 2 on resonance, the pair at +-Dq."""
    if p.kind != "QQQQ":
        raise ValueError("pulse sequences run on the four-qubit system")
    return np.array([0.0, 0.0, +p.dq, -p.dq])


def _net_time_for_phase(kappa: float, j_hz: float) -> float:
    """Signed net evolution time S with 4*pi*J*S = kappa (kappa reduced mod 2*pi)."""
    return kappa / (4 * np.pi * j_hz)


def compile_qft(p: SpinSystemParams, faulty_echoes: bool = False) -> PulseSequence:
    """Pulse schedule implementing the hybrid QFT on the ideal emulator.

    ``faulty_echoes`` deliberately scrambles the first block's echo
    placement (a negative control for the verification).
    """
    if p.kind != "QQQQ":
        raise ValueError("compile_qft expects four-qubit emulator parameters")
    violations = []
    if p.j[0, 2] != p.j[0, 3]:
        violations.append(f"J13={p.j[0, 2]} != J14={p.j[0, 3]}")
    if p.j[1, 2] != p.j[1, 3]:
        violations.append(f"J23={p.j[1, 2]} != J24={p.j[1, 3]}")
    if p.j[2, 3] != 0.0:
        violations.append(f"J34={p.j[2, 3]} != 0")
    if any(p.j[a, b] == 0 for a, b in ((0, 1), (0, 2), (1, 2))):
        violations.append("J12, J13, J23 must all be nonzero")
    if violations:
        raise ValueError("cannot compile on this coupling pattern: " + "; ".join(violations))
    j12, j1p, j2p = p.j[0, 1], p.j[0, 2], p.j[1, 2]

    # Net evolution times: controlled phase -4*pi*J*S must equal the target
    # (mod 2*pi), so S = -theta / (4*pi*J).
    s12 = _net_time_for_phase(-THETA_12, j12)
    s1p = _net_time_for_phase(-THETA_1P, j1p)
    # The second block's symmetric echo can only accumulate S > 0; use the
    # 2*pi-equivalent positive representative.
    s2p = _net_time_for_phase(2 * np.pi - THETA_2P, j2p)

    # First block: segments (a, b, c, d) with a collective pair pulse, a
    # spin-1 pulse, a pair pulse, and a spin-1 pulse after them.  Sign
    # bookkeeping gives a+b-c-d = S12, a-b+c-d = S13 and a-b-c+d = 0 (the
    # last zeroing both the pair shifts and the spin-2 couplings).
    d_seg = max(0.0, -(s12 + s1p) / 2, -s12 / 2, -s1p / 2)
    a_seg = d_seg + (s12 + s1p) / 2
    b_seg = d_seg + s12 / 2
    c_seg = d_seg + s1p / 2

    events: List[PulseEvent] = [rot([0], np.pi / 2, PULSE1_AXIS)]
    block1 = [
        (a_seg, rot([2, 3], np.pi, 0.0)),
        (b_seg, rot([0], np.pi, 0.0)),
        (c_seg, rot([2, 3], np.pi, BLOCK1_PAIR_ECHO_AXIS)),
        (d_seg, rot([0], np.pi, 0.0)),
    ]
    if faulty_echoes:
        # swap the second and last segment lengths: wrong net coupling phases
        # and unrefocused pair shifts
        block1[1], block1[3] = (
            (d_seg, block1[1][1]),
            (b_seg, block1[3][1]),
        )
    for seg, pulse in block1:
        if seg > 0:
            events.append(delay(seg))
        events.append(pulse)

    events.append(rot([1], np.pi / 2, PULSE2_AXIS))

    # Second block: symmetric echo with collective pulses on spins 2, 3, 4;
    # spin-1 couplings and the pair shifts refocus, J23 and J24 run whole.
    half = s2p / 2
    events += [
        delay(half),
        rot([1, 2, 3], np.pi, 0.0),
        delay(half),
        rot([1, 2, 3], np.pi, 0.0),
    ]

    events.append(rot([2, 3], np.pi / 2, np.pi / 2))
    return PulseSequence(tuple(events), p)


def _rotation_matrix(ev: PulseEvent, dims: QuditDims) -> np.ndarray:
    n = len(dims)
    G = np.zeros((dims.total_dim, dims.total_dim), dtype=complex)
    for t in sorted(ev.targets):
        jx, jy, _ = spin_generators(dims[t])
        gen = np.cos(ev.axis) * jx + np.sin(ev.axis) * jy
        mats = [np.eye(d, dtype=complex) for d in dims]
        mats[t] = gen
        acc = mats[0]
        for m in mats[1:]:
            acc = np.kron(acc, m)
        G += acc
    w, V = np.linalg.eigh(G)
    return (V * np.exp(-1j * ev.flip * w)) @ V.conj().T


def _delay_matrix(ev: PulseEvent, p: SpinSystemParams) -> np.ndarray:
    dims = p.dims
    offsets = _frame_offsets(p)
    n = len(dims)
    diag = np.zeros(dims.total_dim)
    for i in range(dims.total_dim):
        x = decode_index(i, dims)
        m = [0.5 - v for v in x]
        e = sum(offsets[q] * m[q] for q in range(n))
        for a in range(n):
            for b in range(a + 1, n):
                if ev.coupling_mask is not None and (a, b) not in ev.coupling_mask:
                    continue
                e += 2.0 * p.j[a, b] * m[a] * m[b]
        diag[i] = e
    return np.diag(np.exp(-2j * np.pi * diag * ev.duration))


def event_unitary(ev: PulseEvent, p: SpinSystemParams) -> np.ndarray:
    if ev.kind == "rot":
        return _rotation_matrix(ev, p.dims)
    if ev.kind == "delay":
        return _delay_matrix(ev, p)
    raise ValueError("gradient events are not unitary; use apply_sequence on a density matrix")


def simulate_sequence(seq: PulseSequence, p: Optional[SpinSystemParams] = None) -> Unitary:
    """Ordered propagator of a gradient-free sequence (first event acts first)."""
    p = seq.params if p is None else p
    D = p.dims.total_dim
    U = np.eye(D, dtype=complex)
    for ev in seq.events:
        U = event_unitary(ev, p) @ U
    return Unitary(U, p.dims)


def apply_sequence(seq: PulseSequence, rho: DensityMatrix, p: Optional[SpinSystemParams] = None) -> DensityMatrix:
    """Evolve a density matrix through a sequence; gradients zero coherences."""
    p = seq.params if p is None else p
    out = np.array(rho.entries, dtype=complex)
    for ev in seq.events:
        if ev.kind == "grad":
            out = np.diag(np.diag(out))
        else:
            U = event_unitary(ev, p)
            out = U @ out @ U.conj().T
    return DensityMatrix(out, rho.dims, kind=rho.kind)


def residual_correction_diagonal() -> np.ndarray:
    """Frozen 12-dim diagonal removing the schedule's trailing z-phases."""
    l1, l2, l3 = RESIDUAL_Z_PHASES
    return np.array(
        [
            np.exp(-1j * (l1 * x1 + l2 * x2 + l3 * x3))
            for i in range(12)
            for x1, x2, x3 in [decode_index(i, QQT_DIMS)]
        ]
    )


@dataclass(frozen=True)
class PulseVerificationReport:
    process_fidelity: float
    leakage: float
    prefix_fidelity: float
    passed: bool
    fidelity_tol: float
    leakage_tol: float


def verify_pulse_qft(
    p: SpinSystemParams,
    tol: float = 1e-3,
    leak_tol: Optional[float] = None,
    sequence: Optional[PulseSequence] = None,
) -> PulseVerificationReport:
    """Compare the simulated schedule with the ideal QFT on the embedded levels.

    The propagator is restricted to the 12 embedded levels, the frozen
    diagonal correction removes the absorbed z-phases, the digit-reversal
    permutation is composed on, and the result is scored against the
    direct 12-point Fourier matrix with the global-phase-invariant process
    fidelity |Tr(target† actual)| / 12.  Leakage is the largest
    out-of-subspace column norm of the restricted propagator.  The report
    also carries the prefix fidelity, scored against the circuit with the
    final qutrit Fourier gate dropped: it is 1 for an intact schedule and
    isolates echo faults from the collective final pulse's intrinsic
    mismatch.
    """
    if leak_tol is None:
        leak_tol = tol
    seq = compile_qft(p) if sequence is None else sequence
    E = embedding_isometry()
    corr = np.diag(residual_correction_diagonal())
    U = simulate_sequence(seq, p).entries
    sub = E.T @ U @ E
    out = (np.eye(16) - E @ E.T) @ U @ E
    leakage = float(max(np.linalg.norm(out[:, c]) for c in range(12)))
    corrected = corr @ sub
    Pmat = digit_reversal_permutation(QQT_DIMS).entries
    target = direct_qft_matrix(QQT_DIMS).entries
    fid = float(abs(np.trace(target.conj().T @ (Pmat @ corrected))) / 12.0)
    pre = PulseSequence(seq.events[:-1], seq.params)
    Upre = simulate_sequence(pre, p).entries
    pre_fid = float(
        abs(np.trace(qft_target_prefix_unitary().conj().T @ (corr @ (E.T @ Upre @ E)))) / 12.0
    )
    passed = fid >= 1.0 - tol and leakage <= leak_tol
    return PulseVerificationReport(fid, leakage, pre_fid, passed, tol, leak_tol)


def qft_target_prefix_unitary() -> np.ndarray:
    """Embedded product of every QFT gate except the final qutrit Fourier gate."""
    from .operators import embed_gate, fourier_gate, hybrid_controlled_phase

    circ = synthesize_qft(QQT_DIMS, sign=QFT_PHASE_SIGN)
    U = np.eye(12, dtype=complex)
    for g in circ.gates[:-1]:
        if g.kind == "F":
            U = embed_gate(fourier_gate(QQT_DIMS[g.qudits[0]]), QQT_DIMS, g.qudits).entries @ U
        else:
            U = hybrid_controlled_phase(QQT_DIMS, *g.qudits, g.sign).entries @ U
    return U


# --- line-oriented serialization -----------------------------------------
# ROT targets flip_rad axis_rad / DELAY seconds mask / GRAD
# targets are comma-joined 1-based spin numbers; mask is "*" for all
# couplings or comma-joined "i-j" pairs.


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def sequence_to_text(seq: PulseSequence) -> str:
    out = io.StringIO()
    for ev in seq.events:
        if ev.kind == "rot":
            t = ",".join(str(i + 1) for i in sorted(ev.targets))
            out.write(f"ROT {t} {_fmt(ev.flip)} {_fmt(ev.axis)}\n")
        elif ev.kind == "delay":
            if ev.coupling_mask is None:
                mask = "*"
            else:
                mask = ",".join(f"{a + 1}-{b + 1}" for a, b in sorted(ev.coupling_mask)) or "none"
            out.write(f"DELAY {_fmt(ev.duration)} {mask}\n")
        else:
            out.write("GRAD\n")
    return out.getvalue()


def sequence_from_text(text: str, params: SpinSystemParams) -> PulseSequence:
    events = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        tok = ln.split()
        if tok[0] == "ROT" and len(tok) == 4:
            targets = [int(s) - 1 for s in tok[1].split(",")]
            events.append(rot(targets, float(tok[2]), float(tok[3])))
        elif tok[0] == "DELAY" and len(tok) == 3:
            if tok[2] == "*":
                events.append(delay(float(tok[1])))
            elif tok[2] == "none":
                events.append(delay(float(tok[1]), mask=[]))
            else:
                mask = [tuple(int(v) - 1 for v in pair.split("-")) for pair in tok[2].split(",")]
                events.append(delay(float(tok[1]), mask=mask))
        elif tok[0] == "GRAD" and len(tok) == 1:
            events.append(grad())
        else:
            raise ValueError(f"bad sequence line: {ln!r}")
    return PulseSequence(tuple(events), params)

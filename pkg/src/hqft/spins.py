"""QQT and QQQQ spin systems: Hamiltonians, transitions, spectra, level embedding.

Two diagonal spin Hamiltonians are supported (all parameters in Hz):

* QQT: two spin-1/2 qubits and one spin-1 qutrit over dims (2, 2, 3).
  Energies are ``w1*m1 + w2*m2 + W3*m3 + Dq*(3*m3^2 - 2)/3 + couplings``
  with m1, m2 in {+1/2, -1/2} and m3 in {+1, 0, -1}.  The quadrupolar
  term is normalized so the two qutrit single-quantum lines sit at
  ``W3 + Dq`` and ``W3 - Dq``.
* QQQQ: four qubits over dims (2, 2, 2, 2) with chemical shifts
  ``w3 = W3 + Dq`` and ``w4 = W3 - Dq``, emulating the qutrit with the
  third and fourth qubits (digit map 0' -> 00, 1' -> 10, 2' -> 11).

Coupling terms enter as ``2 * J_ij * m_i * m_j`` so that the lines of the
i-th multiplet sit at ``w_i +- J_ik ...`` (a doublet separates by 2J);
with this convention the embedded QQQQ transition frequencies coincide
exactly with the QQT ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .operators import DensityMatrix, spin_generators
from .registers import QuditDims, as_dims, decode_index, encode_digits

QQT_DIMS = QuditDims((2, 2, 3))
QQQQ_DIMS = QuditDims((2, 2, 2, 2))

QQT_SPIN_LABELS = ("Q1", "Q2", "T")
QQQQ_SPIN_LABELS = ("q1", "q2", "q3", "q4")


@dataclass(frozen=True)
class SpinSystemParams:
    """Larmor frequencies, quadrupolar splitting, and scalar couplings (Hz).

    ``larmor`` holds the first two spins' frequencies; the qutrit (or the
    emulating pair) is described by ``omega3`` and ``dq``.  ``j`` is the
    symmetric coupling matrix: 3x3 for kind "QQT" (third row/column is the
    qutrit), 4x4 for kind "QQQQ".  The ``ideal`` flag asserts the emulator
    coupling pattern J13 = J14, J23 = J24, J34 = 0.
    """

    kind: str
    larmor: Tuple[float, float]
    omega3: float
    dq: float
    j: np.ndarray
    ideal: bool = False

    def __post_init__(self):
        if self.kind not in ("QQT", "QQQQ"):
            raise ValueError(f"kind must be 'QQT' or 'QQQQ', got {self.kind!r}")
        object.__setattr__(self, "larmor", tuple(float(v) for v in self.larmor))
        if len(self.larmor) != 2:
            raise ValueError("larmor lists the first two spins only")
        j = np.array(self.j, dtype=float)
        n = 3 if self.kind == "QQT" else 4
        if j.shape != (n, n):
            raise ValueError(f"coupling matrix must be {n}x{n} for kind {self.kind}")
        if not np.isfinite(j).all():
            raise ValueError("couplings must be finite")
        if np.abs(j - j.T).max() > 0:
            raise ValueError("coupling matrix must be symmetric")
        object.__setattr__(self, "j", j)
        if self.ideal and self.kind == "QQQQ":
            bad = []
            if j[0, 2] != j[0, 3]:
                bad.append(f"J13={j[0, 2]} != J14={j[0, 3]}")
            if j[1, 2] != j[1, 3]:
                bad.append(f"J23={j[1, 2]} != J24={j[1, 3]}")
            if j[2, 3] != 0.0:
                bad.append(f"J34={j[2, 3]} != 0")
            if bad:
                raise ValueError("ideal emulator pattern violated: " + "; ".join(bad))

    @property
    def dims(self) -> QuditDims:
        return QQT_DIMS if self.kind == "QQT" else QQQQ_DIMS

    @property
    def spin_labels(self) -> Tuple[str, ...]:
        return QQT_SPIN_LABELS if self.kind == "QQT" else QQQQ_SPIN_LABELS

    def shifts(self) -> Tuple[float, ...]:
        """Per-spin frequencies: (w1, w2, W3) for QQT, (w1, w2, W3+Dq, W3-Dq) for QQQQ."""
        if self.kind == "QQT":
            return (*self.larmor, self.omega3)
        return (*self.larmor, self.omega3 + self.dq, self.omega3 - self.dq)


def emulator_params(p: SpinSystemParams) -> SpinSystemParams:
    """Ideal four-qubit emulator of a QQT parameter set."""
    if p.kind != "QQT":
        raise ValueError("emulator_params expects QQT parameters")
    j12, j13, j23 = p.j[0, 1], p.j[0, 2], p.j[1, 2]
    j4 = np.array(
        [
            [0.0, j12, j13, j13],
            [j12, 0.0, j23, j23],
            [j13, j23, 0.0, 0.0],
            [j13, j23, 0.0, 0.0],
        ]
    )
    return SpinSystemParams("QQQQ", p.larmor, p.omega3, p.dq, j4, ideal=True)


def load_params(path) -> SpinSystemParams:
    """Read a spin-system config (JSON with kind/larmor/omega3_qutrit/dq/j/ideal)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    for key in ("kind", "larmor", "omega3_qutrit", "dq", "j"):
        if key not in raw:
            raise ValueError(f"config is missing required field {key!r}")
    return SpinSystemParams(
        kind=raw["kind"],
        larmor=tuple(raw["larmor"]),
        omega3=float(raw["omega3_qutrit"]),
        dq=float(raw["dq"]),
        j=np.array(raw["j"], dtype=float),
        ideal=bool(raw.get("ideal", False)),
    )


def save_params(p: SpinSystemParams, path, note: Optional[str] = None) -> None:
    doc = {
        "kind": p.kind,
        "larmor": list(p.larmor),
        "omega3_qutrit": p.omega3,
        "dq": p.dq,
        "j": p.j.tolist(),
        "ideal": p.ideal,
    }
    if note:
        doc["_note"] = note
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _projections(dims: QuditDims) -> List[np.ndarray]:
    """Per-qudit z-projection value of every digit: m = (d-1)/2 - digit."""
    out = []
    for d in dims:
        j = (d - 1) / 2
        out.append(j - np.arange(d))
    return out


def hamiltonian_diagonal(p: SpinSystemParams) -> np.ndarray:
    """Diagonal (in the product basis) of the spin Hamiltonian, in Hz."""
    dims = p.dims
    shifts = p.shifts()
    m_of = _projections(dims)
    n = len(dims)
    diag = np.zeros(dims.total_dim)
    for i in range(dims.total_dim):
        x = decode_index(i, dims)
        m = [m_of[q][x[q]] for q in range(n)]
        e = sum(shifts[q] * m[q] for q in range(n))
        for a in range(n):
            for b in range(a + 1, n):
                e += 2.0 * p.j[a, b] * m[a] * m[b]
        if p.kind == "QQT":
            # quadrupolar term: pins the two qutrit lines at W3 +- Dq
            e += p.dq * (3.0 * m[2] ** 2 - 2.0) / 3.0
        diag[i] = e
    return diag


def build_qqt_hamiltonian(p: SpinSystemParams) -> np.ndarray:
    """12-level diagonal QQT Hamiltonian (Hz)."""
    if p.kind != "QQT":
        raise ValueError("build_qqt_hamiltonian expects kind 'QQT'")
    return hamiltonian_diagonal(p)


def build_qqqq_hamiltonian(p: SpinSystemParams) -> np.ndarray:
    """16-level diagonal QQQQ Hamiltonian (Hz)."""
    if p.kind != "QQQQ":
        raise ValueError("build_qqqq_hamiltonian expects kind 'QQQQ'")
    return hamiltonian_diagonal(p)


@dataclass(frozen=True)
class TransitionLine:
    """A single-quantum transition between two levels (0-based indices).

    ``from_level`` is the higher-energy level; the frequency is its energy
    minus the lower level's, so it is nonnegative.
    """

    from_level: int
    to_level: int
    frequency: float
    intensity: float
    spin_label: str

    @property
    def level_pair(self) -> frozenset:
        return frozenset((self.from_level, self.to_level))


@dataclass(frozen=True)
class SpectrumLine:
    frequency: float
    intensity: float
    labels: Tuple[str, ...]


@dataclass(frozen=True)
class Spectrum:
    lines: Tuple[SpectrumLine, ...]

    def __len__(self):
        return len(self.lines)

    def frequencies(self) -> np.ndarray:
        return np.array([ln.frequency for ln in self.lines])


def enumerate_transitions(
    hdiag: np.ndarray, dims, labels: Optional[Sequence[str]] = None
) -> List[TransitionLine]:
    """All single-quantum transitions of a diagonal Hamiltonian.

    One line per unordered pair of levels whose digits differ in exactly
    one position by one unit.  The intensity is the squared lowering-
    operator matrix element of the flipped spin: 1 for a qubit, 2 for
    either qutrit step.
    """
    dims = as_dims(dims)
    hdiag = np.asarray(hdiag, dtype=float)
    if hdiag.shape != (dims.total_dim,):
        raise ValueError("Hamiltonian diagonal length does not match register")
    if labels is None:
        labels = tuple(f"s{q + 1}" for q in range(len(dims)))
    m_of = _projections(dims)
    lines = []
    D = dims.total_dim
    for i in range(D):
        xi = decode_index(i, dims)
        for k in range(i + 1, D):
            xk = decode_index(k, dims)
            diff = [q for q in range(len(dims)) if xi[q] != xk[q]]
            if len(diff) != 1:
                continue
            q = diff[0]
            if abs(xi[q] - xk[q]) != 1:
                continue
            d = dims[q]
            jspin = (d - 1) / 2
            m_hi = max(m_of[q][xi[q]], m_of[q][xk[q]])  # upper projection of the step
            intensity = jspin * (jspin + 1) - m_hi * (m_hi - 1)
            hi, lo = (i, k) if hdiag[i] >= hdiag[k] else (k, i)
            lines.append(
                TransitionLine(hi, lo, float(hdiag[hi] - hdiag[lo]), float(intensity), labels[q])
            )
    lines.sort(key=lambda t: (t.spin_label, t.from_level, t.to_level))
    return lines


def merge_lines(lines: Sequence[TransitionLine], tol_hz: float = 1e-6) -> Spectrum:
    """Merge transitions closer than tol_hz into spectral lines; intensities add."""
    if tol_hz <= 0:
        raise ValueError("merge tolerance must be positive")
    ordered = sorted(lines, key=lambda t: t.frequency)
    merged: List[SpectrumLine] = []
    for t in ordered:
        label = f"{t.spin_label}:{t.from_level + 1}-{t.to_level + 1}"
        if merged and t.frequency - merged[-1].frequency <= tol_hz:
            last = merged[-1]
            merged[-1] = SpectrumLine(
                last.frequency, last.intensity + t.intensity, last.labels + (label,)
            )
        else:
            merged.append(SpectrumLine(t.frequency, t.intensity, (label,)))
    return Spectrum(tuple(merged))


def spectrum_to_csv(spec: Spectrum) -> str:
    out = ["frequency_hz,intensity,labels"]
    for ln in spec.lines:
        out.append(f"{ln.frequency:.9f},{ln.intensity:.9f},{'|'.join(ln.labels)}")
    return "\n".join(out) + "\n"


# --- qutrit-into-two-qubits level embedding -------------------------------

# Qutrit digit -> (q3, q4) digits.  The third qubit realizes the 0'<->1'
# step and the fourth qubit the 1'<->2' step.
QUTRIT_PAIR_DIGITS: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 0), (1, 1))


def qqt_level_embedding() -> np.ndarray:
    """Injective map from the 12 QQT levels to the 16 QQQQ levels.

    Returns an integer array e with e[i] the QQQQ basis index of QQT basis
    index i; qubit digits map identically.
    """
    out = np.empty(12, dtype=int)
    for i in range(12):
        x1, x2, x3 = decode_index(i, QQT_DIMS)
        q3, q4 = QUTRIT_PAIR_DIGITS[x3]
        out[i] = encode_digits((x1, x2, q3, q4), QQQQ_DIMS)
    return out


def embedding_isometry() -> np.ndarray:
    """16x12 isometry whose columns are the embedded QQQQ basis vectors."""
    e = qqt_level_embedding()
    E = np.zeros((16, 12))
    for col, row in enumerate(e):
        E[row, col] = 1.0
    return E


def _swap34(i16: int) -> int:
    x1, x2, q3, q4 = decode_index(i16, QQQQ_DIMS)
    return encode_digits((x1, x2, q4, q3), QQQQ_DIMS)


def embedded_transition_map() -> List[Tuple[Tuple[int, int], Tuple[Tuple[int, int], ...]]]:
    """For every QQT single-quantum transition, the QQQQ transitions that
    realize it on the ideal emulator (0-based level pairs, sorted).

    A qubit flip maps to its embedded image plus, when the qutrit digit is
    1', the image with the emulating pair's digits swapped (the degenerate
    partner).  A qutrit step maps to the flip of its emulating qubit taken
    at both settings of the other pair qubit.
    """
    e = qqt_level_embedding()
    rows = []
    for i in range(12):
        xi = decode_index(i, QQT_DIMS)
        for k in range(i + 1, 12):
            xk = decode_index(k, QQT_DIMS)
            diff = [q for q in range(3) if xi[q] != xk[q]]
            if len(diff) != 1 or abs(xi[diff[0]] - xk[diff[0]]) != 1:
                continue
            q = diff[0]
            if q < 2:
                pair = (int(e[i]), int(e[k]))
                images = {tuple(sorted(pair))}
                if xi[2] == 1:  # 1' uses the asymmetric pair state; partner is its mirror
                    images.add(tuple(sorted((_swap34(pair[0]), _swap34(pair[1])))))
            else:
                lo3 = min(xi[2], xk[2])
                flip_q = 2 if lo3 == 0 else 3  # 0'<->1' flips q3, 1'<->2' flips q4
                other_q = 5 - flip_q
                images = set()
                for other_val in (0, 1):
                    digs_a = list(decode_index(int(e[i]), QQQQ_DIMS))
                    digs_b = list(decode_index(int(e[k]), QQQQ_DIMS))
                    digs_a[other_q] = digs_b[other_q] = other_val
                    a = encode_digits(digs_a, QQQQ_DIMS)
                    b = encode_digits(digs_b, QQQQ_DIMS)
                    images.add(tuple(sorted((a, b))))
            rows.append(((i, k), tuple(sorted(images))))
    rows.sort()
    return rows


# The same correspondence frozen as literal data, with the printed 1-based
# level numbering (levels ordered lexicographically by digits, most
# significant first).  A regression test checks the generator against it.
QQT_TO_EMULATOR_TRANSITIONS: Tuple[Tuple[Tuple[int, int], Tuple[Tuple[int, int], ...]], ...] = (
    # first qubit
    ((1, 7), ((1, 9),)),
    ((2, 8), ((2, 10), (3, 11))),
    ((3, 9), ((4, 12),)),
    ((4, 10), ((5, 13),)),
    ((5, 11), ((6, 14), (7, 15))),
    ((6, 12), ((8, 16),)),
    # second qubit
    ((1, 4), ((1, 5),)),
    ((2, 5), ((2, 6), (3, 7))),
    ((3, 6), ((4, 8),)),
    ((7, 10), ((9, 13),)),
    ((8, 11), ((10, 14), (11, 15))),
    ((9, 12), ((12, 16),)),
    # qutrit
    ((1, 2), ((1, 3), (2, 4))),
    ((2, 3), ((1, 2), (3, 4))),
    ((4, 5), ((5, 7), (6, 8))),
    ((5, 6), ((5, 6), (7, 8))),
    ((7, 8), ((9, 11), (10, 12))),
    ((8, 9), ((9, 10), (11, 12))),
    ((10, 11), ((13, 15), (14, 16))),
    ((11, 12), ((13, 14), (15, 16))),
)


def thermal_state(hdiag: np.ndarray, dims, epsilon: float) -> DensityMatrix:
    """High-temperature thermal state (1/D) * (I - eps * H / max|H|).

    A zero Hamiltonian (or eps = 0) gives the maximally mixed state.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    dims = as_dims(dims)
    hdiag = np.asarray(hdiag, dtype=float)
    D = dims.total_dim
    scale = np.abs(hdiag).max()
    if epsilon == 0 or scale == 0:
        return DensityMatrix(np.eye(D) / D, dims)
    pops = (1.0 - epsilon * hdiag / scale) / D
    return DensityMatrix(np.diag(pops.astype(complex)), dims)

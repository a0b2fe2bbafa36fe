"""Hybrid-qudit QFT toolkit: circuit synthesis, NMR emulator lowering,
tomography, and brute-force matrix verification."""

__version__ = "0.1.0"

from .registers import (
    DigitString,
    QuditDims,
    decode_index,
    encode_digits,
    mixed_radix_decode,
    mixed_radix_encode,
)
from .operators import (
    DensityMatrix,
    Unitary,
    apply,
    embed_gate,
    fourier_gate,
    hybrid_controlled_phase,
    rotation_gate,
    spin_generators,
)
from .qft import (
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
from .spins import (
    SpinSystemParams,
    Spectrum,
    TransitionLine,
    build_qqqq_hamiltonian,
    build_qqt_hamiltonian,
    embedded_transition_map,
    emulator_params,
    enumerate_transitions,
    hamiltonian_diagonal,
    load_params,
    merge_lines,
    qqt_level_embedding,
    thermal_state,
)
from .pulses import (
    PulseEvent,
    PulseSequence,
    apply_sequence,
    compile_qft,
    delay_for_angle,
    sequence_from_text,
    sequence_to_text,
    simulate_sequence,
    verify_pulse_qft,
)
from .tomography import (
    Readout,
    TomographyExperiment,
    fidelity,
    measurement_matrix,
    qqqq_experiment_set,
    qqt_experiment_set,
    reconstruct,
    simulate_readout,
)

__all__ = [
    "__version__",
    "QuditDims",
    "DigitString",
    "mixed_radix_encode",
    "mixed_radix_decode",
    "encode_digits",
    "decode_index",
    "Unitary",
    "DensityMatrix",
    "fourier_gate",
    "hybrid_controlled_phase",
    "embed_gate",
    "apply",
    "spin_generators",
    "rotation_gate",
    "GateDescriptor",
    "Circuit",
    "synthesize_qft",
    "circuit_unitary",
    "direct_qft_matrix",
    "digit_reversal_permutation",
    "verify_qft_equivalence",
    "circuit_to_text",
    "circuit_from_text",
    "SpinSystemParams",
    "TransitionLine",
    "Spectrum",
    "build_qqt_hamiltonian",
    "build_qqqq_hamiltonian",
    "hamiltonian_diagonal",
    "enumerate_transitions",
    "merge_lines",
    "qqt_level_embedding",
    "embedded_transition_map",
    "emulator_params",
    "thermal_state",
    "load_params",
    "PulseEvent",
    "PulseSequence",
    "delay_for_angle",
    "compile_qft",
    "simulate_sequence",
    "apply_sequence",
    "verify_pulse_qft",
    "sequence_to_text",
    "sequence_from_text",
    "TomographyExperiment",
    "Readout",
    "qqt_experiment_set",
    "qqqq_experiment_set",
    "simulate_readout",
    "reconstruct",
    "measurement_matrix",
    "fidelity",
]

//! Density-matrix simulation of small qubit registers driven by Nth-root
//! CNOT gates, operated as a quantum heat engine.
//!
//! Qubit A is the most significant tensor factor. Energies are in units of
//! the excited level `ε₂`; entropic quantities are in nats except
//! entanglement of formation, which is in bits.

pub mod correlations;
pub mod error;
pub mod linalg;
pub mod model;
pub mod protocol;
pub mod report;
pub mod sweep;
pub mod thermo;

pub use correlations::{
    classical_correlations, concurrence_eof, conditional_entropy, correlation_record,
    mutual_information, pearson, quantum_discord, quantum_discord_with, von_neumann_entropy,
    Bipartition, ConcurrenceEof, CorrelationRecord, DiscordSearch, MeasurementBasis,
};
pub use error::{Error, Result};
pub use linalg::{
    evolve, hermitian_eigen, hermitian_eigenvalues, kron, partial_trace, ComplexMatrix, C64,
};
pub use model::{
    build_system_hamiltonian, dephased_state, gibbs_state, initial_system_state, pure_state,
    DensityMatrix, InitConfig, QubitBMode, QubitHamiltonian,
};
pub use protocol::{
    embed_gate, nrcg_coefficients, nrcg_matrix, run_trace, CaseId, CompiledProtocol, Direction,
    NrcgGate, ProtocolSpec, StateTrace,
};
pub use report::{Cell, Table};
pub use sweep::{
    cnot_compare, grid_scan, pcc_report, temp_scan, thermal_baseline_scan, trace_report, AxisGrid,
    BPreparation, GridCell, GridScan, KtGrid, OutputFormat, SweepConfig,
};
pub use thermo::{delta_u, internal_energy, qubit_energies, EnergyRecord, Regime};

//! Energy bookkeeping along a trace: internal energies, heat, work,
//! heat-engine regime and efficiency.
//!
//! Sign conventions: the heat of qubit `j` is its energy change `ΔU_j`, and the
//! extractable work is `-ΔU_sys`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{DensityMatrix, QubitHamiltonian};
use crate::protocol::StateTrace;

/// Slack on the regime inequalities: `>= 0` means `>= -REGIME_TOL` and
/// `< 0` means `< -REGIME_TOL`.
pub const REGIME_TOL: f64 = 1e-12;

/// Index of qubit B, the only component whose hot role has defined
/// engine conditions.
pub const QUBIT_B: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    HeatEngine,
    Other,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::HeatEngine => "heat_engine",
            Regime::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub iteration: usize,
    pub u_sys: f64,
    pub u_per_qubit: Vec<f64>,
    pub du_sys: f64,
    pub du_per_qubit: Vec<f64>,
    pub work: f64,
    pub regime: Regime,
    pub efficiency: Option<f64>,
}

/// `Tr[rho H]`.
pub fn internal_energy(rho: &DensityMatrix, h: &ComplexMatrix) -> Result<f64> {
    energy_of_matrix(rho.matrix(), h)
}

pub(crate) fn energy_of_matrix(rho: &ComplexMatrix, h: &ComplexMatrix) -> Result<f64> {
    let n = rho.dim();
    if h.dim() != n {
        return Err(Error::invalid(format!(
            "Hamiltonian is {0}x{0} but state is {1}x{1}",
            h.dim(),
            n
        )));
    }
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += rho[(i, k)] * h[(k, i)];
        }
    }
    if acc.im.abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "energy has imaginary part {:.3e}; Hamiltonian not Hermitian?",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Per-qubit energies `Tr[rho_j H_j]` on the single-qubit marginals.
///
/// `H_j` is diagonal, so only the marginal populations are needed and they
/// are summed straight from the diagonal of `rho`.
pub fn qubit_energies(rho: &DensityMatrix, h: &QubitHamiltonian) -> Result<Vec<f64>> {
    let n = rho.n_qubits();
    let mut excited = vec![0.0; n];
    let mut total = 0.0;
    for (idx, z) in rho.matrix().diagonal().iter().enumerate() {
        total += z.re;
        for (q, e) in excited.iter_mut().enumerate() {
            if (idx >> (n - 1 - q)) & 1 == 1 {
                *e += z.re;
            }
        }
    }
    Ok(excited
        .into_iter()
        .map(|p1| h.eps1 * (total - p1) + h.eps2 * p1)
        .collect())
}

/// Qubit B is hot when its initial energy strictly exceeds every other
/// qubit's. Any other ordering, including ties, has no hot component.
pub fn hot_component(initial_energies: &[f64]) -> Option<usize> {
    let b = *initial_energies.get(QUBIT_B)?;
    let b_hottest = initial_energies
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != QUBIT_B)
        .all(|(_, &u)| b > u + REGIME_TOL);
    b_hottest.then_some(QUBIT_B)
}

/// Heat engine iff the hot qubit releases energy, every other qubit gains
/// (or keeps) energy, and the system as a whole loses energy.
pub fn classify_regime(rec: &EnergyRecord, hot_qubit: usize) -> Regime {
    let Some(&du_hot) = rec.du_per_qubit.get(hot_qubit) else {
        return Regime::Other;
    };
    let cold_ok = rec
        .du_per_qubit
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != hot_qubit)
        .all(|(_, &du)| du >= -REGIME_TOL);
    if cold_ok && du_hot < -REGIME_TOL && rec.du_sys < -REGIME_TOL {
        Regime::HeatEngine
    } else {
        Regime::Other
    }
}

/// `η = -W / ΔU_hot`, the fraction of heat released by the hot qubit that
/// leaves as work.
pub fn efficiency(rec: &EnergyRecord, hot_qubit: usize) -> Result<f64> {
    if rec.regime != Regime::HeatEngine {
        return Err(Error::State(format!(
            "iteration {} is not in the heat-engine regime",
            rec.iteration
        )));
    }
    let du_hot = *rec
        .du_per_qubit
        .get(hot_qubit)
        .ok_or_else(|| Error::invalid(format!("no qubit {hot_qubit}")))?;
    if du_hot == 0.0 {
        return Err(Error::UndefinedEfficiency);
    }
    Ok(-rec.work / du_hot)
}

/// Energy records for every state of a trace.
pub fn delta_u(
    trace: &StateTrace,
    h_sys: &ComplexMatrix,
    h_local: &QubitHamiltonian,
) -> Result<Vec<EnergyRecord>> {
    let first = trace
        .states
        .first()
        .ok_or_else(|| Error::invalid("empty trace"))?;
    let u0_sys = internal_energy(first, h_sys)?;
    let u0_q = qubit_energies(first, h_local)?;
    let hot = hot_component(&u0_q);

    trace
        .states
        .iter()
        .enumerate()
        .map(|(iteration, rho)| {
            let u_sys = internal_energy(rho, h_sys)?;
            let u_per_qubit = qubit_energies(rho, h_local)?;
            let du_per_qubit: Vec<f64> = u_per_qubit
                .iter()
                .zip(&u0_q)
                .map(|(u, u0)| u - u0)
                .collect();
            let du_sys = u_sys - u0_sys;
            let mut rec = EnergyRecord {
                iteration,
                u_sys,
                u_per_qubit,
                du_sys,
                du_per_qubit,
                work: -du_sys,
                regime: Regime::Other,
                efficiency: None,
            };
            if let Some(h) = hot {
                rec.regime = classify_regime(&rec, h);
                if rec.regime == Regime::HeatEngine {
                    rec.efficiency = Some(efficiency(&rec, h)?);
                }
            }
            Ok(rec)
        })
        .collect()
}

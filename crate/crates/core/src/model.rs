//! Hamiltonians and initial states.
//!
//! Energies are in units of the excited level `eps2` and temperatures are
//! carried as `k_B T` in the same units.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, kron_all, partial_trace, ComplexMatrix, C64};

/// Tolerance for Hermiticity and unit trace of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Slack allowed on angle ranges so that grid endpoints like `k * PI / n`
/// are accepted after rounding.
const ANGLE_SLACK: f64 = 1e-9;

/// Single-qubit Hamiltonian `diag(eps1, eps2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitHamiltonian {
    pub eps1: f64,
    pub eps2: f64,
}

impl Default for QubitHamiltonian {
    fn default() -> Self {
        QubitHamiltonian {
            eps1: 0.0,
            eps2: 1.0,
        }
    }
}

impl QubitHamiltonian {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        let h = QubitHamiltonian { eps1, eps2 };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps1.is_finite() && self.eps2.is_finite()) || self.eps2 <= self.eps1 {
            return Err(Error::invalid(format!(
                "excited level {} must lie above ground level {}",
                self.eps2, self.eps1
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[self.eps1, self.eps2])
    }
}

/// A validated quantum state on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMatrix, n_qubits: usize) -> Result<Self> {
        let rho = DensityMatrix { mat, n_qubits };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix obtained by unitary evolution of a valid state.
    pub(crate) fn from_evolution(mat: ComplexMatrix, n_qubits: usize) -> Self {
        debug_assert_eq!(mat.dim(), 1 << n_qubits);
        DensityMatrix { mat, n_qubits }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 16 || self.mat.dim() != 1 << self.n_qubits {
            return Err(Error::invalid(format!(
                "dimension {} does not match {} qubits",
                self.mat.dim(),
                self.n_qubits
            )));
        }
        let defect = self.mat.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::Consistency(format!(
                "state is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Consistency(format!("state trace is {tr}")));
        }
        let min_eig = hermitian_eigenvalues(&self.mat)?[0];
        if min_eig < -STATE_TOL {
            return Err(Error::Consistency(format!(
                "state has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.mat[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        s
    }

    /// Reduced state on the qubits in `keep` (ascending order in the result).
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let dims = vec![2; self.n_qubits];
        let mat = partial_trace(&self.mat, &dims, keep)?;
        Ok(DensityMatrix {
            mat,
            n_qubits: keep.len(),
        })
    }

    /// Diagonal populations.
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    /// Same populations, all coherences removed.
    pub fn dephased(&self) -> DensityMatrix {
        DensityMatrix {
            mat: ComplexMatrix::from_real_diag(&self.populations()),
            n_qubits: self.n_qubits,
        }
    }
}

/// How qubit B is prepared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum QubitBMode {
    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    Pure {
        theta: f64,
        phi: f64,
    },
    Gibbs {
        kt: f64,
    },
    /// Populations of the pure state at the same θ, coherences removed.
    Dephased {
        theta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitConfig {
    /// `k_B T` of qubits A and C.
    pub kt: f64,
    pub qubit_b: QubitBMode,
    pub n_qubits: usize,
}

impl InitConfig {
    pub fn validate(&self) -> Result<()> {
        check_kt(self.kt)?;
        if !(self.n_qubits == 2 || self.n_qubits == 3) {
            return Err(Error::invalid(format!(
                "only 2 or 3 qubits are supported, got {}",
                self.n_qubits
            )));
        }
        match self.qubit_b {
            QubitBMode::Pure { theta, phi } => {
                check_theta(theta)?;
                check_phi(phi)
            }
            QubitBMode::Gibbs { kt } => check_kt(kt),
            QubitBMode::Dephased { theta } => check_theta(theta),
        }
    }
}

fn check_kt(kt: f64) -> Result<()> {
    if !(kt.is_finite() && kt > 0.0) {
        return Err(Error::invalid(format!(
            "temperature must be positive, got {kt}"
        )));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
        return Err(Error::invalid(format!("theta {theta} outside [0, pi]")));
    }
    Ok(())
}

fn check_phi(phi: f64) -> Result<()> {
    if !(-ANGLE_SLACK..=2.0 * PI + ANGLE_SLACK).contains(&phi) {
        return Err(Error::invalid(format!("phi {phi} outside [0, 2pi]")));
    }
    Ok(())
}

/// Thermal state `e^{-H/kT}/Z` of a single qubit.
pub fn gibbs_state(h: &QubitHamiltonian, kt: f64) -> Result<DensityMatrix> {
    check_kt(kt)?;
    h.validate()?;
    // Shift by the ground energy so the weights never underflow to 0/0.
    let w_excited = (-(h.eps2 - h.eps1) / kt).exp();
    let z = 1.0 + w_excited;
    Ok(DensityMatrix {
        mat: ComplexMatrix::from_real_diag(&[1.0 / z, w_excited / z]),
        n_qubits: 1,
    })
}

pub fn pure_state(theta: f64, phi: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    check_phi(phi)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let psi = [C64::new(c, 0.0), C64::from_polar(s, phi)];
    Ok(DensityMatrix {
        mat: ComplexMatrix::outer(&psi, &psi)?,
        n_qubits: 1,
    })
}

pub fn dephased_state(theta: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(DensityMatrix {
        mat: ComplexMatrix::from_real_diag(&[c * c, s * s]),
        n_qubits: 1,
    })
}

pub fn qubit_b_state(mode: &QubitBMode, h: &QubitHamiltonian) -> Result<DensityMatrix> {
    match *mode {
        QubitBMode::Pure { theta, phi } => pure_state(theta, phi),
        QubitBMode::Gibbs { kt } => gibbs_state(h, kt),
        QubitBMode::Dephased { theta } => dephased_state(theta),
    }
}

/// Uncorrelated product state `rho_A ⊗ rho_B (⊗ rho_C)` with A and C thermal.
pub fn initial_system_state(cfg: &InitConfig, h: &QubitHamiltonian) -> Result<DensityMatrix> {
    cfg.validate()?;
    let thermal = gibbs_state(h, cfg.kt)?;
    let b = qubit_b_state(&cfg.qubit_b, h)?;
    initial_state_from_parts(&thermal, &b, cfg.n_qubits)
}

/// Product state with `thermal` on A (and C) and `b` on qubit B.
pub fn initial_state_from_parts(
    thermal: &DensityMatrix,
    b: &DensityMatrix,
    n_qubits: usize,
) -> Result<DensityMatrix> {
    if thermal.n_qubits() != 1 || b.n_qubits() != 1 {
        return Err(Error::invalid("constituent states must be single-qubit"));
    }
    let mat = match n_qubits {
        2 => kron_all(&[thermal.matrix(), b.matrix()])?,
        3 => kron_all(&[thermal.matrix(), b.matrix(), thermal.matrix()])?,
        n => {
            return Err(Error::invalid(format!(
                "only 2 or 3 qubits are supported, got {n}"
            )))
        }
    };
    Ok(DensityMatrix { mat, n_qubits })
}

/// Non-interacting `H_sys = Σ_j I ⊗ .. ⊗ H_j ⊗ .. ⊗ I`.
pub fn build_system_hamiltonian(h: &QubitHamiltonian, n_qubits: usize) -> Result<ComplexMatrix> {
    if !(n_qubits == 2 || n_qubits == 3) {
        return Err(Error::invalid(format!(
            "only 2 or 3 qubits are supported, got {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let diag: Vec<f64> = (0..dim)
        .map(|idx| {
            (0..n_qubits)
                .map(|q| {
                    if (idx >> (n_qubits - 1 - q)) & 1 == 1 {
                        h.eps2
                    } else {
                        h.eps1
                    }
                })
                .sum()
        })
        .collect();
    Ok(ComplexMatrix::from_real_diag(&diag))
}

use log::warn;

use super::Bipartition;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::model::DensityMatrix;

/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as rounding noise.
const CLAMP_TOL: f64 = 1e-10;
/// Eigenvalues below `-REJECT_TOL` indicate an invalid state.
const REJECT_TOL: f64 = 1e-8;

/// `-Σ λ ln λ` with `0 ln 0 = 0`.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigenvalues {
        if lam < -REJECT_TOL {
            return Err(Error::Consistency(format!(
                "eigenvalue {lam:.3e} is too negative for a density matrix"
            )));
        }
        if lam < -CLAMP_TOL {
            warn!("clamping eigenvalue {lam:.3e} to zero");
        }
        if lam > 0.0 {
            s -= lam * lam.ln();
        }
    }
    Ok(s)
}

pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    entropy_from_eigenvalues(&hermitian_eigenvalues(m)?)
}

/// Von Neumann entropy `-Tr[rho ln rho]` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// `I(X:Y) = S(X) + S(Y) - S(XY)`.
pub fn mutual_information(rho: &DensityMatrix, bp: &Bipartition) -> Result<f64> {
    bp.validate(rho.n_qubits())?;
    let sx = von_neumann_entropy(&rho.marginal(&bp.part_x)?)?;
    let sy = von_neumann_entropy(&rho.marginal(&bp.part_y)?)?;
    let sxy = von_neumann_entropy(rho)?;
    Ok(sx + sy - sxy)
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, kron, ComplexMatrix, C64};
use crate::model::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceEof {
    pub concurrence: f64,
    /// Entanglement of formation in bits.
    pub eof: f64,
}

fn sigma_y_sigma_y() -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let sy = ComplexMatrix::from_rows(&[vec![z, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), z]])
        .expect("2x2");
    kron(&sy, &sy)
}

/// Concurrence and entanglement of formation of a two-qubit state.
///
/// The eigenvalues of `rho * rho_tilde` are obtained as those of the
/// Hermitian `sqrt(rho) rho_tilde sqrt(rho)`, which has the same spectrum.
pub fn concurrence_eof(rho: &DensityMatrix) -> Result<ConcurrenceEof> {
    if rho.n_qubits() != 2 {
        return Err(Error::invalid(format!(
            "concurrence needs a 2-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    let yy = sigma_y_sigma_y();
    let flipped = yy.matmul(&rho.matrix().conj()).matmul(&yy);

    let (vals, vecs) = hermitian_eigen(rho.matrix())?;
    let roots: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sqrt_rho = vecs
        .matmul(&ComplexMatrix::from_real_diag(&roots))
        .matmul(&vecs.adjoint());
    let mut m = sqrt_rho.matmul(&flipped).matmul(&sqrt_rho);
    // Symmetrise away rounding before the Hermitian solve.
    m = (&m + &m.adjoint()).scale(C64::new(0.5, 0.0));

    let mut lambdas: Vec<f64> = hermitian_eigenvalues(&m)?
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);

    let tau = concurrence * concurrence;
    let x = (1.0 - (1.0 - tau).max(0.0).sqrt()) / 2.0;
    Ok(ConcurrenceEof {
        concurrence,
        eof: binary_entropy_bits(x),
    })
}

fn binary_entropy_bits(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

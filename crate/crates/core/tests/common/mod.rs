#![allow(dead_code)]

use nrcg_core::linalg::ComplexMatrix;
use nrcg_core::model::DensityMatrix;
use nrcg_core::C64;
use rand::Rng;

/// `G G† / Tr` for a complex Gaussian-like `G`, full rank almost surely.
pub fn random_state<R: Rng>(rng: &mut R, n_qubits: usize) -> DensityMatrix {
    let d = 1 << n_qubits;
    let g: Vec<C64> = (0..d * d)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_vec(g).unwrap();
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(C64::new(1.0 / tr, 0.0)), n_qubits).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.gen_range(-2.0..2.0), 0.0);
        for j in i + 1..dim {
            let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

pub fn ket(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, phi)]
}

pub fn projector(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::outer(v, v).unwrap()
}

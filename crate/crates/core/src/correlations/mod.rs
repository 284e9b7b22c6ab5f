//! Information-theoretic measures on bipartitions of a qubit register.
//!
//! Entropies, mutual information, discord and classical correlations are in
//! nats; entanglement of formation is in bits.

mod discord;
mod entanglement;
mod entropy;
mod pearson;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DensityMatrix;

pub use discord::{
    classical_correlations, conditional_entropy, quantum_discord, quantum_discord_with,
    DiscordSearch, MeasurementBasis,
};
pub use entanglement::{concurrence_eof, ConcurrenceEof};
pub use entropy::{entropy_from_eigenvalues, mutual_information, von_neumann_entropy};
pub use pearson::pearson;

const LABELS: [char; 3] = ['A', 'B', 'C'];

/// Ordered split `(X:Y)` of the register; measurement-based quantities
/// measure the second part `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub part_x: Vec<usize>,
    pub part_y: Vec<usize>,
}

impl Bipartition {
    pub fn new(part_x: &[usize], part_y: &[usize]) -> Self {
        let mut x = part_x.to_vec();
        let mut y = part_y.to_vec();
        x.sort_unstable();
        y.sort_unstable();
        Bipartition {
            part_x: x,
            part_y: y,
        }
    }

    pub fn swapped(&self) -> Self {
        Bipartition {
            part_x: self.part_y.clone(),
            part_y: self.part_x.clone(),
        }
    }

    /// Parses labels like `"AC:B"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (x, y) = text
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("bipartition {text:?} lacks ':'")))?;
        let idx = |part: &str| -> Result<Vec<usize>> {
            part.trim()
                .chars()
                .map(|c| {
                    LABELS
                        .iter()
                        .position(|&l| l == c.to_ascii_uppercase())
                        .ok_or_else(|| Error::invalid(format!("unknown qubit label {c:?}")))
                })
                .collect()
        };
        Ok(Bipartition::new(&idx(x)?, &idx(y)?))
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut all: Vec<usize> = self.part_x.iter().chain(&self.part_y).copied().collect();
        all.sort_unstable();
        let expected: Vec<usize> = (0..n_qubits).collect();
        if self.part_x.is_empty() || self.part_y.is_empty() || all != expected {
            return Err(Error::invalid(format!(
                "{self} is not a bipartition of {n_qubits} qubits"
            )));
        }
        Ok(())
    }

    /// `(A:B)` and its reverse for 2 qubits; `(AC:B)` and `(B:AC)` for 3.
    pub fn defaults(n_qubits: usize) -> Result<(Self, Self)> {
        let xy = match n_qubits {
            2 => Bipartition::new(&[0], &[1]),
            3 => Bipartition::new(&[0, 2], &[1]),
            n => {
                return Err(Error::invalid(format!(
                    "only 2 or 3 qubits are supported, got {n}"
                )))
            }
        };
        let yx = xy.swapped();
        Ok((xy, yx))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |p: &[usize]| -> String {
            p.iter()
                .map(|&q| LABELS.get(q).copied().unwrap_or('?'))
                .collect()
        };
        write!(f, "{}:{}", s(&self.part_x), s(&self.part_y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub iteration: usize,
    pub mutual_info: f64,
    pub discord_xy: f64,
    pub discord_yx: f64,
    pub cc_xy: f64,
    pub cc_yx: f64,
    /// Entanglement of formation, 2-qubit registers only.
    pub eof: Option<f64>,
}

/// All correlation measures of one state for the ordered pair `xy` and its
/// reverse.
pub fn correlation_record(
    iteration: usize,
    rho: &DensityMatrix,
    xy: &Bipartition,
    search: &DiscordSearch,
) -> Result<CorrelationRecord> {
    let yx = xy.swapped();
    let mutual_info = mutual_information(rho, xy)?;
    let discord_xy = quantum_discord_with(rho, xy, search)?;
    let discord_yx = quantum_discord_with(rho, &yx, search)?;
    let eof = if rho.n_qubits() == 2 {
        Some(concurrence_eof(rho)?.eof)
    } else {
        None
    };
    Ok(CorrelationRecord {
        iteration,
        mutual_info,
        discord_xy,
        discord_yx,
        cc_xy: (mutual_info - discord_xy).max(0.0),
        cc_yx: (mutual_info - discord_yx).max(0.0),
        eof,
    })
}

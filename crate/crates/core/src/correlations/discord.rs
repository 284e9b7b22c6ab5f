//! Quantum discord by numerical minimisation over projective measurements
//! on the second part of a bipartition.

use std::f64::consts::PI;

use log::debug;

use super::entropy::{matrix_entropy, mutual_information, von_neumann_entropy};
use super::Bipartition;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::DensityMatrix;

/// Outcomes less likely than this contribute nothing to the conditional
/// entropy.
const MIN_OUTCOME_PROB: f64 = 1e-14;
const PROB_SUM_TOL: f64 = 1e-10;
const CLAMP_LOG_THRESHOLD: f64 = 1e-8;
const MAX_REFINE_EVALS: usize = 20_000;

/// Local projective measurement, one `(θ, φ)` per measured qubit, in
/// ascending qubit order.
///
/// Each qubit is measured in `|u⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`,
/// `|v⟩ = e^{-iφ} sin(θ/2)|0⟩ - cos(θ/2)|1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    angles: Vec<(f64, f64)>,
}

impl MeasurementBasis {
    pub fn new(angles: Vec<(f64, f64)>) -> Result<Self> {
        if angles.is_empty() || angles.len() > 2 {
            return Err(Error::invalid("measurement acts on one or two qubits"));
        }
        for &(theta, phi) in &angles {
            if !(0.0..=PI).contains(&theta) || !(0.0..=2.0 * PI).contains(&phi) {
                return Err(Error::invalid(format!(
                    "measurement angles ({theta}, {phi}) out of range"
                )));
            }
        }
        Ok(MeasurementBasis { angles })
    }

    pub fn single(theta: f64, phi: f64) -> Result<Self> {
        Self::new(vec![(theta, phi)])
    }

    pub fn pair(theta: f64, phi: f64, theta2: f64, phi2: f64) -> Result<Self> {
        Self::new(vec![(theta, phi), (theta2, phi2)])
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    /// `(|u⟩, |v⟩)` for each measured qubit.
    pub fn qubit_vectors(&self) -> Vec<[[C64; 2]; 2]> {
        self.angles
            .iter()
            .map(|&(t, p)| basis_vectors(t, p))
            .collect()
    }

    fn flat_angles(&self) -> Vec<f64> {
        self.angles.iter().flat_map(|&(t, p)| [t, p]).collect()
    }
}

fn basis_vectors(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let u = [C64::new(c, 0.0), C64::from_polar(s, phi)];
    let v = [C64::from_polar(s, -phi), C64::new(-c, 0.0)];
    [u, v]
}

/// Product outcome vectors on the measured register, first measured qubit
/// most significant: `uu', uv', vu', vv'`.
fn outcome_vectors(flat_angles: &[f64]) -> Vec<Vec<C64>> {
    let mut outcomes: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]];
    for pair in flat_angles.chunks_exact(2) {
        let [u, v] = basis_vectors(pair[0], pair[1]);
        outcomes = outcomes
            .iter()
            .flat_map(|prefix| {
                [u, v].into_iter().map(move |w| {
                    prefix
                        .iter()
                        .flat_map(|&a| [a * w[0], a * w[1]])
                        .collect::<Vec<_>>()
                })
            })
            .collect();
    }
    outcomes
}

/// Index bookkeeping for contracting the measured part of a state.
struct Contraction<'a> {
    rho: &'a ComplexMatrix,
    dx: usize,
    dy: usize,
    /// `index[x * dy + y]` is the register index of `|x⟩_X |y⟩_Y`.
    index: Vec<usize>,
}

impl<'a> Contraction<'a> {
    fn new(rho: &'a DensityMatrix, bp: &Bipartition) -> Result<Self> {
        let n = rho.n_qubits();
        bp.validate(n)?;
        let place = |bits: usize, part: &[usize]| -> usize {
            part.iter()
                .enumerate()
                .map(|(k, &q)| ((bits >> (part.len() - 1 - k)) & 1) << (n - 1 - q))
                .sum()
        };
        let dx = 1usize << bp.part_x.len();
        let dy = 1usize << bp.part_y.len();
        let mut index = Vec::with_capacity(dx * dy);
        for x in 0..dx {
            for y in 0..dy {
                index.push(place(x, &bp.part_x) + place(y, &bp.part_y));
            }
        }
        Ok(Contraction {
            rho: rho.matrix(),
            dx,
            dy,
            index,
        })
    }

    /// Unnormalised conditional state `⟨w|_Y rho |w⟩_Y` on X.
    fn project(&self, w: &[C64]) -> ComplexMatrix {
        let (dx, dy) = (self.dx, self.dy);
        let mut sigma = ComplexMatrix::zeros(dx);
        for x in 0..dx {
            for xp in x..dx {
                let mut acc = C64::new(0.0, 0.0);
                for y in 0..dy {
                    let wy = w[y].conj();
                    if wy.re == 0.0 && wy.im == 0.0 {
                        continue;
                    }
                    let row = self.index[x * dy + y];
                    let mut inner = C64::new(0.0, 0.0);
                    for (yp, &wyp) in w.iter().enumerate() {
                        inner += self.rho[(row, self.index[xp * dy + yp])] * wyp;
                    }
                    acc += wy * inner;
                }
                sigma[(x, xp)] = acc;
                if xp != x {
                    sigma[(xp, x)] = acc.conj();
                }
            }
        }
        sigma
    }

    /// `Σ_j p_j S(rho_{X|j})` for the measurement with the given angles.
    fn conditional_entropy(&self, flat_angles: &[f64]) -> Result<f64> {
        let mut total_p = 0.0;
        let mut s = 0.0;
        for w in outcome_vectors(flat_angles) {
            let sigma = self.project(&w);
            let p = sigma.trace().re;
            total_p += p;
            if p < MIN_OUTCOME_PROB {
                continue;
            }
            s += p * matrix_entropy(&sigma.scale(C64::new(1.0 / p, 0.0)))?;
        }
        if (total_p - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Consistency(format!(
                "measurement probabilities sum to {total_p}"
            )));
        }
        Ok(s)
    }
}

/// Entropy of the unmeasured part after measuring `bp.part_y` in `basis`.
pub fn conditional_entropy(
    rho: &DensityMatrix,
    bp: &Bipartition,
    basis: &MeasurementBasis,
) -> Result<f64> {
    if basis.angles.len() != bp.part_y.len() {
        return Err(Error::invalid(format!(
            "basis measures {} qubits but {} has {} on the measured side",
            basis.angles.len(),
            bp,
            bp.part_y.len()
        )));
    }
    Contraction::new(rho, bp)?.conditional_entropy(&basis.flat_angles())
}

/// Two-stage search: a uniform angle grid followed by coordinate descent
/// from the best grid point with a halving step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordSearch {
    /// Grid step when one qubit is measured.
    pub grid_step_1q: f64,
    /// Grid step when two qubits are measured.
    pub grid_step_2q: f64,
    /// Refinement stops once the step drops below this many radians.
    pub min_step: f64,
    /// Skip the refinement stage entirely.
    pub grid_only: bool,
}

impl Default for DiscordSearch {
    fn default() -> Self {
        DiscordSearch {
            grid_step_1q: PI / 16.0,
            grid_step_2q: PI / 8.0,
            min_step: 1e-4,
            grid_only: false,
        }
    }
}

impl DiscordSearch {
    /// Grid-only search with the same step for one- and two-qubit
    /// measurements.
    pub fn dense_grid(step: f64) -> Self {
        DiscordSearch {
            grid_step_1q: step,
            grid_step_2q: step,
            min_step: step,
            grid_only: true,
        }
    }

    fn grid_axis(step: f64, upper: f64) -> Vec<f64> {
        let count = (upper / step).round().max(1.0) as usize + 1;
        (0..count)
            .map(|i| upper * i as f64 / (count - 1) as f64)
            .collect()
    }

    /// Minimum conditional entropy and the angles attaining it.
    fn minimise(&self, c: &Contraction<'_>, n_measured: usize) -> Result<(f64, Vec<f64>)> {
        let step = if n_measured == 1 {
            self.grid_step_1q
        } else {
            self.grid_step_2q
        };
        if step.is_nan() || step <= 0.0 {
            return Err(Error::invalid("discord grid step must be positive"));
        }
        let thetas = Self::grid_axis(step, PI);
        let phis = Self::grid_axis(step, 2.0 * PI);

        let mut best_f = f64::INFINITY;
        let mut best_x = Vec::new();
        let mut x = vec![0.0; 2 * n_measured];
        let mut idx = vec![0usize; 2 * n_measured];
        'grid: loop {
            for (k, &i) in idx.iter().enumerate() {
                x[k] = if k.is_multiple_of(2) {
                    thetas[i]
                } else {
                    phis[i]
                };
            }
            let f = c.conditional_entropy(&x)?;
            if f < best_f {
                best_f = f;
                best_x = x.clone();
            }
            // Odometer increment, last coordinate fastest.
            for k in (0..idx.len()).rev() {
                let len = if k % 2 == 0 { thetas.len() } else { phis.len() };
                idx[k] += 1;
                if idx[k] < len {
                    continue 'grid;
                }
                idx[k] = 0;
            }
            break;
        }
        if self.grid_only {
            return Ok((best_f, best_x));
        }

        let normalise = |k: usize, v: f64| {
            if k.is_multiple_of(2) {
                v.clamp(0.0, PI)
            } else {
                v.rem_euclid(2.0 * PI)
            }
        };
        let mut step = step;
        let mut evals = 0usize;
        while step >= self.min_step && evals < MAX_REFINE_EVALS {
            let mut improved = false;
            for k in 0..best_x.len() {
                for dir in [1.0, -1.0] {
                    let mut cand = best_x.clone();
                    cand[k] = normalise(k, cand[k] + dir * step);
                    let f = c.conditional_entropy(&cand)?;
                    evals += 1;
                    if f < best_f {
                        best_f = f;
                        best_x = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Ok((best_f, best_x))
    }
}

/// Discord `D(X:Y)` with the default search.
pub fn quantum_discord(rho: &DensityMatrix, bp: &Bipartition) -> Result<f64> {
    quantum_discord_with(rho, bp, &DiscordSearch::default())
}

/// `D(X:Y) = S(Y) - S(XY) + min_Π S(X|Π^Y)`, clamped at zero.
pub fn quantum_discord_with(
    rho: &DensityMatrix,
    bp: &Bipartition,
    search: &DiscordSearch,
) -> Result<f64> {
    let c = Contraction::new(rho, bp)?;
    let n_measured = bp.part_y.len();
    if !(1..=2).contains(&n_measured) {
        return Err(Error::invalid(format!(
            "discord needs one or two measured qubits, {bp} has {n_measured}"
        )));
    }
    let (min_cond, _) = search.minimise(&c, n_measured)?;
    let sy = von_neumann_entropy(&rho.marginal(&bp.part_y)?)?;
    let sxy = von_neumann_entropy(rho)?;
    let d = sy - sxy + min_cond;
    if d < -CLAMP_LOG_THRESHOLD {
        debug!("discord {d:.3e} for {bp} clamped to zero");
    }
    Ok(d.max(0.0))
}

/// `CC(X:Y) = I(X:Y) - D(X:Y)`, clamped at zero.
pub fn classical_correlations(rho: &DensityMatrix, bp: &Bipartition) -> Result<f64> {
    let mi = mutual_information(rho, bp)?;
    let d = quantum_discord(rho, bp)?;
    Ok((mi - d).max(0.0))
}

//! Nth-root CNOT gates, the Case 1 / Case 2 circuits built from them, and
//! iterated evolution of a system state under a circuit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{DensityMatrix, InitConfig};

pub const DEFAULT_ROOT: u32 = 15;
pub const DEFAULT_ITERATIONS_2Q: usize = 60;
pub const DEFAULT_ITERATIONS_3Q: usize = 150;

const QUBIT_LABELS: [char; 3] = ['A', 'B', 'C'];

/// Diagonal and off-diagonal entries `(s, p)` of the target-space block of
/// the Nth-root CNOT: `s = (1 + e^{iπ/N})/2`, `p = (1 - e^{iπ/N})/2`.
pub fn nrcg_coefficients(n_root: u32) -> Result<(C64, C64)> {
    if n_root == 0 {
        return Err(Error::invalid("root order N must be at least 1"));
    }
    if n_root == 1 {
        // Exact full CNOT, free of the rounding in e^{iπ}.
        return Ok((C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
    }
    let w = C64::from_polar(1.0, PI / f64::from(n_root));
    let half = C64::new(0.5, 0.0);
    Ok((half + 0.5 * w, half - 0.5 * w))
}

/// Which of the two qubits of a 4x4 gate is the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AControlsB,
    BControlsA,
}

/// Nth-root CNOT on two qubits in the `|AB⟩` basis.
pub fn nrcg_matrix(n_root: u32, direction: Direction) -> Result<ComplexMatrix> {
    let gate = match direction {
        Direction::AControlsB => NrcgGate::new(n_root, 0, 1)?,
        Direction::BControlsA => NrcgGate::new(n_root, 1, 0)?,
    };
    embed_gate(&gate, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NrcgGate {
    pub n_root: u32,
    pub control: usize,
    pub target: usize,
}

impl NrcgGate {
    pub fn new(n_root: u32, control: usize, target: usize) -> Result<Self> {
        if n_root == 0 {
            return Err(Error::invalid("root order N must be at least 1"));
        }
        if control == target {
            return Err(Error::invalid(format!(
                "control and target are both qubit {control}"
            )));
        }
        Ok(NrcgGate {
            n_root,
            control,
            target,
        })
    }
}

impl fmt::Display for NrcgGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |q: usize| QUBIT_LABELS.get(q).copied().unwrap_or('?');
        write!(f, "{}>{}", label(self.control), label(self.target))
    }
}

/// Lifts a gate to the full `2^n`-dimensional register (qubit 0 most
/// significant), acting as identity on the spectator qubit.
pub fn embed_gate(g: &NrcgGate, n_qubits: usize) -> Result<ComplexMatrix> {
    if g.control >= n_qubits || g.target >= n_qubits {
        return Err(Error::invalid(format!(
            "gate {g} does not fit a {n_qubits}-qubit register"
        )));
    }
    if g.control == g.target {
        return Err(Error::invalid("control and target collide"));
    }
    let (s, p) = nrcg_coefficients(g.n_root)?;
    let dim = 1usize << n_qubits;
    let control_mask = 1usize << (n_qubits - 1 - g.control);
    let target_mask = 1usize << (n_qubits - 1 - g.target);
    let mut u = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        if col & control_mask == 0 {
            u[(col, col)] = C64::new(1.0, 0.0);
        } else {
            u[(col, col)] = s;
            u[(col ^ target_mask, col)] = p;
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    /// Qubit A is only ever a control.
    Case1,
    /// Every qubit is control or target at least once per iteration.
    Case2,
}

impl CaseId {
    pub fn number(self) -> u8 {
        match self {
            CaseId::Case1 => 1,
            CaseId::Case2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(CaseId::Case1),
            2 => Ok(CaseId::Case2),
            _ => Err(Error::invalid(format!("case must be 1 or 2, got {n}"))),
        }
    }
}

/// Default per-iteration `(control, target)` pairs, applied left to right.
pub fn default_sequence(case: CaseId, n_qubits: usize) -> Result<Vec<(usize, usize)>> {
    match (case, n_qubits) {
        (CaseId::Case1, 2) => Ok(vec![(0, 1)]),
        (CaseId::Case2, 2) => Ok(vec![(0, 1), (1, 0)]),
        (CaseId::Case1, 3) => Ok(vec![(0, 1), (1, 2)]),
        (CaseId::Case2, 3) => Ok(vec![(0, 1), (1, 0), (1, 2), (2, 1)]),
        (_, n) => Err(Error::invalid(format!(
            "only 2 or 3 qubits are supported, got {n}"
        ))),
    }
}

/// Parses `"A>B,B>A"` style gate lists into `(control, target)` pairs.
pub fn parse_gate_sequence(text: &str) -> Result<Vec<(usize, usize)>> {
    let qubit = |c: &str| -> Result<usize> {
        match c.trim() {
            "A" | "a" => Ok(0),
            "B" | "b" => Ok(1),
            "C" | "c" => Ok(2),
            other => Err(Error::invalid(format!("unknown qubit label {other:?}"))),
        }
    };
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|tok| {
            let (c, t) = tok
                .split_once('>')
                .ok_or_else(|| Error::invalid(format!("gate {tok:?} is not of the form X>Y")))?;
            Ok((qubit(c)?, qubit(t)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub case_id: CaseId,
    pub n_qubits: usize,
    pub n_root: u32,
    pub gate_sequence: Vec<NrcgGate>,
}

impl ProtocolSpec {
    pub fn new(case_id: CaseId, n_qubits: usize, n_root: u32) -> Result<Self> {
        let pairs = default_sequence(case_id, n_qubits)?;
        let gate_sequence = pairs
            .into_iter()
            .map(|(c, t)| NrcgGate::new(n_root, c, t))
            .collect::<Result<_>>()?;
        Ok(ProtocolSpec {
            case_id,
            n_qubits,
            n_root,
            gate_sequence,
        })
    }

    /// Replaces the gate list. Without `allow_custom` the list must satisfy
    /// the structural rules of the chosen case.
    pub fn with_gate_sequence(
        mut self,
        pairs: &[(usize, usize)],
        allow_custom: bool,
    ) -> Result<Self> {
        self.gate_sequence = pairs
            .iter()
            .map(|&(c, t)| NrcgGate::new(self.n_root, c, t))
            .collect::<Result<_>>()?;
        if allow_custom {
            self.check_fits()?;
        } else {
            self.validate()?;
        }
        Ok(self)
    }

    /// Same circuit with a different root order.
    pub fn with_root(&self, n_root: u32) -> Result<Self> {
        let mut out = self.clone();
        out.n_root = n_root;
        for g in &mut out.gate_sequence {
            *g = NrcgGate::new(n_root, g.control, g.target)?;
        }
        Ok(out)
    }

    fn check_fits(&self) -> Result<()> {
        if !(self.n_qubits == 2 || self.n_qubits == 3) {
            return Err(Error::invalid(format!(
                "only 2 or 3 qubits are supported, got {}",
                self.n_qubits
            )));
        }
        if self.gate_sequence.is_empty() {
            return Err(Error::Validation("gate sequence is empty".into()));
        }
        for g in &self.gate_sequence {
            if g.control >= self.n_qubits || g.target >= self.n_qubits {
                return Err(Error::Validation(format!(
                    "gate {g} does not fit a {}-qubit register",
                    self.n_qubits
                )));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.check_fits()?;
        let case1_len = default_sequence(CaseId::Case1, self.n_qubits)?.len();
        match self.case_id {
            CaseId::Case1 => {
                if let Some(g) = self.gate_sequence.iter().find(|g| g.target == 0) {
                    return Err(Error::Validation(format!(
                        "Case 1 never targets qubit A, but the sequence contains {g}"
                    )));
                }
            }
            CaseId::Case2 => {
                for (q, label) in QUBIT_LABELS.iter().enumerate().take(self.n_qubits) {
                    if !self
                        .gate_sequence
                        .iter()
                        .any(|g| g.control == q || g.target == q)
                    {
                        return Err(Error::Validation(format!(
                            "Case 2 must involve every qubit, qubit {label} is idle"
                        )));
                    }
                }
                if self.gate_sequence.len() != 2 * case1_len {
                    return Err(Error::Validation(format!(
                        "Case 2 uses {} gates per iteration, got {}",
                        2 * case1_len,
                        self.gate_sequence.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn sequence_label(&self) -> String {
        self.gate_sequence
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Embedded gates of one iteration, in application order.
pub fn circuit_for(spec: &ProtocolSpec) -> Result<Vec<ComplexMatrix>> {
    spec.check_fits()?;
    spec.gate_sequence
        .iter()
        .map(|g| embed_gate(g, spec.n_qubits))
        .collect()
}

/// A protocol together with its precomputed one-iteration unitary.
#[derive(Debug, Clone)]
pub struct CompiledProtocol {
    spec: ProtocolSpec,
    step: ComplexMatrix,
    step_adjoint: ComplexMatrix,
}

impl CompiledProtocol {
    pub fn new(spec: ProtocolSpec) -> Result<Self> {
        let gates = circuit_for(&spec)?;
        let step = gates
            .iter()
            .fold(ComplexMatrix::identity(1 << spec.n_qubits), |acc, g| {
                g.matmul(&acc)
            });
        let step_adjoint = step.adjoint();
        Ok(CompiledProtocol {
            spec,
            step,
            step_adjoint,
        })
    }

    pub fn spec(&self) -> &ProtocolSpec {
        &self.spec
    }

    /// Unitary of one full iteration.
    pub fn step_unitary(&self) -> &ComplexMatrix {
        &self.step
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = self.step.matmul(rho.matrix()).matmul(&self.step_adjoint);
        DensityMatrix::from_evolution(m, rho.n_qubits())
    }

    pub fn run(&self, init: &DensityMatrix, iterations: usize) -> Result<StateTrace> {
        if init.n_qubits() != self.spec.n_qubits {
            return Err(Error::invalid(format!(
                "initial state has {} qubits, protocol needs {}",
                init.n_qubits(),
                self.spec.n_qubits
            )));
        }
        let mut states = Vec::with_capacity(iterations + 1);
        states.push(init.clone());
        for k in 0..iterations {
            let next = self.apply(&states[k]);
            states.push(next);
        }
        Ok(StateTrace {
            states,
            spec: self.spec.clone(),
            init: None,
        })
    }
}

/// States at iterations `0..=M`.
#[derive(Debug, Clone)]
pub struct StateTrace {
    pub states: Vec<DensityMatrix>,
    pub spec: ProtocolSpec,
    pub init: Option<InitConfig>,
}

impl StateTrace {
    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }

    pub fn with_init(mut self, init: InitConfig) -> Self {
        self.init = Some(init);
        self
    }
}

pub fn run_trace(
    init: &DensityMatrix,
    spec: &ProtocolSpec,
    iterations: usize,
) -> Result<StateTrace> {
    CompiledProtocol::new(spec.clone())?.run(init, iterations)
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "case1" | "Case1" => Ok(CaseId::Case1),
            "2" | "case2" | "Case2" => Ok(CaseId::Case2),
            other => Err(Error::invalid(format!("unknown case {other:?}"))),
        }
    }
}

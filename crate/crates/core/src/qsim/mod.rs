//! Minimal statevector simulator.
//!
//! Gates are 2x2 complex matrices (or a multi-controlled X) with arbitrary
//! control/anti-control sets, applied in place over the full amplitude array.
//! Basis convention: qubit `k` contributes bit `k` (value `2^k`) of the basis
//! index.

pub mod gates;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
pub use gates::Matrix2;

/// Unitarity tolerance enforced by the checked [`GateOp`] constructor.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Control polarity: fire on |1> (closed dot) or on |0> (open dot).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    One,
    Zero,
}

/// A conditioning qubit for a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    /// General single-qubit matrix. `unitary_checked` records whether the
    /// constructor verified unitarity.
    SingleQubit {
        matrix: Matrix2,
        unitary_checked: bool,
    },
    MultiControlledX,
}

/// One gate application: a kind, a target qubit, and a control set.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl GateOp {
    /// Single-qubit gate, verifying the matrix is unitary within 1e-12.
    pub fn single_qubit(matrix: Matrix2, target: usize) -> Result<Self> {
        let defect = gates::unitarity_defect(&matrix);
        if !defect.is_finite() || defect > UNITARITY_TOL {
            return Err(Error::Config(format!(
                "gate matrix on qubit {target} is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(GateOp {
            kind: GateKind::SingleQubit {
                matrix,
                unitary_checked: true,
            },
            target,
            controls: Vec::new(),
        })
    }

    /// Single-qubit gate without the unitarity check; the op records that it
    /// was not verified.
    pub fn single_qubit_unchecked(matrix: Matrix2, target: usize) -> Self {
        GateOp {
            kind: GateKind::SingleQubit {
                matrix,
                unitary_checked: false,
            },
            target,
            controls: Vec::new(),
        }
    }

    /// X on `target`, typically combined with controls.
    pub fn mcx(target: usize) -> Self {
        GateOp {
            kind: GateKind::MultiControlledX,
            target,
            controls: Vec::new(),
        }
    }

    /// Add a control firing on |1>.
    pub fn control_on(mut self, qubit: usize) -> Self {
        self.controls.push(Control {
            qubit,
            polarity: Polarity::One,
        });
        self
    }

    /// Add an anti-control firing on |0>.
    pub fn control_off(mut self, qubit: usize) -> Self {
        self.controls.push(Control {
            qubit,
            polarity: Polarity::Zero,
        });
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn unitary_checked(&self) -> bool {
        match self.kind {
            GateKind::SingleQubit {
                unitary_checked, ..
            } => unitary_checked,
            // A controlled X is a permutation, unitary by construction.
            GateKind::MultiControlledX => true,
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.target >= num_qubits {
            return Err(Error::Config(format!(
                "gate target {} out of range for {num_qubits} qubits",
                self.target
            )));
        }
        for (i, ctl) in self.controls.iter().enumerate() {
            if ctl.qubit >= num_qubits {
                return Err(Error::Config(format!(
                    "control qubit {} out of range for {num_qubits} qubits",
                    ctl.qubit
                )));
            }
            if ctl.qubit == self.target {
                return Err(Error::Config(format!(
                    "control qubit {} equals the gate target",
                    ctl.qubit
                )));
            }
            if self.controls[..i].iter().any(|c| c.qubit == ctl.qubit) {
                return Err(Error::Config(format!(
                    "duplicate control on qubit {}",
                    ctl.qubit
                )));
            }
        }
        Ok(())
    }

    /// Control mask and required-value mask for fast matching.
    fn control_masks(&self) -> (usize, usize) {
        let mut mask = 0usize;
        let mut want = 0usize;
        for ctl in &self.controls {
            mask |= 1 << ctl.qubit;
            if ctl.polarity == Polarity::One {
                want |= 1 << ctl.qubit;
            }
        }
        (mask, want)
    }
}

/// Histogram of sampled basis-state indices.
#[derive(Clone, Debug)]
pub struct MeasurementHistogram {
    shots: u64,
    counts: BTreeMap<usize, u64>,
}

impl MeasurementHistogram {
    /// Build from explicit counts; the total must match `shots`.
    pub fn from_counts(shots: u64, counts: BTreeMap<usize, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total != shots {
            return Err(Error::Config(format!(
                "histogram total {total} does not match shots {shots}"
            )));
        }
        Ok(MeasurementHistogram { shots, counts })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }
}

/// Full complex amplitude vector over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>.
    pub fn zeroed(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Computational basis state |index>.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::check_width(num_qubits)?;
        if index >= (1 << num_qubits) {
            return Err(Error::Config(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wrap an explicit amplitude vector (no normalization performed).
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_width(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(Error::Config(format!(
                "amplitude vector length {} does not match {num_qubits} qubits",
                amps.len()
            )));
        }
        Ok(StateVector { num_qubits, amps })
    }

    fn check_width(num_qubits: usize) -> Result<()> {
        if num_qubits == 0 || num_qubits > 26 {
            return Err(Error::Config(format!(
                "unsupported qubit count {num_qubits}"
            )));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Sum of |amp|^2 over basis indices accepted by `pred`.
    pub fn probability_where<F: Fn(usize) -> bool>(&self, pred: F) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Apply one gate in place.
    ///
    /// Amplitude pairs whose indices differ only in the target bit are mixed
    /// by the 2x2 matrix (or swapped, for a controlled X) exactly when every
    /// control matches its polarity; all other amplitudes are untouched.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let tbit = 1 << gate.target;
        let (cmask, cwant) = gate.control_masks();
        match &gate.kind {
            GateKind::SingleQubit { matrix, .. } => {
                for i in 0..self.amps.len() {
                    if i & tbit != 0 || i & cmask != cwant {
                        continue;
                    }
                    let j = i | tbit;
                    let a = self.amps[i];
                    let b = self.amps[j];
                    self.amps[i] = matrix[0][0] * a + matrix[0][1] * b;
                    self.amps[j] = matrix[1][0] * a + matrix[1][1] * b;
                }
            }
            GateKind::MultiControlledX => {
                for i in 0..self.amps.len() {
                    if i & tbit != 0 || i & cmask != cwant {
                        continue;
                    }
                    self.amps.swap(i, i | tbit);
                }
            }
        }
        Ok(())
    }

    /// Apply gates in list order (matrix product read right to left).
    pub fn apply_circuit(&mut self, steps: &[GateOp]) -> Result<()> {
        for gate in steps {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Draw `shots` basis indices from the |amp|^2 distribution.
    ///
    /// Inverse-CDF sampling over cumulative probabilities with a ChaCha8
    /// stream; identical seeds give identical histograms.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<MeasurementHistogram> {
        if shots == 0 {
            return Err(Error::Config("shots must be positive".into()));
        }
        let total = self.norm_sqr();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::Numeric(format!(
                "cannot sample an unnormalized state (|amp|^2 sums to {total})"
            )));
        }
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = move || {
            let r: f64 = rng.gen::<f64>() * acc;
            cumulative
                .partition_point(|&c| c <= r)
                .min(self.amps.len() - 1)
        };
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        if self.amps.len() <= 1 << 20 {
            let mut dense = vec![0u64; self.amps.len()];
            for _ in 0..shots {
                dense[draw()] += 1;
            }
            for (idx, &c) in dense.iter().enumerate() {
                if c > 0 {
                    counts.insert(idx, c);
                }
            }
        } else {
            for _ in 0..shots {
                *counts.entry(draw()).or_insert(0) += 1;
            }
        }
        Ok(MeasurementHistogram { shots, counts })
    }
}

/// Post-selected block of a circuit as an explicit dense matrix.
///
/// Applies the circuit to every basis state passing `col_filter` and collects
/// output amplitudes at rows passing `row_filter`. Row and column order is
/// ascending basis index. Refused above 12 qubits.
pub fn extract_block<R, C>(
    circuit: &[GateOp],
    num_qubits: usize,
    row_filter: R,
    col_filter: C,
) -> Result<Vec<Vec<Complex64>>>
where
    R: Fn(usize) -> bool,
    C: Fn(usize) -> bool,
{
    if num_qubits > 12 {
        return Err(Error::Config(format!(
            "extract_block refused at {num_qubits} qubits (limit 12)"
        )));
    }
    let dim = 1usize << num_qubits;
    let rows: Vec<usize> = (0..dim).filter(|&i| row_filter(i)).collect();
    let cols: Vec<usize> = (0..dim).filter(|&i| col_filter(i)).collect();
    let mut block = vec![vec![Complex64::new(0.0, 0.0); cols.len()]; rows.len()];
    for (jc, &col) in cols.iter().enumerate() {
        let mut state = StateVector::basis(num_qubits, col)?;
        state.apply_circuit(circuit)?;
        for (ir, &row) in rows.iter().enumerate() {
            block[ir][jc] = state.amp(row);
        }
    }
    Ok(block)
}

//! Circuit builders for the three stages of one transport time step:
//! absorption-and-scattering (an LCU pair of single-qubit unitaries on the
//! direction qubit), absorption-and-emission (source injection via two
//! ancillas), and right/left propagation (controlled cyclic shifts of the
//! lattice register).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{gates, GateKind, GateOp, Matrix2};

/// Register layout over `n + 5` qubits.
///
/// Qubit `k` contributes bit `k` of the basis index: lattice bits occupy
/// `0..n` (site index), then the direction qubit `d`, the switching qubit
/// `s`, and three ancillas `a0, a1, a2`. With `a = s = 0` the `d = 0` block
/// holds the +mu intensities and `d = 1` the -mu intensities; with `a = 0`,
/// `s = 1` the two blocks hold the half-weighted sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    n: usize,
}

/// Transport direction; `Plus` travels toward increasing site index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

impl QubitLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n + 5 > 26 {
            return Err(Error::Config(format!(
                "lattice qubit count {n} out of supported range"
            )));
        }
        Ok(QubitLayout { n })
    }

    pub fn lattice_qubits(&self) -> usize {
        self.n
    }

    pub fn num_qubits(&self) -> usize {
        self.n + 5
    }

    pub fn num_sites(&self) -> usize {
        1 << self.n
    }

    pub fn lattice(&self, k: usize) -> usize {
        debug_assert!(k < self.n);
        k
    }

    pub fn direction(&self) -> usize {
        self.n
    }

    pub fn switching(&self) -> usize {
        self.n + 1
    }

    pub fn ancilla(&self, j: usize) -> usize {
        debug_assert!(j < 3);
        self.n + 2 + j
    }

    /// Basis index from register fields.
    pub fn index(&self, ancilla: usize, s: usize, d: usize, site: usize) -> usize {
        debug_assert!(ancilla < 8 && s < 2 && d < 2 && site < self.num_sites());
        (((ancilla << 1 | s) << 1 | d) << self.n) | site
    }

    /// Index holding the intensity amplitude for `dir` at `site` (a = 0, s = 0).
    pub fn intensity_index(&self, dir: Direction, site: usize) -> usize {
        self.index(0, 0, if dir == Direction::Plus { 0 } else { 1 }, site)
    }

    /// Index holding the source amplitude for `dir` at `site` (a = 0, s = 1).
    pub fn source_index(&self, dir: Direction, site: usize) -> usize {
        self.index(0, 1, if dir == Direction::Plus { 0 } else { 1 }, site)
    }

    pub fn ancilla_bits(&self, index: usize) -> usize {
        (index >> (self.n + 2)) & 0b111
    }

    /// True when all three ancilla bits are zero.
    pub fn in_postselected_sector(&self, index: usize) -> bool {
        self.ancilla_bits(index) == 0
    }

    pub fn site_of(&self, index: usize) -> usize {
        index & (self.num_sites() - 1)
    }

    pub fn direction_bit(&self, index: usize) -> usize {
        (index >> self.n) & 1
    }

    pub fn switching_bit(&self, index: usize) -> usize {
        (index >> (self.n + 1)) & 1
    }
}

/// Constants of the LCU decomposition of the collision matrix.
///
/// The collision matrix `[[a0, a1], [a1, a0]]` (acting on the direction
/// qubit) is the average of two unitaries `C1, C2 = e^{+-i alpha1} RX(+-beta1)`
/// whose entries are `a0 +- i b0/2` and `a1 +- i b1/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LcuParams {
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl LcuParams {
    /// Collision matrix `[[a0, a1], [a1, a0]]`.
    pub fn collision_matrix(&self) -> [[f64; 2]; 2] {
        [[self.a0, self.a1], [self.a1, self.a0]]
    }

    /// First unitary reconstructed from the angles: `e^{i alpha1} RX(beta1)`.
    pub fn c1(&self) -> Matrix2 {
        phase_rx(self.alpha1, self.beta1)
    }

    /// Second unitary: `e^{i alpha2} RX(beta2)`.
    pub fn c2(&self) -> Matrix2 {
        phase_rx(self.alpha2, self.beta2)
    }
}

fn phase_rx(alpha: f64, beta: f64) -> Matrix2 {
    let phase = Complex64::from_polar(1.0, alpha);
    let m = gates::rx(beta);
    [
        [phase * m[0][0], phase * m[0][1]],
        [phase * m[1][0], phase * m[1][1]],
    ]
}

/// Solve for the LCU constants and rotation angles.
///
/// Requires both collision eigenvalues `1 - kappa*dt + sigma*dt` and
/// `1 - kappa*dt` to lie in [-1, 1]; outside that range the companion
/// square roots turn complex and no single-qubit unitary pair realizes the
/// decomposition, so the configuration is rejected.
pub fn compute_lcu_params(kappa: f64, sigma: f64, dt: f64) -> Result<LcuParams> {
    if !(kappa.is_finite() && sigma.is_finite() && dt.is_finite()) || dt <= 0.0 {
        return Err(Error::Config(
            "kappa, sigma, dt must be finite with dt > 0".into(),
        ));
    }
    let lambda_plus = 1.0 - kappa * dt + sigma * dt;
    let lambda_minus = 1.0 - kappa * dt;
    if lambda_plus.abs() > 1.0 || lambda_minus.abs() > 1.0 {
        return Err(Error::Config(format!(
            "LCU decomposition requires real companion constants, i.e. both \
             1 - kappa*dt + sigma*dt = {lambda_plus} and 1 - kappa*dt = \
             {lambda_minus} in [-1, 1]; reduce dt or the coefficients"
        )));
    }
    let s_plus = (1.0 - lambda_plus * lambda_plus).max(0.0).sqrt();
    let s_minus = (1.0 - lambda_minus * lambda_minus).max(0.0).sqrt();
    // Eigenphases of C1 on the symmetric/antisymmetric eigenvectors.
    let theta_plus = s_plus.atan2(lambda_plus);
    let theta_minus = s_minus.atan2(lambda_minus);
    let alpha1 = (theta_plus + theta_minus) / 2.0;
    let beta1 = theta_minus - theta_plus;
    Ok(LcuParams {
        a0: 1.0 - kappa * dt + sigma * dt / 2.0,
        a1: sigma * dt / 2.0,
        b0: s_plus + s_minus,
        b1: s_plus - s_minus,
        alpha1,
        alpha2: -alpha1,
        beta1,
        beta2: -beta1,
    })
}

fn unitary(matrix: Matrix2, target: usize) -> GateOp {
    GateOp::single_qubit(matrix, target).expect("builder matrices are unitary")
}

/// Absorption-and-scattering stage.
///
/// H on a0, then the C1 gate block (X, P(alpha1), X, P(alpha1), RX(beta1)) on
/// the direction qubit anti-controlled on s and a0, the C2 block controlled
/// on a0 instead, and a closing H on a0. The XP(alpha)XP(alpha) quartet is a
/// controlled global phase `e^{i alpha}` kept as literal gates. Post-selected
/// on a = 000, the s = 0 sector is multiplied by the collision matrix and the
/// s = 1 sector passes through unchanged.
pub fn build_absorption_scattering(layout: &QubitLayout, params: &LcuParams) -> Vec<GateOp> {
    let d = layout.direction();
    let s = layout.switching();
    let a0 = layout.ancilla(0);
    let mut steps = Vec::with_capacity(12);
    steps.push(unitary(gates::h(), a0));
    for (alpha, beta, a0_polarity_one) in [
        (params.alpha1, params.beta1, false),
        (params.alpha2, params.beta2, true),
    ] {
        for matrix in [
            gates::x(),
            gates::p(alpha),
            gates::x(),
            gates::p(alpha),
            gates::rx(beta),
        ] {
            let gate = unitary(matrix, d).control_off(s);
            steps.push(if a0_polarity_one {
                gate.control_on(a0)
            } else {
                gate.control_off(a0)
            });
        }
    }
    steps.push(unitary(gates::h(), a0));
    steps
}

/// Absorption-and-emission stage.
///
/// H on a1 and a2; X on s for (a1, a2) = (1, 0); X then Z on s for
/// (a1, a2) = (1, 1); closing H on a1 and a2. Post-selected on a = 000 this
/// adds the source block into the intensity block and halves everything:
/// (v, src) -> (v + src, src) / 2.
pub fn build_absorption_emission(layout: &QubitLayout) -> Vec<GateOp> {
    let s = layout.switching();
    let a1 = layout.ancilla(1);
    let a2 = layout.ancilla(2);
    vec![
        unitary(gates::h(), a1),
        unitary(gates::h(), a2),
        GateOp::mcx(s).control_on(a1).control_off(a2),
        GateOp::mcx(s).control_on(a1).control_on(a2),
        unitary(gates::z(), s).control_on(a1).control_on(a2),
        unitary(gates::h(), a1),
        unitary(gates::h(), a2),
    ]
}

/// Right/left propagation stage with periodic boundaries.
///
/// A cyclic increment of the lattice register (multi-controlled X ladder,
/// most-significant carry first) fires on d = 0, s = 0; a cyclic decrement
/// (the same ladder with borrow anti-controls) fires on d = 1, s = 0. The
/// s = 1 source sector is untouched.
pub fn build_propagation(layout: &QubitLayout) -> Vec<GateOp> {
    let n = layout.lattice_qubits();
    let d = layout.direction();
    let s = layout.switching();
    let mut steps = Vec::with_capacity(2 * n);
    // Increment: bit k flips when lattice bits 0..k are all 1.
    for k in (0..n).rev() {
        let mut gate = GateOp::mcx(layout.lattice(k));
        for low in 0..k {
            gate = gate.control_on(layout.lattice(low));
        }
        steps.push(gate.control_off(d).control_off(s));
    }
    // Decrement: bit k flips when lattice bits 0..k are all 0 (borrow).
    for k in (0..n).rev() {
        let mut gate = GateOp::mcx(layout.lattice(k));
        for low in 0..k {
            gate = gate.control_off(layout.lattice(low));
        }
        steps.push(gate.control_on(d).control_off(s));
    }
    steps
}

/// As-emitted gate tallies; multi-controlled X gates are not decomposed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub total: usize,
    pub single_qubit: usize,
    pub multi_controlled_x: usize,
    /// Gates carrying at least one control.
    pub controlled: usize,
}

pub fn gate_count(steps: &[GateOp]) -> GateCounts {
    let mut counts = GateCounts::default();
    for gate in steps {
        counts.total += 1;
        match gate.kind() {
            GateKind::SingleQubit { .. } => counts.single_qubit += 1,
            GateKind::MultiControlledX => counts.multi_controlled_x += 1,
        }
        if !gate.controls().is_empty() {
            counts.controlled += 1;
        }
    }
    counts
}

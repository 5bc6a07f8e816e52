//! Physical model and quantum time-stepping driver.
//!
//! Couples the classical lattice fields to the statevector pipeline: encode
//! by direct amplitude injection, run the three circuit stages, then decode
//! either from exact amplitudes or from a measurement histogram.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{
    build_absorption_emission, build_absorption_scattering, build_propagation,
    compute_lcu_params, Direction, LcuParams, QubitLayout,
};
use crate::error::{Error, Result};
use crate::qsim::{GateOp, MeasurementHistogram, StateVector};

/// How each time step recovers the field from the evolved state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMode {
    /// Read amplitudes directly from the statevector (simulator privilege).
    Exact,
    /// Estimate amplitudes from a seeded measurement histogram.
    Sampled,
}

/// One piecewise-constant source segment on [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceSegment {
    pub x_lo: f64,
    pub x_hi: f64,
    pub value: f64,
}

/// Piecewise-constant emission source, identical for both directions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub segments: Vec<SourceSegment>,
}

impl SourceSpec {
    pub fn new(segments: Vec<SourceSegment>) -> Result<Self> {
        let spec = SourceSpec { segments };
        spec.validate()?;
        Ok(spec)
    }

    /// Single segment of strength `value` on (1/4, 3/4).
    pub fn centered(value: f64) -> Self {
        SourceSpec {
            segments: vec![SourceSegment {
                x_lo: 0.25,
                x_hi: 0.75,
                value,
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for seg in &self.segments {
            if !(seg.x_lo.is_finite() && seg.x_hi.is_finite() && seg.value.is_finite()) {
                return Err(Error::Config("source segment must be finite".into()));
            }
            if seg.x_lo < 0.0 || seg.x_hi > 1.0 || seg.x_lo >= seg.x_hi {
                return Err(Error::Config(format!(
                    "source segment ({}, {}) must satisfy 0 <= lo < hi <= 1",
                    seg.x_lo, seg.x_hi
                )));
            }
        }
        let mut sorted: Vec<_> = self.segments.iter().collect();
        sorted.sort_by(|a, b| a.x_lo.total_cmp(&b.x_lo));
        for pair in sorted.windows(2) {
            if pair[1].x_lo < pair[0].x_hi {
                return Err(Error::Config(format!(
                    "source segments ({}, {}) and ({}, {}) overlap",
                    pair[0].x_lo, pair[0].x_hi, pair[1].x_lo, pair[1].x_hi
                )));
            }
        }
        Ok(())
    }

    /// Segment value containing `x`, or 0 if none does.
    pub fn value_at(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .find(|seg| seg.x_lo < x && x < seg.x_hi)
            .map(|seg| seg.value)
            .unwrap_or(0.0)
    }
}

/// Physical and discretization parameters for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RteConfig {
    /// Extinction coefficient (absorption + out-scattering), 1/time.
    pub kappa: f64,
    /// Isotropic in-scattering gain, 1/time.
    pub sigma: f64,
    /// Direction cosine of the two transport directions.
    pub mu: f64,
    /// Signal speed.
    pub c: f64,
    /// Lattice qubit count; the lattice has 2^n sites.
    pub n: usize,
    /// Time step.
    pub dt: f64,
    pub source: SourceSpec,
    pub steps: usize,
    pub mode: StepMode,
    pub shots: u64,
    pub seed: u64,
}

impl RteConfig {
    /// Grid spacing; fixed to c * mu * dt.
    pub fn dx(&self) -> f64 {
        self.c * self.mu * self.dt
    }

    pub fn num_sites(&self) -> usize {
        1 << self.n
    }

    pub fn layout(&self) -> Result<QubitLayout> {
        QubitLayout::new(self.n)
    }

    pub fn lcu_params(&self) -> Result<LcuParams> {
        compute_lcu_params(self.kappa, self.sigma, self.dt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.sigma.is_finite()) || self.kappa < 0.0 || self.sigma < 0.0
        {
            return Err(Error::Config("kappa and sigma must be finite and >= 0".into()));
        }
        if !(self.mu.is_finite() && self.c.is_finite()) || self.mu <= 0.0 || self.c <= 0.0 {
            return Err(Error::Config("mu and c must be finite and > 0".into()));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::Config("dt must be finite and > 0".into()));
        }
        self.source.validate()?;
        self.layout()?;
        self.lcu_params()?;
        if self.mode == StepMode::Sampled && self.shots == 0 {
            return Err(Error::Config("sampled mode requires shots > 0".into()));
        }
        Ok(())
    }
}

/// Per-site intensities and sources on M sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeField {
    pub i_plus: Vec<f64>,
    pub i_minus: Vec<f64>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
}

impl LatticeField {
    pub fn new(
        i_plus: Vec<f64>,
        i_minus: Vec<f64>,
        s_plus: Vec<f64>,
        s_minus: Vec<f64>,
    ) -> Result<Self> {
        let m = i_plus.len();
        if m == 0 || i_minus.len() != m || s_plus.len() != m || s_minus.len() != m {
            return Err(Error::Config("field arrays must share a nonzero length".into()));
        }
        Ok(LatticeField {
            i_plus,
            i_minus,
            s_plus,
            s_minus,
        })
    }

    /// Zero intensity over the given sources.
    pub fn dark(s_plus: Vec<f64>, s_minus: Vec<f64>) -> Result<Self> {
        let m = s_plus.len();
        Self::new(vec![0.0; m], vec![0.0; m], s_plus, s_minus)
    }

    pub fn num_sites(&self) -> usize {
        self.i_plus.len()
    }

    /// Sum of I+ and I- over all sites.
    pub fn total_intensity(&self) -> f64 {
        self.i_plus.iter().sum::<f64>() + self.i_minus.iter().sum::<f64>()
    }
}

/// A lattice field injected into the quantum register.
#[derive(Clone, Debug)]
pub struct EncodedState {
    pub state: StateVector,
    /// Norm of the raw classical vector (I+, I-, dt S+/2, dt S-/2).
    pub norm_phi: f64,
}

/// Per-step health metrics of the quantum pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// Probability of finding all three ancillas in |0> after the step.
    pub success_probability: f64,
    /// Encoding norm used by the step's decode rescaling.
    pub norm_phi: f64,
}

/// Time series produced by one solver run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub initial: LatticeField,
    /// One field per completed step.
    pub steps: Vec<LatticeField>,
    /// One entry per step for quantum runs; empty for classical runs.
    pub diagnostics: Vec<StepDiagnostics>,
}

impl RunOutput {
    pub fn final_field(&self) -> &LatticeField {
        self.steps.last().unwrap_or(&self.initial)
    }

    /// Field after `step` steps; step 0 is the initial field.
    pub fn field_at_step(&self, step: usize) -> Option<&LatticeField> {
        if step == 0 {
            Some(&self.initial)
        } else {
            self.steps.get(step - 1)
        }
    }
}

/// Sample the source at cell centers x_i = (i + 1/2) dx.
pub fn discretize_source(spec: &SourceSpec, n: usize, dx: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    let m = 1usize << n;
    let values: Vec<f64> = (0..m)
        .map(|i| spec.value_at((i as f64 + 0.5) * dx))
        .collect();
    Ok((values.clone(), values))
}

/// Zero-intensity field over the discretized source of `config`.
pub fn initial_field(config: &RteConfig) -> Result<LatticeField> {
    let (s_plus, s_minus) = discretize_source(&config.source, config.n, config.dx())?;
    LatticeField::dark(s_plus, s_minus)
}

/// Inject a field into a fresh (n + 5)-qubit state by direct amplitude
/// placement: intensities at (a=0, s=0), half-weighted sources at (a=0, s=1),
/// everything scaled by the vector norm.
pub fn encode(field: &LatticeField, dt: f64) -> Result<EncodedState> {
    let m = field.num_sites();
    if !m.is_power_of_two() || m < 2 {
        return Err(Error::Config(format!(
            "field length {m} is not a power of two >= 2"
        )));
    }
    let n = m.trailing_zeros() as usize;
    let layout = QubitLayout::new(n)?;

    let entries = |dir: Direction| -> (&[f64], &[f64]) {
        match dir {
            Direction::Plus => (&field.i_plus, &field.s_plus),
            Direction::Minus => (&field.i_minus, &field.s_minus),
        }
    };
    let mut norm_sq = 0.0;
    let mut negative = false;
    for dir in [Direction::Plus, Direction::Minus] {
        let (intensity, source) = entries(dir);
        for i in 0..m {
            if !intensity[i].is_finite() || !source[i].is_finite() {
                return Err(Error::Config("field entries must be finite".into()));
            }
            negative |= intensity[i] < 0.0 || source[i] < 0.0;
            norm_sq += intensity[i] * intensity[i];
            let s = 0.5 * dt * source[i];
            norm_sq += s * s;
        }
    }
    if negative {
        log::warn!("encoding a field with negative entries; sampled decode assumes non-negativity");
    }
    let norm_phi = norm_sq.sqrt();
    if norm_phi == 0.0 {
        return Err(Error::Config("cannot normalize an all-zero field".into()));
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.num_qubits()];
    for dir in [Direction::Plus, Direction::Minus] {
        let (intensity, source) = entries(dir);
        for i in 0..m {
            amps[layout.intensity_index(dir, i)] = Complex64::new(intensity[i] / norm_phi, 0.0);
            amps[layout.source_index(dir, i)] =
                Complex64::new(0.5 * dt * source[i] / norm_phi, 0.0);
        }
    }
    let state = StateVector::from_amplitudes(layout.num_qubits(), amps)?;
    Ok(EncodedState { state, norm_phi })
}

/// Decode gate on stray imaginary parts and on source drift.
const CONSISTENCY_TOL: f64 = 1e-6;

/// Read the new field from exact post-circuit amplitudes.
///
/// Intensities are 2 * norm_phi * amplitude at the (a=0, s=0) indices; the
/// (a=0, s=1) amplitudes must still hold the encoded sources, which are
/// carried forward from `prior`.
pub fn decode_exact(es: &EncodedState, prior: &LatticeField, dt: f64) -> Result<LatticeField> {
    let layout = QubitLayout::new(es.state.num_qubits() - 5)?;
    let m = layout.num_sites();
    if prior.num_sites() != m {
        return Err(Error::Config("prior field size mismatch".into()));
    }
    let scale = 2.0 * es.norm_phi;
    let read = |idx: usize| -> Result<f64> {
        let amp = es.state.amp(idx);
        if amp.im.abs() >= CONSISTENCY_TOL {
            return Err(Error::Numeric(format!(
                "internal consistency failure: amplitude at index {idx} has imaginary part {}",
                amp.im
            )));
        }
        Ok(scale * amp.re)
    };
    let mut i_plus = Vec::with_capacity(m);
    let mut i_minus = Vec::with_capacity(m);
    for i in 0..m {
        i_plus.push(read(layout.intensity_index(Direction::Plus, i))?);
        i_minus.push(read(layout.intensity_index(Direction::Minus, i))?);
    }
    for (dir, expected) in [
        (Direction::Plus, &prior.s_plus),
        (Direction::Minus, &prior.s_minus),
    ] {
        for (i, &expect) in expected.iter().enumerate() {
            // The step halves every post-selected amplitude, so the source
            // entry reads back as half of dt * S / 2.
            let decoded = read(layout.source_index(dir, i))? / (0.5 * dt);
            if (decoded - expect).abs() >= CONSISTENCY_TOL {
                return Err(Error::Numeric(format!(
                    "internal consistency failure: source at site {i} drifted from {expect} to {decoded}"
                )));
            }
        }
    }
    LatticeField::new(i_plus, i_minus, prior.s_plus.clone(), prior.s_minus.clone())
}

/// Estimate the new field from a measurement histogram.
///
/// Amplitudes are recovered as sqrt(count / shots) with non-negative sign;
/// sources are carried forward from `prior`, not re-estimated.
pub fn decode_sampled(
    hist: &MeasurementHistogram,
    norm_phi: f64,
    prior: &LatticeField,
    layout: &QubitLayout,
) -> Result<LatticeField> {
    let m = layout.num_sites();
    if prior.num_sites() != m {
        return Err(Error::Config("prior field size mismatch".into()));
    }
    let selected: u64 = hist
        .counts()
        .iter()
        .filter(|(&idx, _)| layout.in_postselected_sector(idx))
        .map(|(_, &c)| c)
        .sum();
    if selected == 0 {
        return Err(Error::Numeric(
            "step failure: no counts in the post-selected ancilla sector; \
             success probability too low for the shot budget"
                .into(),
        ));
    }
    let shots = hist.shots() as f64;
    let scale = 2.0 * norm_phi;
    let estimate = |idx: usize| scale * (hist.count(idx) as f64 / shots).sqrt();
    let i_plus = (0..m)
        .map(|i| estimate(layout.intensity_index(Direction::Plus, i)))
        .collect();
    let i_minus = (0..m)
        .map(|i| estimate(layout.intensity_index(Direction::Minus, i)))
        .collect();
    LatticeField::new(i_plus, i_minus, prior.s_plus.clone(), prior.s_minus.clone())
}

/// One step's circuit stages, built once per run.
pub struct StepCircuits {
    pub absorption_scattering: Vec<GateOp>,
    pub absorption_emission: Vec<GateOp>,
    pub propagation: Vec<GateOp>,
}

impl StepCircuits {
    pub fn build(layout: &QubitLayout, params: &LcuParams) -> Self {
        StepCircuits {
            absorption_scattering: build_absorption_scattering(layout, params),
            absorption_emission: build_absorption_emission(layout),
            propagation: build_propagation(layout),
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_circuit(&self.absorption_scattering)?;
        state.apply_circuit(&self.absorption_emission)?;
        state.apply_circuit(&self.propagation)
    }
}

/// Run the quantum pipeline from the zero-intensity initial field.
pub fn run_quantum(config: &RteConfig) -> Result<RunOutput> {
    let initial = initial_field(config)?;
    run_quantum_from(config, initial)
}

/// Run the quantum pipeline: per step, encode the field, apply the three
/// circuit stages, record diagnostics, and decode per the configured mode.
pub fn run_quantum_from(config: &RteConfig, initial: LatticeField) -> Result<RunOutput> {
    config.validate()?;
    if initial.num_sites() != config.num_sites() {
        return Err(Error::Config("initial field does not match lattice size".into()));
    }
    let layout = config.layout()?;
    let params = config.lcu_params()?;
    let circuits = StepCircuits::build(&layout, &params);
    let mut seed_stream = ChaCha8Rng::seed_from_u64(config.seed);

    let mut field = initial.clone();
    let mut steps = Vec::with_capacity(config.steps);
    let mut diagnostics = Vec::with_capacity(config.steps);
    for step in 1..=config.steps {
        let mut encoded = encode(&field, config.dt)?;
        circuits.apply(&mut encoded.state)?;
        let success_probability = encoded
            .state
            .probability_where(|i| layout.in_postselected_sector(i));
        diagnostics.push(StepDiagnostics {
            success_probability,
            norm_phi: encoded.norm_phi,
        });
        field = match config.mode {
            StepMode::Exact => decode_exact(&encoded, &field, config.dt)?,
            StepMode::Sampled => {
                let step_seed = seed_stream.gen::<u64>();
                let hist = encoded
                    .state
                    .sample(config.shots, step_seed)
                    .map_err(|e| Error::Numeric(format!("step {step}: {e}")))?;
                decode_sampled(&hist, encoded.norm_phi, &field, &layout)
                    .map_err(|e| Error::Numeric(format!("step {step}: {e}")))?
            }
        };
        steps.push(field.clone());
    }
    Ok(RunOutput {
        initial,
        steps,
        diagnostics,
    })
}

/// Classical reference evolution of the same configuration.
pub fn run_classical(config: &RteConfig) -> Result<RunOutput> {
    crate::classical::run_to_time(config)
}

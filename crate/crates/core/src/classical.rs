//! Direct classical iteration of the transport update; the ground-truth
//! oracle for the quantum pipeline. The stepper mirrors the quantum stage
//! split (collision, source injection, shift) so the two pipelines stay
//! term-for-term comparable.

use crate::error::{Error, Result};
use crate::rte::{initial_field, LatticeField, RteConfig, RunOutput};

/// One explicit time step.
///
/// Collision mixes the directions with weights `1 - kappa*dt + sigma*dt/2`
/// and `sigma*dt/2`, then half the weighted source is added, then I+ shifts
/// one site right and I- one site left with periodic wrap. Sources are
/// unchanged.
pub fn classical_step(field: &LatticeField, kappa: f64, sigma: f64, dt: f64) -> LatticeField {
    let m = field.num_sites();
    let a0 = 1.0 - kappa * dt + sigma * dt / 2.0;
    let a1 = sigma * dt / 2.0;
    let mut i_plus = vec![0.0; m];
    let mut i_minus = vec![0.0; m];
    for i in 0..m {
        let collided_plus = a0 * field.i_plus[i] + a1 * field.i_minus[i];
        let collided_minus = a1 * field.i_plus[i] + a0 * field.i_minus[i];
        let emitted_plus = collided_plus + 0.5 * dt * field.s_plus[i];
        let emitted_minus = collided_minus + 0.5 * dt * field.s_minus[i];
        i_plus[(i + 1) % m] = emitted_plus;
        i_minus[(i + m - 1) % m] = emitted_minus;
    }
    LatticeField {
        i_plus,
        i_minus,
        s_plus: field.s_plus.clone(),
        s_minus: field.s_minus.clone(),
    }
}

/// Iterate `config.steps` classical steps from the zero-intensity field.
pub fn run_to_time(config: &RteConfig) -> Result<RunOutput> {
    let initial = initial_field(config)?;
    run_to_time_from(config, initial)
}

/// Iterate from an explicit initial field, emitting every intermediate field.
pub fn run_to_time_from(config: &RteConfig, initial: LatticeField) -> Result<RunOutput> {
    config.source.validate()?;
    if initial.num_sites() != config.num_sites() {
        return Err(Error::Config(
            "initial field does not match lattice size".into(),
        ));
    }
    let mut field = initial.clone();
    let mut steps = Vec::with_capacity(config.steps);
    for _ in 0..config.steps {
        field = classical_step(&field, config.kappa, config.sigma, config.dt);
        steps.push(field.clone());
    }
    Ok(RunOutput {
        initial,
        steps,
        diagnostics: Vec::new(),
    })
}

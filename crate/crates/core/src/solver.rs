//! Interchangeable time-stepping strategies behind one trait, registered by
//! name and selected at runtime (the CLI `--mode` flag resolves through the
//! registry).

use crate::classical;
use crate::error::Result;
use crate::rte::{self, RteConfig, RunOutput, StepMode};

/// A named strategy that evolves an `RteConfig` into a time series.
pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Run from the zero-intensity initial field of the configuration.
    fn run(&self, config: &RteConfig) -> Result<RunOutput>;
}

/// Direct classical iteration of the transport update.
pub struct ClassicalSolver;

impl Solver for ClassicalSolver {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn run(&self, config: &RteConfig) -> Result<RunOutput> {
        classical::run_to_time(config)
    }
}

/// Quantum pipeline with amplitudes read directly from the statevector.
pub struct QuantumExactSolver;

impl Solver for QuantumExactSolver {
    fn name(&self) -> &'static str {
        "quantum-exact"
    }

    fn run(&self, config: &RteConfig) -> Result<RunOutput> {
        let config = RteConfig {
            mode: StepMode::Exact,
            ..config.clone()
        };
        rte::run_quantum(&config)
    }
}

/// Quantum pipeline with per-step measurement sampling.
pub struct QuantumSampledSolver;

impl Solver for QuantumSampledSolver {
    fn name(&self) -> &'static str {
        "quantum-sampled"
    }

    fn run(&self, config: &RteConfig) -> Result<RunOutput> {
        let config = RteConfig {
            mode: StepMode::Sampled,
            ..config.clone()
        };
        rte::run_quantum(&config)
    }
}

/// Name-keyed solver collection.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            solvers: Vec::new(),
        }
    }

    /// Registry holding the three built-in strategies.
    pub fn with_builtin() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(ClassicalSolver));
        registry.register(Box::new(QuantumExactSolver));
        registry.register(Box::new(QuantumSampledSolver));
        registry
    }

    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

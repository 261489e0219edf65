//! Time-ordered flow output shared by the tangent-angle and arclength solvers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::functionals::FunctionalSeries;

/// How a run ended: it either reached the requested final time or halted
/// early on an extinction guard (blow-up of the state or vanishing area).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStatus {
    Completed,
    Extinction,
}

pub trait Timestamped {
    fn time(&self) -> f64;
}

/// Retained states with one diagnostics record per state.
#[derive(Debug, Clone)]
pub struct FlowTrajectory<S> {
    states: Vec<S>,
    diagnostics: Vec<BTreeMap<String, f64>>,
    status: FlowStatus,
}

impl<S: Timestamped> FlowTrajectory<S> {
    pub fn new() -> Self {
        FlowTrajectory {
            states: Vec::new(),
            diagnostics: Vec::new(),
            status: FlowStatus::Completed,
        }
    }

    pub fn push(&mut self, state: S, diagnostics: BTreeMap<String, f64>) -> Result<()> {
        if let Some(last) = self.states.last() {
            if state.time() <= last.time() {
                return Err(Error::invalid(format!(
                    "non-increasing time stamp {} after {}",
                    state.time(),
                    last.time()
                )));
            }
        }
        self.states.push(state);
        self.diagnostics.push(diagnostics);
        Ok(())
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn diagnostics(&self) -> &[BTreeMap<String, f64>] {
        &self.diagnostics
    }

    pub fn status(&self) -> FlowStatus {
        self.status
    }

    pub fn set_status(&mut self, status: FlowStatus) {
        self.status = status;
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time()).collect()
    }

    pub fn first(&self) -> Result<&S> {
        self.states.first().ok_or(Error::EmptyTrajectory)
    }

    pub fn last(&self) -> Result<&S> {
        self.states.last().ok_or(Error::EmptyTrajectory)
    }

    /// Extract one recorded diagnostic as a named time series. Returns None
    /// if the diagnostic is missing from any retained state.
    pub fn series(&self, name: &str) -> Option<FunctionalSeries> {
        let mut values = Vec::with_capacity(self.len());
        for d in &self.diagnostics {
            values.push(*d.get(name)?);
        }
        FunctionalSeries::new(name, self.times(), values).ok()
    }
}

impl<S: Timestamped> Default for FlowTrajectory<S> {
    fn default() -> Self {
        Self::new()
    }
}

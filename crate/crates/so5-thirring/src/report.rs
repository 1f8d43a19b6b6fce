//! Violation reports shared by all verification routines.

/// Outcome of sweeping an operator identity over a family of index choices.
///
/// `max_violation` is the largest max-norm residual seen; `breakdown` lists
/// the residual per index choice (stringified), in sweep order, so failures
/// can be localized without rerunning.
#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub max_violation: f64,
    pub breakdown: Vec<(String, f64)>,
}

impl ViolationReport {
    pub fn new() -> Self {
        Self {
            max_violation: 0.0,
            breakdown: Vec::new(),
        }
    }

    /// Record one residual under the given label.
    pub fn record(&mut self, label: String, violation: f64) {
        if violation > self.max_violation {
            self.max_violation = violation;
        }
        self.breakdown.push((label, violation));
    }

    /// Label and value of the worst residual.
    pub fn worst(&self) -> Option<(&str, f64)> {
        self.breakdown
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("violations are finite"))
            .map(|(s, v)| (s.as_str(), *v))
    }
}

impl Default for ViolationReport {
    fn default() -> Self {
        Self::new()
    }
}

use serde::{Deserialize, Serialize};

/// One residual compared against a tolerance.
///
/// Informational records carry a comparison against a printed claim and
/// never affect [`VerificationReport::passed`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_paper_claim: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hard(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut CheckRecord {
        self.checks.push(CheckRecord {
            name: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
            informational: false,
            matches_paper_claim: None,
            note: None,
        });
        self.checks.last_mut().unwrap()
    }

    /// A comparison against a printed claim; `passed` mirrors the match.
    pub fn claim(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        note: impl Into<String>,
    ) -> &mut CheckRecord {
        let matches = residual.is_finite() && residual < tolerance;
        self.checks.push(CheckRecord {
            name: name.into(),
            residual,
            tolerance,
            passed: matches,
            informational: true,
            matches_paper_claim: Some(matches),
            note: Some(note.into()),
        });
        self.checks.last_mut().unwrap()
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.informational).all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.informational && !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn informational_never_fails_report() {
        let mut r = VerificationReport::new();
        r.hard("ok", 1e-16, 1e-12);
        r.claim("claim", 0.2, 1e-12, "differs");
        assert!(r.passed());
        assert_eq!(r.get("claim").unwrap().matches_paper_claim, Some(false));
        r.hard("bad", 1.0, 1e-12);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = VerificationReport::new();
        r.hard("nan", f64::NAN, 1.0);
        assert!(!r.passed());
    }
}

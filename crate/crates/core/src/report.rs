//! Report-style results of axiom checks.

use serde::Serialize;

use crate::linalg::Matrix;

/// One failed axiom instance, located by the ids involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Short name of the violated axiom, e.g. `"associativity"` or `"left unit"`.
    pub axiom: String,
    /// Ids (objects, morphisms, basis indices) locating the failure.
    pub witness: Vec<String>,
    pub detail: String,
    /// Difference of the two sides when the axiom is an equation of matrices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Matrix>,
}

/// Outcome of a validator: empty iff every checked axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> ValidationReport {
        ValidationReport { subject: subject.into(), checks: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records one check; a failure is stored with its witness.
    pub fn check(&mut self, ok: bool, axiom: &str, witness: &[&str], detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(axiom, witness, detail());
        }
    }

    /// Records an equation of matrices; a failure keeps `lhs - rhs` as residual.
    pub fn check_eq(&mut self, lhs: &Matrix, rhs: &Matrix, axiom: &str, witness: &[&str]) {
        self.checks += 1;
        if lhs.shape() != rhs.shape() {
            self.fail(axiom, witness, format!("shapes differ: {:?} vs {:?}", lhs.shape(), rhs.shape()));
        } else if lhs != rhs {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                witness: witness.iter().map(|s| s.to_string()).collect(),
                detail: "sides differ".to_string(),
                residual: Some(lhs.sub(rhs)),
            });
        }
    }

    pub fn fail(&mut self, axiom: &str, witness: &[&str], detail: String) {
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness: witness.iter().map(|s| s.to_string()).collect(),
            detail,
            residual: None,
        });
    }

    /// Appends another report's checks and violations.
    pub fn absorb(&mut self, other: ValidationReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

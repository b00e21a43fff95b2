use serde::{Deserialize, Serialize};

/// Shortest round-trip float text, switching to exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
}

impl Check {
    pub fn exact(id: &str, measured: impl ToString, expected: impl ToString) -> Self {
        let (m, e) = (measured.to_string(), expected.to_string());
        let status = if m == e { Status::Pass } else { Status::Fail };
        Self {
            id: id.into(),
            status,
            measured: m,
            expected: e,
            tolerance: "0".into(),
        }
    }

    pub fn flag(id: &str, ok: bool) -> Self {
        Self::exact(id, ok, true)
    }

    /// Relative comparison `|m − e| ≤ tol·|e|`, absolute when `e = 0`.
    pub fn relative(id: &str, measured: f64, expected: f64, tol: f64) -> Self {
        let scale = if expected == 0.0 { 1.0 } else { expected.abs() };
        let ok = ((measured - expected).abs() <= tol * scale) && measured.is_finite();
        Self::with_status(id, ok, measured, expected, tol)
    }

    pub fn negative(id: &str, measured: f64) -> Self {
        Self {
            id: id.into(),
            status: if measured < 0.0 {
                Status::Pass
            } else {
                Status::Fail
            },
            measured: num(measured),
            expected: "< 0".into(),
            tolerance: "0".into(),
        }
    }

    pub fn at_least(id: &str, measured: f64, bound: f64) -> Self {
        Self {
            id: id.into(),
            status: if measured >= bound {
                Status::Pass
            } else {
                Status::Fail
            },
            measured: num(measured),
            expected: format!(">= {}", num(bound)),
            tolerance: "0".into(),
        }
    }

    pub fn at_most(id: &str, measured: f64, bound: f64) -> Self {
        Self {
            id: id.into(),
            status: if measured <= bound {
                Status::Pass
            } else {
                Status::Fail
            },
            measured: num(measured),
            expected: format!("<= {}", num(bound)),
            tolerance: "0".into(),
        }
    }

    fn with_status(id: &str, ok: bool, measured: f64, expected: f64, tol: f64) -> Self {
        Self {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: num(measured),
            expected: num(expected),
            tolerance: num(tol),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: Status,
}

impl VerifyReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        let overall = if checks.iter().all(Check::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            suite: suite.into(),
            checks,
            overall,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }
}

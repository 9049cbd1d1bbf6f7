use std::fmt;

/// A configuration value echoed into a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Real(f64),
    Int(i64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Real(x) => write!(f, "{x}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<i64> for ParamValue {
    fn from(i: i64) -> Self {
        ParamValue::Int(i)
    }
}

impl From<usize> for ParamValue {
    fn from(i: usize) -> Self {
        ParamValue::Int(i as i64)
    }
}

impl From<i32> for ParamValue {
    fn from(i: i32) -> Self {
        ParamValue::Int(i64::from(i))
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        ParamValue::Text(s.to_owned())
    }
}

impl From<String> for ParamValue {
    fn from(s: String) -> Self {
        ParamValue::Text(s)
    }
}

/// Outcome of one named check: `pass` holds exactly when
/// `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    /// Parameters in insertion order.
    pub params: Vec<(String, ParamValue)>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub metadata: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            params: Vec::new(),
            residual,
            tolerance,
            // NaN compares false, so a NaN residual fails.
            pass: residual <= tolerance,
            metadata: Vec::new(),
        }
    }

    /// A failing report carrying an error message instead of a residual.
    pub fn failed(check: impl Into<String>, tolerance: f64, error: &dyn fmt::Display) -> Self {
        let mut report = Self::new(check, f64::INFINITY, tolerance);
        report.metadata.push(format!("error: {error}"));
        report
    }

    /// Re-evaluates `pass` against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.residual <= tolerance;
        self
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<ParamValue>) -> Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.metadata.push(note.into());
        self
    }

    pub fn param(&self, key: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} residual={:.3e} tolerance={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.residual,
            self.tolerance
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tolerance() {
        assert!(VerificationReport::new("x", 1e-9, 1e-8).pass);
        assert!(VerificationReport::new("x", 1e-8, 1e-8).pass);
        assert!(!VerificationReport::new("x", 2e-8, 1e-8).pass);
        assert!(!VerificationReport::new("x", f64::NAN, 1e-8).pass);
    }

    #[test]
    fn failed_report_records_error() {
        let r = VerificationReport::failed("metric", 1e-6, &"boom");
        assert!(!r.pass);
        assert!(r.residual.is_infinite());
        assert_eq!(r.metadata, vec!["error: boom".to_string()]);
    }
}

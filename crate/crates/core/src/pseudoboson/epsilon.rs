use crate::error::{invalid, Result};

/// The eigenvalue ladder `eps_0 = 0 < eps_1 < eps_2 < ...`.
///
/// Strict ordering also rules out degenerate levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSequence {
    values: Vec<f64>,
}

impl EpsilonSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            None => return Err(invalid("epsilon sequence is empty")),
            Some(&e0) if e0 != 0.0 => {
                return Err(invalid(format!("eps_0 must be exactly 0, got {e0}")))
            }
            _ => {}
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("epsilon values must be finite, got {v}")));
        }
        for (n, w) in values.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(invalid(format!(
                    "epsilon sequence must be strictly increasing: eps_{} = {} >= eps_{} = {}",
                    n,
                    w[0],
                    n + 1,
                    w[1]
                )));
            }
        }
        Ok(EpsilonSequence { values })
    }

    /// The bosonic ladder `eps_n = n`.
    pub fn linear(len: usize) -> Self {
        EpsilonSequence {
            values: (0..len.max(1)).map(|n| n as f64).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    /// The first `len` values.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(invalid(format!(
                "cannot truncate a sequence of length {} to {len}",
                self.len()
            )));
        }
        Ok(EpsilonSequence {
            values: self.values[..len].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(EpsilonSequence::new(vec![0.0, 1.0, 3.0]).is_ok());
        assert!(EpsilonSequence::new(vec![]).is_err());
        assert!(EpsilonSequence::new(vec![0.1, 1.0]).is_err());
        assert!(EpsilonSequence::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(EpsilonSequence::new(vec![0.0, 2.0, 1.0]).is_err());
        assert!(EpsilonSequence::new(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn linear_sequence() {
        let e = EpsilonSequence::linear(4);
        assert_eq!(e.values(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(e.truncated(2).unwrap().values(), &[0.0, 1.0]);
        assert!(e.truncated(5).is_err());
    }
}

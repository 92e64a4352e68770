//! Rules producing the connection constants `c_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the constant `c_k` of distance class `k` is produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CRule {
    /// Explicit values `c_1, c_2, ...`.
    List { values: Vec<f64> },
    /// `c_k = max(c_min, a * ln k)`.
    ALog { a: f64, c_min: f64 },
    /// `c_k = offset + slope * k`.
    Linear { slope: f64, offset: f64 },
}

impl CRule {
    pub fn list(values: impl Into<Vec<f64>>) -> Self {
        CRule::List { values: values.into() }
    }

    /// `c_k` for `k >= 1`, or `None` past the end of an explicit list.
    pub fn c(&self, k: usize) -> Option<f64> {
        if k == 0 {
            return None;
        }
        match self {
            CRule::List { values } => values.get(k - 1).copied(),
            CRule::ALog { a, c_min } => Some(c_min.max(a * (k as f64).ln())),
            CRule::Linear { slope, offset } => Some(offset + slope * k as f64),
        }
    }

    /// Whether the rule defines `c_k` for every `k`.
    pub fn is_parametric(&self) -> bool {
        !matches!(self, CRule::List { .. })
    }

    /// `c_1, ..., c_depth`, all required to be positive and finite.
    pub fn values(&self, depth: usize) -> Result<Vec<f64>> {
        (1..=depth)
            .map(|k| match self.c(k) {
                Some(c) if c > 0.0 && c.is_finite() => Ok(c),
                Some(c) => Err(Error::Domain(format!("c_{k} = {c} is not positive"))),
                None => Err(Error::Config(format!(
                    "c-sequence has no value for level {k} (needs {depth})"
                ))),
            })
            .collect()
    }

    /// Checks the rule parameters themselves.
    pub fn validate(&self) -> Result<()> {
        match *self {
            CRule::List { ref values } => {
                if values.is_empty() {
                    return Err(Error::Config("empty c-list".into()));
                }
                Ok(())
            }
            CRule::ALog { a, c_min } => {
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::Config(format!("a_log rule needs a > 0, got {a}")));
                }
                if !(c_min > 0.0) || !c_min.is_finite() {
                    return Err(Error::Config(format!("a_log rule needs c_min > 0, got {c_min}")));
                }
                Ok(())
            }
            CRule::Linear { slope, offset } => {
                if !slope.is_finite() || !offset.is_finite() {
                    return Err(Error::Config("linear rule parameters must be finite".into()));
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_per_kind() {
        let r = CRule::ALog { a: 2.0, c_min: 1.5 };
        assert_eq!(r.c(1), Some(1.5));
        assert!((r.c(10).unwrap() - 2.0 * 10f64.ln()).abs() < 1e-15);
        let r = CRule::Linear { slope: 1.0, offset: 3.0 };
        assert_eq!(r.values(3).unwrap(), vec![4.0, 5.0, 6.0]);
        let r = CRule::list(vec![3.0, 10.0]);
        assert_eq!(r.c(3), None);
        assert!(r.values(3).is_err());
        assert!(CRule::list(vec![3.0, -1.0]).values(2).is_err());
    }

    #[test]
    fn json_shape() {
        let r: CRule = serde_json::from_str(r#"{"kind":"a_log","a":2,"c_min":1.5}"#).unwrap();
        assert_eq!(r, CRule::ALog { a: 2.0, c_min: 1.5 });
        let r: CRule = serde_json::from_str(r#"{"kind":"list","values":[3,10]}"#).unwrap();
        assert_eq!(r, CRule::list(vec![3.0, 10.0]));
    }
}

//! Streaming moments that can be merged across partial runs.

use serde::{Deserialize, Serialize};

/// Count, mean and central moments up to order four.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
    min: f64,
    max: f64,
}

impl Default for RunningStats {
    fn default() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            m3: 0.0,
            m4: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        let one = Self {
            count: 1,
            mean: x,
            min: x,
            max: x,
            ..Self::default()
        };
        self.merge(&one);
    }

    /// Combines two summaries as if all observations had been pushed into one.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let d = other.mean - self.mean;
        let d_n = d / n;
        let d2 = d * d_n * na * nb;
        let m2 = self.m2 + other.m2 + d2;
        let m3 = self.m3 + other.m3 + d2 * d_n * (na - nb)
            + 3.0 * d_n * (na * other.m2 - nb * self.m2);
        let m4 = self.m4
            + other.m4
            + d2 * d_n * d_n * (na * na - na * nb + nb * nb)
            + 6.0 * d_n * d_n * (na * na * other.m2 + nb * nb * self.m2)
            + 4.0 * d_n * (na * other.m3 - nb * self.m3);
        self.mean += d_n * nb;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    /// Sample skewness `g1`.
    pub fn skewness(&self) -> f64 {
        if self.count < 3 || self.m2 == 0.0 {
            return f64::NAN;
        }
        let n = self.count as f64;
        n.sqrt() * self.m3 / self.m2.powf(1.5)
    }

    /// Sample excess kurtosis `g2`.
    pub fn excess_kurtosis(&self) -> f64 {
        if self.count < 4 || self.m2 == 0.0 {
            return f64::NAN;
        }
        let n = self.count as f64;
        n * self.m4 / (self.m2 * self.m2) - 3.0
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(xs: &[f64]) -> (f64, f64, f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let m = |p: i32| xs.iter().map(|x| (x - mean).powi(p)).sum::<f64>();
        let var = m(2) / (n - 1.0);
        let skew = n.sqrt() * m(3) / m(2).powf(1.5);
        let kurt = n * m(4) / (m(2) * m(2)) - 3.0;
        (mean, var, skew, kurt)
    }

    #[test]
    fn matches_two_pass_formulas() {
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 7.0 + (i as f64).sqrt()).collect();
        let s: RunningStats = xs.iter().copied().collect();
        let (mean, var, skew, kurt) = naive(&xs);
        assert!((s.mean() - mean).abs() < 1e-12);
        assert!((s.variance() - var).abs() < 1e-10);
        assert!((s.skewness() - skew).abs() < 1e-10);
        assert!((s.excess_kurtosis() - kurt).abs() < 1e-10);
        assert_eq!(s.count(), 200);
    }

    #[test]
    fn merge_equals_sequential() {
        let xs: Vec<f64> = (0..300).map(|i| ((i * 7919) % 613) as f64).collect();
        let all: RunningStats = xs.iter().copied().collect();
        let mut a: RunningStats = xs[..120].iter().copied().collect();
        let b: RunningStats = xs[120..].iter().copied().collect();
        a.merge(&b);
        assert_eq!(a.count(), all.count());
        assert!((a.mean() - all.mean()).abs() < 1e-10);
        assert!((a.variance() / all.variance() - 1.0).abs() < 1e-12);
        assert!((a.skewness() - all.skewness()).abs() < 1e-10);
        assert!((a.excess_kurtosis() - all.excess_kurtosis()).abs() < 1e-10);
        assert_eq!(a.min(), 0.0);
    }

    #[test]
    fn empty_and_tiny() {
        let s = RunningStats::new();
        assert!(s.mean().is_nan());
        let s: RunningStats = [2.0].into_iter().collect();
        assert_eq!(s.mean(), 2.0);
        assert!(s.variance().is_nan());
    }
}

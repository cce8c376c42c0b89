//! Phase structures for the random epoch: ordered exponential rates,
//! transform exponents and Coxian continuation probabilities.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Minimum relative gap between two rates before they count as colliding.
pub const MIN_RELATIVE_RATE_GAP: f64 = 1e-9;

/// Rates q_1..q_n of the independent exponential phases, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    rates: Vec<f64>,
}

impl PhaseVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Domain("at least one phase rate is required".into()));
        }
        for (i, &q) in rates.iter().enumerate() {
            if q <= 0.0 || !q.is_finite() {
                return Err(Error::Domain(format!("rate q_{} must be positive, got {q}", i + 1)));
            }
        }
        for i in 0..rates.len() {
            for j in (i + 1)..rates.len() {
                let gap = (rates[i] - rates[j]).abs() / rates[i].max(rates[j]);
                if gap < MIN_RELATIVE_RATE_GAP {
                    return Err(Error::SingularParameters(format!(
                        "rates q_{} = {} and q_{} = {} are equal or nearly equal \
                         (relative gap {gap:.2e} < {MIN_RELATIVE_RATE_GAP:.0e})",
                        i + 1,
                        rates[i],
                        j + 1,
                        rates[j]
                    )));
                }
            }
        }
        Ok(Self { rates })
    }

    pub fn single(rate: f64) -> Result<Self> {
        Self::new(vec![rate])
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// First `k` phases, k >= 1.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.rates.len() {
            return Err(Error::Domain(format!(
                "prefix length {k} out of range 1..={}",
                self.rates.len()
            )));
        }
        Ok(Self {
            rates: self.rates[..k].to_vec(),
        })
    }
}

/// Exponents alpha_1..alpha_n of the joint transform, all nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaVector {
    alphas: Vec<f64>,
}

impl AlphaVector {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Domain("alpha vector must be nonempty".into()));
        }
        for (i, &a) in alphas.iter().enumerate() {
            if a < 0.0 || !a.is_finite() {
                return Err(Error::Domain(format!(
                    "alpha_{} must be nonnegative, got {a}",
                    i + 1
                )));
            }
        }
        Ok(Self { alphas })
    }

    /// (0, ..., 0, alpha): the marginal transform of the last epoch.
    pub fn last_only(n: usize, alpha: f64) -> Result<Self> {
        let mut v = vec![0.0; n];
        v[n - 1] = alpha;
        Self::new(v)
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// Coxian clock: exponential phases with early-exit probabilities.
/// `continue_prob[i]` is the probability of moving from phase i+1 to i+2;
/// the last entry must be 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoxianSpec {
    rates: Vec<f64>,
    continue_prob: Vec<f64>,
}

impl CoxianSpec {
    pub fn new(rates: Vec<f64>, continue_prob: Vec<f64>) -> Result<Self> {
        let phases = PhaseVector::new(rates)?;
        if continue_prob.len() != phases.len() {
            return Err(Error::Domain(format!(
                "need one continuation probability per phase, got {} for {} phases",
                continue_prob.len(),
                phases.len()
            )));
        }
        for (i, &p) in continue_prob.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!(
                    "continuation probability p_{} must lie in [0, 1], got {p}",
                    i + 1
                )));
            }
        }
        if *continue_prob.last().unwrap() != 0.0 {
            return Err(Error::Domain("the last continuation probability must be 0".into()));
        }
        Ok(Self {
            rates: phases.rates().to_vec(),
            continue_prob,
        })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn continue_prob(&self) -> &[f64] {
        &self.continue_prob
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Mixture weight of stopping exactly after phase k (1-based):
    /// (1 - p_k) prod_{i<k} p_i.
    pub fn stop_weights(&self) -> Vec<f64> {
        let n = self.rates.len();
        let mut w = Vec::with_capacity(n);
        let mut reach = 1.0;
        for k in 0..n {
            w.push((1.0 - self.continue_prob[k]) * reach);
            reach *= self.continue_prob[k];
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_near_equal_rates() {
        let err = PhaseVector::new(vec![2.0, 2.0 + 1e-12]).unwrap_err();
        assert!(matches!(err, Error::SingularParameters(_)));
        assert!(err.to_string().contains("perturb"));
    }

    #[test]
    fn accepts_distinct_rates() {
        let p = PhaseVector::new(vec![1.980198019801980, 2.040816326530612]).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn rejects_nonpositive_rate_and_negative_alpha() {
        assert!(PhaseVector::new(vec![1.0, 0.0]).is_err());
        assert!(AlphaVector::new(vec![0.1, -0.2]).is_err());
    }

    #[test]
    fn coxian_weights_sum_to_one() {
        let c = CoxianSpec::new(vec![1.0, 2.0, 3.0], vec![0.3, 0.8, 0.0]).unwrap();
        let w = c.stop_weights();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((w[0] - 0.7).abs() < 1e-15);
        assert!((w[1] - 0.3 * 0.2).abs() < 1e-15);
        assert!((w[2] - 0.3 * 0.8).abs() < 1e-15);
    }

    #[test]
    fn coxian_requires_terminal_zero() {
        assert!(CoxianSpec::new(vec![1.0, 2.0], vec![0.3, 0.1]).is_err());
    }
}

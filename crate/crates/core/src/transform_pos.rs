//! Joint workload transforms at exponential epochs, spectrally positive input.
//!
//! The joint LST at n epochs is a signed sum of 2^n exponential terms
//!
//! ```text
//! E_x exp(-a_1 Q_{T_1} - ... - a_n Q_{T_1+...+T_n})
//!   = prod_i q_i / (q_i - phi(a_i+...+a_n)) e^{-(a_1+...+a_n) x}
//!   + sum_{l,j} L_{(2^l j - 2^{l-1} + 1, l)} e^{-(a_1+...+a_{l-1}+psi(q_l)) x},
//! ```
//!
//! with coefficients built from a per-index backward recursion (the d-chain)
//! and a parity sign. Ratios on levels where the chain telescopes are
//! exactly 1 and are skipped structurally, so zero exponents never produce
//! 0/0. All products and the final sum run in double-double precision; with
//! nearly equal rates the term magnitudes grow geometrically and the
//! attached cancellation diagnostic reports how much was lost.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::model::{LevyModel, Side};
use crate::phases::{AlphaVector, CoxianSpec, PhaseVector};

/// Default cap on the phase count (2^20 terms).
pub const DEFAULT_PHASE_CAP: u32 = 20;

/// Cancellation level above which results should be treated as suspect.
pub const CONDITION_WARNING_THRESHOLD: f64 = 1e14;

/// Evaluation metadata attached to every transform result.
#[derive(Clone, Copy, Debug)]
pub struct Diagnostics {
    pub term_count: u64,
    pub max_abs_term: f64,
    /// max |term| / |sum|
    pub cancellation: f64,
    pub condition_warning: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct TransientResult {
    pub value: f64,
    pub diagnostics: Diagnostics,
}

/// Sign of the j-th term of the n-epoch expansion: (-1)^popcount(j-1).
pub fn sign_pos(j: u64, n: u32) -> Result<i8> {
    check_index(j, n)?;
    Ok(if (j - 1).count_ones() % 2 == 0 { 1 } else { -1 })
}

fn check_index(j: u64, n: u32) -> Result<()> {
    if n == 0 || n > 63 {
        return Err(Error::Domain(format!("epoch count n = {n} out of range")));
    }
    if j == 0 || j > (1u64 << n) {
        return Err(Error::Domain(format!(
            "term index {j} outside [1, 2^{n}]"
        )));
    }
    Ok(())
}

#[inline]
fn ceil_shr(index: u64, i: u32) -> u64 {
    (index + (1u64 << i) - 1) >> i
}

/// Level l of a term label: index = 2^l j - 2^{l-1} + 1.
/// Even indices sit at level 1; the pure-alpha term (index 1) has level 0.
pub fn level_of(index: u64) -> u32 {
    if index == 1 {
        0
    } else {
        (index - 1).trailing_zeros() + 1
    }
}

/// The d-table of one term: values d^{(i, index)} for i = 0..=n, where
/// d^{(n)} = 0 and lower entries follow the odd/even ceiling branches.
/// The even branch extends to i = 0, which is the only row the level-1
/// ratios divide by.
#[derive(Clone, Debug)]
pub struct DChain {
    pub index: u64,
    /// values[i] = d^{(i, index)}
    pub values: Vec<f64>,
    /// odd_branch[i] is true when d^{(i)} took the alpha branch (i < n)
    pub odd_branch: Vec<bool>,
}

fn d_chain_dd(index: u64, alphas: &[Dd], psis: &[Dd], out: &mut Vec<Dd>, odd: &mut Vec<bool>) {
    let n = alphas.len();
    out.clear();
    out.resize(n + 1, Dd::ZERO);
    odd.clear();
    odd.resize(n, false);
    for i in (0..n).rev() {
        if ceil_shr(index, i as u32) % 2 == 1 {
            odd[i] = true;
            out[i] = alphas[i] + out[i + 1];
        } else {
            out[i] = psis[i];
        }
    }
}

/// Builds the d-table for one term index.
pub fn d_chain(
    index: u64,
    model: &LevyModel,
    phases: &PhaseVector,
    alphas: &AlphaVector,
) -> Result<DChain> {
    let n = phases.len() as u32;
    check_index(index, n)?;
    check_shapes(model, phases, alphas)?;
    let (alphas_dd, psis_dd) = prepare(model, phases, alphas)?;
    let mut vals = Vec::new();
    let mut odd = Vec::new();
    d_chain_dd(index, &alphas_dd, &psis_dd, &mut vals, &mut odd);
    Ok(DChain {
        index,
        values: vals.iter().map(|v| v.to_f64()).collect(),
        odd_branch: odd,
    })
}

/// One signed term of the 2^n-term expansion.
#[derive(Clone, Copy, Debug)]
pub struct CoefficientTerm {
    pub index: u64,
    /// level l of the label; 0 marks the pure-alpha term
    pub level: u32,
    pub sign: i8,
    pub coefficient: f64,
    pub exponent: f64,
}

fn check_shapes(model: &LevyModel, phases: &PhaseVector, alphas: &AlphaVector) -> Result<()> {
    if model.side() != Side::SpectrallyPositive {
        return Err(Error::Domain(
            "the joint transform needs a spectrally positive model".into(),
        ));
    }
    if phases.len() != alphas.len() {
        return Err(Error::Domain(format!(
            "{} rates vs {} exponents",
            phases.len(),
            alphas.len()
        )));
    }
    Ok(())
}

fn prepare(
    model: &LevyModel,
    phases: &PhaseVector,
    alphas: &AlphaVector,
) -> Result<(Vec<Dd>, Vec<Dd>)> {
    let alphas_dd: Vec<Dd> = alphas.alphas().iter().map(|&a| Dd::from_f64(a)).collect();
    let psis_dd = phases
        .rates()
        .iter()
        .map(|&q| model.psi_dd(q))
        .collect::<Result<Vec<_>>>()?;
    Ok((alphas_dd, psis_dd))
}

struct TermEngine<'a> {
    model: &'a LevyModel,
    rates: &'a [f64],
    alphas: Vec<Dd>,
    psis: Vec<Dd>,
    d: Vec<Dd>,
    odd: Vec<bool>,
}

impl<'a> TermEngine<'a> {
    fn new(model: &'a LevyModel, phases: &'a PhaseVector, alphas: &AlphaVector) -> Result<Self> {
        check_shapes(model, phases, alphas)?;
        let (alphas_dd, psis_dd) = prepare(model, phases, alphas)?;
        Ok(Self {
            model,
            rates: phases.rates(),
            alphas: alphas_dd,
            psis: psis_dd,
            d: Vec::new(),
            odd: Vec::new(),
        })
    }

    /// Signed coefficient and exponent of one term.
    fn term(&mut self, index: u64) -> Result<(Dd, Dd)> {
        let n = self.rates.len();
        d_chain_dd(index, &self.alphas, &self.psis, &mut self.d, &mut self.odd);
        let mut prod = Dd::ONE;
        for i in 0..n {
            let q = Dd::from_f64(self.rates[i]);
            let denom = q - self.model.phi_dd(self.alphas[i] + self.d[i + 1]);
            if denom.to_f64().abs() <= 1e-12 * self.rates[i] {
                return Err(Error::SingularParameters(format!(
                    "q_{} = {} coincides with the exponent value at term {index}",
                    i + 1,
                    self.rates[i]
                )));
            }
            prod = prod * (q / denom);
        }
        let exponent;
        if index == 1 {
            let mut s = Dd::ZERO;
            for a in &self.alphas {
                s = s + *a;
            }
            exponent = s;
        } else {
            let l = level_of(index) as usize;
            for i in l..=n {
                // the ratio is exactly 1 wherever the chain telescopes
                // (denominator row i-1 took the alpha branch)
                if self.odd[i - 1] {
                    continue;
                }
                let num = self.alphas[i - 1] + self.d[i];
                let den = self.d[i - 1];
                prod = prod * (num / den);
            }
            let mut s = Dd::ZERO;
            for a in &self.alphas[..l - 1] {
                s = s + *a;
            }
            exponent = s + self.psis[l - 1];
            if (index - 1).count_ones() % 2 == 1 {
                prod = -prod;
            }
        }
        Ok((prod, exponent))
    }
}

/// Joint LST of the workload at the n epoch times (Thm-style expansion).
pub fn joint_lst_pos(
    model: &LevyModel,
    x: f64,
    phases: &PhaseVector,
    alphas: &AlphaVector,
) -> Result<TransientResult> {
    joint_lst_pos_capped(model, x, phases, alphas, DEFAULT_PHASE_CAP)
}

pub fn joint_lst_pos_capped(
    model: &LevyModel,
    x: f64,
    phases: &PhaseVector,
    alphas: &AlphaVector,
    cap: u32,
) -> Result<TransientResult> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("initial workload x = {x} invalid")));
    }
    let n = phases.len() as u32;
    if n > cap.min(63) {
        return Err(Error::Capacity(format!(
            "{n} phases exceed the cap of {cap} (2^n terms)"
        )));
    }
    let mut engine = TermEngine::new(model, phases, alphas)?;
    let xdd = Dd::from_f64(x);
    let mut sum = Dd::ZERO;
    let mut max_abs = 0.0f64;
    let count = 1u64 << n;
    for index in 1..=count {
        let (coeff, expo) = engine.term(index)?;
        let term = coeff * ((-expo) * xdd).exp();
        let a = term.abs().to_f64();
        if a > max_abs {
            max_abs = a;
        }
        sum = sum + term;
    }
    let value = sum.to_f64();
    let cancellation = if value == 0.0 {
        f64::INFINITY
    } else {
        max_abs / value.abs()
    };
    Ok(TransientResult {
        value,
        diagnostics: Diagnostics {
            term_count: count,
            max_abs_term: max_abs,
            cancellation,
            condition_warning: cancellation > CONDITION_WARNING_THRESHOLD,
        },
    })
}

/// All 2^n terms of the expansion, for inspection and for fold-style checks.
pub fn terms_pos(
    model: &LevyModel,
    x: f64,
    phases: &PhaseVector,
    alphas: &AlphaVector,
) -> Result<Vec<CoefficientTerm>> {
    let n = phases.len() as u32;
    if n > DEFAULT_PHASE_CAP {
        return Err(Error::Capacity(format!("{n} phases exceed the cap")));
    }
    if x < 0.0 {
        return Err(Error::Domain("x must be nonnegative".into()));
    }
    let mut engine = TermEngine::new(model, phases, alphas)?;
    let mut out = Vec::with_capacity(1usize << n);
    for index in 1..=(1u64 << n) {
        let (coeff, expo) = engine.term(index)?;
        out.push(CoefficientTerm {
            index,
            level: level_of(index),
            sign: if coeff.to_f64() >= 0.0 { 1 } else { -1 },
            coefficient: coeff.to_f64(),
            exponent: expo.to_f64(),
        });
    }
    Ok(out)
}

/// Single term L_{(2^l j - 2^{l-1} + 1, l)} of the expansion.
pub fn coefficient_pos(
    l: u32,
    j: u64,
    model: &LevyModel,
    phases: &PhaseVector,
    alphas: &AlphaVector,
) -> Result<CoefficientTerm> {
    let n = phases.len() as u32;
    if l == 0 || l > n || j == 0 || j > (1u64 << (n - l)) {
        return Err(Error::Domain(format!(
            "label (l = {l}, j = {j}) invalid for n = {n}"
        )));
    }
    let index = (1u64 << l) * j - (1u64 << (l - 1)) + 1;
    let mut engine = TermEngine::new(model, phases, alphas)?;
    let (coeff, expo) = engine.term(index)?;
    Ok(CoefficientTerm {
        index,
        level: l,
        sign: sign_pos(index, n)?,
        coefficient: coeff.to_f64(),
        exponent: expo.to_f64(),
    })
}

/// LST of Q at the sum of the epochs: alpha on the last epoch only.
pub fn lst_sum_pos(
    model: &LevyModel,
    x: f64,
    phases: &PhaseVector,
    alpha: f64,
) -> Result<TransientResult> {
    let alphas = AlphaVector::last_only(phases.len(), alpha)?;
    joint_lst_pos(model, x, phases, &alphas)
}

/// LST of Q at a Coxian epoch: the stop-weight mixture over phase prefixes.
pub fn lst_coxian(model: &LevyModel, x: f64, coxian: &CoxianSpec, alpha: f64) -> Result<f64> {
    let weights = coxian.stop_weights();
    let wsum: f64 = weights.iter().sum();
    if (wsum - 1.0).abs() > 1e-12 {
        return Err(Error::Inconsistency(format!(
            "Coxian stop weights sum to {wsum}, expected 1"
        )));
    }
    let all = PhaseVector::new(coxian.rates().to_vec())?;
    let mut total = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let prefix = all.prefix(k + 1)?;
        total += w * lst_sum_pos(model, x, &prefix, alpha)?.value;
    }
    Ok(total)
}

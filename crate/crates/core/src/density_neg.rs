//! Workload density at n exponential epochs for spectrally negative input,
//! and the associated triple transform.
//!
//! The density splits into one convolution-chain term plus 2^n - 1
//! exponential-in-y terms:
//!
//! ```text
//! p_x(y) = (-1)^n prod q_i (W^(q_n) * ... * W^(q_1))(x - y)
//!        + sum_{l,j} c Psi(q_m) e^{-Psi(q_m) y} s_{l,j} (Z^(q_l) * W^(q_{l-1}) * ... )(x)
//! ```
//!
//! Coefficients are generated by the binary-tree recursion that mirrors how
//! each epoch integration splits every term in two. A subtree of
//! Z^(q_l)-chain terms is rooted at row l with scalar prod_{i<l} q_i and
//! active rate l; stepping from row k-1 to row k maps a term with active
//! rate m to
//!
//! ```text
//! left  child (same label):     scalar *= -q_k / (q_m - q_k)
//! right child (label + 2^{k-1}): scalar *=  q_m / (q_m - q_k), active rate <- k
//! ```
//!
//! The closed-form product formula over (l, m, n) alone reproduces this only
//! when the right turns are consecutive; label 6 at n = 3 is the first term
//! where the path history matters (its denominators are (q1-q2)(q1-q3), not
//! (q1-q2)(q2-q3)). The recursion is exact for all labels: the density then
//! integrates to one and satisfies the epoch-composition identity, which the
//! test suite checks by quadrature.

use crate::error::{Error, Result};
use crate::model::{LevyModel, Side};
use crate::numeric::NeumaierSum;
use crate::phases::PhaseVector;
use crate::scale::{w_chain, w_chain_integral, z_chain};
use crate::transform_pos::{Diagnostics, CONDITION_WARNING_THRESHOLD};

/// Default cap on the phase count.
pub const DEFAULT_PHASE_CAP: u32 = 20;

/// Sign of the j-th term of the n-epoch density: (-1)^popcount(2^n - j).
pub fn sign_neg(j: u64, n: u32) -> Result<i8> {
    if n == 0 || n > 63 {
        return Err(Error::Domain(format!("epoch count n = {n} out of range")));
    }
    if j == 0 || j > (1u64 << n) {
        return Err(Error::Domain(format!("term index {j} outside [1, 2^{n}]")));
    }
    Ok(if ((1u64 << n) - j).count_ones() % 2 == 0 {
        1
    } else {
        -1
    })
}

/// m(j, l) = min { k : ceil(index / 2^k) = 1 } for a label index >= 2:
/// the row of the label's last right turn, i.e. the active rate of its
/// exponential part.
pub fn m_index(index: u64) -> u32 {
    if index <= 1 {
        0
    } else {
        64 - (index - 1).leading_zeros()
    }
}

/// One exponential-in-y term of the density expansion. The full term reads
/// `sign * scalar * Psi(q_m) exp(-Psi(q_m) y) * (Z-chain at level)`, where
/// `scalar` carries the rate products and signed rate-difference factors.
#[derive(Clone, Copy, Debug)]
pub struct NegCoefficient {
    pub index: u64,
    pub level: u32,
    /// tree-parity sign c^(index, n)
    pub sign: i8,
    /// active-rate index m(j, l), 1-based
    pub m: u32,
    /// |q-products / rate-difference products|, signed by the differences
    pub scalar: f64,
    /// Psi(q_m)
    pub rate: f64,
}

impl NegCoefficient {
    /// Value of the y-dependent factor sign * scalar * Psi(q_m) e^{-Psi(q_m) y}.
    pub fn eval(&self, y: f64) -> f64 {
        self.sign as f64 * self.scalar * self.rate * (-self.rate * y).exp()
    }
}

fn check_neg_inputs(model: &LevyModel, phases: &PhaseVector, cap: u32) -> Result<Vec<f64>> {
    if model.side() != Side::SpectrallyNegative {
        return Err(Error::Domain(
            "the density expansion needs a spectrally negative model".into(),
        ));
    }
    let n = phases.len() as u32;
    if n > cap.min(63) {
        return Err(Error::Capacity(format!(
            "{n} phases exceed the cap of {cap} (2^n terms)"
        )));
    }
    phases.rates().iter().map(|&q| model.big_psi(q)).collect()
}

/// All 2^n - 1 exponential coefficients, generated subtree by subtree.
pub fn neg_coefficients(model: &LevyModel, phases: &PhaseVector) -> Result<Vec<NegCoefficient>> {
    let psis = check_neg_inputs(model, phases, DEFAULT_PHASE_CAP)?;
    let rates = phases.rates();
    let n = rates.len();
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for root_row in 1..=n {
        // the Z^(q_root) subtree root inherits the W-term sign of the row
        // above: c^(1, r-1) = (-1)^(r-1)
        let mut root_scalar = if root_row % 2 == 0 { -1.0 } else { 1.0 };
        for &q in &rates[..root_row - 1] {
            root_scalar *= q;
        }
        // nodes of this subtree at the current row: (index, active m, scalar)
        let mut nodes = vec![((1u64 << (root_row - 1)) + 1, root_row, root_scalar)];
        for row in (root_row + 1)..=n {
            let mut next = Vec::with_capacity(nodes.len() * 2);
            for &(index, m, scalar) in &nodes {
                let gap = rates[m - 1] - rates[row - 1];
                next.push((index, m, scalar * (-rates[row - 1]) / gap));
                next.push((index + (1u64 << (row - 1)), row, scalar * rates[m - 1] / gap));
            }
            nodes = next;
        }
        for (index, m, scalar) in nodes {
            let sign = sign_neg(index, n as u32)?;
            debug_assert_eq!(m_index(index) as usize, m);
            out.push(NegCoefficient {
                index,
                level: root_row as u32,
                sign,
                m: m as u32,
                // scalar embeds the tree parity; splitting it off keeps the
                // reported rate-difference products sign-transparent
                scalar: sign as f64 * scalar,
                rate: psis[m - 1],
            });
        }
    }
    out.sort_by_key(|c| c.index);
    Ok(out)
}

/// Single coefficient for a label (l, j), walking only its tree path.
pub fn coefficient_neg(
    l: u32,
    j: u64,
    model: &LevyModel,
    phases: &PhaseVector,
) -> Result<NegCoefficient> {
    let psis = check_neg_inputs(model, phases, DEFAULT_PHASE_CAP)?;
    let rates = phases.rates();
    let n = rates.len() as u32;
    if l == 0 || l > n || j == 0 || j > (1u64 << (n - l)) {
        return Err(Error::Domain(format!(
            "label (l = {l}, j = {j}) invalid for n = {n}"
        )));
    }
    let index = (1u64 << l) * j - (1u64 << (l - 1)) + 1;
    // recover the left/right turns between rows l+1..n from the label
    let mut turns_right = vec![false; (n - l) as usize];
    let mut idx = index;
    for row in ((l + 1)..=n).rev() {
        let half = 1u64 << (row - 1);
        if idx > half {
            turns_right[(row - l - 1) as usize] = true;
            idx -= half;
        }
    }
    debug_assert_eq!(idx, (1u64 << (l - 1)) + 1);
    let mut scalar = if l % 2 == 0 { -1.0 } else { 1.0 };
    for &q in &rates[..(l - 1) as usize] {
        scalar *= q;
    }
    let mut m = l as usize;
    for (k, &right) in turns_right.iter().enumerate() {
        let row = l as usize + 1 + k;
        let gap = rates[m - 1] - rates[row - 1];
        if right {
            scalar *= rates[m - 1] / gap;
            m = row;
        } else {
            scalar *= -rates[row - 1] / gap;
        }
    }
    let sign = sign_neg(index, n)?;
    Ok(NegCoefficient {
        index,
        level: l,
        sign,
        m: m as u32,
        scalar: sign as f64 * scalar,
        rate: psis[m - 1],
    })
}

/// Pointwise density of Q at the sum of the epochs, started from x.
pub fn density_neg(model: &LevyModel, x: f64, y: f64, phases: &PhaseVector) -> Result<f64> {
    if x < 0.0 || y < 0.0 {
        return Err(Error::Domain(format!(
            "density needs x, y >= 0, got ({x}, {y})"
        )));
    }
    let coeffs = neg_coefficients(model, phases)?;
    let z_values = z_chain_values(model, phases, x)?;
    Ok(density_point(model, x, y, phases, &coeffs, &z_values)?.0)
}

fn z_chain_values(model: &LevyModel, phases: &PhaseVector, x: f64) -> Result<Vec<f64>> {
    (1..=phases.len())
        .map(|l| z_chain(model, l, phases, x))
        .collect()
}

fn density_point(
    model: &LevyModel,
    x: f64,
    y: f64,
    phases: &PhaseVector,
    coeffs: &[NegCoefficient],
    z_values: &[f64],
) -> Result<(f64, f64)> {
    let n = phases.len();
    let mut acc = NeumaierSum::default();
    let mut max_abs = 0.0f64;
    if y <= x {
        let mut qprod = if n % 2 == 0 { 1.0 } else { -1.0 };
        for &q in phases.rates() {
            qprod *= q;
        }
        let w = qprod * w_chain(model, phases, x - y)?;
        max_abs = w.abs();
        acc.add(w);
    }
    for c in coeffs {
        let t = c.eval(y) * z_values[(c.level - 1) as usize];
        if t.abs() > max_abs {
            max_abs = t.abs();
        }
        acc.add(t);
    }
    Ok((acc.total(), max_abs))
}

/// Density evaluated on a y-grid with diagnostics and an exact-in-y total
/// mass (the exponential terms integrate in closed form, the convolution
/// term through the partial-fraction integral of the W-chain).
#[derive(Clone, Debug)]
pub struct DensityResult {
    pub y: Vec<f64>,
    pub values: Vec<f64>,
    pub total_mass: f64,
    pub diagnostics: Diagnostics,
}

/// Evaluates the density on `points + 1` equispaced y values in [0, y_max].
/// `y_max = None` picks the point where the slowest exponential tail drops
/// below 1e-10.
pub fn density_grid(
    model: &LevyModel,
    x: f64,
    phases: &PhaseVector,
    y_max: Option<f64>,
    points: usize,
) -> Result<DensityResult> {
    if x < 0.0 {
        return Err(Error::Domain(format!("density needs x >= 0, got {x}")));
    }
    if points < 2 {
        return Err(Error::Domain("need at least 2 grid points".into()));
    }
    let coeffs = neg_coefficients(model, phases)?;
    let slowest = coeffs
        .iter()
        .map(|c| c.rate)
        .fold(f64::INFINITY, f64::min);
    let y_hi = match y_max {
        Some(v) if v > 0.0 => v,
        Some(v) => return Err(Error::Domain(format!("y_max must be positive, got {v}"))),
        // Psi_min e^{-Psi_min y_max} < 1e-10
        None => ((slowest / 1e-10).ln() / slowest).max(x + 1.0),
    };
    let z_values = z_chain_values(model, phases, x)?;
    let mut ys = Vec::with_capacity(points + 1);
    let mut vals = Vec::with_capacity(points + 1);
    let mut max_abs_global = 0.0f64;
    let mut max_value = 0.0f64;
    for k in 0..=points {
        let y = y_hi * k as f64 / points as f64;
        let (v, max_abs) = density_point(model, x, y, phases, &coeffs, &z_values)?;
        if max_abs > max_abs_global {
            max_abs_global = max_abs;
        }
        if v.abs() > max_value {
            max_value = v.abs();
        }
        ys.push(y);
        vals.push(v);
    }
    // exact y-integral of each piece
    let mut mass = NeumaierSum::default();
    let mut qprod = if phases.len() % 2 == 0 { 1.0 } else { -1.0 };
    for &q in phases.rates() {
        qprod *= q;
    }
    mass.add(qprod * w_chain_integral(model, phases, x)?);
    for c in &coeffs {
        mass.add(c.sign as f64 * c.scalar * z_values[(c.level - 1) as usize]);
    }
    let cancellation = if max_value == 0.0 {
        f64::INFINITY
    } else {
        max_abs_global / max_value
    };
    Ok(DensityResult {
        y: ys,
        values: vals,
        total_mass: mass.total(),
        diagnostics: Diagnostics {
            term_count: 1u64 << phases.len(),
            max_abs_term: max_abs_global,
            cancellation,
            condition_warning: cancellation > CONDITION_WARNING_THRESHOLD,
        },
    })
}

/// Triple transform int_0^inf e^{-beta x} E_x e^{-alpha Q_{T_1+...+T_n}} dx.
pub fn triple_transform(
    model: &LevyModel,
    alpha: f64,
    beta: f64,
    phases: &PhaseVector,
) -> Result<f64> {
    if alpha <= 0.0 || beta <= 0.0 || alpha.is_nan() || beta.is_nan() {
        return Err(Error::Domain(format!(
            "triple transform needs alpha, beta > 0, got ({alpha}, {beta})"
        )));
    }
    let coeffs = neg_coefficients(model, phases)?;
    let rates = phases.rates();
    let n = rates.len();
    let phi_b = model.big_phi(beta)?;
    for &q in rates {
        if (phi_b - q).abs() <= 1e-12 * q {
            return Err(Error::SingularParameters(format!(
                "Phi(beta) = {phi_b} coincides with rate {q}"
            )));
        }
    }
    // cumulative prod_{i<=l} 1/(Phi(beta) - q_i)
    let mut chain_factors = Vec::with_capacity(n);
    let mut acc_factor = 1.0;
    for &q in rates {
        acc_factor /= phi_b - q;
        chain_factors.push(acc_factor);
    }
    let mut qprod = if n % 2 == 0 { 1.0 } else { -1.0 };
    for &q in rates {
        qprod *= q;
    }
    let mut acc = NeumaierSum::default();
    acc.add(qprod * chain_factors[n - 1] / (alpha + beta));
    for c in &coeffs {
        let k3 = c.sign as f64 * c.scalar * c.rate / (alpha + c.rate);
        acc.add(k3 * chain_factors[(c.level - 1) as usize] * phi_b / beta);
    }
    Ok(acc.total())
}

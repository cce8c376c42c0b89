//! q-scale functions W^(q), Z^(q) of spectrally negative models and their
//! convolution chains.
//!
//! W^(q) is pinned down by its Laplace transform 1/(Phi(beta) - q) on
//! beta > Psi(q), with W^(q)(x) = 0 for x < 0; Z^(q)(x) = 1 + q int_0^x W^(q).
//! Brownian models use the two-exponential closed form; other models invert
//! the transform numerically. Inversion works on the tilted function
//! e^{-Psi(q) x} W^(q)(x), whose transform is 1/(Phi(beta + Psi(q)) - q) and
//! which stays bounded, so the damped-Fourier series keeps its relative
//! accuracy over the whole x range.
//!
//! Chains of distinct rates use partial fractions:
//!
//! ```text
//! (W^(q_n) * ... * W^(q_1))(x)          = sum_i W^(q_i)(x)  prod_{k!=i} 1/(q_i - q_k)
//! (Z^(q_l) * W^(q_{l-1}) * ... )(x)     = sum_{i<=l} Z^(q_i)(x) prod_{k<=l, k!=i} 1/(q_i - q_k)
//! ```
//!
//! both following from expanding prod 1/(Phi - q_i) in the variable Phi.
//! Grid convolution is kept as the independent slow path for tests.

use crate::error::{Error, Result};
use crate::invlap::EulerInversion;
use crate::model::{Family, LevyModel, Side};
use crate::numeric::{adaptive_simpson, simpson, NeumaierSum};
use crate::phases::PhaseVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleMethod {
    ClosedForm,
    Inversion,
}

fn require_neg(model: &LevyModel, op: &str) -> Result<()> {
    if model.side() != Side::SpectrallyNegative {
        return Err(Error::Domain(format!(
            "{op} needs a spectrally negative model"
        )));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if q <= 0.0 || !q.is_finite() {
        return Err(Error::Domain(format!("scale functions need q > 0, got {q}")));
    }
    Ok(())
}

/// The two real roots theta_plus > 0 > theta_minus of Phi(beta) = q for a
/// Brownian model.
fn bm_roots(drift: f64, sigma2: f64, q: f64) -> Result<(f64, f64)> {
    if sigma2 <= 0.0 {
        return Err(Error::Domain(
            "scale functions need sigma2 > 0 for the Brownian family".into(),
        ));
    }
    let disc = (drift * drift + 2.0 * sigma2 * q).sqrt();
    Ok(((-drift + disc) / sigma2, (-drift - disc) / sigma2))
}

/// W^(q)(0+), from lim beta/(Phi(beta) - q): zero for unbounded variation,
/// 1/c for the bounded-variation compound Poisson family.
pub fn scale_w_at_zero(model: &LevyModel, q: f64) -> Result<f64> {
    require_neg(model, "scale_w")?;
    check_q(q)?;
    Ok(match model.family() {
        Family::BrownianMotion { .. } => 0.0,
        Family::CompoundPoissonExpNeg { c, .. } => 1.0 / c,
        Family::GammaMinusDrift { .. } => unreachable!(),
    })
}

/// Pointwise W^(q)(x).
pub fn scale_w(model: &LevyModel, q: f64, x: f64) -> Result<f64> {
    require_neg(model, "scale_w")?;
    check_q(q)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    if x == 0.0 {
        return scale_w_at_zero(model, q);
    }
    match model.family() {
        Family::BrownianMotion { drift, sigma2 } => {
            let (tp, tm) = bm_roots(drift, sigma2, q)?;
            // exp_m1 keeps the difference accurate near x = 0
            Ok(2.0 * ((tp * x).exp_m1() - (tm * x).exp_m1()) / (sigma2 * (tp - tm)))
        }
        _ => {
            let psi = model.big_psi(q)?;
            let tilted = EulerInversion::default().invert(
                |z| 1.0 / (model.big_phi_complex(z + psi) - q),
                x,
            )?;
            Ok((psi * x).exp() * tilted)
        }
    }
}

/// Pointwise Z^(q)(x) = 1 + q int_0^x W^(q)(y) dy.
pub fn scale_z(model: &LevyModel, q: f64, x: f64) -> Result<f64> {
    require_neg(model, "scale_z")?;
    check_q(q)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    match model.family() {
        Family::BrownianMotion { drift, sigma2 } => {
            let (tp, tm) = bm_roots(drift, sigma2, q)?;
            let a = 2.0 / (sigma2 * (tp - tm));
            Ok(1.0 + q * a * ((tp * x).exp_m1() / tp - (tm * x).exp_m1() / tm))
        }
        _ => {
            let w = |y: f64| scale_w(model, q, y).unwrap_or(f64::NAN);
            let scale = 1.0_f64.max(x * w(x));
            let integral = adaptive_simpson(&w, 0.0, x, 1e-11 * scale)?;
            Ok(1.0 + q * integral)
        }
    }
}

fn partial_fraction_weights(rates: &[f64]) -> Vec<f64> {
    let n = rates.len();
    (0..n)
        .map(|i| {
            let mut c = 1.0;
            for k in 0..n {
                if k != i {
                    c /= rates[i] - rates[k];
                }
            }
            c
        })
        .collect()
}

/// (W^(q_n) * ... * W^(q_1))(x) by partial fractions over distinct rates.
pub fn w_chain(model: &LevyModel, phases: &PhaseVector, x: f64) -> Result<f64> {
    require_neg(model, "w_chain")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let rates = phases.rates();
    if rates.len() == 1 {
        return scale_w(model, rates[0], x);
    }
    let weights = partial_fraction_weights(rates);
    let mut acc = NeumaierSum::default();
    for (&q, &c) in rates.iter().zip(&weights) {
        acc.add(c * scale_w(model, q, x)?);
    }
    Ok(acc.total())
}

/// int_0^x of `w_chain`, used by normalization checks; equals
/// sum_i c_i (Z^(q_i)(x) - 1)/q_i.
pub fn w_chain_integral(model: &LevyModel, phases: &PhaseVector, x: f64) -> Result<f64> {
    require_neg(model, "w_chain_integral")?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let rates = phases.rates();
    let weights = partial_fraction_weights(rates);
    let mut acc = NeumaierSum::default();
    for (&q, &c) in rates.iter().zip(&weights) {
        acc.add(c * (scale_z(model, q, x)? - 1.0) / q);
    }
    Ok(acc.total())
}

/// (Z^(q_l) * W^(q_{l-1}) * ... * W^(q_1))(x) over the first l rates.
pub fn z_chain(model: &LevyModel, l: usize, phases: &PhaseVector, x: f64) -> Result<f64> {
    require_neg(model, "z_chain")?;
    if l == 0 || l > phases.len() {
        return Err(Error::Domain(format!(
            "z_chain level {l} out of range 1..={}",
            phases.len()
        )));
    }
    let rates = &phases.rates()[..l];
    if l == 1 {
        return scale_z(model, rates[0], x);
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let weights = partial_fraction_weights(rates);
    let mut acc = NeumaierSum::default();
    for (&q, &c) in rates.iter().zip(&weights) {
        acc.add(c * scale_z(model, q, x)?);
    }
    Ok(acc.total())
}

/// (f * g)(x) = int_0^x f(x-u) g(u) du by composite Simpson; the independent
/// slow path behind the partial-fraction chains.
pub fn convolve_at<F, G>(f: F, g: G, x: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if x <= 0.0 {
        return 0.0;
    }
    simpson(|u| f(x - u) * g(u), 0.0, x, steps)
}

/// Tabulated W^(q) and Z^(q) on a uniform grid.
#[derive(Clone, Debug)]
pub struct ScaleFunctionGrid {
    pub q: f64,
    pub x_max: f64,
    pub step: f64,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub method: ScaleMethod,
}

impl ScaleFunctionGrid {
    /// Builds the grid with `points + 1` samples on [0, x_max].
    pub fn build(model: &LevyModel, q: f64, x_max: f64, points: usize) -> Result<Self> {
        require_neg(model, "ScaleFunctionGrid")?;
        check_q(q)?;
        if x_max <= 0.0 || x_max.is_nan() || points < 8 {
            return Err(Error::Domain(
                "grid needs x_max > 0 and at least 8 points".into(),
            ));
        }
        let method = match model.family() {
            Family::BrownianMotion { .. } => ScaleMethod::ClosedForm,
            _ => ScaleMethod::Inversion,
        };
        let h = x_max / points as f64;
        let mut w = Vec::with_capacity(points + 1);
        for k in 0..=points {
            w.push(scale_w(model, q, k as f64 * h)?);
        }
        // cumulative integral of w: Simpson over pairs, one-sided quadratic
        // rule h/12 (-f_{k-2} + 8 f_{k-1} + 5 f_k) on odd tails
        let mut integral = vec![0.0; points + 1];
        for k in 1..=points {
            integral[k] = if k % 2 == 0 {
                integral[k - 2] + h / 3.0 * (w[k - 2] + 4.0 * w[k - 1] + w[k])
            } else if k == 1 {
                h / 12.0 * (5.0 * w[0] + 8.0 * w[1] - w[2])
            } else {
                integral[k - 1] + h / 12.0 * (-w[k - 2] + 8.0 * w[k - 1] + 5.0 * w[k])
            };
        }
        let z: Vec<f64> = integral.iter().map(|v| 1.0 + q * v).collect();
        let grid = Self {
            q,
            x_max,
            step: h,
            w,
            z,
            method,
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if (self.z[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Inconsistency(format!("Z(0) = {}, expected 1", self.z[0])));
        }
        for k in 1..self.w.len() {
            if self.w[k] <= self.w[k - 1] {
                return Err(Error::Inconsistency(format!(
                    "W grid not strictly increasing at index {k}"
                )));
            }
            if self.z[k] < self.z[k - 1] {
                return Err(Error::Inconsistency(format!(
                    "Z grid decreasing at index {k}"
                )));
            }
        }
        Ok(())
    }

    /// Linear interpolation; x < 0 maps to the support conventions.
    pub fn w_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.interp(&self.w, x)
    }

    pub fn z_at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        self.interp(&self.z, x)
    }

    fn interp(&self, values: &[f64], x: f64) -> f64 {
        let pos = (x / self.step).min((values.len() - 1) as f64);
        let k = (pos.floor() as usize).min(values.len() - 2);
        let frac = pos - k as f64;
        values[k] * (1.0 - frac) + values[k + 1] * frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bm_neg() -> LevyModel {
        LevyModel::bm_neg(-1.0, 1.0).unwrap()
    }

    fn cp() -> LevyModel {
        LevyModel::cpexp(1.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn w_vanishes_left_of_origin() {
        assert_eq!(scale_w(&bm_neg(), 1.0, -1.0).unwrap(), 0.0);
        assert_eq!(scale_z(&bm_neg(), 1.0, -0.3).unwrap(), 1.0);
        assert_eq!(scale_z(&bm_neg(), 1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn bm_closed_form_value() {
        // 2 (e^{t+ x} - e^{t- x}) / (sigma2 (t+ - t-)) at q = 1, x = 1
        let v = scale_w(&bm_neg(), 1.0, 1.0).unwrap();
        let tp = 1.0 + 3f64.sqrt();
        let tm = 1.0 - 3f64.sqrt();
        let want = ((tp).exp() - (tm).exp()) / 3f64.sqrt();
        assert_relative_eq!(v, want, epsilon = 1e-14);
        assert_relative_eq!(v, 8.593, max_relative = 1e-3);
    }

    #[test]
    fn cpexp_w_matches_two_exponential_closed_form() {
        // bounded variation: W(x) = ((mu+b+) e^{b+ x} - (mu+b-) e^{b- x}) / (c (b+ - b-))
        let (lam, mu, c) = (1.0_f64, 1.0_f64, 0.5_f64);
        let q = 0.8_f64;
        let disc = ((c * mu - lam - q).powi(2) + 4.0 * c * q * mu).sqrt();
        let bp = (-(c * mu - lam - q) + disc) / (2.0 * c);
        let bm_ = (-(c * mu - lam - q) - disc) / (2.0 * c);
        let closed =
            |x: f64| ((mu + bp) * (bp * x).exp() - (mu + bm_) * (bm_ * x).exp()) / (c * (bp - bm_));
        for &x in &[0.05, 0.5, 1.0, 3.0, 5.0] {
            let v = scale_w(&cp(), q, x).unwrap();
            assert_relative_eq!(v, closed(x), max_relative = 5e-8);
        }
        assert_relative_eq!(scale_w(&cp(), q, 0.0).unwrap(), 1.0 / c, epsilon = 1e-12);
    }

    #[test]
    fn laplace_identity_for_w_and_z() {
        // int e^{-beta x} W dx = 1/(Phi(beta)-q), int e^{-beta x} Z dx = Phi(beta)/(beta (Phi(beta)-q))
        let split_integral = |f: &dyn Fn(f64) -> f64| {
            adaptive_simpson(&f, 0.0, 8.0, 1e-10).unwrap()
                + adaptive_simpson(&f, 8.0, 40.0, 1e-10).unwrap()
        };
        for model in [bm_neg(), cp()] {
            let q = 1.0;
            let beta = model.big_psi(q).unwrap() + 1.0;
            let w_int =
                split_integral(&|x: f64| (-beta * x).exp() * scale_w(&model, q, x).unwrap());
            let phi_b = model.big_phi(beta).unwrap();
            assert_relative_eq!(w_int, 1.0 / (phi_b - q), max_relative = 1e-6);
            let z_int =
                split_integral(&|x: f64| (-beta * x).exp() * scale_z(&model, q, x).unwrap());
            assert_relative_eq!(z_int, phi_b / (beta * (phi_b - q)), max_relative = 1e-6);
        }
    }

    #[test]
    fn two_rate_chain_partial_fractions() {
        let model = bm_neg();
        let phases = PhaseVector::new(vec![1.0, 2.0]).unwrap();
        for &x in &[0.4, 1.1, 2.7] {
            let direct = (scale_w(&model, 1.0, x).unwrap() - scale_w(&model, 2.0, x).unwrap())
                / (1.0 - 2.0);
            assert_relative_eq!(
                w_chain(&model, &phases, x).unwrap(),
                direct,
                max_relative = 1e-12
            );
        }
        assert_eq!(w_chain(&model, &phases, 0.0).unwrap(), 0.0);
        assert_eq!(w_chain(&model, &phases, -2.0).unwrap(), 0.0);
    }

    #[test]
    fn z_chain_boundary_values() {
        let model = bm_neg();
        let phases = PhaseVector::new(vec![1.0, 2.0, 0.5]).unwrap();
        assert_eq!(z_chain(&model, 2, &phases, 0.0).unwrap(), 0.0);
        assert_eq!(z_chain(&model, 1, &phases, -1.0).unwrap(), 1.0);
        assert_relative_eq!(
            z_chain(&model, 1, &phases, 0.9).unwrap(),
            scale_z(&model, 1.0, 0.9).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn grid_matches_pointwise_and_validates() {
        let model = bm_neg();
        let grid = ScaleFunctionGrid::build(&model, 1.0, 3.0, 512).unwrap();
        assert_eq!(grid.method, ScaleMethod::ClosedForm);
        for &x in &[0.0, 0.37, 1.5, 2.99] {
            assert_relative_eq!(
                grid.w_at(x),
                scale_w(&model, 1.0, x).unwrap(),
                max_relative = 1e-4,
                epsilon = 1e-6
            );
            assert_relative_eq!(
                grid.z_at(x),
                scale_z(&model, 1.0, x).unwrap(),
                max_relative = 1e-4
            );
        }
    }
}

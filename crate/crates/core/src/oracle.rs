//! Hand-transcribed two-epoch reference formulas, kept deliberately
//! independent of the general term machinery. The test suites compare the
//! n = 2 engines against these transcriptions over randomized parameters.

use crate::error::{Error, Result};
use crate::model::LevyModel;
use crate::phases::MIN_RELATIVE_RATE_GAP;
use crate::scale::{convolve_at, scale_w, scale_z};

fn reject_equal_rates(q1: f64, q2: f64) -> Result<()> {
    if (q1 - q2).abs() / q1.max(q2) < MIN_RELATIVE_RATE_GAP {
        return Err(Error::Unsupported(
            "equal rates need a limiting argument and are not covered here".into(),
        ));
    }
    Ok(())
}

/// Two-epoch joint LST, spectrally positive, written out term by term:
///
/// ```text
/// q2/(q2-phi(a2)) [ q1/(q1-phi(a1+a2)) (e^{-(a1+a2)x} - (a1+a2)/psi(q1) e^{-psi(q1)x})
///   - a2/psi(q2) q1/(q1-phi(a1+psi(q2))) (e^{-(a1+psi(q2))x} - (a1+psi(q2))/psi(q1) e^{-psi(q1)x}) ]
/// ```
pub fn oracle_lst_n2(
    model: &LevyModel,
    x: f64,
    q1: f64,
    q2: f64,
    alpha1: f64,
    alpha2: f64,
) -> Result<f64> {
    reject_equal_rates(q1, q2)?;
    if x < 0.0 || alpha1 < 0.0 || alpha2 < 0.0 {
        return Err(Error::Domain("x and the exponents must be nonnegative".into()));
    }
    let psi1 = model.psi(q1)?;
    let psi2 = model.psi(q2)?;
    let outer = q2 / (q2 - model.phi(alpha2)?);
    let s12 = alpha1 + alpha2;
    let first =
        q1 / (q1 - model.phi(s12)?) * ((-s12 * x).exp() - s12 / psi1 * (-psi1 * x).exp());
    let shifted = alpha1 + psi2;
    let second = alpha2 / psi2 * q1 / (q1 - model.phi(shifted)?)
        * ((-shifted * x).exp() - shifted / psi1 * (-psi1 * x).exp());
    Ok(outer * (first - second))
}

/// Two-epoch workload density, spectrally negative, written out term by term:
///
/// ```text
/// q1 q2 (W^(q2) * W^(q1))(x-y) - Psi(q2) q1 e^{-Psi(q2) y} (Z^(q2) * W^(q1))(x)
///   - Psi(q1) e^{-Psi(q1) y} q2/(q1-q2) Z^(q1)(x)
///   + Psi(q2) e^{-Psi(q2) y} q1/(q1-q2) Z^(q1)(x)
/// ```
///
/// The two convolutions are evaluated by Simpson quadrature here, which
/// keeps this transcription independent of the partial-fraction chains.
pub fn oracle_density_n2(model: &LevyModel, x: f64, y: f64, q1: f64, q2: f64) -> Result<f64> {
    reject_equal_rates(q1, q2)?;
    if x < 0.0 || y < 0.0 {
        return Err(Error::Domain("x and y must be nonnegative".into()));
    }
    let psi1 = model.big_psi(q1)?;
    let psi2 = model.big_psi(q2)?;
    let steps = 8192;
    let ww = convolve_at(
        |u| scale_w(model, q2, u).unwrap_or(f64::NAN),
        |u| scale_w(model, q1, u).unwrap_or(f64::NAN),
        x - y,
        steps,
    );
    let zw = convolve_at(
        |u| scale_z(model, q2, u).unwrap_or(f64::NAN),
        |u| scale_w(model, q1, u).unwrap_or(f64::NAN),
        x,
        steps,
    );
    let z1 = scale_z(model, q1, x)?;
    Ok(q1 * q2 * ww - psi2 * q1 * (-psi2 * y).exp() * zw
        - psi1 * (-psi1 * y).exp() * q2 / (q1 - q2) * z1
        + psi2 * (-psi2 * y).exp() * q1 / (q1 - q2) * z1)
}

//! Parametric spectrally one-sided Levy input processes.
//!
//! Three families are supported:
//!
//! * `BrownianMotion { drift d, sigma2 }` — either spectral side (no jumps);
//!   Laplace exponent `phi(a) = -a d + a^2 sigma2 / 2`, cumulant
//!   `Phi(b) = b d + b^2 sigma2 / 2`.
//! * `GammaMinusDrift { gamma, beta, rho }` — gamma subordinator minus a
//!   linear drift, spectrally positive; `phi(a) = beta ln(gamma/(gamma+a)) + rho a`.
//! * `CompoundPoissonExpNeg { lambda, mu, c }` — drift `c` minus a compound
//!   Poisson subordinator with Exp(mu) jumps at rate lambda, spectrally
//!   negative; `Phi(b) = c b + lambda (mu/(mu+b) - 1)`.
//!
//! `psi` / `big_psi` are the right inverses (largest roots) of `phi` / `Phi`.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::numeric::largest_root;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    BrownianMotion { drift: f64, sigma2: f64 },
    GammaMinusDrift { gamma: f64, beta: f64, rho: f64 },
    CompoundPoissonExpNeg { lambda: f64, mu: f64, c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    SpectrallyPositive,
    SpectrallyNegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevyModel {
    family: Family,
    side: Side,
}

/// phi or Phi evaluated at a point together with the curve's derivatives at 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentValue {
    pub value: f64,
    pub derivative1_at0: f64,
    pub derivative2_at0: f64,
}

impl LevyModel {
    pub fn new(family: Family, side: Side) -> Result<Self> {
        match family {
            Family::BrownianMotion { sigma2, .. } => {
                // sigma2 = 0 is the degenerate pure-drift path, accepted for
                // simulation; transform work requires sigma2 > 0 and checks
                // at the call sites that need it.
                if sigma2 < 0.0 || !sigma2.is_finite() {
                    return Err(Error::Domain(format!(
                        "BrownianMotion needs sigma2 >= 0, got {sigma2}"
                    )));
                }
            }
            Family::GammaMinusDrift { gamma, beta, rho } => {
                if gamma <= 0.0 || beta <= 0.0 {
                    return Err(Error::Domain(format!(
                        "GammaMinusDrift needs gamma > 0 and beta > 0, got ({gamma}, {beta})"
                    )));
                }
                if !rho.is_finite() {
                    return Err(Error::Domain("GammaMinusDrift drift must be finite".into()));
                }
                if side != Side::SpectrallyPositive {
                    return Err(Error::Domain(
                        "GammaMinusDrift is spectrally positive only".into(),
                    ));
                }
            }
            Family::CompoundPoissonExpNeg { lambda, mu, c } => {
                if lambda <= 0.0 || mu <= 0.0 || c <= 0.0 {
                    return Err(Error::Domain(format!(
                        "CompoundPoissonExpNeg needs lambda, mu, c > 0, got ({lambda}, {mu}, {c})"
                    )));
                }
                if side != Side::SpectrallyNegative {
                    return Err(Error::Domain(
                        "CompoundPoissonExpNeg is spectrally negative only".into(),
                    ));
                }
            }
        }
        Ok(Self { family, side })
    }

    pub fn bm_pos(drift: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            Family::BrownianMotion { drift, sigma2 },
            Side::SpectrallyPositive,
        )
    }

    pub fn bm_neg(drift: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            Family::BrownianMotion { drift, sigma2 },
            Side::SpectrallyNegative,
        )
    }

    pub fn gamma(gamma: f64, beta: f64, rho: f64) -> Result<Self> {
        Self::new(
            Family::GammaMinusDrift { gamma, beta, rho },
            Side::SpectrallyPositive,
        )
    }

    pub fn cpexp(lambda: f64, mu: f64, c: f64) -> Result<Self> {
        Self::new(
            Family::CompoundPoissonExpNeg { lambda, mu, c },
            Side::SpectrallyNegative,
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// E X_1 (mean drift per unit time).
    pub fn mean_drift(&self) -> f64 {
        match self.family {
            Family::BrownianMotion { drift, .. } => drift,
            Family::GammaMinusDrift { gamma, beta, rho } => beta / gamma - rho,
            Family::CompoundPoissonExpNeg { lambda, mu, c } => c - lambda / mu,
        }
    }

    /// Var X_1 per unit time.
    pub fn variance_rate(&self) -> f64 {
        match self.family {
            Family::BrownianMotion { sigma2, .. } => sigma2,
            Family::GammaMinusDrift { gamma, beta, .. } => beta / (gamma * gamma),
            Family::CompoundPoissonExpNeg { lambda, mu, .. } => 2.0 * lambda / (mu * mu),
        }
    }

    fn require_positive_side(&self, op: &str) -> Result<()> {
        if self.side != Side::SpectrallyPositive {
            return Err(Error::Domain(format!(
                "{op} needs a spectrally positive model"
            )));
        }
        Ok(())
    }

    fn require_negative_side(&self, op: &str) -> Result<()> {
        if self.side != Side::SpectrallyNegative {
            return Err(Error::Domain(format!(
                "{op} needs a spectrally negative model"
            )));
        }
        Ok(())
    }

    /// Laplace exponent phi(alpha) = log E exp(-alpha X_1), alpha >= 0.
    pub fn phi(&self, alpha: f64) -> Result<f64> {
        self.require_positive_side("phi")?;
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!("phi needs alpha >= 0, got {alpha}")));
        }
        Ok(self.phi_dd(Dd::from_f64(alpha)).to_f64())
    }

    /// phi on double-double values (no validation; used by the term engine).
    pub(crate) fn phi_dd(&self, alpha: Dd) -> Dd {
        match self.family {
            Family::BrownianMotion { drift, sigma2 } => {
                // -a d + a^2 s2/2
                alpha * (alpha * sigma2 * 0.5 - drift)
            }
            Family::GammaMinusDrift { gamma, beta, rho } => {
                // rho a - beta ln(1 + a/gamma)
                let l = (alpha / Dd::from_f64(gamma)).ln1p();
                alpha * rho - l * beta
            }
            Family::CompoundPoissonExpNeg { .. } => unreachable!("phi on a negative-side family"),
        }
    }

    /// d/da phi(a).
    pub fn phi_d1(&self, alpha: f64) -> Result<f64> {
        self.require_positive_side("phi_d1")?;
        Ok(match self.family {
            Family::BrownianMotion { drift, sigma2 } => -drift + sigma2 * alpha,
            Family::GammaMinusDrift { gamma, beta, rho } => rho - beta / (gamma + alpha),
            Family::CompoundPoissonExpNeg { .. } => unreachable!(),
        })
    }

    /// d^2/da^2 phi(a).
    pub fn phi_d2(&self, alpha: f64) -> Result<f64> {
        self.require_positive_side("phi_d2")?;
        Ok(match self.family {
            Family::BrownianMotion { sigma2, .. } => sigma2,
            Family::GammaMinusDrift { gamma, beta, .. } => {
                beta / ((gamma + alpha) * (gamma + alpha))
            }
            Family::CompoundPoissonExpNeg { .. } => unreachable!(),
        })
    }

    pub fn exponent_value(&self, alpha: f64) -> Result<ExponentValue> {
        Ok(ExponentValue {
            value: self.phi(alpha)?,
            derivative1_at0: self.phi_d1(0.0)?,
            derivative2_at0: self.phi_d2(0.0)?,
        })
    }

    /// Right inverse psi(q) = sup { a >= 0 : phi(a) = q }, q > 0.
    pub fn psi(&self, q: f64) -> Result<f64> {
        Ok(self.psi_dd(q)?.to_f64())
    }

    pub(crate) fn psi_dd(&self, q: f64) -> Result<Dd> {
        self.require_positive_side("psi")?;
        if q <= 0.0 || !q.is_finite() {
            return Err(Error::Domain(format!("psi needs q > 0, got {q}")));
        }
        let seed = match self.family {
            Family::BrownianMotion { drift, sigma2 } => {
                if sigma2 == 0.0 {
                    if drift >= 0.0 {
                        return Err(Error::Numeric(
                            "psi undefined for a degenerate nonnegative-drift path".into(),
                        ));
                    }
                    return Ok(Dd::from_f64(q) * (-1.0 / drift));
                }
                // closed form (d + sqrt(d^2 + 2 s2 q)) / s2, computed in dd
                let disc = Dd::from_f64(drift) * drift + Dd::from_f64(q) * sigma2 * 2.0;
                return Ok((disc.sqrt() + drift) / Dd::from_f64(sigma2));
            }
            Family::GammaMinusDrift { .. } => {
                // lower bracket at the argmin of phi when the drift is nonneg
                let lower = if self.phi_d1(0.0)? < 0.0 {
                    let d2 = |a: f64| self.phi_d2(a).unwrap_or(0.0);
                    largest_root(|a| self.phi_d1(a).unwrap_or(f64::NAN), d2, 0.0, 0.0)?
                } else {
                    0.0
                };
                largest_root(
                    |a| self.phi_dd(Dd::from_f64(a)).to_f64(),
                    |a| self.phi_d1(a).unwrap_or(f64::NAN),
                    q,
                    lower,
                )?
            }
            Family::CompoundPoissonExpNeg { .. } => unreachable!(),
        };
        // two Newton steps in double-double
        let mut a = Dd::from_f64(seed);
        for _ in 0..2 {
            let r = self.phi_dd(a) - q;
            let d = self.phi_d1(a.to_f64())?;
            a = a - r * (1.0 / d);
        }
        Ok(a)
    }

    /// Cumulant Phi(beta) = log E exp(beta X_1), beta >= 0 (spectrally negative).
    pub fn big_phi(&self, beta: f64) -> Result<f64> {
        self.require_negative_side("big_phi")?;
        if beta < 0.0 || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "big_phi needs beta >= 0, got {beta}"
            )));
        }
        Ok(self.big_phi_raw(beta))
    }

    /// Phi without the domain checks; also valid for complex continuation
    /// (see the scale-function inversion which evaluates it off-axis).
    pub(crate) fn big_phi_raw(&self, beta: f64) -> f64 {
        match self.family {
            Family::BrownianMotion { drift, sigma2 } => drift * beta + 0.5 * sigma2 * beta * beta,
            Family::CompoundPoissonExpNeg { lambda, mu, c } => {
                c * beta + lambda * (mu / (mu + beta) - 1.0)
            }
            Family::GammaMinusDrift { .. } => unreachable!("big_phi on a positive-side family"),
        }
    }

    /// Phi continued off the real axis (used by the scale-function inverter).
    pub(crate) fn big_phi_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        match self.family {
            Family::BrownianMotion { drift, sigma2 } => drift * z + 0.5 * sigma2 * z * z,
            Family::CompoundPoissonExpNeg { lambda, mu, c } => {
                c * z + lambda * (mu / (mu + z) - 1.0)
            }
            Family::GammaMinusDrift { .. } => unreachable!(),
        }
    }

    pub fn big_phi_d1(&self, beta: f64) -> Result<f64> {
        self.require_negative_side("big_phi_d1")?;
        Ok(match self.family {
            Family::BrownianMotion { drift, sigma2 } => drift + sigma2 * beta,
            Family::CompoundPoissonExpNeg { lambda, mu, c } => {
                c - lambda * mu / ((mu + beta) * (mu + beta))
            }
            Family::GammaMinusDrift { .. } => unreachable!(),
        })
    }

    /// Right inverse Psi(q) = sup { b >= 0 : Phi(b) = q }, q > 0.
    pub fn big_psi(&self, q: f64) -> Result<f64> {
        self.require_negative_side("big_psi")?;
        if q <= 0.0 || !q.is_finite() {
            return Err(Error::Domain(format!("big_psi needs q > 0, got {q}")));
        }
        match self.family {
            Family::BrownianMotion { drift, sigma2 } => {
                if sigma2 == 0.0 {
                    return Err(Error::Numeric(
                        "big_psi undefined for a degenerate diffusionless path".into(),
                    ));
                }
                Ok((-drift + (drift * drift + 2.0 * sigma2 * q).sqrt()) / sigma2)
            }
            Family::CompoundPoissonExpNeg { .. } => {
                // Phi is concave-then-linear increasing only past its argmin;
                // for this family Phi' is increasing in beta, so the argmin
                // logic mirrors psi.
                let lower = if self.big_phi_d1(0.0)? < 0.0 {
                    largest_root(
                        |b| self.big_phi_d1(b).unwrap_or(f64::NAN),
                        |b| {
                            let Family::CompoundPoissonExpNeg { lambda, mu, .. } = self.family
                            else {
                                unreachable!()
                            };
                            2.0 * lambda * mu / (mu + b).powi(3)
                        },
                        0.0,
                        0.0,
                    )?
                } else {
                    0.0
                };
                largest_root(
                    |b| self.big_phi_raw(b),
                    |b| self.big_phi_d1(b).unwrap_or(f64::NAN),
                    q,
                    lower,
                )
            }
            Family::GammaMinusDrift { .. } => Err(Error::Domain(
                "big_psi needs a spectrally negative model".into(),
            )),
        }
    }

    fn require_stable(&self, op: &str) -> Result<()> {
        if self.mean_drift() >= 0.0 {
            return Err(Error::Stability(format!(
                "{op} needs E X_1 < 0, got mean drift {}",
                self.mean_drift()
            )));
        }
        Ok(())
    }

    /// Stationary workload LST alpha phi'(0) / phi(alpha) (generalized
    /// Pollaczek-Khintchine), with the alpha = 0 limit equal to 1.
    pub fn stationary_lst(&self, alpha: f64) -> Result<f64> {
        self.require_positive_side("stationary_lst")?;
        self.require_stable("stationary_lst")?;
        if alpha < 0.0 {
            return Err(Error::Domain(format!(
                "stationary_lst needs alpha >= 0, got {alpha}"
            )));
        }
        if alpha == 0.0 {
            return Ok(1.0);
        }
        Ok(alpha * self.phi_d1(0.0)? / self.phi(alpha)?)
    }

    /// Stationary workload mean phi''(0) / (2 phi'(0)).
    pub fn stationary_mean(&self) -> Result<f64> {
        self.require_positive_side("stationary_mean")?;
        self.require_stable("stationary_mean")?;
        Ok(self.phi_d2(0.0)? / (2.0 * self.phi_d1(0.0)?))
    }
}
